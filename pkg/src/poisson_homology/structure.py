"""Poisson brackets on polynomial rings.

A Poisson structure on R = Q[x_0, ..., x_{n-1}] is an antisymmetric
matrix h with h[i][j] = {x_i, x_j}; the bracket of two polynomials is
recovered from the biderivation expansion

    {f, g} = sum_{i,j} df/dx_i dg/dx_j h[i][j].

The Jacobi identity is equivalent to its validity on generator triples
(both sides of the cyclic sum are derivations in each of the three
arguments, so generator triples span the general case); the same
argument makes the generator-pair test of ``is_poisson_derivation``
exact.  See the README for the short proof note.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .poly import Polynomial
from . import exterior
from .exterior import DiffForm, Multivector


@dataclass(frozen=True)
class Derivation:
    """A derivation of R, stored as its values on the generators."""

    values: tuple[Polynomial, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("derivation needs at least one variable")

    @classmethod
    def zero(cls, n: int) -> "Derivation":
        return cls(tuple(Polynomial.zero(n) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.values)

    def apply(self, f: Polynomial) -> Polynomial:
        """Extend to all of R by the Leibniz rule: D(f) = sum df/dx_i D(x_i)."""
        out = Polynomial.zero(self.n)
        for i, value in enumerate(self.values):
            if value.is_zero():
                continue
            df = f.partial(i)
            if not df.is_zero():
                out = out + df * value
        return out

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Derivation":
        return Derivation(tuple(-a for a in self.values))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def as_multivector(self) -> Multivector:
        return Multivector.from_derivation_values(self.values)


@dataclass(frozen=True)
class JacobiFailure:
    """First generator triple on which the cyclic Jacobi sum is nonzero."""

    triple: tuple[int, int, int]
    residual: Polynomial


class PoissonStructure:
    """Validated antisymmetric bracket matrix with optional weighted grading.

    ``bracket_degree`` is the shift s such that every h[i][j] is zero or
    weight-homogeneous of degree w_i + w_j + s; it is None for mixed
    structures (which then only support the filtered homology path).
    The all-zero structure takes s = 0 by convention.

    Antisymmetry is enforced at construction; the Jacobi identity is
    checked separately via :func:`jacobi_check` so that failing
    structures can still be examined and reported.
    """

    __slots__ = ("n", "names", "weights", "h", "bracket_degree")

    def __init__(self, h: Sequence[Sequence[Polynomial]],
                 names: Sequence[str] | None = None,
                 weights: Sequence[int] | None = None):
        n = len(h)
        if n < 1:
            raise ValueError("need at least one variable")
        for row in h:
            if len(row) != n:
                raise ValueError("bracket matrix must be square")
        for i in range(n):
            if not h[i][i].is_zero():
                raise ValueError(f"diagonal entry h[{i}][{i}] must be zero")
            for j in range(i + 1, n):
                if h[i][j] != -h[j][i]:
                    raise ValueError(f"h[{i}][{j}] != -h[{j}][{i}]: matrix is not antisymmetric")
                if h[i][j].n != n:
                    raise ValueError("bracket entry ring dimension mismatch")
        if names is None:
            names = [f"x{i}" for i in range(n)]
        if len(names) != n or len(set(names)) != n:
            raise ValueError("need n distinct variable names")
        if weights is None:
            weights = (1,) * n
        weights = tuple(int(w) for w in weights)
        if len(weights) != n or any(w <= 0 for w in weights):
            raise ValueError("weights must be n strictly positive integers")

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "h", tuple(tuple(row) for row in h))
        object.__setattr__(self, "bracket_degree", self._detect_bracket_degree())

    def __setattr__(self, name, value):
        raise AttributeError("PoissonStructure is immutable")

    @classmethod
    def from_upper_entries(cls, n: int, entries: dict[tuple[int, int], Polynomial],
                           names: Sequence[str] | None = None,
                           weights: Sequence[int] | None = None) -> "PoissonStructure":
        """Build from {(i, j): h_ij} with i < j; the lower half is filled in."""
        h = [[Polynomial.zero(n) for _ in range(n)] for _ in range(n)]
        for (i, j), poly in entries.items():
            if not 0 <= i < j < n:
                raise ValueError(f"entry ({i}, {j}) is not an upper pair")
            h[i][j] = poly
            h[j][i] = -poly
        return cls(h, names=names, weights=weights)

    @classmethod
    def zero(cls, n: int, names: Sequence[str] | None = None,
             weights: Sequence[int] | None = None) -> "PoissonStructure":
        return cls.from_upper_entries(n, {}, names=names, weights=weights)

    def _detect_bracket_degree(self) -> int | None:
        shifts = set()
        for i in range(self.n):
            for j in range(i + 1, self.n):
                entry = self.h[i][j]
                if entry.is_zero():
                    continue
                if not entry.is_homogeneous(self.weights):
                    return None
                deg = entry.weighted_degree(self.weights)
                shifts.add(deg - self.weights[i] - self.weights[j])
        if not shifts:
            return 0
        if len(shifts) > 1:
            return None
        return shifts.pop()

    def variable(self, i: int) -> Polynomial:
        return Polynomial.variable(self.n, i)

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """{f, g} by the biderivation expansion over generator pairs."""
        if f.n != self.n or g.n != self.n:
            raise ValueError("ring dimension mismatch")
        out = Polynomial.zero(self.n)
        df = [f.partial(i) for i in range(self.n)]
        dg = [g.partial(j) for j in range(self.n)]
        for i in range(self.n):
            if df[i].is_zero():
                continue
            for j in range(self.n):
                if dg[j].is_zero() or self.h[i][j].is_zero():
                    continue
                out = out + df[i] * dg[j] * self.h[i][j]
        return out

    def bivector(self) -> Multivector:
        """The structure as a bivector: h[i][j] on d/dx_i ^ d/dx_j for i < j."""
        coeffs = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not self.h[i][j].is_zero():
                    coeffs[(i, j)] = self.h[i][j]
        return Multivector(self.n, 2, coeffs)


def jacobi_check(structure: PoissonStructure) -> JacobiFailure | None:
    """Check the cyclic Jacobi sum on all generator triples.

    Returns None on success, else the first failing triple and its
    residual {{x_i,x_j},x_k} + {{x_j,x_k},x_i} + {{x_k,x_i},x_j}.
    Generator triples suffice because the cyclic sum is a derivation
    in each argument.
    """
    for i, j, k in itertools.combinations(range(structure.n), 3):
        xi, xj, xk = (structure.variable(t) for t in (i, j, k))
        residual = (structure.bracket(structure.h[i][j], xk)
                    + structure.bracket(structure.h[j][k], xi)
                    + structure.bracket(structure.h[k][i], xj))
        if not residual.is_zero():
            return JacobiFailure((i, j, k), residual)
    return None


def hamiltonian(structure: PoissonStructure, f: Polynomial) -> Derivation:
    """The Hamiltonian derivation {f, -}."""
    return Derivation(tuple(structure.bracket(f, structure.variable(j))
                            for j in range(structure.n)))


def modular_derivation(structure: PoissonStructure) -> Derivation:
    """Divergence of the Hamiltonian fields: values[i] = sum_j d h[i][j] / dx_j."""
    values = []
    for i in range(structure.n):
        acc = Polynomial.zero(structure.n)
        for j in range(structure.n):
            acc = acc + structure.h[i][j].partial(j)
        values.append(acc)
    return Derivation(tuple(values))


def is_unimodular(structure: PoissonStructure) -> bool:
    """Polynomial rings have only constant units, so unimodularity is
    exactly the vanishing of the modular derivation."""
    return modular_derivation(structure).is_zero()


def modular_via_lie_derivative(structure: PoissonStructure, f: Polynomial) -> Polynomial:
    """Independent route to the modular derivation's value on f.

    Computes the Lie derivative of the volume form along the
    Hamiltonian field of f and divides by the volume basis element.
    Cross-checks :func:`modular_derivation` through the exterior module.
    """
    ham = hamiltonian(structure, f).as_multivector()
    eta = DiffForm.volume(structure.n)
    lie = exterior.lie_derivative(ham, eta)
    top = tuple(range(structure.n))
    for idx in lie.coeffs:
        if idx != top:
            raise RuntimeError("Lie derivative of the volume form left the top degree")
    return lie.coeffs.get(top, Polynomial.zero(structure.n))


def is_poisson_derivation(structure: PoissonStructure, d: Derivation,
                          max_degree: int | None = None) -> bool:
    """Check D{x_i, x_j} = {D x_i, x_j} + {x_i, D x_j} on generator pairs.

    Exact despite only touching generators (both sides are biderivations
    in (x_i, x_j)); max_degree is accepted for interface symmetry with
    the truncated engine calls and is unused.
    """
    del max_degree
    for i in range(structure.n):
        for j in range(i + 1, structure.n):
            lhs = d.apply(structure.h[i][j])
            rhs = (structure.bracket(d.values[i], structure.variable(j))
                   + structure.bracket(structure.variable(i), d.values[j]))
            if lhs != rhs:
                return False
    return True


def poly_det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a square polynomial matrix by cofactor expansion."""
    size = len(matrix)
    n = matrix[0][0].n
    if size == 1:
        return matrix[0][0]
    out = Polynomial.zero(n)
    for col in range(size):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(size) if c != col] for row in matrix[1:]]
        cofactor = entry * poly_det(minor)
        out = out + (cofactor if col % 2 == 0 else -cofactor)
    return out


def jacobian_det(polys: Sequence[Polynomial]) -> Polynomial:
    """Jacobian determinant det(d f_i / d x_j) of n polynomials in n variables."""
    n = polys[0].n
    if len(polys) != n:
        raise ValueError(f"need exactly {n} polynomials for the {n}-variable Jacobian")
    rows = [[f.partial(j) for j in range(n)] for f in polys]
    return poly_det(rows)


def gjps(potentials: Sequence[Polynomial], u: Polynomial,
         names: Sequence[str] | None = None,
         weights: Sequence[int] | None = None) -> PoissonStructure:
    """Generalized Jacobian Poisson structure from n-2 potentials and a factor.

    h[i][j] = u * J(x_i, x_j, f_3, ..., f_n).  The result always passes
    the Jacobi check; an assertion guards the construction.
    """
    n = u.n
    if n < 2:
        raise ValueError("the Jacobian construction needs at least two variables")
    if len(potentials) != n - 2:
        raise ValueError(f"need {n - 2} potentials for {n} variables")
    for f in potentials:
        if f.n != n:
            raise ValueError("potential ring dimension mismatch")
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            args = [Polynomial.variable(n, i), Polynomial.variable(n, j), *potentials]
            entry = u * jacobian_det(args)
            if not entry.is_zero():
                entries[(i, j)] = entry
    structure = PoissonStructure.from_upper_entries(n, entries, names=names, weights=weights)
    failure = jacobi_check(structure)
    assert failure is None, f"Jacobian structure failed Jacobi on {failure.triple}"
    return structure


def jps_potential_3d(structure: PoissonStructure) -> Polynomial:
    """Recover the potential of a unimodular 3-variable structure.

    Returns w with h[0][1] = dw/dx_2, h[0][2] = -dw/dx_1 and
    h[1][2] = dw/dx_0, i.e. the structure equals ``gjps([w], 1)``.
    Follows the constructive divergence-zero argument: integrate
    h[0][1] in x_2, then correct by a function of (x_0, x_1) and
    finally one of x_0 alone.  All integration constants are fixed to
    zero, so the output is deterministic.
    """
    if structure.n != 3:
        raise ValueError("potential recovery is implemented for exactly 3 variables")
    if not is_unimodular(structure):
        raise ValueError("structure is not unimodular; no Jacobian potential exists")
    h01, h02, h12 = structure.h[0][1], structure.h[0][2], structure.h[1][2]

    u = h01.integrate(2)
    # h[0][2] + du/dx_1 depends only on (x_0, x_1); fold it into the potential
    f = h02 + u.partial(1)
    v = u - f.integrate(1)
    # h[1][2] - dv/dx_0 is a function of x_0 alone by the divergence conditions
    g = h12 - v.partial(0)
    w = v + g.integrate(0)

    assert h01 == w.partial(2) and h02 == -w.partial(1) and h12 == w.partial(0), \
        "potential reconstruction failed; structure is not Jacobian"
    return w
