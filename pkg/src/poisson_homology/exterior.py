"""Kahler differential forms, multivector fields and multiderivations.

Everything is expressed on the monomial wedge bases: a p-form is a map
from strictly increasing p-tuples of variable indices (the basis
dx_{i1} ^ ... ^ dx_{ip}) to polynomial coefficients, and likewise for
p-vectors on d/dx wedges.  All tuples are kept strictly increasing with
signs normalized at insertion, so equality is plain dict comparison.

Multivectors are identified with R-multilinear maps on forms via the
dual pairing <d/dx_I, dx_J> = delta_IJ on increasing tuples.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from .poly import Polynomial

IndexTuple = tuple[int, ...]


def sort_with_sign(idxs: Sequence[int]) -> tuple[IndexTuple, int] | None:
    """Sort indices into increasing order; return (tuple, parity sign).

    Returns None when an index repeats (the wedge vanishes).
    """
    idxs = tuple(idxs)
    if len(set(idxs)) != len(idxs):
        return None
    inversions = 0
    for a, b in itertools.combinations(idxs, 2):
        if a > b:
            inversions += 1
    return tuple(sorted(idxs)), (-1) ** inversions


def merge_sign(front: Sequence[int], back: Sequence[int]) -> int:
    """Parity of sorting the concatenation of two increasing tuples."""
    inv = 0
    for b in back:
        for a in front:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


def split_shuffles(idxs: IndexTuple, p: int) -> Iterator[tuple[IndexTuple, IndexTuple, int]]:
    """All ways to split an increasing tuple into a front of length p.

    Yields (front, back, sign) in lexicographic order of the chosen
    positions; sign is the parity of the shuffle moving the front
    elements ahead of the rest.  Parity is tracked from the position
    sum rather than recounted per shuffle.
    """
    k = len(idxs)
    base = p * (p - 1) // 2
    for positions in itertools.combinations(range(k), p):
        sign = -1 if (sum(positions) - base) % 2 else 1
        chosen = set(positions)
        front = tuple(idxs[i] for i in positions)
        back = tuple(idxs[i] for i in range(k) if i not in chosen)
        yield front, back, sign


class _Graded:
    """Shared mechanics of DiffForm and Multivector (degree + coefficient map)."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[IndexTuple, Polynomial] | None = None):
        clean: dict[IndexTuple, Polynomial] = {}
        if coeffs:
            for idx, poly in coeffs.items():
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"basis tuple {idx} is not increasing of length {degree}")
                if any(i < 0 or i >= n for i in idx):
                    raise ValueError(f"index out of range in {idx}")
                if not poly.is_zero():
                    clean[idx] = poly
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def is_zero(self) -> bool:
        return not self.coeffs

    def _binop(self, other, op):
        if type(other) is not type(self):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.degree != other.degree:
            # the zero object is degree-ambiguous (contractions below
            # degree zero produce it); let it absorb into the other side
            if other.is_zero():
                return self
            if self.is_zero():
                return type(self)(self.n, other.degree,
                                  {i: op(Polynomial.zero(self.n), p)
                                   for i, p in other.coeffs.items()})
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for idx, poly in other.coeffs.items():
            out[idx] = op(out.get(idx, Polynomial.zero(self.n)), poly)
        return type(self)(self.n, self.degree, out)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __neg__(self):
        return type(self)(self.n, self.degree, {i: -p for i, p in self.coeffs.items()})

    def scale(self, factor):
        """Multiply every coefficient by a polynomial or rational scalar."""
        return type(self)(self.n, self.degree,
                          {i: p * factor for i, p in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.degree,
                     frozenset(self.coeffs.items())))

    def __repr__(self):
        body = ", ".join(f"{idx}: {poly}" for idx, poly in sorted(self.coeffs.items()))
        return f"{type(self).__name__}({self.n}, {self.degree}, {{{body}}})"


class DiffForm(_Graded):
    """Element of Omega^p(R) on the basis dx_{i1} ^ ... ^ dx_{ip}."""

    @classmethod
    def zero(cls, n: int, degree: int) -> "DiffForm":
        return cls(n, max(degree, 0))

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> "DiffForm":
        return cls(f.n, 0, {(): f})

    @classmethod
    def volume(cls, n: int) -> "DiffForm":
        """The volume form dx_0 ^ ... ^ dx_{n-1}."""
        return cls(n, n, {tuple(range(n)): Polynomial.const(n, 1)})

    def wedge(self, other: "DiffForm") -> "DiffForm":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out: dict[IndexTuple, Polynomial] = {}
        for ia, fa in self.coeffs.items():
            for ib, fb in other.coeffs.items():
                sorted_sign = sort_with_sign(ia + ib)
                if sorted_sign is None:
                    continue
                idx, sign = sorted_sign
                term = fa * fb * sign
                prev = out.get(idx)
                out[idx] = term if prev is None else prev + term
        return DiffForm(self.n, self.degree + other.degree, out)


class Multivector(_Graded):
    """Element of X^p(R) on the basis d/dx_{i1} ^ ... ^ d/dx_{ip}."""

    @classmethod
    def zero(cls, n: int, degree: int) -> "Multivector":
        return cls(n, max(degree, 0))

    @classmethod
    def from_derivation_values(cls, values: Sequence[Polynomial]) -> "Multivector":
        n = len(values)
        return cls(n, 1, {(i,): v for i, v in enumerate(values) if not v.is_zero()})

    @classmethod
    def dual_volume(cls, n: int) -> "Multivector":
        """The full d/dx_0 ^ ... ^ d/dx_{n-1} wedge dual to the volume form."""
        return cls(n, n, {tuple(range(n)): Polynomial.const(n, 1)})


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    return a.wedge(b)


def de_rham(omega: DiffForm) -> DiffForm:
    """Exterior derivative: d(f dx_I) = sum_l df/dx_l dx_l ^ dx_I."""
    n = omega.n
    out: dict[IndexTuple, Polynomial] = {}
    for idx, f in omega.coeffs.items():
        for l in range(n):
            df = f.partial(l)
            if df.is_zero():
                continue
            sorted_sign = sort_with_sign((l,) + idx)
            if sorted_sign is None:
                continue
            new_idx, sign = sorted_sign
            term = df * sign
            prev = out.get(new_idx)
            out[new_idx] = term if prev is None else prev + term
    return DiffForm(n, omega.degree + 1, out)


def contract_form(mv: Multivector, omega: DiffForm) -> DiffForm:
    """Contraction iota_P(omega) by the shuffle sum over (p, k-p) splits.

    A degree-0 multivector acts by multiplication; the result is zero
    whenever the form degree is below the multivector degree.
    """
    if mv.n != omega.n:
        raise ValueError("dimension mismatch")
    p, k = mv.degree, omega.degree
    if k < p:
        return DiffForm.zero(omega.n, k - p)
    out: dict[IndexTuple, Polynomial] = {}
    for idx, f in omega.coeffs.items():
        for front, back, sign in split_shuffles(idx, p):
            value = mv.coeffs.get(front)
            if value is None:
                continue
            term = value * f * sign
            prev = out.get(back)
            out[back] = term if prev is None else prev + term
    return DiffForm(omega.n, k - p, out)


def contract_multivector(q: DiffForm, mv: Multivector) -> Multivector:
    """Contraction iota_Q(F): evaluate F with Q appended in the last slots.

    On bases, (iota_Q F)(dx_K) = sum_J q_J * F(dx_K ^ dx_J); the merge
    sign of (K, J) is the slot convention fixed so that Q -> iota_Q eta*
    inverts the shuffle isomorphism onto top forms.
    """
    if q.n != mv.n:
        raise ValueError("dimension mismatch")
    p, k = q.degree, mv.degree
    if k < p:
        return Multivector.zero(mv.n, k - p)
    out: dict[IndexTuple, Polynomial] = {}
    for j_idx, q_poly in q.coeffs.items():
        j_set = set(j_idx)
        for t_idx, c in mv.coeffs.items():
            if not j_set <= set(t_idx):
                continue
            rest = tuple(i for i in t_idx if i not in j_set)
            sign = merge_sign(rest, j_idx)
            term = q_poly * c * sign
            prev = out.get(rest)
            out[rest] = term if prev is None else prev + term
    return Multivector(mv.n, k - p, out)


def lie_derivative(x: Multivector, omega: DiffForm) -> DiffForm:
    """Cartan formula L_X = d iota_X + iota_X d for a degree-1 multivector."""
    if x.degree != 1:
        raise ValueError("Lie derivative is defined here for degree-1 multivectors")
    return de_rham(contract_form(x, omega)) + contract_form(x, de_rham(omega))


class Multiderivation:
    """Skew p-fold derivation from the polynomial ring to a free module.

    Stores the values F(x_{i1}, ..., x_{ip}) on strictly increasing
    index tuples; values live in any vector-like container supporting
    +, unary -, ``scale(polynomial)`` and ``is_zero()`` (module elements
    of a free Poisson module in practice).  Degree 0 stores the single
    value on the empty tuple.
    """

    __slots__ = ("n", "degree", "module", "values")

    def __init__(self, n: int, degree: int, module, values: Mapping[IndexTuple, object] | None = None):
        clean: dict[IndexTuple, object] = {}
        if values:
            for idx, val in values.items():
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"basis tuple {idx} is not increasing of length {degree}")
                if not val.is_zero():
                    clean[idx] = val
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "values", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Multiderivation is immutable")

    @classmethod
    def zero(cls, n: int, degree: int, module) -> "Multiderivation":
        return cls(n, degree, module)

    def is_zero(self) -> bool:
        return not self.values

    def value_on(self, idxs: Sequence[int]):
        """Value on a tuple of generator indices in any order (None if repeated)."""
        sorted_sign = sort_with_sign(idxs)
        if sorted_sign is None:
            return None
        idx, sign = sorted_sign
        val = self.values.get(idx)
        if val is None:
            return None
        return val if sign > 0 else -val

    def eval(self, args: Sequence[Polynomial]):
        """Evaluate on arbitrary polynomial arguments.

        Each slot is expanded by the derivation rule F(a, ...) =
        sum_l da/dx_l F(x_l, ...), multiplying the stored generator
        values by the partial-derivative coefficients with the
        skew-symmetry sign.
        """
        if len(args) != self.degree:
            raise ValueError(f"expected {self.degree} arguments, got {len(args)}")
        result = self.module.zero()
        if not self.values:
            return result
        partials = []
        for a in args:
            opts = [(l, a.partial(l)) for l in range(self.n)]
            partials.append([(l, da) for l, da in opts if not da.is_zero()])
        for combo in itertools.product(*partials):
            base = self.value_on([l for l, _ in combo])
            if base is None:
                continue
            coeff = None
            for _, da in combo:
                coeff = da if coeff is None else coeff * da
            if coeff is None:
                coeff = Polynomial.const(self.n, 1)
            result = result + base.scale(coeff)
        return result

    def _binop(self, other, op):
        if not isinstance(other, Multiderivation):
            return NotImplemented
        if self.n != other.n or self.degree != other.degree:
            raise ValueError("degree or dimension mismatch")
        out = dict(self.values)
        for idx, val in other.values.items():
            prev = out.get(idx)
            out[idx] = op(prev, val) if prev is not None else op(None, val)
        return Multiderivation(self.n, self.degree, self.module, out)

    def __add__(self, other):
        return self._binop(other, lambda a, b: b if a is None else a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: -b if a is None else a - b)

    def __neg__(self):
        return Multiderivation(self.n, self.degree, self.module,
                               {i: -v for i, v in self.values.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multiderivation):
            return NotImplemented
        return (self.n == other.n and self.degree == other.degree
                and self.values == other.values)

    def __hash__(self):
        raise TypeError("Multiderivation is not hashable")

    def __repr__(self):
        body = ", ".join(f"{idx}: {val}" for idx, val in sorted(self.values.items()))
        return f"Multiderivation(n={self.n}, p={self.degree}, {{{body}}})"
