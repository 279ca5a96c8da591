"""Free finite-rank right Poisson modules and their twists.

A module of rank r over the Poisson ring is described by one r x r
polynomial matrix per generator: {e_k, x_i}_M = sum_l action[i][k][l] e_l.
The bracket extends to arbitrary module elements and ring elements by
R-linearity in the first slot and the derivation rule in the second,
which covers the regular module M = R and every twist M^D by a Poisson
derivation (action shifted by D(x_i) on the diagonal).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import Polynomial
from .structure import Derivation, PoissonStructure, is_poisson_derivation


class ModuleElement:
    """Element of a free module: a tuple of polynomial coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[Polynomial]):
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("ModuleElement is immutable")

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(tuple(-a for a in self.coords))

    def scale(self, factor) -> "ModuleElement":
        """Multiply by a polynomial or rational scalar."""
        return ModuleElement(tuple(c * factor for c in self.coords))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ModuleElement({', '.join(str(c) for c in self.coords)})"


@dataclass(frozen=True)
class AxiomFailure:
    """Witness that the Lie-module condition broke on a generator pair."""

    generator: int
    pair: tuple[int, int]
    residual: ModuleElement


class PoissonModule:
    """Free right Poisson module with polynomial structure matrices."""

    __slots__ = ("structure", "rank", "action", "label")

    def __init__(self, structure: PoissonStructure, rank: int,
                 action: Sequence[Sequence[Sequence[Polynomial]]],
                 label: str = "M"):
        n = structure.n
        if rank < 1:
            raise ValueError("module rank must be >= 1")
        if len(action) != n:
            raise ValueError("need one action matrix per generator")
        frozen = []
        for i, matrix in enumerate(action):
            if len(matrix) != rank or any(len(row) != rank for row in matrix):
                raise ValueError(f"action matrix for generator {i} is not {rank}x{rank}")
            for row in matrix:
                for entry in row:
                    if entry.n != n:
                        raise ValueError("action entry ring dimension mismatch")
            frozen.append(tuple(tuple(row) for row in matrix))
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "action", tuple(frozen))
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("PoissonModule is immutable")

    # -- elements -------------------------------------------------------

    def zero(self) -> ModuleElement:
        return ModuleElement(tuple(Polynomial.zero(self.structure.n)
                                   for _ in range(self.rank)))

    def gen(self, k: int) -> ModuleElement:
        if not 0 <= k < self.rank:
            raise IndexError(f"generator index {k} out of range")
        n = self.structure.n
        return ModuleElement(tuple(Polynomial.const(n, 1) if l == k else Polynomial.zero(n)
                                   for l in range(self.rank)))

    def element(self, coords: Sequence[Polynomial]) -> ModuleElement:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        return ModuleElement(coords)

    def scalar_element(self, f: Polynomial) -> ModuleElement:
        """f as an element of a rank-1 module."""
        if self.rank != 1:
            raise ValueError("scalar_element requires a rank-1 module")
        return ModuleElement((f,))

    # -- bracket --------------------------------------------------------

    def bracket_generator(self, m: ModuleElement, i: int) -> ModuleElement:
        """{m, x_i}_M for a module element with polynomial coordinates."""
        P = self.structure
        xi = P.variable(i)
        matrix = self.action[i]
        coords = []
        for l in range(self.rank):
            acc = P.bracket(m.coords[l], xi)
            for k in range(self.rank):
                entry = matrix[k][l]
                if not entry.is_zero() and not m.coords[k].is_zero():
                    acc = acc + m.coords[k] * entry
            coords.append(acc)
        return ModuleElement(coords)

    def bracket(self, m: ModuleElement, a: Polynomial) -> ModuleElement:
        """{m, a}_M: the second slot expands by the derivation rule."""
        if a.n != self.structure.n:
            raise ValueError("ring dimension mismatch")
        out = self.zero()
        for i in range(self.structure.n):
            da = a.partial(i)
            if da.is_zero():
                continue
            out = out + self.bracket_generator(m, i).scale(da)
        return out

    def is_graded_action(self) -> bool:
        """True when every action entry is zero or homogeneous of the
        grading forced by the bracket shift (degree w_i + s)."""
        s = self.structure.bracket_degree
        if s is None:
            return False
        w = self.structure.weights
        for i in range(self.structure.n):
            for row in self.action[i]:
                for entry in row:
                    if entry.is_zero():
                        continue
                    if not entry.is_homogeneous(w):
                        return False
                    if entry.weighted_degree(w) != w[i] + s:
                        return False
        return True

    def __repr__(self):
        return f"PoissonModule({self.label!r}, rank={self.rank})"


def regular_module(structure: PoissonStructure, label: str = "R") -> PoissonModule:
    """R as a right Poisson module over itself (rank 1, zero action)."""
    zero = Polynomial.zero(structure.n)
    action = [[[zero]] for _ in range(structure.n)]
    return PoissonModule(structure, 1, action, label=label)


def twist(module: PoissonModule, d: Derivation, label: str | None = None) -> PoissonModule:
    """Twist by a Poisson derivation: {m, a}_{M^D} = {m, a}_M + m * D(a).

    On the generator action this adds D(x_i) on the diagonal.  Raises
    ValueError when d is not a Poisson derivation.
    """
    P = module.structure
    if d.n != P.n:
        raise ValueError("derivation dimension mismatch")
    if not is_poisson_derivation(P, d):
        raise ValueError("twist requires a Poisson derivation")
    action = []
    for i in range(P.n):
        shift = d.values[i]
        matrix = [[module.action[i][k][l] + shift if k == l else module.action[i][k][l]
                   for l in range(module.rank)] for k in range(module.rank)]
        action.append(matrix)
    return PoissonModule(P, module.rank, action,
                         label=label if label is not None else f"{module.label}^D")


def modular_twist(module: PoissonModule, label: str | None = None) -> PoissonModule:
    """The canonical twist M_t by the modular derivation of the structure."""
    from .structure import modular_derivation
    return twist(module, modular_derivation(module.structure),
                 label=label if label is not None else f"{module.label}_t")


def check_axioms(module: PoissonModule, max_degree: int | None = None) -> AxiomFailure | None:
    """Validate the right Lie-module condition on generator pairs.

    Checks {e_k, {x_i, x_j}}_M = {{e_k, x_i}_M, x_j}_M - {{e_k, x_j}_M, x_i}_M
    for every module generator e_k and generator pair i < j.  This is
    exact, not sampled: both sides are biderivations in (x_i, x_j) and
    R-linear in the module slot, so generator instances span everything.
    The module axioms (1), (3), (4) hold by construction of the free
    representation.  max_degree is accepted for interface symmetry and
    unused.
    """
    del max_degree
    P = module.structure
    for k in range(module.rank):
        ek = module.gen(k)
        for i in range(P.n):
            for j in range(i + 1, P.n):
                lhs = module.bracket(ek, P.h[i][j])
                rhs = (module.bracket_generator(module.bracket_generator(ek, i), j)
                       - module.bracket_generator(module.bracket_generator(ek, j), i))
                residual = lhs - rhs
                if not residual.is_zero():
                    return AxiomFailure(k, (i, j), residual)
    return None
