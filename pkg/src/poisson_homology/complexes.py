"""The Poisson chain and cochain complexes.

Chains are elements of M (x) Omega^p on the wedge basis, with all
polynomial content normalized into the module coordinate (the canonical
form across the tensor product over R).  Cochains are multiderivations
valued in M, stored by their generator values.

The two differentials implement the standard double sums: the boundary
pairs the module bracket against single generators and the de Rham
expansion of the pairwise brackets; the cochain differential is its
mirror with the bracket fed into the first argument slot.  Their signs
are guarded three ways by the test suite: both squares vanish and the
shuffle-duality square commutes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .poly import Polynomial, monomials_up_to_degree
from .exterior import IndexTuple, Multiderivation, sort_with_sign
from .modules import ModuleElement, PoissonModule
from .structure import PoissonStructure


class ChainElement:
    """Element of M (x) Omega^p in canonical form.

    ``coeffs`` maps strictly increasing index tuples (the dx wedge) to
    module elements; polynomial form coefficients are always absorbed
    into the module side.
    """

    __slots__ = ("module", "degree", "coeffs")

    def __init__(self, module: PoissonModule, degree: int,
                 coeffs: Mapping[IndexTuple, ModuleElement] | None = None):
        n = module.structure.n
        clean: dict[IndexTuple, ModuleElement] = {}
        if coeffs:
            for idx, m in coeffs.items():
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"basis tuple {idx} is not increasing of length {degree}")
                if any(i < 0 or i >= n for i in idx):
                    raise ValueError(f"index out of range in {idx}")
                if not m.is_zero():
                    clean[idx] = m
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ChainElement is immutable")

    @classmethod
    def zero(cls, module: PoissonModule, degree: int) -> "ChainElement":
        return cls(module, degree)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ChainElement") -> "ChainElement":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for idx, m in other.coeffs.items():
            prev = out.get(idx)
            out[idx] = m if prev is None else prev + m
        return ChainElement(self.module, self.degree, out)

    def __sub__(self, other: "ChainElement") -> "ChainElement":
        return self + (-other)

    def __neg__(self) -> "ChainElement":
        return ChainElement(self.module, self.degree,
                            {i: -m for i, m in self.coeffs.items()})

    def scale(self, factor) -> "ChainElement":
        return ChainElement(self.module, self.degree,
                            {i: m.scale(factor) for i, m in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainElement):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("ChainElement is not hashable")

    def __repr__(self):
        body = ", ".join(f"{idx}: {m}" for idx, m in sorted(self.coeffs.items()))
        return f"ChainElement(p={self.degree}, {{{body}}})"


def normalize(module: PoissonModule, degree: int,
              terms: Iterable[tuple[ModuleElement, Polynomial, Sequence[int]]]) -> ChainElement:
    """Canonicalize raw tensor terms m (x) f dx_idx.

    Sorts each wedge with its sign, kills repeated indices, and moves
    the polynomial across the tensor product into the module element.
    Idempotent on already-canonical input.
    """
    acc: dict[IndexTuple, ModuleElement] = {}
    for m, f, idx in terms:
        sorted_sign = sort_with_sign(idx)
        if sorted_sign is None or f.is_zero() or m.is_zero():
            continue
        key, sign = sorted_sign
        term = m.scale(f if sign > 0 else -f)
        prev = acc.get(key)
        acc[key] = term if prev is None else prev + term
    return ChainElement(module, degree, acc)


def chain_boundary(element: ChainElement) -> ChainElement:
    """Boundary of m (x) dx_I: bracket terms minus-signed by position,
    plus the de-Rham-expanded pairwise bracket terms."""
    if element.degree < 1:
        raise ValueError("the boundary needs degree >= 1")
    module = element.module
    P = module.structure
    raw: list[tuple[ModuleElement, Polynomial, tuple[int, ...]]] = []
    one = Polynomial.const(P.n, 1)
    for idx, m in element.coeffs.items():
        p = len(idx)
        for a in range(p):
            rest = idx[:a] + idx[a + 1:]
            bracket_term = module.bracket_generator(m, idx[a])
            if a % 2 == 0:
                raw.append((bracket_term, one, rest))
            else:
                raw.append((-bracket_term, one, rest))
        for a in range(p):
            for b in range(a + 1, p):
                h = P.h[idx[a]][idx[b]]
                if h.is_zero():
                    continue
                rest = tuple(idx[t] for t in range(p) if t != a and t != b)
                sign = 1 if (a + b) % 2 == 0 else -1
                for l in range(P.n):
                    dh = h.partial(l)
                    if dh.is_zero():
                        continue
                    raw.append((m.scale(sign), dh, (l,) + rest))
    return normalize(module, element.degree - 1, raw)


def cochain_differential(f: Multiderivation) -> Multiderivation:
    """Differential of a multiderivation valued in a Poisson module.

    The output degree p+1 values on increasing tuples are assembled
    from the alternating module-bracket terms and the evaluations with
    the pairwise bracket in the first argument slot.
    """
    module: PoissonModule = f.module
    P: PoissonStructure = module.structure
    n = P.n
    p = f.degree
    out: dict[IndexTuple, ModuleElement] = {}
    if p + 1 > n:
        return Multiderivation.zero(n, p + 1, module)
    for idx in itertools.combinations(range(n), p + 1):
        acc = module.zero()
        for a in range(p + 1):
            rest = idx[:a] + idx[a + 1:]
            base = f.values.get(rest)
            if base is not None:
                term = module.bracket_generator(base, idx[a])
                acc = acc - term if a % 2 == 0 else acc + term
        for a in range(p + 1):
            for b in range(a + 1, p + 1):
                h = P.h[idx[a]][idx[b]]
                if h.is_zero():
                    continue
                rest = [P.variable(idx[t]) for t in range(p + 1) if t != a and t != b]
                term = f.eval([h, *rest])
                acc = acc + term if (a + b) % 2 == 0 else acc - term
        if not acc.is_zero():
            out[idx] = acc
    return Multiderivation(n, p + 1, module, out)


@dataclass(frozen=True)
class SquaredFailure:
    """A basis element whose double differential did not vanish."""

    side: str                 # "chain" or "cochain"
    degree: int
    basis: str
    residual: object


def basis_chain_elements(module: PoissonModule, p: int,
                         max_degree: int) -> Iterable[tuple[str, ChainElement]]:
    """All monomial basis chains of degree p with coefficients up to max_degree."""
    P = module.structure
    names = P.names
    for idx in itertools.combinations(range(P.n), p):
        for r in range(module.rank):
            for exps in monomials_up_to_degree(P.n, max_degree):
                mono = Polynomial.monomial(P.n, exps)
                coords = [mono if l == r else Polynomial.zero(P.n)
                          for l in range(module.rank)]
                label = f"({mono}).e{r} (x) d({','.join(names[i] for i in idx)})"
                yield label, ChainElement(module, p, {idx: ModuleElement(coords)})


def basis_multiderivations(module: PoissonModule, p: int,
                           max_degree: int) -> Iterable[tuple[str, Multiderivation]]:
    """All monomial basis multiderivations of degree p up to max_degree."""
    P = module.structure
    names = P.names
    for idx in itertools.combinations(range(P.n), p):
        for r in range(module.rank):
            for exps in monomials_up_to_degree(P.n, max_degree):
                mono = Polynomial.monomial(P.n, exps)
                coords = [mono if l == r else Polynomial.zero(P.n)
                          for l in range(module.rank)]
                label = f"({','.join(names[i] for i in idx)}) -> ({mono}).e{r}"
                yield label, Multiderivation(P.n, p, module, {idx: ModuleElement(coords)})


def complex_squared_check(module: PoissonModule, max_degree: int = 3) -> SquaredFailure | None:
    """Verify d(d(-)) = 0 on both complexes over exhaustive monomial bases.

    The strongest single guard on the sign conventions of the two
    differential formulas; returns the first offending basis element,
    or None when every double differential vanishes.
    """
    n = module.structure.n
    for p in range(2, n + 1):
        for label, element in basis_chain_elements(module, p, max_degree):
            residual = chain_boundary(chain_boundary(element))
            if not residual.is_zero():
                return SquaredFailure("chain", p, label, residual)
    for p in range(0, n - 1):
        for label, f in basis_multiderivations(module, p, max_degree):
            residual = cochain_differential(cochain_differential(f))
            if not residual.is_zero():
                return SquaredFailure("cochain", p, label, residual)
    return None
