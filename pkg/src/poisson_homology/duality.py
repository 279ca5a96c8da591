"""Shuffle-sum isomorphisms between multiderivations and chains.

``ddag`` sends a p-multiderivation F to the (n-p)-chain

    sum over p-subsets K:  sign(K) F(x_K) (x) dx_{complement of K},

the sign being the shuffle parity of (K, complement).  ``dag`` adjusts
by (-1)^{p(p+1)/2} (signs +,-,-,+,+,... in p), which is exactly the
normalization making the square with the two differentials commute
when the chain side carries the modular twist.  The inverse goes
through contraction against the dual volume multivector, applied per
module coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .poly import Polynomial
from .exterior import (DiffForm, Multiderivation, Multivector,
                       contract_multivector, merge_sign)
from .modules import ModuleElement, PoissonModule, modular_twist
from .complexes import ChainElement, basis_multiderivations, chain_boundary, cochain_differential
from .structure import PoissonStructure


def _dag_sign(p: int) -> int:
    return -1 if (p * (p + 1) // 2) % 2 else 1


def ddag(f: Multiderivation, chain_module: PoissonModule | None = None) -> ChainElement:
    """The shuffle-sum map X^p(M) -> M (x) Omega^{n-p}."""
    module = chain_module if chain_module is not None else f.module
    n = f.n
    coeffs = {}
    for front, value in f.values.items():
        back = tuple(i for i in range(n) if i not in front)
        sign = merge_sign(front, back)
        coeffs[back] = value if sign > 0 else -value
    return ChainElement(module, n - f.degree, coeffs)


def dag(f: Multiderivation, chain_module: PoissonModule | None = None) -> ChainElement:
    """ddag with the alternating (-1)^{p(p+1)/2} normalization."""
    out = ddag(f, chain_module)
    return out if _dag_sign(f.degree) > 0 else -out


def dag_inverse(element: ChainElement,
                cochain_module: PoissonModule | None = None) -> Multiderivation:
    """Exact two-sided inverse of ``dag``.

    Works per module coordinate: read the coordinate's form, contract
    the dual volume multivector with it, and reassemble the resulting
    polynomial multivector coefficients into generator values, then
    apply the dag sign.
    """
    module = cochain_module if cochain_module is not None else element.module
    n = module.structure.n
    p = n - element.degree
    if p < 0:
        raise ValueError("chain degree exceeds the ring dimension")
    eta_star = Multivector.dual_volume(n)
    rank = module.rank
    per_coord = []
    for r in range(rank):
        coeffs = {idx: m.coords[r] for idx, m in element.coeffs.items()
                  if not m.coords[r].is_zero()}
        form = DiffForm(n, element.degree, coeffs)
        per_coord.append(contract_multivector(form, eta_star))
    values = {}
    for key in itertools.combinations(range(n), p):
        coords = [mv.coeffs.get(key, Polynomial.zero(n)) for mv in per_coord]
        value = ModuleElement(coords)
        if not value.is_zero():
            values[key] = value
    out = Multiderivation(n, p, module, values)
    return out if _dag_sign(p) > 0 else -out


@dataclass(frozen=True)
class DualitySquareFailure:
    """Basis multiderivation on which the duality square did not commute."""

    p: int
    basis: str
    via_cochain: ChainElement
    via_chain: ChainElement


def verify_duality_square(structure: PoissonStructure, module: PoissonModule,
                          p: int, max_degree: int) -> DualitySquareFailure | None:
    """Exhaustively check dag . delta = boundary . dag in degree p.

    The chain side carries the twist of ``module`` by the modular
    derivation.  Runs over every basis multiderivation with monomial
    values up to max_degree; linearity makes that complete verification
    for the degree range.  Returns the first failure, or None.
    """
    if not 0 <= p < structure.n:
        raise ValueError("need 0 <= p < n")
    twisted = modular_twist(module)
    for label, f in basis_multiderivations(module, p, max_degree):
        via_cochain = dag(cochain_differential(f), twisted)
        via_chain = chain_boundary(dag(f, twisted))
        if via_cochain != via_chain:
            return DualitySquareFailure(p, label, via_cochain, via_chain)
    return None
