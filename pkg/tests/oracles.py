"""Definition-literal reference implementations used only by the tests.

Each oracle restates a formula in its most direct form -- explicit
permutation sums, general polynomial arguments, dense rational
elimination -- independently of the optimized code paths it checks.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from poisson_homology.poly import Polynomial
from poisson_homology.exterior import DiffForm, Multiderivation, Multivector
from poisson_homology.modules import ModuleElement, PoissonModule
from poisson_homology.complexes import ChainElement, normalize
from poisson_homology.structure import PoissonStructure


def oracle_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Dense Gaussian elimination over Fractions, no cleverness."""
    rows = [list(map(Fraction, row)) for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [v / pv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _permutation_sign(perm: Sequence[int]) -> int:
    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inv % 2 else 1


def oracle_contract_form(mv: Multivector, omega: DiffForm) -> DiffForm:
    """Contraction by brute-force enumeration of all (p, k-p)-shuffles."""
    p, k = mv.degree, omega.degree
    n = omega.n
    if k < p:
        return DiffForm.zero(n, 0)
    out = DiffForm.zero(n, k - p)
    for idx, f in omega.coeffs.items():
        for perm in itertools.permutations(range(k)):
            if list(perm[:p]) != sorted(perm[:p]):
                continue
            if list(perm[p:]) != sorted(perm[p:]):
                continue
            front = tuple(idx[t] for t in perm[:p])
            back = tuple(idx[t] for t in perm[p:])
            value = mv.coeffs.get(front)
            if value is None:
                continue
            sign = _permutation_sign(perm)
            out = out + DiffForm(n, k - p, {back: value * f * sign})
    return out


def oracle_chain_boundary(module: PoissonModule, m: ModuleElement,
                          args: Sequence[Polynomial]) -> ChainElement:
    """The boundary formula on arbitrary arguments a_1, ..., a_p.

    Evaluates both double sums with general polynomial arguments and
    normalizes the resulting forms to the canonical wedge basis.
    """
    from poisson_homology.exterior import de_rham

    P = module.structure
    n = P.n
    p = len(args)
    terms: list[tuple[ModuleElement, Polynomial, tuple[int, ...]]] = []

    def form_of(polys: Sequence[Polynomial]) -> DiffForm:
        out = DiffForm(n, 0, {(): Polynomial.const(n, 1)})
        for a in polys:
            out = out.wedge(de_rham(DiffForm.from_polynomial(a)))
        return out

    for i in range(p):
        rest = list(args[:i]) + list(args[i + 1:])
        sign = 1 if i % 2 == 0 else -1
        base = module.bracket(m, args[i])
        for idx, coeff in form_of(rest).coeffs.items():
            terms.append((base.scale(sign), coeff, idx))
    for i in range(p):
        for j in range(i + 1, p):
            sign = 1 if (i + j) % 2 == 0 else -1
            rest = [args[t] for t in range(p) if t != i and t != j]
            form = de_rham(DiffForm.from_polynomial(P.bracket(args[i], args[j])))
            form = form.wedge(form_of(rest))
            for idx, coeff in form.coeffs.items():
                terms.append((m.scale(sign), coeff, idx))
    return normalize(module, p - 1, terms)


def chain_of_general_args(module: PoissonModule, m: ModuleElement,
                          args: Sequence[Polynomial]) -> ChainElement:
    """Express m (x) da_1 ^ ... ^ da_p in the canonical basis."""
    from poisson_homology.exterior import de_rham

    n = module.structure.n
    out = DiffForm(n, 0, {(): Polynomial.const(n, 1)})
    for a in args:
        out = out.wedge(de_rham(DiffForm.from_polynomial(a)))
    return normalize(module, len(args),
                     [(m, coeff, idx) for idx, coeff in out.coeffs.items()])


def oracle_cochain_differential(f: Multiderivation,
                                args: Sequence[Polynomial]) -> ModuleElement:
    """delta(F) evaluated on arbitrary arguments straight from the formula."""
    module: PoissonModule = f.module
    P: PoissonStructure = module.structure
    p1 = len(args)
    acc = module.zero()
    for i in range(p1):
        rest = list(args[:i]) + list(args[i + 1:])
        term = module.bracket(f.eval(rest), args[i])
        acc = acc - term if i % 2 == 0 else acc + term
    for i in range(p1):
        for j in range(i + 1, p1):
            rest = [args[t] for t in range(p1) if t != i and t != j]
            term = f.eval([P.bracket(args[i], args[j]), *rest])
            acc = acc + term if (i + j) % 2 == 0 else acc - term
    return acc
