"""Shared test utilities: seeded random generators for all randomized suites."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from poisson_homology.poly import Polynomial
from poisson_homology.exterior import DiffForm, Multivector


def random_poly(rng: random.Random, n: int, degree: int, terms: int = 4,
                coeff_bound: int = 4) -> Polynomial:
    """Random polynomial of total degree <= degree with small coefficients."""
    out: dict[tuple[int, ...], Fraction] = {}
    for _ in range(terms):
        exps = [0] * n
        budget = rng.randint(0, degree)
        for _ in range(budget):
            exps[rng.randrange(n)] += 1
        c = rng.randint(-coeff_bound, coeff_bound)
        if c:
            key = tuple(exps)
            out[key] = out.get(key, Fraction(0)) + c
    return Polynomial(n, out)


def random_form(rng: random.Random, n: int, degree: int, poly_degree: int) -> DiffForm:
    coeffs = {}
    for idx in itertools.combinations(range(n), degree):
        if rng.random() < 0.8:
            coeffs[idx] = random_poly(rng, n, poly_degree)
    return DiffForm(n, degree, coeffs)


def random_multivector(rng: random.Random, n: int, degree: int,
                       poly_degree: int) -> Multivector:
    coeffs = {}
    for idx in itertools.combinations(range(n), degree):
        if rng.random() < 0.8:
            coeffs[idx] = random_poly(rng, n, poly_degree)
    return Multivector(n, degree, coeffs)


def random_rational_matrix(rng: random.Random, nrows: int, ncols: int,
                           density: float = 0.7) -> list[list[Fraction]]:
    return [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) if rng.random() < density
             else Fraction(0)
             for _ in range(ncols)] for _ in range(nrows)]
