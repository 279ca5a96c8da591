"""Shared structure fixtures for the whole suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from poisson_homology.poly import Polynomial, parse_polynomial
from poisson_homology.structure import PoissonStructure, gjps

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

XYZ = ["x", "y", "z"]


def poly3(text: str) -> Polynomial:
    return parse_polynomial(text, XYZ)


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def affine_structure() -> PoissonStructure:
    """{x,y} = 0, {y,z} = y, {z,x} = -1: Hamiltonian but nonzero modular derivation."""
    return PoissonStructure.from_upper_entries(
        3, {(1, 2): poly3("y"), (0, 2): poly3("1")}, names=XYZ)


@pytest.fixture(scope="session")
def quadratic_structure() -> PoissonStructure:
    """{x_i, x_j} = a_ij x_i x_j with a = (1, 2, 3) above the diagonal."""
    return quadratic_from_matrix(3, {(0, 1): 1, (0, 2): 2, (1, 2): 3})


@pytest.fixture(scope="session")
def so3_structure() -> PoissonStructure:
    return PoissonStructure.from_upper_entries(
        3, {(0, 1): poly3("z"), (1, 2): poly3("x"), (0, 2): poly3("-y")}, names=XYZ)


@pytest.fixture(scope="session")
def solvable_structure() -> PoissonStructure:
    names = ["x", "y"]
    return PoissonStructure.from_upper_entries(
        2, {(0, 1): parse_polynomial("y", names)}, names=names)


@pytest.fixture(scope="session")
def jps_xyz_structure() -> PoissonStructure:
    return gjps([poly3("x*y*z")], Polynomial.const(3, 1), names=XYZ)


@pytest.fixture(scope="session")
def jps_fermat_structure() -> PoissonStructure:
    return gjps([poly3("x^3 + y^3 + z^3")], Polynomial.const(3, 1), names=XYZ)


@pytest.fixture(scope="session")
def zero3_structure() -> PoissonStructure:
    return PoissonStructure.zero(3, names=XYZ)


@pytest.fixture(scope="session")
def zero4_structure() -> PoissonStructure:
    return PoissonStructure.zero(4)


@pytest.fixture(scope="session")
def quadratic4_structure() -> PoissonStructure:
    return quadratic_from_matrix(4, {(0, 1): 1, (0, 2): -1, (0, 3): 2,
                                     (1, 2): 3, (1, 3): 0, (2, 3): 1})


@pytest.fixture(scope="session")
def constant4_structure() -> PoissonStructure:
    """GJPS on 4 variables with potentials x_2, x_3: only {x_0, x_1} = 1."""
    u = Polynomial.const(4, 1)
    return gjps([Polynomial.variable(4, 2), Polynomial.variable(4, 3)], u)


def quadratic_from_matrix(n: int, upper: dict[tuple[int, int], int],
                          names=None) -> PoissonStructure:
    entries = {}
    for (i, j), a in upper.items():
        if a == 0:
            continue
        exps = tuple(1 if t in (i, j) else 0 for t in range(n))
        entries[(i, j)] = Polynomial.monomial(n, exps, a)
    return PoissonStructure.from_upper_entries(n, entries, names=names)
