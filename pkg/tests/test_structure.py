import random

import pytest

from poisson_homology.poly import Polynomial, parse_polynomial
from poisson_homology.structure import (Derivation, PoissonStructure, gjps,
                                        hamiltonian, is_poisson_derivation,
                                        is_unimodular, jacobi_check,
                                        jps_potential_3d, modular_derivation,
                                        modular_via_lie_derivative)

from conftest import XYZ, poly3, quadratic_from_matrix
from helpers import random_poly


class TestBracket:
    def test_quadratic_two_vars(self):
        names = ["x1", "x2"]
        h = parse_polynomial("x1*x2", names)
        P = PoissonStructure.from_upper_entries(2, {(0, 1): h}, names=names)
        f = parse_polynomial("x1^2", names)
        g = parse_polynomial("x2", names)
        assert P.bracket(f, g) == parse_polynomial("2*x1^2*x2", names)

    def test_bracket_with_itself(self, affine_structure):
        rng = random.Random(3)
        for _ in range(20):
            f = random_poly(rng, 3, 3)
            assert affine_structure.bracket(f, f).is_zero()

    def test_affine_generator_bracket(self, affine_structure):
        # {z, x} = -1
        assert affine_structure.bracket(poly3("z"), poly3("x")) == poly3("-1")

    def test_antisymmetry_random(self, affine_structure, so3_structure):
        rng = random.Random(4)
        for P in (affine_structure, so3_structure):
            for _ in range(20):
                f = random_poly(rng, 3, 3)
                g = random_poly(rng, 3, 3)
                assert P.bracket(f, g) == -P.bracket(g, f)

    def test_biderivation_random(self, so3_structure):
        rng = random.Random(5)
        for _ in range(20):
            f, g, h = (random_poly(rng, 3, 2) for _ in range(3))
            lhs = so3_structure.bracket(f * g, h)
            rhs = f * so3_structure.bracket(g, h) + g * so3_structure.bracket(f, h)
            assert lhs == rhs

    def test_jacobi_on_random_polynomials(self, affine_structure, jps_xyz_structure):
        rng = random.Random(6)
        for P in (affine_structure, jps_xyz_structure):
            for _ in range(10):
                f, g, h = (random_poly(rng, 3, 3, terms=3) for _ in range(3))
                cyclic = (P.bracket(P.bracket(f, g), h)
                          + P.bracket(P.bracket(g, h), f)
                          + P.bracket(P.bracket(h, f), g))
                assert cyclic.is_zero()

    def test_construction_rejects_asymmetric(self):
        one = Polynomial.const(2, 1)
        zero = Polynomial.zero(2)
        with pytest.raises(ValueError):
            PoissonStructure([[zero, one], [one, zero]])


class TestJacobiCheck:
    def test_affine_passes(self, affine_structure):
        assert jacobi_check(affine_structure) is None

    def test_small_dimensions_trivially_pass(self):
        names = ["x", "y"]
        h = parse_polynomial("x^2 + y^3", names)
        P = PoissonStructure.from_upper_entries(2, {(0, 1): h}, names=names)
        assert jacobi_check(P) is None

    def test_failing_triple_and_residual(self):
        # {x,y} = z, {y,z} = z, {z,x} = x: cyclic sum on (x,y,z) is x + z
        P = PoissonStructure.from_upper_entries(
            3, {(0, 1): poly3("z"), (1, 2): poly3("z"), (0, 2): poly3("-x")},
            names=XYZ)
        failure = jacobi_check(P)
        assert failure is not None
        assert failure.triple == (0, 1, 2)
        assert failure.residual == poly3("x + z")


class TestHamiltonian:
    def test_affine_fixture(self, affine_structure):
        d = hamiltonian(affine_structure, poly3("-x"))
        assert [str(v) for v in d.values] == ["0", "0", "-1"]

    def test_constant_gives_zero(self, so3_structure):
        assert hamiltonian(so3_structure, Polynomial.const(3, 5)).is_zero()

    def test_so3_generator(self, so3_structure):
        d = hamiltonian(so3_structure, poly3("x"))
        assert d.values == (poly3("0"), poly3("z"), poly3("-y"))


class TestModularDerivation:
    def test_affine_value(self, affine_structure):
        phi = modular_derivation(affine_structure)
        assert phi.values == (poly3("0"), poly3("0"), poly3("-1"))
        assert not is_unimodular(affine_structure)
        # phi = {-, x} = H_{-x}
        assert phi.values == hamiltonian(affine_structure, poly3("-x")).values

    def test_quadratic_row_sums(self, quadratic_structure):
        phi = modular_derivation(quadratic_structure)
        assert phi.values == (poly3("3*x"), poly3("2*y"), poly3("-5*z"))

    def test_jps_is_unimodular(self, jps_xyz_structure):
        assert modular_derivation(jps_xyz_structure).is_zero()

    def test_linear_trace_values(self, so3_structure, solvable_structure):
        assert modular_derivation(so3_structure).is_zero()
        phi = modular_derivation(solvable_structure)
        assert phi.values == (Polynomial.const(2, 1), Polynomial.zero(2))

    def test_weight_homogeneous_value_degrees(self, quadratic_structure,
                                              so3_structure, jps_fermat_structure):
        for P in (quadratic_structure, so3_structure, jps_fermat_structure):
            s = P.bracket_degree
            phi = modular_derivation(P)
            for i, value in enumerate(phi.values):
                if value.is_zero():
                    continue
                assert value.is_homogeneous(P.weights)
                assert value.weighted_degree(P.weights) == P.weights[i] + s


class TestModularViaLieDerivative:
    def test_affine_on_z(self, affine_structure):
        assert modular_via_lie_derivative(affine_structure, poly3("z")) == poly3("-1")

    def test_constant(self, affine_structure):
        assert modular_via_lie_derivative(
            affine_structure, Polynomial.const(3, 9)).is_zero()

    def test_quadratic_on_x(self, quadratic_structure):
        assert modular_via_lie_derivative(
            quadratic_structure, poly3("x")) == poly3("3*x")

    def test_cross_path_agreement(self, affine_structure, quadratic_structure,
                                  so3_structure, jps_xyz_structure):
        rng = random.Random(7)
        for P in (affine_structure, quadratic_structure, so3_structure,
                  jps_xyz_structure):
            phi = modular_derivation(P)
            for i in range(P.n):
                xi = P.variable(i)
                assert modular_via_lie_derivative(P, xi) == phi.values[i]
            for _ in range(20):
                f = random_poly(rng, 3, 4)
                assert modular_via_lie_derivative(P, f) == phi.apply(f)


class TestPoissonDerivationCheck:
    def test_modular_is_poisson_derivation(self, affine_structure,
                                           quadratic_structure, so3_structure,
                                           jps_fermat_structure):
        for P in (affine_structure, quadratic_structure, so3_structure,
                  jps_fermat_structure):
            assert is_poisson_derivation(P, modular_derivation(P))

    def test_zero_derivation(self, affine_structure):
        assert is_poisson_derivation(affine_structure, Derivation.zero(3))

    def test_failing_derivation(self, affine_structure):
        d = Derivation((poly3("y"), poly3("0"), poly3("0")))
        assert not is_poisson_derivation(affine_structure, d)

    def test_hamiltonians_are_poisson_derivations(self, so3_structure):
        rng = random.Random(8)
        for _ in range(10):
            f = random_poly(rng, 3, 3)
            assert is_poisson_derivation(so3_structure, hamiltonian(so3_structure, f))


class TestGJPS:
    def test_xyz_potential(self, jps_xyz_structure):
        P = jps_xyz_structure
        assert P.h[0][1] == poly3("x*y")
        assert P.h[0][2] == poly3("-x*z")
        assert P.h[1][2] == poly3("y*z")

    def test_zero_factor(self):
        P = gjps([poly3("x*y*z")], Polynomial.zero(3), names=XYZ)
        assert all(P.h[i][j].is_zero() for i in range(3) for j in range(3))

    def test_two_unit_rows(self, constant4_structure):
        P = constant4_structure
        assert P.h[0][1] == Polynomial.const(4, 1)
        for i in range(4):
            for j in range(i + 1, 4):
                if (i, j) != (0, 1):
                    assert P.h[i][j].is_zero()

    def test_gjps_unimodular_for_homogeneous_data(self):
        rng = random.Random(9)
        for _ in range(5):
            # build a random homogeneous potential of degree 3
            terms = {}
            from poisson_homology.poly import monomials_of_weighted_degree
            for exps in monomials_of_weighted_degree(3, 3):
                c = rng.randint(-2, 2)
                if c:
                    terms[exps] = c
            w = Polynomial(3, terms)
            if w.is_zero():
                continue
            P = gjps([w], Polynomial.const(3, 1), names=XYZ)
            assert modular_derivation(P).is_zero()


class TestJPSPotential:
    def test_xyz_round_trip(self, jps_xyz_structure):
        assert jps_potential_3d(jps_xyz_structure) == poly3("x*y*z")

    def test_zero_structure(self, zero3_structure):
        assert jps_potential_3d(zero3_structure).is_zero()

    def test_cubic_sum(self):
        P = PoissonStructure.from_upper_entries(
            3, {(0, 1): poly3("3*z^2"), (0, 2): poly3("-3*y^2"),
                (1, 2): poly3("3*x^2")}, names=XYZ)
        assert jps_potential_3d(P) == poly3("x^3 + y^3 + z^3")

    def test_rejects_non_unimodular(self, affine_structure):
        with pytest.raises(ValueError):
            jps_potential_3d(affine_structure)

    def test_rejects_wrong_dimension(self, solvable_structure):
        with pytest.raises(ValueError):
            jps_potential_3d(solvable_structure)

    def test_random_round_trips(self):
        rng = random.Random(10)
        one = Polynomial.const(3, 1)
        for _ in range(10):
            w = random_poly(rng, 3, 4, terms=5)
            P = gjps([w], one, names=XYZ)
            recovered = jps_potential_3d(P)
            difference = recovered - w
            assert difference.is_constant()
            assert gjps([recovered], one, names=XYZ).h == P.h


class TestBracketDegree:
    def test_quadratic_shift(self, quadratic_structure):
        assert quadratic_structure.bracket_degree == 0

    def test_linear_shift(self, so3_structure):
        assert so3_structure.bracket_degree == -1

    def test_mixed_structure_has_none(self, affine_structure):
        assert affine_structure.bracket_degree is None

    def test_zero_structure_convention(self, zero3_structure):
        assert zero3_structure.bracket_degree == 0

    def test_weighted_homogeneous(self):
        # {x, y} = x^2 is homogeneous for weights (1, 2) with shift -1
        names = ["x", "y"]
        P = PoissonStructure.from_upper_entries(
            2, {(0, 1): parse_polynomial("x^2", names)}, names=names,
            weights=(1, 2))
        assert P.bracket_degree == -1
