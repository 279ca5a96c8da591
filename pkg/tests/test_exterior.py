import random

import pytest

from poisson_homology.poly import Polynomial
from poisson_homology.exterior import (DiffForm, Multiderivation, Multivector,
                                       contract_form, contract_multivector,
                                       de_rham, lie_derivative, merge_sign,
                                       sort_with_sign, split_shuffles, wedge)
from poisson_homology.structure import hamiltonian
from poisson_homology.modules import ModuleElement, regular_module

from conftest import poly3
from helpers import random_form, random_multivector, random_poly


def form(n, degree, entries):
    return DiffForm(n, degree, entries)


def one(n):
    return Polynomial.const(n, 1)


class TestBasics:
    def test_sort_with_sign(self):
        assert sort_with_sign((2, 0, 1)) == ((0, 1, 2), 1)
        assert sort_with_sign((1, 0)) == ((0, 1), -1)
        assert sort_with_sign((1, 1)) is None

    def test_merge_sign(self):
        assert merge_sign((0,), (1, 2)) == 1
        assert merge_sign((1,), (0, 2)) == -1
        assert merge_sign((), (0, 1)) == 1

    def test_split_shuffles_parity(self):
        # brute-force check of the incremental parity formula
        import itertools
        for k in range(1, 6):
            idxs = tuple(range(k))
            for p in range(k + 1):
                for front, back, sign in split_shuffles(idxs, p):
                    perm = front + back
                    inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
                    assert sign == (-1) ** inv


class TestWedge:
    def test_repeated_factor_dies(self):
        dx = form(3, 1, {(0,): one(3)})
        dy = form(3, 1, {(1,): one(3)})
        assert dx.wedge(dy).wedge(dx).is_zero()

    def test_antisymmetry(self):
        dx = form(3, 1, {(0,): one(3)})
        dy = form(3, 1, {(1,): one(3)})
        assert dy.wedge(dx) == -(dx.wedge(dy))

    def test_bilinearity_with_coefficients(self):
        x_dy = form(3, 1, {(1,): poly3("x")})
        dz = form(3, 1, {(2,): one(3)})
        assert x_dy.wedge(dz) == form(3, 2, {(1, 2): poly3("x")})

    def test_associativity_random(self):
        rng = random.Random(21)
        for _ in range(30):
            n = rng.randint(2, 4)
            a = random_form(rng, n, rng.randint(0, 1), 2)
            b = random_form(rng, n, rng.randint(0, 2), 2)
            c = random_form(rng, n, rng.randint(0, 1), 2)
            assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


class TestDeRham:
    def test_x_dy(self):
        assert de_rham(form(3, 1, {(1,): poly3("x")})) == form(3, 2, {(0, 1): one(3)})

    def test_y_dx_sign(self):
        assert de_rham(form(3, 1, {(0,): poly3("y")})) == form(3, 2, {(0, 1): -one(3)})

    def test_d_squared_zero_random(self):
        rng = random.Random(22)
        for _ in range(40):
            n = rng.randint(1, 4)
            omega = random_form(rng, n, rng.randint(0, n), 3)
            assert de_rham(de_rham(omega)).is_zero()

    def test_leibniz_on_wedge(self):
        rng = random.Random(23)
        for _ in range(20):
            n = 3
            k = rng.randint(0, 2)
            a = random_form(rng, n, k, 2)
            b = random_form(rng, n, rng.randint(0, 3 - k), 2)
            lhs = de_rham(a.wedge(b))
            rhs = de_rham(a).wedge(b) + (a.wedge(de_rham(b)) if k % 2 == 0
                                         else -(a.wedge(de_rham(b))))
            assert lhs == rhs


class TestContractForm:
    def test_hamiltonian_contraction(self, affine_structure):
        ham = hamiltonian(affine_structure, poly3("-x")).as_multivector()
        eta = DiffForm.volume(3)
        assert contract_form(ham, eta) == form(3, 2, {(0, 1): -one(3)})

    def test_scalar_multivector_multiplies(self):
        omega = form(3, 2, {(0, 2): poly3("x*y")})
        scalar = Multivector(3, 0, {(): poly3("z")})
        assert contract_form(scalar, omega) == form(3, 2, {(0, 2): poly3("x*y*z")})

    def test_low_degree_form_gives_zero(self):
        omega = form(3, 1, {(0,): one(3)})
        mv = Multivector(3, 2, {(0, 1): one(3)})
        assert contract_form(mv, omega).is_zero()

    def test_r_linearity_in_multivector(self):
        rng = random.Random(24)
        for _ in range(20):
            n = 3
            p = rng.randint(0, 3)
            mv = random_multivector(rng, n, p, 2)
            g = random_poly(rng, n, 2)
            omega = random_form(rng, n, 3, 2)
            assert contract_form(mv.scale(g), omega) == contract_form(mv, omega).scale(g)


class TestContractMultivector:
    def test_volume_against_dual_volume(self):
        for n in range(1, 5):
            eta = DiffForm.volume(n)
            eta_star = Multivector.dual_volume(n)
            result = contract_multivector(eta, eta_star)
            assert result == Multivector(n, 0, {(): one(n)})

    def test_high_degree_form_gives_zero(self):
        q = form(3, 2, {(0, 1): one(3)})
        mv = Multivector(3, 1, {(0,): one(3)})
        assert contract_multivector(q, mv).is_zero()

    def test_last_variable_slot_sign(self):
        # contracting dx_{n-1} into the dual volume keeps a plus sign:
        # the appended slot convention evaluates eta*(dx_0^...^dx_{n-1}) = +1
        for n in range(2, 5):
            q = form(n, 1, {(n - 1,): one(n)})
            result = contract_multivector(q, Multivector.dual_volume(n))
            assert result == Multivector(n, n - 1, {tuple(range(n - 1)): one(n)})

    def test_polynomial_coefficients(self):
        q = form(2, 1, {(0,): poly3("1", )}) if False else DiffForm(
            2, 1, {(0,): Polynomial.variable(2, 1)})
        mv = Multivector.dual_volume(2)
        # (iota_{y dx} eta*)(dx) = y * eta*(dx ^ dx) = 0; on dy: y * eta*(dy ^ dx) = -y
        assert contract_multivector(q, mv) == Multivector(
            2, 1, {(1,): -Polynomial.variable(2, 1)})


class TestLieDerivative:
    def test_affine_volume(self, affine_structure):
        ham = hamiltonian(affine_structure, poly3("z")).as_multivector()
        eta = DiffForm.volume(3)
        assert lie_derivative(ham, eta) == -eta

    def test_zero_field(self):
        zero = Multivector.zero(3, 1)
        omega = form(3, 2, {(0, 1): poly3("x*z")})
        assert lie_derivative(zero, omega).is_zero()

    def test_linearity_in_constants(self):
        rng = random.Random(25)
        x_field = random_multivector(rng, 3, 1, 2)
        eta = DiffForm.volume(3)
        assert lie_derivative(x_field, eta.scale(3)) == lie_derivative(x_field, eta).scale(3)

    def test_volume_wedge_exact_forms_vanish(self):
        rng = random.Random(26)
        eta = DiffForm.volume(3)
        for _ in range(20):
            f = random_poly(rng, 3, 3)
            df = de_rham(DiffForm.from_polynomial(f))
            assert eta.wedge(df).is_zero()


class TestMultiderivationEval:
    def setup_method(self):
        from poisson_homology.structure import PoissonStructure
        self.module = regular_module(PoissonStructure.zero(2))

    def scalar(self, value):
        return self.module.scalar_element(value)

    def test_derivation_expansion(self):
        f = Multiderivation(2, 1, self.module,
                            {(0,): self.scalar(Polynomial.const(2, 1))})
        x_squared = Polynomial.monomial(2, (2, 0))
        assert f.eval([x_squared]) == self.scalar(Polynomial.monomial(2, (1, 0), 2))

    def test_repeated_arguments_vanish(self):
        f = Multiderivation(2, 2, self.module,
                            {(0, 1): self.scalar(Polynomial.const(2, 1))})
        x = Polynomial.variable(2, 0)
        assert f.eval([x, x]).is_zero()

    def test_constants_die(self):
        f = Multiderivation(2, 1, self.module,
                            {(0,): self.scalar(Polynomial.const(2, 1))})
        assert f.eval([Polynomial.const(2, 5)]).is_zero()

    def test_skew_symmetry_random(self):
        rng = random.Random(27)
        from poisson_homology.structure import PoissonStructure
        module = regular_module(PoissonStructure.zero(3))
        for _ in range(20):
            values = {}
            import itertools
            for idx in itertools.combinations(range(3), 2):
                values[idx] = module.scalar_element(random_poly(rng, 3, 2))
            f = Multiderivation(3, 2, module, values)
            a = random_poly(rng, 3, 2)
            b = random_poly(rng, 3, 2)
            assert f.eval([a, b]) == -(f.eval([b, a]))

    def test_multilinearity_random(self):
        rng = random.Random(28)
        from poisson_homology.structure import PoissonStructure
        module = regular_module(PoissonStructure.zero(3))
        values = {(0,): module.scalar_element(poly3("x*y")),
                  (1,): module.scalar_element(poly3("z")),
                  (2,): module.scalar_element(poly3("1"))}
        f = Multiderivation(3, 1, module, values)
        for _ in range(20):
            a = random_poly(rng, 3, 2)
            b = random_poly(rng, 3, 2)
            assert f.eval([a + b]) == f.eval([a]) + f.eval([b])
            # derivation rule in the slot
            assert f.eval([a * b]) == f.eval([a]).scale(b) + f.eval([b]).scale(a)
