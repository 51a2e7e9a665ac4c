"""Unit tests for sphere moments, cosphere integrands, flat-space operators."""

import itertools
import random
from fractions import Fraction

import pytest

from hodge_residue.exterior import LinearOp, clifford_generator, generator_word, trace_product
from hodge_residue.forms import AntiSymForm, lift_two_chat
from hodge_residue.scalars import GaussianRational, SymbolicScalar, sphere_volume
from hodge_residue.symbols import (
    PolyForm,
    XiPolynomialOp,
    check_flat_commutators,
    codifferential,
    coordinate_multiply,
    exterior_derivative,
    interior_integrand,
    sphere_moment,
    trace_integrate,
)


class TestSphereMoments:
    def test_zero_exponent_gives_total_volume(self):
        assert sphere_moment((0, 0, 0, 0), 4) == sphere_volume(3)

    def test_any_odd_exponent_vanishes(self):
        assert sphere_moment((1, 0, 0, 0), 4).is_zero
        assert sphere_moment((1, 1, 0, 0), 4).is_zero
        assert sphere_moment((2, 1, 0, 1), 4).is_zero
        assert sphere_moment((3, 0, 0, 0), 4).is_zero

    def test_quadratic_moment_is_volume_over_n(self):
        for n in (2, 4, 6):
            alpha = (2,) + (0,) * (n - 1)
            assert sphere_moment(alpha, n) == sphere_volume(n - 1) * Fraction(1, n)

    def test_quartic_moments(self):
        # integral xi_1^4 = 3 V / (n (n+2)); integral xi_1^2 xi_2^2 = V / (n (n+2))
        n = 4
        v = sphere_volume(3)
        assert sphere_moment((4, 0, 0, 0), n) == v * Fraction(3, 24)
        assert sphere_moment((2, 2, 0, 0), n) == v * Fraction(1, 24)

    def test_moment_depends_only_on_multiset(self):
        n = 6
        base = (2, 4, 0, 2, 0, 0)
        for perm in itertools.islice(itertools.permutations(base), 40):
            assert sphere_moment(perm, n) == sphere_moment(base, n)

    def test_length_validation(self):
        with pytest.raises(ValueError):
            sphere_moment((2, 0), 4)


class TestXiPolynomialOp:
    def test_add_term_merges_same_exponent(self):
        n = 2
        poly = XiPolynomialOp(n)
        poly.add_term((1, 1), LinearOp.identity(n))
        poly.add_term((1, 1), LinearOp.identity(n))
        assert poly.term((1, 1)) == LinearOp.identity(n).scale(Fraction(2))

    def test_deferred_terms_materialize_on_access(self):
        n = 2
        calls = []
        poly = XiPolynomialOp(n)
        poly.add_deferred((2, 0), lambda: calls.append(1) or LinearOp.identity(n))
        assert not calls
        assert poly.term((2, 0)) == LinearOp.identity(n)
        assert calls == [1]
        # second access must not rebuild
        assert poly.term((2, 0)) == LinearOp.identity(n)
        assert calls == [1]

    def test_deferred_and_eager_terms_combine(self):
        n = 2
        poly = XiPolynomialOp(n)
        poly.add_term((0, 2), LinearOp.identity(n))
        poly.add_deferred((0, 2), lambda: LinearOp.identity(n).scale(Fraction(3)))
        assert poly.term((0, 2)) == LinearOp.identity(n).scale(Fraction(4))

    def test_terms_property_materializes_everything(self):
        n = 2
        poly = XiPolynomialOp(n)
        poly.add_deferred((1, 1), lambda: LinearOp.identity(n))
        poly.add_deferred((2, 0), lambda: LinearOp.zero(n))
        assert set(poly.terms) == {(1, 1), (2, 0)}

    def test_alpha_validation(self):
        poly = XiPolynomialOp(2)
        with pytest.raises(ValueError):
            poly.add_term((1,), LinearOp.identity(2))


class TestInteriorIntegrand:
    def test_zero_order_term_is_scaled_weight(self):
        n = 4
        theta = lift_two_chat(AntiSymForm(n, 2, {(1, 2): Fraction(1)}))
        poly = interior_integrand(theta, 2)
        assert poly.term((0,) * n) == theta
        poly_i = interior_integrand(theta, 2, GaussianRational(Fraction(0), Fraction(1)))
        assert poly_i.term((0,) * n) == theta.scale(
            GaussianRational(Fraction(0), Fraction(1))
        )

    def test_quadratic_terms_have_expected_structure(self):
        n = 4
        m = 2
        theta = lift_two_chat(AntiSymForm(n, 2, {(1, 2): Fraction(1)}))
        poly = interior_integrand(theta, m)
        c1 = clifford_generator("c", n, 1)
        c2 = clifford_generator("c", n, 2)
        # diagonal term alpha = 2 e_1
        alpha = (2, 0, 0, 0)
        expected = ((c1 @ theta + theta @ c1) @ c1).scale(m)
        assert poly.term(alpha) == expected
        # cross term alpha = e_1 + e_2 collects both orders
        alpha = (1, 1, 0, 0)
        expected = ((c1 @ theta + theta @ c1) @ c2).scale(m) + (
            (c2 @ theta + theta @ c2) @ c1
        ).scale(m)
        assert poly.term(alpha) == expected

    def test_exponent_set_is_constants_plus_quadratics(self):
        n = 4
        theta = LinearOp.identity(n)
        poly = interior_integrand(theta, 3)
        alphas = set(poly.alphas())
        assert (0,) * n in alphas
        assert all(sum(a) in (0, 2) for a in alphas)
        assert len(alphas) == 1 + n * (n + 1) // 2


class TestTraceIntegrate:
    def test_matches_manual_moment_sum(self):
        n = 2
        rng = random.Random(8)
        word = generator_word(n, [("chat", 1), ("chat", 2)])
        theta = LinearOp.from_entries(
            n,
            [
                (rng.randrange(4), rng.randrange(4), Fraction(rng.randint(-3, 3)))
                for _ in range(6)
            ],
        )
        poly = interior_integrand(theta, 2)
        manual = SymbolicScalar()
        for alpha in poly.alphas():
            moment = sphere_moment(alpha, n)
            if moment.is_zero:
                continue
            manual = manual + moment * trace_product(word, poly.term(alpha))
        assert trace_integrate(word, poly) == manual

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            trace_integrate(LinearOp.identity(2), XiPolynomialOp(3))


class TestFlatOperators:
    def test_exterior_derivative_of_function_monomial(self):
        n = 2
        # d(x_1) = e_1
        form = PolyForm.monomial(n, (1, 0), 0)
        out = exterior_derivative(form)
        assert out == PolyForm.monomial(n, (0, 0), 0b01)

    def test_exterior_derivative_squares_to_zero(self):
        n = 3
        form = PolyForm.monomial(n, (2, 1, 0), 0b001, Fraction(3, 2))
        assert exterior_derivative(exterior_derivative(form)).is_zero

    def test_codifferential_squares_to_zero(self):
        n = 3
        form = PolyForm.monomial(n, (1, 2, 0), 0b011, Fraction(1, 2))
        assert codifferential(codifferential(form)).is_zero

    def test_codifferential_lowers_degree(self):
        n = 2
        # delta(x_1 e_1) = -1
        form = PolyForm.monomial(n, (1, 0), 0b01)
        out = codifferential(form)
        assert out == PolyForm.monomial(n, (0, 0), 0, -1)

    def test_coordinate_multiplication(self):
        n = 2
        form = PolyForm.monomial(n, (1, 0), 0b10, Fraction(2))
        assert coordinate_multiply(1, form) == PolyForm.monomial(n, (2, 0), 0b10, Fraction(2))


class TestFlatCommutators:
    @pytest.mark.parametrize("n", [2, 4])
    def test_both_identities_hold_on_low_degree_monomials(self, n):
        records = check_flat_commutators(n)
        assert records, "no commutator records produced"
        assert all(rec["ok"] for rec in records)
        identities = {rec["identity"] for rec in records}
        assert identities == {"c", "chat"}
        ks = {rec["k"] for rec in records}
        assert ks == set(range(1, n + 1))

    def test_monomial_budget_counts_polynomial_degrees_below_three(self, n=2):
        records = check_flat_commutators(n)
        # dim Lambda* = 4 masks, exponent tuples with |beta| < 3 in 2 vars = 6
        assert all(rec["monomials"] == 24 for rec in records)
