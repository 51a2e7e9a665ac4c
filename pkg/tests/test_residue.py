"""Regression tests for interior densities and the trace-identity checker.

The expected values here were frozen from two independent routes: the exact
engine itself (cross-validated against the dense floating-point oracle) and
hand-derived sandwich multipliers.  Checks whose tabulated closed form
disagrees with the engine are asserted to FAIL with both values reported —
those discrepancies are real and must stay visible.
"""

import random
from fractions import Fraction

import pytest

from hodge_residue.exterior import LinearOp, clifford_word, trace_product
from hodge_residue.forms import (
    AntiSymForm,
    form_contract,
    lift_four_chat,
    lift_four_mixed,
    lift_three_c,
    lift_three_mixed,
    lift_torsion_assembly,
    lift_two_chat,
    random_form,
    random_vector,
)
from hodge_residue.residue import (
    FUNCTIONALS,
    LEMMA_CHECKS,
    closed_form_coefficient,
    density_decomposition,
    lemma_check,
    lemma_ids,
    sandwich_integrand,
    spectral_density,
    verify_theorem,
)
from hodge_residue.scalars import GaussianRational, I, SymbolicScalar, sphere_volume
from hodge_residue.symbols import trace_integrate


def basis_vector(n: int, j: int):
    return tuple(Fraction(1 if k == j else 0) for k in range(1, n + 1))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# Sandwich multipliers: the exact engine must satisfy
#   integral tr(W c(xi) L c(xi))  = (-1)^len (2k - n)/n * tr(W L) * V
#   integral tr(W L c(xi) c(xi))  = -tr(W L) * V
# for L a lift whose monomials are products of `len` distinct generators with
# `k` of minus-flavor.  These were confirmed by brute force over all generator
# words and are the engine-side ground truth for every sandwiched identity.
# ---------------------------------------------------------------------------

LIFT_SIGNATURES = [
    # (builder, degree, word length, count of minus-flavor letters)
    (lift_two_chat, 2, 2, 0),
    (lift_three_c, 3, 3, 3),
    (lift_three_mixed, 3, 3, 1),
    (lift_four_mixed, 4, 4, 2),
    (lift_four_chat, 4, 4, 0),
]


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("builder,degree,length,minus", LIFT_SIGNATURES)
def test_sandwich_multipliers_hold_for_every_lift(n, builder, degree, length, minus):
    rng = random.Random(f"sandwich:{n}:{builder.__name__}")
    volume = sphere_volume(n - 1)
    for _ in range(3):
        form = random_form(n, degree, rng)
        lift = builder(form)
        word = clifford_word(
            n, [("chat", random_vector(n, rng)), ("chat", random_vector(n, rng))]
        )
        plain = SymbolicScalar.number(trace_product(word, lift))
        before = trace_integrate(word, sandwich_integrand(lift, "before"))
        after = trace_integrate(word, sandwich_integrand(lift, "after"))
        multiplier = Fraction((-1) ** length * (2 * minus - n), n)
        assert before == plain * multiplier * volume
        assert after == plain * Fraction(-1) * volume


# ---------------------------------------------------------------------------
# Frozen pass/fail statuses of the tabulated identities (both dimensions).
# ---------------------------------------------------------------------------

EXPECTED_LEMMA_STATUS = {
    "L2.4": "pass",
    "L2.5": "pass",
    "L3.4a": "pass",
    "L3.4b": "pass",
    "L3.5": "pass",
    "L3.6a": "pass",
    "L3.6b": "fail",
    "L3.7a": "fail",
    "L3.7b": "pass",
    "L3.8": "pass",
    "L3.9": "fail",
    "L4.5": "fail",
    "L4.6a": "fail",
    "L4.6b": "fail",
    "L4.7": "pass",
    "L4.8": "pass",
    "B5.8": "pass",
    "B5.10": "pass",
    "M6.2": "pass",
}


def test_lemma_id_registry_is_complete():
    assert lemma_ids() == sorted(LEMMA_CHECKS)
    assert set(EXPECTED_LEMMA_STATUS) == set(LEMMA_CHECKS)
    assert len(LEMMA_CHECKS) == 19


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("lemma_id", sorted(EXPECTED_LEMMA_STATUS))
def test_lemma_check_statuses_are_frozen(lemma_id, n):
    report = lemma_check(lemma_id, n, trials=4, seed=0)
    assert report.status == EXPECTED_LEMMA_STATUS[lemma_id], (
        f"{lemma_id} at n={n}: computed={report.computed!r} expected={report.expected!r}"
    )
    if report.status == "fail":
        # honest failures must surface both exact values verbatim
        assert report.computed != report.expected
        assert report.computed and report.expected


@pytest.mark.parametrize(
    "alias,status",
    [
        ("L2.5a", "pass"),
        ("L2.5b", "pass"),
        ("L3.5a", "pass"),
        ("L3.5b", "pass"),
        ("L3.8a", "pass"),
        ("L3.8b", "pass"),
        ("L3.9a", "fail"),
        ("L3.9b", "fail"),
        ("L4.8a", "pass"),
        ("L4.8b", "pass"),
    ],
)
def test_single_placement_aliases_dispatch(alias, status):
    report = lemma_check(alias, 4, trials=3, seed=1)
    assert report.check_id == alias
    assert report.status == status


# ---------------------------------------------------------------------------
# Frozen engine values on explicit inputs.
# ---------------------------------------------------------------------------


class TestFrozenInstanceValues:
    def test_paired_minus_flavor_trace_on_basis_data(self):
        # tr(chat(u) chat(v) . sum T_kl chat_k chat_l) = -T(u, v) * 2^n
        n = 4
        T = AntiSymForm(n, 2, {(1, 2): Fraction(1)})
        word = clifford_word(n, [("chat", basis_vector(n, 1)), ("chat", basis_vector(n, 2))])
        assert trace_product(word, lift_two_chat(T)) == GaussianRational(Fraction(-16))

    def test_four_letter_mixed_trace_on_basis_data(self):
        # engine value +16; the tabulated closed form (-1/6 * T * Tr Id = -8/3)
        # disagrees and the corresponding check fails by design
        n = 4
        T = AntiSymForm(n, 4, {(1, 2, 3, 4): Fraction(1)})
        word = clifford_word(
            n,
            [
                ("c", basis_vector(n, 1)),
                ("c", basis_vector(n, 2)),
                ("chat", basis_vector(n, 3)),
                ("chat", basis_vector(n, 4)),
            ],
        )
        assert trace_product(word, lift_four_mixed(T)) == GaussianRational(Fraction(16))

    def test_metric_trace_sign_is_minus(self):
        # tr(c(u) c(v)) = -g(u, v) * 2^n on random data
        rng = random.Random(13)
        for n in (4, 6):
            u = random_vector(n, rng)
            v = random_vector(n, rng)
            word = clifford_word(n, [("c", u), ("c", v)])
            assert word.trace() == GaussianRational(-dot(u, v) * Fraction(1 << n))

    def test_three_minus_letters_against_normal_generator(self):
        # tr(c(u) c(v) c(w) c_n) = (u_n g(v,w) - v_n g(u,w) + w_n g(u,v)) 2^n
        from hodge_residue.exterior import clifford_generator

        rng = random.Random(17)
        for n in (4, 6):
            u, v, w = (random_vector(n, rng) for _ in range(3))
            word = clifford_word(n, [("c", u), ("c", v), ("c", w)])
            lhs = trace_product(word, clifford_generator("c", n, n))
            expected = (
                u[-1] * dot(v, w) - v[-1] * dot(u, w) + w[-1] * dot(u, v)
            ) * Fraction(1 << n)
            assert lhs == GaussianRational(expected)

    def test_mixed_word_against_normal_generator(self):
        # tr(c(u) chat(v) chat(w) c_n) = -u_n g(v,w) 2^n
        from hodge_residue.exterior import clifford_generator

        rng = random.Random(19)
        for n in (4, 6):
            u, v, w = (random_vector(n, rng) for _ in range(3))
            word = clifford_word(n, [("c", u), ("chat", v), ("chat", w)])
            lhs = trace_product(word, clifford_generator("c", n, n))
            assert lhs == GaussianRational(-u[-1] * dot(v, w) * Fraction(1 << n))


# ---------------------------------------------------------------------------
# Interior densities: frozen constants of proportionality.
# ---------------------------------------------------------------------------

# Engine-honest density coefficients (density = coeff * T(args) * V(S^{2m-1})).
# T4 is intentionally absent: its density is NOT proportional to T(args).
HONEST_DENSITY_COEFFS = {
    "T1": lambda m: GaussianRational(0, (2 * m - 1) * (1 << (2 * m))),
    "T2": lambda m: GaussianRational(-3 * (1 << (2 * m))),
    "T3": lambda m: GaussianRational(0),
    "T5": lambda m: GaussianRational(0, (-2 * m + 1) * (1 << (2 * m))),
}


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("functional_id", sorted(HONEST_DENSITY_COEFFS))
def test_densities_match_engine_constants(functional_id, m):
    spec = FUNCTIONALS[functional_id]
    n = 2 * m
    rng = random.Random(f"density:{functional_id}:{m}")
    volume = sphere_volume(n - 1)
    coeff = HONEST_DENSITY_COEFFS[functional_id](m)
    for _ in range(3):
        T = random_form(n, spec.torsion_degree, rng)
        vectors = [random_vector(n, rng) for _ in spec.arg_flavors]
        density = spectral_density(functional_id, T, vectors, m)
        contraction = form_contract(T, vectors)
        assert density == volume * (coeff * contraction)


def test_fourth_functional_density_is_not_proportional_to_contraction():
    m, n = 2, 4
    spec = FUNCTIONALS["T4"]
    rng = random.Random("t4:witness")
    ratios = set()
    attempts = 0
    while len(ratios) < 2 and attempts < 40:
        attempts += 1
        T = random_form(n, 4, rng)
        vectors = [random_vector(n, rng) for _ in spec.arg_flavors]
        contraction = form_contract(T, vectors)
        if not contraction:
            continue
        density = spectral_density("T4", T, vectors, m)
        ratios.add(density.coefficient(spheres=(n - 1,)) / GaussianRational(contraction))
    assert len(ratios) >= 2, "density/contraction ratio was constant across trials"


EXPECTED_CLOSED_FORMS = {
    ("T1", 2): sphere_volume(3) * GaussianRational(0, 48),
    ("T1", 3): sphere_volume(5) * GaussianRational(0, 320),
    ("T2", 2): sphere_volume(3) * GaussianRational(-264),
    ("T2", 3): sphere_volume(5) * GaussianRational(-1632),
    ("T3", 2): sphere_volume(3) * GaussianRational(-24),
    ("T3", 3): sphere_volume(5) * GaussianRational(-160),
    ("T4", 2): sphere_volume(3) * GaussianRational(0, Fraction(-40, 3)),
    ("T4", 3): sphere_volume(5) * GaussianRational(0, Fraction(-224, 3)),
    ("T5", 2): sphere_volume(3) * GaussianRational(0, -48),
    ("T5", 3): sphere_volume(5) * GaussianRational(0, -320),
}


@pytest.mark.parametrize("key", sorted(EXPECTED_CLOSED_FORMS))
def test_closed_form_coefficient_table(key):
    functional_id, m = key
    assert closed_form_coefficient(functional_id, m) == EXPECTED_CLOSED_FORMS[key]


EXPECTED_THEOREM_STATUS = {
    "T1": "pass",
    "T2": "fail",
    "T3": "fail",
    "T4": "fail",
    "T5": "pass",
}


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("functional_id", sorted(EXPECTED_THEOREM_STATUS))
def test_verify_theorem_statuses_are_frozen(functional_id, m):
    report = verify_theorem(functional_id, m, trials=4, seed=0)
    assert report.status == EXPECTED_THEOREM_STATUS[functional_id]
    assert report.n == 2 * m
    if report.status == "fail":
        assert report.computed != report.expected


def test_verify_theorem_is_deterministic():
    a = verify_theorem("T2", 2, trials=3, seed=5).to_dict()
    b = verify_theorem("T2", 2, trials=3, seed=5).to_dict()
    assert a == b


def test_lemma_check_is_deterministic():
    a = lemma_check("L3.9", 4, trials=3, seed=5).to_dict()
    b = lemma_check("L3.9", 4, trials=3, seed=5).to_dict()
    assert a == b


class TestDensityDecomposition:
    def test_parts_recombine_to_total_and_match_density(self):
        m, n = 2, 4
        rng = random.Random(31)
        T = random_form(n, 3, rng)
        vectors = [random_vector(n, rng) for _ in range(3)]
        dec = density_decomposition("T2", T, vectors, m)
        assert dec["zero_order"] + dec["sandwich_per_m"] * Fraction(m) == dec["total"]
        assert dec["total"] == spectral_density("T2", T, vectors, m)

    def test_zero_order_unit_weight_on_basis_data(self):
        # zero-order part carries 3/2 per unit T(u,v,w) Tr(Id); the sandwich
        # part is -36 V at m=2 (the tabulated -9 * 2^{2m} would give -144 V)
        m, n = 2, 4
        T = AntiSymForm(n, 3, {(1, 2, 3): Fraction(1)})
        vectors = [basis_vector(n, j) for j in (1, 2, 3)]
        dec = density_decomposition("T2", T, vectors, m)
        volume = sphere_volume(n - 1)
        assert dec["zero_order"] == volume * Fraction(3, 2) * Fraction(1 << n)
        assert dec["sandwich_per_m"] == volume * Fraction(-36)
        assert dec["total"] == volume * Fraction(-48)


class TestInputValidation:
    def test_dimension_must_match_symbol_order(self):
        T = AntiSymForm(4, 3, {(1, 2, 3): Fraction(1)})
        vecs = [basis_vector(4, j) for j in (1, 2, 3)]
        with pytest.raises(ValueError):
            spectral_density("T2", T, vecs, 3)

    def test_degree_must_match_functional(self):
        T = AntiSymForm(4, 2, {(1, 2): Fraction(1)})
        vecs = [basis_vector(4, j) for j in (1, 2, 3)]
        with pytest.raises(ValueError):
            spectral_density("T2", T, vecs, 2)

    def test_argument_count_must_match_functional(self):
        T = AntiSymForm(4, 3, {(1, 2, 3): Fraction(1)})
        with pytest.raises(ValueError):
            spectral_density("T2", T, [basis_vector(4, 1)], 2)

    def test_unknown_ids_rejected(self):
        with pytest.raises(ValueError):
            verify_theorem("T9", 2)
        with pytest.raises(ValueError):
            lemma_check("L9.9", 4)

    def test_lemma_check_requires_even_n_at_least_4(self):
        with pytest.raises(ValueError):
            lemma_check("L2.4", 3)
        with pytest.raises(ValueError):
            lemma_check("L2.4", 2)


class TestReportShape:
    def test_report_dict_has_exactly_the_report_keys(self):
        report = lemma_check("L2.4", 4, trials=2, seed=0)
        assert set(report.to_dict()) == {
            "id",
            "n",
            "trials",
            "status",
            "computed",
            "expected",
        }
        assert report.to_dict()["id"] == "L2.4"
        assert report.to_dict()["trials"] == 2

    def test_magnitude_policy_reports_observed_sign(self):
        report = lemma_check("M6.2", 4, trials=3, seed=0)
        assert report.status == "pass"
        assert "-1" in report.detail or "minus" in report.detail.lower()
