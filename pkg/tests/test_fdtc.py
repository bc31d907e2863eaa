# tests/test_fdtc.py

import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

import core.fdtc
from core.curves import ArcClass, Ordering, coords_from_weights, enumerate_arcs, link_arc_weights
from core.errors import FDTCError
from core.fdtc import (
    AmbiguityReport,
    RationalInterval,
    brute_force_candidates,
    braid_fdtc,
    fdtc_exact,
    format_rational,
    hkm_periodic_verdict,
    key_lemma_interval,
    parse_rational,
    periodicity_certificate,
    probe_arc,
    quasimorphism_audit,
    right_veering_test,
    translation_estimate,
    unique_bounded_denominator,
)
from core.mcg import boundary_word, braid_word, compose, identity, invert, power
from core.surface import SurfaceSpec, admissible_values, standard_triangulation


def interval(lo, hi, lo_closed=True, hi_closed=True):
    return RationalInterval(lo=Fraction(lo), hi=Fraction(hi), lo_closed=lo_closed, hi_closed=hi_closed)


# -- rationals ----------------------------------------------------------------

def test_format_and_parse_rational():
    assert format_rational(Fraction(1, 6)) == "1/6"
    assert format_rational(Fraction(-3)) == "-3"
    assert parse_rational("5/31") == Fraction(5, 31)
    assert parse_rational("0.15") == Fraction(3, 20)
    with pytest.raises(FDTCError):
        parse_rational("x/2")


def test_interval_rejects_reversed_bounds():
    with pytest.raises(ValidationError):
        interval(1, 0)


def test_interval_membership_respects_open_ends():
    half_open = interval(0, 1, hi_closed=False)
    assert Fraction(0) in half_open
    assert Fraction(1) not in half_open


def test_unique_bounded_denominator_examples():
    assert unique_bounded_denominator(interval("0.15", "0.17"), 6) == Fraction(1, 6)
    assert unique_bounded_denominator(interval("5/31", "6/31"), 6) == Fraction(1, 6)
    report = unique_bounded_denominator(interval(0, 1), 2)
    assert isinstance(report, AmbiguityReport)
    assert report.candidates == (Fraction(0), Fraction(1, 2), Fraction(1))


def test_unique_bounded_denominator_filters_allowed():
    assert unique_bounded_denominator(interval(0, 1), 2, allowed=[2]) == Fraction(1, 2)


def test_unique_bounded_denominator_empty():
    with pytest.raises(FDTCError, match="no admissible rational"):
        unique_bounded_denominator(interval("1/7", "1/7"), 6)


def test_farey_matches_brute_force():
    rng = random.Random(7)
    for _ in range(300):
        D = rng.randint(1, 8)
        a = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        b = a + Fraction(rng.randint(0, 10), rng.randint(1, 12))
        I = RationalInterval(lo=a, hi=b, lo_closed=rng.random() < 0.5 or a == b,
                             hi_closed=rng.random() < 0.5 or a == b)
        candidates = brute_force_candidates(I, D)
        if not candidates:
            with pytest.raises(FDTCError):
                unique_bounded_denominator(I, D)
            continue
        found = unique_bounded_denominator(I, D)
        if len(candidates) == 1:
            assert found == candidates[0]
        else:
            assert list(found.candidates) == candidates


# -- key lemma ----------------------------------------------------------------

def test_key_lemma_identity_is_point(torus_identity):
    gamma = probe_arc(torus_identity, "C1")
    assert key_lemma_interval(torus_identity, "C1", gamma, 5) == RationalInterval.point(Fraction(0))


def test_key_lemma_on_annulus(annulus):
    w = boundary_word(annulus, "C1")
    gamma = probe_arc(w, "C1")
    assert key_lemma_interval(w, "C1", gamma, 3) == RationalInterval.point(Fraction(1))


def test_key_lemma_torus_chain(t_ab):
    gamma = probe_arc(t_ab, "C1")
    assert key_lemma_interval(t_ab, "C1", gamma, 31) == interval("5/31", "6/31")


def test_key_lemma_rejects_inessential_arc(torus, t_ab):
    link = ArcClass(coords=coords_from_weights(torus, link_arc_weights(torus, "C1")), start=("C1", 0))
    with pytest.raises(FDTCError, match="Key Lemma requires essential arc"):
        key_lemma_interval(t_ab, "C1", link, 3)


def test_key_lemma_rejects_unknown_boundary(t_ab):
    with pytest.raises(FDTCError, match="not a boundary component"):
        key_lemma_interval(t_ab, "C7", probe_arc(t_ab, "C1"), 3)


def test_key_lemma_search_range_is_bounded(t_ab, monkeypatch):
    calls = []

    def always_left(g1, g2, label=None):
        calls.append(label)
        return Ordering.LEFT_OF

    gamma = probe_arc(t_ab, "C1")
    monkeypatch.setattr(core.fdtc, "compare_at_base", always_left)
    # 2 * N * len(w) + 2 = 14, doublé à gauche à chaque élargissement
    lo = -14 * 2 ** core.fdtc.BRACKET_WIDENINGS
    with pytest.raises(FDTCError, match=rf"no bracket for M within \[{lo}, 14\]"):
        key_lemma_interval(t_ab, "C1", gamma, 3)
    assert len(calls) <= 2 * core.fdtc.BRACKET_WIDENINGS + 2


def test_key_lemma_holds_for_short_arcs(torus, t_ab):
    for gamma in enumerate_arcs(torus, "C1", 7)[:3]:
        for n in (1, 2, 5, 7):
            assert Fraction(1, 6) in key_lemma_interval(t_ab, "C1", gamma, n)


# -- exact values ---------------------------------------------------------------

def test_fdtc_identity(torus_identity):
    assert fdtc_exact(torus_identity, "C1").value == 0


@pytest.mark.parametrize("k", [-3, -2, -1, 0, 1, 2, 3])
def test_fdtc_boundary_twist_powers(torus, k):
    assert fdtc_exact(boundary_word(torus, "C1", k), "C1").value == k


@pytest.mark.slow
@pytest.mark.parametrize("label", ["C1", "C2"])
@pytest.mark.parametrize("k", [-3, -1, 1, 3])
def test_fdtc_boundary_twist_powers_two_holed_torus(label, k):
    t = standard_triangulation(SurfaceSpec(genus=1, boundary=("C1", "C2")))
    assert fdtc_exact(boundary_word(t, label, k), label).value == k


def test_fdtc_inverse_chain(t_ab):
    result = fdtc_exact(invert(t_ab), "C1")
    assert result.value == Fraction(-1, 6)
    assert result.value.denominator in admissible_values(t_ab.triangulation.surface)


def test_fdtc_chain(t_ab):
    result = fdtc_exact(t_ab, "C1")
    assert result.value == Fraction(1, 6)
    assert result.N == 31
    assert result.D == 6
    assert result.provenance == "ExactTheorem"
    assert result.interval == interval("5/31", "6/31")
    assert result.to_json()["value"] == "1/6"


def test_fdtc_value_denominator_is_admissible(t_a, t_b):
    word = compose(t_a, invert(t_b))
    result = fdtc_exact(word, "C1")
    assert result.value is not None
    assert result.value.denominator in admissible_values(word.triangulation.surface)


@pytest.mark.slow
@pytest.mark.parametrize("k", [-2, -1, 2])
def test_fdtc_homogeneity(t_ab, k):
    assert fdtc_exact(power(t_ab, k), "C1").value == Fraction(k, 6)


def test_fdtc_boundary_shift(t_ab, t_boundary):
    assert fdtc_exact(compose(t_boundary, t_ab), "C1").value == Fraction(7, 6)


@pytest.mark.slow
def test_fdtc_conjugation_invariance(t_ab, t_a):
    conjugate = compose(compose(t_a, t_ab), invert(t_a))
    assert fdtc_exact(conjugate, "C1").value == Fraction(1, 6)


def test_fdtc_on_disc():
    result = fdtc_exact(identity(standard_triangulation(SurfaceSpec(genus=0, boundary=("C1",)))), "C1")
    assert result.value == 0
    assert result.warnings


def test_fdtc_on_annulus(annulus):
    result = fdtc_exact(boundary_word(annulus, "C2", -2), "C2")
    assert result.value == -2
    assert result.provenance == "PeriodicityCorollary"


# -- braids ---------------------------------------------------------------------

def test_braid_fdtc_trivial(two_punctured_disc):
    assert braid_fdtc(identity(two_punctured_disc), "C1").value == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_braid_fdtc_sigma_powers(two_punctured_disc, k):
    result = braid_fdtc(braid_word(two_punctured_disc, 1, k), "C1")
    assert result.value == Fraction(k, 2)


@pytest.mark.slow
@pytest.mark.parametrize("k", [4, 5])
def test_braid_fdtc_sigma_powers_long(two_punctured_disc, k):
    assert braid_fdtc(braid_word(two_punctured_disc, 1, k), "C1").value == Fraction(k, 2)


@pytest.mark.slow
def test_braid_fdtc_mixed_signs_vanishes(three_punctured_disc):
    word = compose(braid_word(three_punctured_disc, 1), braid_word(three_punctured_disc, 2, -1))
    result = braid_fdtc(word, "C1")
    assert result.value == 0


def test_braid_fdtc_negative_power(two_punctured_disc):
    assert braid_fdtc(braid_word(two_punctured_disc, 1, -1), "C1").value == Fraction(-1, 2)


def test_braid_fdtc_rejects_puncture_label(sigma1):
    with pytest.raises(FDTCError, match="names a puncture"):
        braid_fdtc(sigma1, "P1")


def test_braid_fdtc_needs_punctures(t_ab):
    with pytest.raises(FDTCError, match="punctured surface"):
        braid_fdtc(t_ab, "C1")


# -- estimates and audits -------------------------------------------------------

def test_translation_estimate_identity(torus_identity):
    intervals = translation_estimate(torus_identity, "C1", 4)
    assert all(I == RationalInterval.point(Fraction(0)) for I in intervals)


def test_translation_estimate_boundary_twist(t_boundary):
    intervals = translation_estimate(t_boundary, "C1", 4)
    assert len(intervals) == 4
    for n, I in enumerate(intervals, start=1):
        assert Fraction(1) in I
        assert I.is_point or I.width == Fraction(1, n)


def test_translation_estimate_needs_positive_n(t_boundary):
    with pytest.raises(FDTCError):
        translation_estimate(t_boundary, "C1", 0)


def test_right_veering_identity(torus_identity):
    report = right_veering_test(torus_identity, "C1", 6)
    assert report.status == "no-witness-up-to-bound"


def test_right_veering_negative_boundary_twist(torus):
    report = right_veering_test(boundary_word(torus, "C1", -1), "C1", 6)
    assert report.status == "non-right-veering"
    assert report.fdtc.value == -1


def test_right_veering_boundary_twist(t_boundary):
    report = right_veering_test(t_boundary, "C1", 6)
    assert report.status == "no-witness-up-to-bound"
    assert report.fdtc.value == 1


def test_right_veering_periodic_is_conditional(t_ab):
    report = right_veering_test(t_ab, "C1", 6, nt_type="periodic")
    assert report.status == "right-veering"
    assert report.conditional


def test_hkm_periodic_verdict():
    assert hkm_periodic_verdict(Fraction(0))
    assert not hkm_periodic_verdict(Fraction(-1, 6))


def test_quasimorphism_audit_boundary_twists(t_boundary):
    audit = quasimorphism_audit(t_boundary, t_boundary, "C1")
    assert audit.defect == 0
    assert audit.passed
    assert audit.conjugation_invariant


@pytest.mark.slow
def test_quasimorphism_audit_chain(t_ab):
    audit = quasimorphism_audit(t_ab, power(t_ab, 2), "C1")
    assert (audit.c1, audit.c2, audit.defect) == (Fraction(1, 6), Fraction(1, 3), 0)


def test_periodicity_certificate(t_boundary, t_ab):
    certificate = periodicity_certificate(t_boundary, "C1", 3)
    assert certificate is not None
    assert certificate.value == 1
    assert certificate.N == 1
    assert periodicity_certificate(t_ab, "C1", 5) is None


# -- random words on the one-holed torus ----------------------------------------

def random_torus_word(rng, t_a, t_b, torus_identity, max_length=6):
    word = torus_identity
    for _ in range(rng.randint(1, max_length)):
        letter = rng.choice((t_a, t_b))
        word = compose(word, letter if rng.random() < 0.5 else invert(letter))
    return word


def exact_value(word):
    value = fdtc_exact(word, "C1").value
    assert value is not None
    return value


@pytest.fixture(scope="module")
def random_words(t_a, t_b, torus_identity):
    rng = random.Random(2024)
    return [random_torus_word(rng, t_a, t_b, torus_identity) for _ in range(50)]


@pytest.mark.slow
def test_random_words_homogeneity(random_words):
    for word in random_words:
        assert exact_value(power(word, 2)) == 2 * exact_value(word)


@pytest.mark.slow
def test_random_words_conjugation_invariance(random_words, t_a, t_b, torus_identity):
    rng = random.Random(11)
    for word in random_words:
        g = random_torus_word(rng, t_a, t_b, torus_identity, max_length=3)
        assert exact_value(compose(compose(g, word), invert(g))) == exact_value(word)


@pytest.mark.slow
def test_random_words_boundary_shift(random_words, t_boundary):
    for word in random_words:
        assert exact_value(compose(t_boundary, word)) == 1 + exact_value(word)


@pytest.mark.slow
def test_random_pairs_quasimorphism_defect(t_a, t_b, torus_identity):
    rng = random.Random(5)
    for _ in range(50):
        w1 = random_torus_word(rng, t_a, t_b, torus_identity, max_length=4)
        w2 = random_torus_word(rng, t_a, t_b, torus_identity, max_length=4)
        audit = quasimorphism_audit(w1, w2, "C1")
        assert audit.defect <= 1
        assert audit.passed
        assert audit.conjugation_invariant


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 11))
def test_key_lemma_interval_contains_value(torus, t_ab, random_words, n):
    arcs = enumerate_arcs(torus, "C1", 7)
    assert arcs
    for word in [t_ab] + random_words[:5]:
        value = exact_value(word)
        for gamma in arcs:
            I = key_lemma_interval(word, "C1", gamma, n)
            assert value in I
            assert I.is_point or I.width == Fraction(1, n)


@pytest.mark.slow
def test_farey_matches_brute_force_up_to_twelve():
    rng = random.Random(13)
    for _ in range(1000):
        D = rng.randint(1, 12)
        a = Fraction(rng.randint(-60, 60), rng.randint(1, 15))
        b = a + Fraction(rng.randint(0, 6), rng.randint(1, 15))
        I = RationalInterval(lo=a, hi=b, lo_closed=rng.random() < 0.5 or a == b,
                             hi_closed=rng.random() < 0.5 or a == b)
        candidates = brute_force_candidates(I, D)
        if not candidates:
            with pytest.raises(FDTCError):
                unique_bounded_denominator(I, D)
        elif len(candidates) == 1:
            assert unique_bounded_denominator(I, D) == candidates[0]
        else:
            assert list(unique_bounded_denominator(I, D).candidates) == candidates


def test_narrow_intervals_are_never_ambiguous():
    rng = random.Random(17)
    for _ in range(300):
        D = rng.randint(2, 12)
        x = Fraction(rng.randint(-30, 30), rng.randint(1, D))
        width = Fraction(1, D * (D - 1) + rng.randint(1, 20))
        lo = x - width * Fraction(rng.randint(0, 10), 10)
        I = RationalInterval(lo=lo, hi=lo + width)
        assert unique_bounded_denominator(I, D) == x
