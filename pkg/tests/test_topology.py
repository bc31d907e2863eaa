# tests/test_topology.py

import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

from core.errors import TopologyError
from core.topology import (
    CoefficientAssignment,
    atoroidality_verdict,
    braid_genus_bounds,
    closed_surface_fdtc_bound,
    genus_lower_bound,
    geometry_verdict,
    irreducibility_verdict,
    knot_fdtc_bound,
    stabilization_obstruction,
)


def coeffs(values, **kwargs):
    return CoefficientAssignment(coefficients=values, **kwargs)


def connected(value, **kwargs):
    return CoefficientAssignment(coefficients={"C1": value}, connected_boundary=True, **kwargs)


def test_assignment_parses_strings():
    a = coeffs({"C1": "7/2", "C2": -4})
    assert a.coefficients == {"C1": Fraction(7, 2), "C2": Fraction(-4)}


def test_assignment_invariants():
    with pytest.raises(ValidationError):
        coeffs({})
    with pytest.raises(ValidationError):
        coeffs({"C1": 2, "C2": 3}, connected_boundary=True)


# -- closed surfaces -----------------------------------------------------------------

def test_closed_surface_bound_general():
    assert closed_surface_fdtc_bound(0, 5).upper == 3
    assert closed_surface_fdtc_bound(1, 4).upper == 4
    assert closed_surface_fdtc_bound(3, 2).upper == 8


def test_closed_surface_bound_connected():
    assert closed_surface_fdtc_bound(0, 1, connected_boundary=True).upper <= 1
    assert closed_surface_fdtc_bound(2, 1, connected_boundary=True).upper == 2
    assert closed_surface_fdtc_bound(3, 3, connected_boundary=True).upper <= 3


def test_closed_surface_bound_connected_planar():
    one = closed_surface_fdtc_bound(0, 1, connected_boundary=True)
    assert (one.lower, one.upper) == (0, 0)
    assert closed_surface_fdtc_bound(0, 2, connected_boundary=True).upper == Fraction(1, 2)
    for n_half in range(1, 9):
        assert closed_surface_fdtc_bound(0, n_half, connected_boundary=True).upper <= 1


def test_closed_surface_bound_needs_binding():
    with pytest.raises(TopologyError):
        closed_surface_fdtc_bound(1, 0)


# -- irreducibility, atoroidality -------------------------------------------------------

def test_irreducible_all_components():
    verdict = irreducibility_verdict(coeffs({"C1": "7/2", "C2": -4}))
    assert verdict.conclusion == "Irreducible"
    assert verdict.criterion == ("irreducibility-criterion",)


def test_irreducible_connected():
    assert irreducibility_verdict(connected("5/4")).conclusion == "Irreducible"


def test_irreducibility_inconclusive():
    verdict = irreducibility_verdict(coeffs({"C1": 2}))
    assert verdict.inconclusive
    assert verdict.failed


def test_irreducibility_braid_reading():
    verdict = irreducibility_verdict(coeffs({"C1": 5}, mode="braid"))
    assert verdict.criterion == ("braid-irreducibility-criterion",)
    assert "the complement of L" in verdict.statement


def test_atoroidal_pseudo_anosov():
    verdict = atoroidality_verdict(coeffs({"C1": "9/2", "C2": 5}), "pA")
    assert verdict.conclusion == "IrreducibleAndAtoroidal"


def test_atoroidal_tight():
    verdict = atoroidality_verdict(coeffs({"C1": "5/2", "C2": 3}), "pseudoAnosov", tight=True)
    assert verdict.conclusion == "Atoroidal"
    assert verdict.hypotheses["tight"] == "true"


def test_tight_criterion_uses_signed_values():
    verdict = atoroidality_verdict(coeffs({"C1": "-5/2", "C2": 3}), "periodic", tight=True)
    assert verdict.inconclusive


def test_atoroidality_reducible_is_inconclusive():
    verdict = atoroidality_verdict(coeffs({"C1": 9, "C2": 9}), "reducible", tight=True)
    assert verdict.inconclusive
    assert "monodromy of irreducible type" in verdict.failed


# -- braids and knots --------------------------------------------------------------------

def test_braid_genus_bounds_disc():
    assert braid_genus_bounds(1).upper == 3


def test_braid_genus_bounds_negative_chi():
    report = braid_genus_bounds(-2, k_intersections=4)
    assert report.upper == 6


def test_braid_genus_bounds_connected():
    report = braid_genus_bounds(-2, k_intersections=4, braid_index=3, connected_boundary=True)
    assert report.upper == Fraction(5, 3)


def test_braid_genus_bounds_contradictions():
    with pytest.raises(TopologyError):
        braid_genus_bounds(2)
    with pytest.raises(TopologyError):
        braid_genus_bounds(-1, k_intersections=0)
    with pytest.raises(TopologyError):
        braid_genus_bounds(0, connected_boundary=True)


@pytest.mark.parametrize("c,genus", [(9, 3), (3, 0), (Fraction(7, 2), 1), (0, 0)])
def test_genus_lower_bound(c, genus):
    assert genus_lower_bound(c) == genus


def test_knot_fdtc_bound():
    assert knot_fdtc_bound(0).upper == 1
    assert knot_fdtc_bound(2).upper == 4


# -- geometry, stabilizations -------------------------------------------------------------

def test_geometry_hyperbolic():
    assert geometry_verdict(connected("3/2"), "pA").conclusion == "Hyperbolic"


def test_geometry_toroidal():
    assert geometry_verdict(coeffs({"C1": 5, "C2": -6}), "reducible").conclusion == "Toroidal"


def test_geometry_seifert_without_main_hypothesis():
    verdict = geometry_verdict(coeffs({"C1": "1/2"}), "periodic")
    assert verdict.conclusion == "SeifertFibered"
    assert verdict.criterion == ("seifert-criterion",)


def test_geometry_unknown_type_is_inconclusive():
    verdict = geometry_verdict(connected(5), "unknown")
    assert verdict.inconclusive
    assert "known Nielsen-Thurston type" in verdict.failed


@pytest.mark.parametrize("nt_type,conclusion", [
    ("reducible", "Toroidal"), ("pseudoAnosov", "Hyperbolic"), ("periodic", "SeifertFibered"),
])
def test_geometry_is_exclusive_over_types(nt_type, conclusion):
    assert geometry_verdict(coeffs({"C1": 5, "C2": 6}), nt_type).conclusion == conclusion


def test_stabilization_connected():
    assert stabilization_obstruction(connected("3/4")).conclusion == "NotAStabilization"
    assert stabilization_obstruction(connected("1/2")).inconclusive


def test_stabilization_all_components():
    assert stabilization_obstruction(coeffs({"C1": 2, "C2": "-3/2"})).conclusion == "NotAStabilization"
    assert stabilization_obstruction(coeffs({"C1": 2, "C2": 1})).inconclusive


# -- properties -----------------------------------------------------------------------------

def _random_assignment(rng):
    size = rng.randint(1, 3)
    values = {f"C{i + 1}": Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for i in range(size)}
    return coeffs(values, connected_boundary=size == 1 and rng.random() < 0.5)


def test_irreducibility_contradicts_sphere_bounds():
    rng = random.Random(3)
    for _ in range(200):
        a = _random_assignment(rng)
        if irreducibility_verdict(a).inconclusive:
            continue
        general = closed_surface_fdtc_bound(0, 1).upper
        assert all(abs(c) > general for c in a.values) or (a.connected_boundary and abs(a.values[0]) > 1)


def test_strengthening_never_loses_a_verdict():
    rng = random.Random(5)
    checks = [
        irreducibility_verdict,
        stabilization_obstruction,
        lambda a: atoroidality_verdict(a, "pseudoAnosov"),
        lambda a: geometry_verdict(a, "reducible"),
    ]
    for _ in range(200):
        a = _random_assignment(rng)
        stronger = a.model_copy(update={"coefficients": {
            k: v + (1 if v >= 0 else -1) for k, v in a.coefficients.items()}})
        for check in checks:
            if not check(a).inconclusive:
                assert not check(stronger).inconclusive


def test_every_verdict_cites_a_criterion():
    rng = random.Random(9)
    for _ in range(50):
        a = _random_assignment(rng)
        for verdict in (irreducibility_verdict(a), atoroidality_verdict(a, "periodic", True),
                        geometry_verdict(a, "periodic"), stabilization_obstruction(a)):
            assert verdict.criterion
            if verdict.inconclusive:
                assert verdict.failed
