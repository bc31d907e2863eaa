# core/fdtc.py

import logging
from fractions import Fraction
from math import floor, gcd
from typing import List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from config import BRACKET_WIDENINGS, FDTC_MAX_N, FDTC_MAX_RETRIES, MAX_PROBE_WEIGHT, PROBE_WEIGHT
from core.curves import (
    ArcClass,
    Ordering,
    boundary_twist,
    compare_at_base,
    enumerate_arcs,
    is_disc,
    is_essential,
)
from core.errors import FDTCError, MappingClassError
from core.mcg import (
    MappingClassWord,
    apply,
    apply_power,
    compose,
    invert,
    power,
    puncture_permutation_order,
)
from core.surface import admissible_values, denominator_bound

logger = logging.getLogger(__name__)

Provenance = Literal["KeyLemma", "ExactTheorem", "PeriodicityCorollary", "TranslationEstimate"]


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Lit "p/q", un entier ou un décimal écrit en toutes lettres ("0.15")."""
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FDTCError(f"not a rational number: {value!r}") from exc


class RationalInterval(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @model_validator(mode="after")
    def _check_bounds(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: {self.lo} > {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a point interval must be closed")
        return self

    @classmethod
    def point(cls, x: Fraction) -> "RationalInterval":
        return cls(lo=x, hi=x)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x: Fraction) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def scaled(self, factor: Fraction) -> "RationalInterval":
        return RationalInterval(lo=self.lo * factor, hi=self.hi * factor,
                                lo_closed=self.lo_closed, hi_closed=self.hi_closed)

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}


class AmbiguityReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    interval: RationalInterval
    D: int
    candidates: Tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"interval": self.interval.to_json(), "D": self.D,
                "candidates": [format_rational(c) for c in self.candidates]}


class FDTCResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Optional[Fraction] = None
    interval: Optional[RationalInterval] = None
    provenance: Provenance
    N: Optional[int] = None
    M: Optional[int] = None
    D: Optional[int] = None
    probe: Optional[dict] = None
    warnings: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def _value_in_interval(self):
        if self.value is None and self.interval is None:
            raise ValueError("result needs a value or an interval")
        if self.value is not None and self.interval is not None and self.value not in self.interval:
            raise ValueError(f"value {self.value} outside {self.interval.to_json()}")
        return self

    def divided(self, m: int) -> "FDTCResult":
        factor = Fraction(1, m)
        return self.model_copy(update={
            "value": None if self.value is None else self.value * factor,
            "interval": None if self.interval is None else self.interval.scaled(factor),
        })

    def to_json(self) -> dict:
        return {
            "value": None if self.value is None else format_rational(self.value),
            "interval": None if self.interval is None else self.interval.to_json(),
            "provenance": self.provenance,
            "N": self.N,
            "M": self.M,
            "D": self.D,
            "probe": self.probe,
            "warnings": list(self.warnings),
        }


# -- Key Lemma --------------------------------------------------------------

def _check_label(w: MappingClassWord, label: str) -> None:
    spec = w.triangulation.surface
    if label not in spec.boundary_labels:
        raise FDTCError(f"'{label}' is not a boundary component of the surface")


def _twisted(gamma: ArcClass, label: str, m: int) -> ArcClass:
    return gamma.model_copy(update={"coords": boundary_twist(gamma.coords, label, m)})


def _bracket(w: MappingClassWord, label: str, gamma: ArcClass, n: int) -> Tuple[int, bool]:
    """
    Plus grand M avec T_C^M(gamma) >= phi^N(gamma), et l'égalité éventuelle.
    T_C^M(gamma) se déplace vers la droite quand M croît.
    """
    target = apply_power(w, gamma, n)

    def at_or_left(m: int) -> bool:
        return compare_at_base(_twisted(gamma, label, m), target, label) in (Ordering.RIGHT_OF, Ordering.EQUAL)

    bound = 2 * n * max(w.length, 1) + 2
    lo, hi = -bound, bound
    for _ in range(BRACKET_WIDENINGS):
        if at_or_left(lo):
            break
        lo *= 2
    for _ in range(BRACKET_WIDENINGS):
        if not at_or_left(hi):
            break
        hi *= 2
    if not at_or_left(lo) or at_or_left(hi):
        raise FDTCError(f"no bracket for M within [{lo}, {hi}] (N={n}): ordering is not monotone on this arc")
    # invariant : at_or_left(lo) et non at_or_left(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if at_or_left(mid):
            lo = mid
        else:
            hi = mid
    equal = compare_at_base(_twisted(gamma, label, lo), target, label) == Ordering.EQUAL
    logger.debug(f"[DEBUG] key lemma: N={n} M={lo} equality={equal}")
    return lo, equal


def key_lemma_interval(w: MappingClassWord, label: str, gamma: ArcClass, n: int) -> RationalInterval:
    _check_label(w, label)
    if n < 1:
        raise FDTCError("N must be a positive integer")
    if not is_essential(gamma):
        raise FDTCError("Key Lemma requires essential arc")
    m, equal = _bracket(w, label, gamma, n)
    if equal:
        return RationalInterval.point(Fraction(m, n))
    return RationalInterval(lo=Fraction(m, n), hi=Fraction(m + 1, n))


# -- recovery of the rational -----------------------------------------------

def farey_between(interval: RationalInterval, order: int) -> List[Fraction]:
    """Termes de la suite de Farey d'ordre `order` dans l'intervalle (bornes respectées)."""
    found = []
    start = floor(interval.lo)
    a, b, c, d = start, 1, start * order + 1, order
    current = Fraction(a, b)
    while current <= interval.hi:
        if current in interval:
            found.append(current)
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        current = Fraction(a, b)
    return found


def unique_bounded_denominator(interval: RationalInterval, D: int,
                               allowed: Optional[Sequence[int]] = None) -> Union[Fraction, AmbiguityReport]:
    if D < 1:
        raise FDTCError("D must be at least 1")
    candidates = farey_between(interval, D)
    if allowed is not None:
        allowed = set(allowed)
        candidates = [x for x in candidates if x.denominator in allowed]
    if not candidates:
        raise FDTCError("no admissible rational")
    if len(candidates) == 1:
        return candidates[0]
    return AmbiguityReport(interval=interval, D=D, candidates=tuple(candidates))


def brute_force_candidates(interval: RationalInterval, D: int) -> List[Fraction]:
    bound = D * (abs(interval.lo) + abs(interval.hi) + 1)
    found = set()
    for q in range(1, D + 1):
        for p in range(-floor(bound), floor(bound) + 1):
            if gcd(p, q) == 1 and Fraction(p, q) in interval:
                found.add(Fraction(p, q))
    return sorted(found)


# -- exact computation ------------------------------------------------------

def probe_arc(w: MappingClassWord, label: str) -> Optional[ArcClass]:
    t = w.triangulation
    bound = PROBE_WEIGHT
    while bound <= MAX_PROBE_WEIGHT:
        arcs = enumerate_arcs(t, label, bound)
        if arcs:
            return arcs[0]
        bound += 2
    return None


def _boundary_exponent(w: MappingClassWord, label: str) -> int:
    # sur le disque à un point marqué, T_C engendre tout
    total = 0
    for g in w.generators:
        if g.kind == "boundary" and g.label == label:
            total += g.power
        elif g.kind == "twist":
            total += g.power
        elif g.kind == "braid":
            raise MappingClassError("braid generator on a once-punctured disc")
    return total


def _degenerate(w: MappingClassWord, label: str) -> FDTCResult:
    t = w.triangulation
    if is_disc(t):
        return FDTCResult(value=Fraction(0), interval=RationalInterval.point(Fraction(0)),
                          provenance="ExactTheorem", D=1, warnings=("disc: trivial mapping class group",))
    gamma = probe_arc(w, label)
    if gamma is None:
        value = Fraction(_boundary_exponent(w, label))
        return FDTCResult(value=value, interval=RationalInterval.point(value), provenance="ExactTheorem",
                          D=1, warnings=("no essential arc: value read from boundary twist exponents",))
    m, equal = _bracket(w, label, gamma, 1)
    if not equal:
        return FDTCResult(interval=RationalInterval(lo=Fraction(m), hi=Fraction(m + 1)), provenance="KeyLemma",
                          N=1, M=m, D=1, probe=gamma.to_json(), warnings=("annulus action is not a twist power",))
    return FDTCResult(value=Fraction(m), interval=RationalInterval.point(Fraction(m)),
                      provenance="PeriodicityCorollary", N=1, M=m, D=1, probe=gamma.to_json())


def fdtc_exact(w: MappingClassWord, label: str, nt_type: str = "unknown") -> FDTCResult:
    _check_label(w, label)
    spec = w.triangulation.surface
    bound = denominator_bound(spec)
    if bound.degenerate:
        result = _degenerate(w, label)
        logger.info(f"fdtc on degenerate surface {spec.to_json()}: {result.to_json()['value']}")
        return result
    D = bound.value
    allowed = admissible_values(spec, nt_type)
    gamma = probe_arc(w, label)
    if gamma is None:
        raise FDTCError(f"no essential arc from {label} within weight {MAX_PROBE_WEIGHT}")
    n = D * (D - 1) + 1
    logger.info(f"fdtc_exact on {spec.to_json()} boundary {label}: D={D} N={n}")
    interval = None
    for attempt in range(FDTC_MAX_RETRIES + 1):
        m, equal = _bracket(w, label, gamma, n)
        if equal:
            value = Fraction(m, n)
            return FDTCResult(value=value, interval=RationalInterval.point(value), provenance="PeriodicityCorollary",
                              N=n, M=m, D=D, probe=gamma.to_json())
        interval = RationalInterval(lo=Fraction(m, n), hi=Fraction(m + 1, n))
        found = unique_bounded_denominator(interval, D, allowed)
        if isinstance(found, Fraction):
            logger.info(f"fdtc_exact value {format_rational(found)} (N={n}, M={m})")
            return FDTCResult(value=found, interval=interval, provenance="ExactTheorem",
                              N=n, M=m, D=D, probe=gamma.to_json())
        if 2 * n > FDTC_MAX_N:
            break
        logger.debug(f"[DEBUG] ambiguous candidates {[format_rational(c) for c in found.candidates]}, retry {attempt + 1}")
        n *= 2
    return FDTCResult(interval=interval, provenance="KeyLemma", N=n, M=m, D=D, probe=gamma.to_json(),
                      warnings=("several admissible rationals remain; interval returned",))


def braid_fdtc(w: MappingClassWord, label: str) -> FDTCResult:
    """c(phi_L, C) = c(phi_L^m, C) / m, m l'ordre de la permutation des points marqués."""
    spec = w.triangulation.surface
    if label not in spec.boundary_labels:
        if label.upper().startswith("P") or label.isdigit():
            raise FDTCError(f"'{label}' names a puncture, not a boundary component")
        raise FDTCError(f"'{label}' is not a boundary component of the surface")
    if spec.puncture_count < 1:
        raise FDTCError("braid FDTC needs a punctured surface")
    m = puncture_permutation_order(w)
    logger.info(f"braid fdtc: permutation order {m}")
    result = fdtc_exact(power(w, m), label)
    return result.divided(m).model_copy(update={"warnings": result.warnings + (f"permutation order m={m}",)})


def translation_estimate(w: MappingClassWord, label: str, n_max: int,
                         gamma: Optional[ArcClass] = None) -> List[RationalInterval]:
    if n_max < 1:
        raise FDTCError("N_max must be at least 1")
    gamma = gamma or probe_arc(w, label)
    if gamma is None:
        raise FDTCError("Key Lemma requires essential arc")
    return [key_lemma_interval(w, label, gamma, n) for n in range(1, n_max + 1)]


# -- right-veering ----------------------------------------------------------

class VeeringReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Literal["non-right-veering", "right-veering", "witness", "no-witness-up-to-bound"]
    fdtc: Optional[FDTCResult] = None
    witness: Optional[dict] = None
    weight_bound: Optional[int] = None
    conditional: bool = False

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "fdtc": None if self.fdtc is None else self.fdtc.to_json(),
            "witness": self.witness,
            "weight_bound": self.weight_bound,
            "conditional": self.conditional,
        }


def hkm_periodic_verdict(c: Fraction) -> bool:
    """Pour phi périodique : right-veering si et seulement si c >= 0."""
    return c >= 0


def right_veering_test(w: MappingClassWord, label: str, weight_bound: int,
                       nt_type: str = "unknown") -> VeeringReport:
    result = fdtc_exact(w, label, nt_type)
    c = result.value
    if c is not None:
        if c < 0:
            return VeeringReport(status="non-right-veering", fdtc=result)
        if c > 0 and nt_type == "pseudoAnosov":
            return VeeringReport(status="right-veering", fdtc=result)
        if nt_type == "periodic":
            status = "right-veering" if hkm_periodic_verdict(c) else "non-right-veering"
            return VeeringReport(status=status, fdtc=result, conditional=True)
    for gamma in enumerate_arcs(w.triangulation, label, weight_bound):
        if compare_at_base(gamma, apply(w, gamma), label) == Ordering.LEFT_OF:
            return VeeringReport(status="witness", fdtc=result, witness=gamma.to_json(), weight_bound=weight_bound)
    return VeeringReport(status="no-witness-up-to-bound", fdtc=result, weight_bound=weight_bound)


# -- quasimorphism ----------------------------------------------------------

class QuasimorphismAudit(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c1: Fraction
    c2: Fraction
    c12: Fraction
    defect: Fraction
    passed: bool
    conjugate: Fraction
    conjugation_invariant: bool

    def to_json(self) -> dict:
        return {
            "c1": format_rational(self.c1),
            "c2": format_rational(self.c2),
            "c12": format_rational(self.c12),
            "defect": format_rational(self.defect),
            "passed": self.passed,
            "conjugate": format_rational(self.conjugate),
            "conjugation_invariant": self.conjugation_invariant,
        }


def _exact_value(w: MappingClassWord, label: str) -> Fraction:
    result = fdtc_exact(w, label)
    if result.value is None:
        raise FDTCError("fdtc_exact returned an interval; audit needs exact values")
    return result.value


def quasimorphism_audit(w1: MappingClassWord, w2: MappingClassWord, label: str) -> QuasimorphismAudit:
    if w1.triangulation != w2.triangulation:
        raise MappingClassError("words live on different surfaces")
    c1, c2 = _exact_value(w1, label), _exact_value(w2, label)
    c12 = _exact_value(compose(w1, w2), label)
    conjugate = _exact_value(compose(compose(w2, w1), invert(w2)), label)
    defect = abs(c12 - c1 - c2)
    return QuasimorphismAudit(c1=c1, c2=c2, c12=c12, defect=defect, passed=defect <= 1,
                              conjugate=conjugate, conjugation_invariant=conjugate == c1)


# -- exact periodicity ------------------------------------------------------

def periodicity_certificate(w: MappingClassWord, label: str, k: int,
                            gamma: Optional[ArcClass] = None) -> Optional[FDTCResult]:
    """
    Cherche N <= k avec T_C^M(gamma) = phi^N(gamma) exactement ; dans ce cas
    c(phi, C) = M/N.
    """
    _check_label(w, label)
    gamma = gamma or probe_arc(w, label)
    if gamma is None:
        return None
    for n in range(1, k + 1):
        m, equal = _bracket(w, label, gamma, n)
        if equal:
            value = Fraction(m, n)
            return FDTCResult(value=value, interval=RationalInterval.point(value),
                              provenance="PeriodicityCorollary", N=n, M=m, probe=gamma.to_json())
    return None
