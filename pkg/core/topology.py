# core/topology.py

import logging
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from core.errors import TopologyError
from core.foliation import BoundReport, infimum_f
from core.surface import normalize_nt_type

logger = logging.getLogger(__name__)

Conclusion = Literal[
    "Irreducible",
    "IrreducibleAndAtoroidal",
    "Atoroidal",
    "Toroidal",
    "Hyperbolic",
    "SeifertFibered",
    "NotAStabilization",
    "Inconclusive",
]
Mode = Literal["monodromy", "braid"]

_IRREDUCIBLE_TYPES = ("periodic", "pseudoAnosov")


class CoefficientAssignment(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Dict[str, Fraction]
    mode: Mode = "monodromy"
    connected_boundary: bool = False

    @field_validator("coefficients", mode="before")
    @classmethod
    def _parse(cls, values):
        return {str(k): v if isinstance(v, Fraction) else Fraction(str(v).strip()) for k, v in dict(values).items()}

    @model_validator(mode="after")
    def _check(self):
        if not self.coefficients:
            raise ValueError("coefficient assignment is empty")
        if self.connected_boundary and len(self.coefficients) != 1:
            raise ValueError("connected boundary takes exactly one coefficient")
        return self

    @property
    def values(self) -> List[Fraction]:
        return list(self.coefficients.values())

    def all_abs_above(self, bound: Fraction) -> bool:
        return all(abs(c) > bound for c in self.values)

    def connected_abs_above(self, bound: Fraction) -> bool:
        return self.connected_boundary and abs(self.values[0]) > bound


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    conclusion: Conclusion
    criterion: Tuple[str, ...]
    hypotheses: Dict[str, str] = {}
    failed: Tuple[str, ...] = ()
    statement: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.conclusion == "Inconclusive"

    def to_json(self) -> dict:
        return self.model_dump(mode="json")


def _tag(mode: Mode, name: str) -> str:
    return f"braid-{name}" if mode == "braid" else name


def _manifold(mode: Mode) -> str:
    return "the complement of L" if mode == "braid" else "M"


def _echo(a: CoefficientAssignment, **extra: str) -> Dict[str, str]:
    echo = {"mode": a.mode, "connected_boundary": str(a.connected_boundary).lower()}
    echo.update(extra)
    return echo


def _inconclusive(criteria: Tuple[str, ...], failed: Tuple[str, ...], hypotheses: Dict[str, str]) -> Verdict:
    return Verdict(conclusion="Inconclusive", criterion=criteria, failed=failed, hypotheses=hypotheses,
                   statement="no criterion fired; nothing is claimed")


# -- bornes issues des surfaces fermées incompressibles ----------------------

def closed_surface_fdtc_bound(genus: int, n_half: int, connected_boundary: bool = False,
                              mode: Mode = "monodromy") -> BoundReport:
    """Borne sur |c| pour une surface fermée incompressible de genre g coupant la reliure en 2n points."""
    if n_half < 1:
        raise TopologyError("the surface must meet the binding (n_half >= 1)")
    if genus < 0:
        raise TopologyError("genus must be nonnegative")
    if connected_boundary:
        simple = Fraction(1) if genus == 0 else Fraction(genus)
        bound = min(infimum_f(genus - 1 + n_half, n_half), simple)
        source = _tag(mode, "connected-binding-bound")
    else:
        bound = Fraction(3) if genus == 0 else Fraction(4 + floor(Fraction(4 * genus - 4, n_half)))
        source = _tag(mode, "closed-surface-bound")
    logger.debug(f"[DEBUG] closed surface bound g={genus} n={n_half} connected={connected_boundary}: {bound}")
    return BoundReport(lower=-bound, upper=bound, source=source,
                       assumptions=("incompressible closed surface", "essential open book foliation"))


# -- irréductibilité, atoroïdalité ------------------------------------------

def irreducibility_verdict(a: CoefficientAssignment) -> Verdict:
    tag = _tag(a.mode, "irreducibility-criterion")
    echo = _echo(a)
    if a.all_abs_above(Fraction(3)) or a.connected_abs_above(Fraction(1)):
        return Verdict(conclusion="Irreducible", criterion=(tag,), hypotheses=echo,
                       statement=f"{_manifold(a.mode)} is irreducible")
    return _inconclusive((tag,), ("|c| > 3 on every component", "connected boundary with |c| > 1"), echo)


def atoroidality_verdict(a: CoefficientAssignment, nt_type: str = "unknown", tight: bool = False) -> Verdict:
    nt_type = normalize_nt_type(nt_type)
    echo = _echo(a, nt_type=nt_type, tight=str(tight).lower(), tight_hypothesis="c > 2 read without absolute value")
    first = _tag(a.mode, "atoroidality-criterion")
    second = _tag(a.mode, "tight-atoroidality-criterion")
    if nt_type not in _IRREDUCIBLE_TYPES:
        return _inconclusive((first, second), ("monodromy of irreducible type",), echo)
    if a.all_abs_above(Fraction(4)) or a.connected_abs_above(Fraction(1)):
        return Verdict(conclusion="IrreducibleAndAtoroidal", criterion=(first,), hypotheses=echo,
                       statement=f"{_manifold(a.mode)} is irreducible and atoroidal")
    if tight and all(c > 2 for c in a.values):
        return Verdict(conclusion="Atoroidal", criterion=(second,), hypotheses=echo,
                       statement=f"{_manifold(a.mode)} is atoroidal")
    failed = ["|c| > 4 on every component or connected boundary with |c| > 1"]
    failed.append("c > 2 on every component" if tight else "tight contact structure")
    return _inconclusive((first, second), tuple(failed), echo)


# -- genre de Seifert des tresses -------------------------------------------

def braid_genus_bounds(chi: int, k_intersections: int = 0, braid_index: Optional[int] = None,
                       connected_boundary: bool = False) -> BoundReport:
    """Borne sur |c(phi_L, C)| à partir d'une surface de Seifert d'Euler maximale."""
    if chi > 1:
        raise TopologyError("a Seifert surface has Euler characteristic at most 1")
    assumptions = ("Seifert surface of maximal Euler characteristic", "essential open book foliation")
    if chi > 0:
        return BoundReport(lower=Fraction(-3), upper=Fraction(3), source="braid-genus-bound positive-euler",
                           assumptions=assumptions)
    bounds: List[Tuple[Fraction, str]] = []
    if chi < 0:
        if k_intersections < 1:
            raise TopologyError("the surface must meet the binding (k >= 1) when chi < 0")
        value = min(floor(Fraction(-4 * chi, k_intersections)) + 4, -chi + k_intersections)
        bounds.append((Fraction(value), "braid-genus-bound negative-euler"))
    if connected_boundary:
        if not braid_index or braid_index < 1:
            raise TopologyError("connected-boundary bound needs the braid index")
        bounds.append((Fraction(braid_index - chi, braid_index), "braid-genus-bound connected-boundary"))
    if not bounds:
        return BoundReport(source="braid-genus-bound: no case applies", assumptions=assumptions)
    bound, source = min(bounds)
    return BoundReport(lower=-bound, upper=bound, source=source, assumptions=assumptions)


def genus_lower_bound(min_abs_c: Fraction) -> int:
    """g(L) >= (min |c| - 3) / 2 pour un nœud."""
    return max(0, ceil((Fraction(min_abs_c) - 3) / 2))


def knot_fdtc_bound(genus: int) -> BoundReport:
    """|c| < 1 pour un nœud trivial, |c| <= 2 g(L) sinon (bord connexe)."""
    if genus < 0:
        raise TopologyError("genus must be nonnegative")
    if genus == 0:
        return BoundReport(lower=Fraction(-1), upper=Fraction(1), source="knot-genus-bound (strict)",
                           assumptions=("connected boundary", "strict inequality |c| < 1"))
    return BoundReport(lower=Fraction(-2 * genus), upper=Fraction(2 * genus), source="knot-genus-bound",
                       assumptions=("connected boundary",))


# -- géométrie et stabilisations ------------------------------------------------

_GEOMETRY = {
    "reducible": ("Toroidal", "toroidal"),
    "pseudoAnosov": ("Hyperbolic", "hyperbolic"),
    "periodic": ("SeifertFibered", "Seifert fibered"),
}


def geometry_verdict(a: CoefficientAssignment, nt_type: str = "unknown") -> Verdict:
    nt_type = normalize_nt_type(nt_type)
    echo = _echo(a, nt_type=nt_type)
    main = _tag(a.mode, "geometry-theorem")
    seifert = _tag(a.mode, "seifert-criterion")
    hypothesis = a.connected_abs_above(Fraction(1)) or a.all_abs_above(Fraction(4))
    if hypothesis and nt_type in _GEOMETRY:
        conclusion, word = _GEOMETRY[nt_type]
        return Verdict(conclusion=conclusion, criterion=(main,), hypotheses=echo,
                       statement=f"{_manifold(a.mode)} is {word}")
    if nt_type == "periodic" and all(c != 0 for c in a.values):
        return Verdict(conclusion="SeifertFibered", criterion=(seifert,), hypotheses=echo,
                       statement=f"{_manifold(a.mode)} is Seifert fibered")
    failed = []
    if not hypothesis:
        failed.append("connected boundary with |c| > 1 or |c| > 4 on every component")
    if nt_type not in _GEOMETRY:
        failed.append("known Nielsen-Thurston type")
    return _inconclusive((main, seifert), tuple(failed), echo)


def stabilization_obstruction(a: CoefficientAssignment) -> Verdict:
    tag = "stabilization-bound"
    echo = _echo(a)
    if a.mode != "monodromy":
        return _inconclusive((tag,), ("monodromy mode",), echo)
    if a.connected_abs_above(Fraction(1, 2)) or a.all_abs_above(Fraction(1)):
        return Verdict(conclusion="NotAStabilization", criterion=(tag,), hypotheses=echo,
                       statement="the open book is not a positive stabilization")
    return _inconclusive((tag,), ("connected boundary with |c| > 1/2", "|c| > 1 on every component"), echo)
