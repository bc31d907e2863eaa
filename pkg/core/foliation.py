# core/foliation.py

import logging
from fractions import Fraction
from math import ceil, gcd
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from core.errors import FoliationError

logger = logging.getLogger(__name__)

RegionType = Literal["aa", "ab", "bb", "ac", "bc", "cc"]
Mode = Literal["monodromy", "braid"]

# nombre de coins elliptiques (positifs, négatifs) de chaque région
_REGION_CORNERS: Dict[str, Tuple[int, int]] = {
    "aa": (2, 0),
    "ab": (2, 1),
    "bb": (2, 2),
    "ac": (1, 0),
    "bc": (1, 1),
    "cc": (0, 0),
}
_TILES = ("aa", "ab", "bb")
_DEGENERABLE = ("aa", "ac", "bc", "cc")


class SurfaceTopology(BaseModel):
    model_config = ConfigDict(frozen=True)

    genus: int = Field(0, ge=0)
    boundary_count: int = Field(1, ge=0)
    closed: bool = False

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count


class EllipticPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    sign: Literal[1, -1]
    binding: str = "C"
    essential: bool = False
    strongly_essential: bool = False
    a_arcs: bool = False


class HyperbolicPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    sign: Literal[1, -1]
    region: RegionType
    degenerated: bool = False


class FoliationGraph(BaseModel):
    """
    Feuilletage de livre ouvert abstrait. Les incidences sont des couples
    (elliptique, hyperbolique), répétés quand une feuille singulière revient
    au même point elliptique.
    """
    model_config = ConfigDict(frozen=True)

    surface_topology: SurfaceTopology = SurfaceTopology()
    elliptic_points: Tuple[EllipticPoint, ...] = ()
    hyperbolic_points: Tuple[HyperbolicPoint, ...] = ()
    incidence: Tuple[Tuple[str, str], ...] = ()
    c_circles: bool = False
    c_circles_essential: bool = False

    def elliptic(self, vid: str) -> EllipticPoint:
        for v in self.elliptic_points:
            if v.id == vid:
                return v
        raise FoliationError(f"unknown elliptic point '{vid}'")

    def hyperbolic(self, hid: str) -> HyperbolicPoint:
        for h in self.hyperbolic_points:
            if h.id == hid:
                return h
        raise FoliationError(f"unknown hyperbolic point '{hid}'")

    def corners(self, hid: str) -> List[str]:
        return [v for v, h in self.incidence if h == hid]

    def neighbours(self, vid: str) -> List[str]:
        return sorted({h for v, h in self.incidence if v == vid})


class SingularityCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_plus: int = Field(0, ge=0)
    e_minus: int = Field(0, ge=0)
    h_plus: int = Field(0, ge=0)
    h_minus: int = Field(0, ge=0)


class BoundReport(BaseModel):
    """Bornes exactes ; None signifie l'infini du côté correspondant."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None
    source: str
    binding: Optional[str] = None
    assumptions: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        def fmt(x):
            return None if x is None else (str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}")
        return {"lower": fmt(self.lower), "upper": fmt(self.upper), "source": self.source,
                "binding": self.binding, "assumptions": list(self.assumptions)}


def graph_from_json(data: dict) -> FoliationGraph:
    """Lit le format fil : les incidences arrivent comme listes [v, h]."""
    payload = dict(data)
    if "singular_leaf_incidence" in payload:
        payload["incidence"] = payload.pop("singular_leaf_incidence")
    if "c_circle_presence" in payload:
        payload["c_circles"] = payload.pop("c_circle_presence")
    payload["incidence"] = [tuple(pair) for pair in payload.get("incidence", [])]
    return FoliationGraph.model_validate(payload)


def singularity_counts(g: FoliationGraph) -> SingularityCounts:
    return SingularityCounts(
        e_plus=sum(v.sign > 0 for v in g.elliptic_points),
        e_minus=sum(v.sign < 0 for v in g.elliptic_points),
        h_plus=sum(h.sign > 0 for h in g.hyperbolic_points),
        h_minus=sum(h.sign < 0 for h in g.hyperbolic_points),
    )


def validate_graph(g: FoliationGraph) -> List[str]:
    problems = []
    ids = [v.id for v in g.elliptic_points] + [h.id for h in g.hyperbolic_points]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        problems.append(f"duplicate ids: {', '.join(duplicates)}")
    signs = {v.id: v.sign for v in g.elliptic_points}
    regions = {h.id: h for h in g.hyperbolic_points}
    for v, h in g.incidence:
        if v not in signs or h not in regions:
            problems.append(f"incidence ({v}, {h}) names an unknown point")
    for h in g.hyperbolic_points:
        corners = [v for v in g.corners(h.id) if v in signs]
        positive = sum(signs[v] > 0 for v in corners)
        negative = len(corners) - positive
        if (positive, negative) != _REGION_CORNERS[h.region]:
            want = _REGION_CORNERS[h.region]
            problems.append(f"{h.region}-region {h.id}: expected {want[0]} positive and {want[1]} negative "
                            f"elliptic corners, found {positive} and {negative}")
        if h.degenerated and h.region not in _DEGENERABLE:
            problems.append(f"{h.id}: {h.region}-tiles cannot be degenerated")
        if h.region in ("ac", "bc", "cc") and not g.c_circles:
            problems.append(f"{h.id}: {h.region}-region without c-circles")
    counts = singularity_counts(g)
    chi = (counts.e_plus + counts.e_minus) - (counts.h_plus + counts.h_minus)
    topology = g.surface_topology
    if topology.closed and topology.boundary_count:
        problems.append("closed surface declared with boundary components")
    expected = topology.euler_characteristic
    if chi != expected:
        problems.append(f"euler characteristic mismatch: counts give {chi}, surface has {expected}")
    if topology.closed and counts.e_plus != counts.e_minus:
        problems.append("algebraic intersection nonzero")
    return problems


def self_linking(counts: SingularityCounts, closed: bool = False) -> int:
    if closed:
        raise FoliationError("sl undefined")
    return -(counts.e_plus - counts.e_minus) + (counts.h_plus - counts.h_minus)


# -- bornes d'un point elliptique -------------------------------------------

def _incident_signs(g: FoliationGraph, vid: str) -> Tuple[int, int]:
    hs = [g.hyperbolic(h) for h in g.neighbours(vid)]
    return sum(h.sign > 0 for h in hs), sum(h.sign < 0 for h in hs)


def _hypotheses(v: EllipticPoint, mode: Mode) -> Tuple[str, ...]:
    if mode == "braid":
        if not v.essential:
            raise FoliationError(f"{v.id}: braid bound requires an essential elliptic point")
        return ("essential",)
    if not v.strongly_essential:
        raise FoliationError(f"{v.id}: monodromy bound requires a strongly essential elliptic point")
    if v.a_arcs:
        raise FoliationError(f"{v.id}: monodromy bound requires no a-arcs around the point")
    return ("strongly essential", "no a-arcs")


def elliptic_point_bounds(vid: str, g: FoliationGraph, mode: Mode = "monodromy") -> BoundReport:
    v = g.elliptic(vid)
    assumptions = _hypotheses(v, mode)
    p, n = _incident_signs(g, vid)
    if v.sign > 0:
        lower, upper = -n, p
    else:
        lower, upper = -p, n
    return BoundReport(lower=Fraction(lower), upper=Fraction(upper), source=f"elliptic-point bound ({mode})",
                       binding=v.binding, assumptions=assumptions)


def _same_binding(g: FoliationGraph, vids: Sequence[str]) -> List[EllipticPoint]:
    if not vids:
        raise FoliationError("empty elliptic point list")
    points = [g.elliptic(vid) for vid in vids]
    if len({v.binding for v in points}) != 1:
        raise FoliationError("elliptic points lie on different binding components")
    return points


def multi_point_bounds(vids: Sequence[str], g: FoliationGraph, mode: Mode = "monodromy") -> BoundReport:
    points = _same_binding(g, vids)
    reports = [elliptic_point_bounds(v.id, g, mode) for v in points]
    lower = max(r.lower for r in reports)
    upper = min(r.upper for r in reports)
    if lower > upper:
        raise FoliationError("inconsistent foliation data")
    return BoundReport(lower=lower, upper=upper, source=f"multi-point bound ({mode})",
                       binding=points[0].binding, assumptions=reports[0].assumptions)


# -- infimum des fonctions f_+ / f_- ----------------------------------------

def _delta(n: int) -> Fraction:
    if n % 2:
        return Fraction((n - 1) ** 2, 4 * n * n)
    return Fraction(n - 2, 4 * n)


def f_value(total: int, n: int, m: int) -> Fraction:
    """(1/m) * ceil(total * m / n - delta(n))."""
    return Fraction(ceil(Fraction(total * m, n) - _delta(n)), m)


def infimum_f(total: int, n: int) -> Fraction:
    """
    inf sur m >= 1 : le motif de la partie entière est périodique de période
    n / gcd(total, n), et f(m + period) est une moyenne pondérée de f(m) et
    f(period) ; le minimum est donc atteint sur une période.
    """
    if n < 1:
        raise FoliationError("n must be positive")
    period = n // gcd(total, n)
    return min(f_value(total, n, m) for m in range(1, period + 1))


def brute_force_infimum(total: int, n: int, m_max: int) -> Fraction:
    return min(f_value(total, n, m) for m in range(1, m_max + 1))


def _incident_hyperbolic(g: FoliationGraph, vids: Sequence[str], sign: int) -> int:
    seen = set()
    for vid in vids:
        for hid in g.neighbours(vid):
            if g.hyperbolic(hid).sign == sign:
                seen.add(hid)
    return len(seen)


def aggregate_bounds(vids: Sequence[str], g: FoliationGraph, mode: Mode = "monodromy") -> BoundReport:
    points = _same_binding(g, vids)
    signs = {v.sign for v in points}
    if len(signs) != 1:
        raise FoliationError("aggregate bound needs elliptic points of one sign")
    assumptions = ()
    for v in points:
        assumptions = _hypotheses(v, mode)
    n = len(points)
    big_n = _incident_hyperbolic(g, vids, -1)
    big_p = _incident_hyperbolic(g, vids, 1)
    f_minus, f_plus = infimum_f(big_n, n), infimum_f(big_p, n)
    logger.debug(f"[DEBUG] aggregate bound n={n} N={big_n} P={big_p} inf f-={f_minus} inf f+={f_plus}")
    if signs == {1}:
        lower, upper = -f_minus, f_plus
    else:
        lower, upper = -f_plus, f_minus
    return BoundReport(lower=lower, upper=upper, source=f"aggregate bound ({mode})",
                       binding=points[0].binding, assumptions=assumptions)


# -- disques vrillés transverses --------------------------------------------

class _Graph:
    """Multigraphe non orienté minimal : union-find et degrés."""

    def __init__(self):
        self.vertices: List[str] = []
        self.edges: List[Tuple[str, str]] = []

    def add_vertex(self, v: str) -> None:
        if v not in self.vertices:
            self.vertices.append(v)

    def add_edge(self, a: str, b: str) -> None:
        self.add_vertex(a)
        self.add_vertex(b)
        self.edges.append((a, b))

    def degree(self, v: str) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices})

    def is_tree(self) -> bool:
        return bool(self.vertices) and self.components() == 1 and len(self.edges) == len(self.vertices) - 1

    def is_circle(self) -> bool:
        return (bool(self.edges) and self.components() == 1
                and all(self.degree(v) == 2 for v in self.vertices))


def sign_graph(g: FoliationGraph, sign: int) -> Tuple[_Graph, int]:
    """
    G_{++} ou G_{--} : une arête par point hyperbolique du signe donné dans une
    tuile aa, ab ou bb, joignant ses coins elliptiques de même signe ; les
    séparatrices restantes finissent au bord sur des sommets factices.
    """
    graph = _Graph()
    for v in g.elliptic_points:
        if v.sign == sign and any(g.hyperbolic(h).region in ("ab", "bb") for h in g.neighbours(v.id)):
            graph.add_vertex(v.id)
    if sign < 0:
        for v in g.elliptic_points:
            if v.sign < 0:
                graph.add_vertex(v.id)
    fake = 0
    for h in g.hyperbolic_points:
        if h.sign != sign or h.region not in _TILES:
            continue
        ends = [v for v in g.corners(h.id) if g.elliptic(v).sign == sign]
        while len(ends) < 2:
            fake += 1
            ends.append(f"fake{fake}")
        graph.add_edge(ends[0], ends[1])
    return graph, fake


class OTDiscCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    violations: Tuple[str, ...] = ()
    non_right_veering: bool = False
    assumptions: Tuple[str, ...] = ("positive unknot boundary",)

    def to_json(self) -> dict:
        data = {"valid": self.valid, "violations": list(self.violations), "assumptions": list(self.assumptions)}
        if self.non_right_veering:
            data["conclusion"] = "certifies non-right-veering monodromy"
        return data


def transverse_ot_disc_check(g: FoliationGraph) -> OTDiscCheck:
    violations = []
    negative, fake_negative = sign_graph(g, -1)
    if fake_negative:
        violations.append(f"G_-- has {fake_negative} fake vertices")
    if not negative.is_tree():
        violations.append("G_-- is not a tree")
    if g.c_circles or any(h.region in ("ac", "bc", "cc") for h in g.hyperbolic_points):
        violations.append("the foliation contains c-circles")
    positive, _ = sign_graph(g, 1)
    if not positive.is_circle():
        violations.append("G_++ is not homeomorphic to a circle")
    valid = not violations
    counts = singularity_counts(g)
    return OTDiscCheck(valid=valid, violations=tuple(violations),
                       non_right_veering=valid and counts.e_minus == 1)


class BCAnnulusWitness(BaseModel):
    model_config = ConfigDict(frozen=True)

    hyperbolic: str
    conclusion: str = "non-right-veering"


def bc_annulus_witness_check(g: FoliationGraph) -> Optional[BCAnnulusWitness]:
    if not g.c_circles_essential:
        return None
    for h in g.hyperbolic_points:
        if h.region == "bc" and h.degenerated:
            return BCAnnulusWitness(hyperbolic=h.id)
    return None


_OT_CASES = {
    0: "tight, right-veering",
    1: "overtwisted, not right-veering",
    2: "overtwisted, right-veering",
}


def ot_complexity_interpret(value: int, upper_bound: bool = False) -> str:
    if value < 0:
        raise FoliationError("overtwisted complexity is nonnegative")
    if not upper_bound:
        return _OT_CASES[min(value, 2)]
    cases = [_OT_CASES[k] for k in range(min(value, 2) + 1)]
    return " or ".join(cases)


# -- exemples ----------------------------------------------------------------

def unknot_disc_graph() -> FoliationGraph:
    """Disque d'un nœud trivial : e = (2, 1), h = (1, 1), sl = -1."""
    return FoliationGraph(
        surface_topology=SurfaceTopology(genus=0, boundary_count=1),
        elliptic_points=(
            EllipticPoint(id="v1", sign=1), EllipticPoint(id="v2", sign=1),
            EllipticPoint(id="w1", sign=-1),
        ),
        hyperbolic_points=(
            HyperbolicPoint(id="h1", sign=1, region="ab"),
            HyperbolicPoint(id="h2", sign=-1, region="ab"),
        ),
        incidence=(("v1", "h1"), ("v2", "h1"), ("w1", "h1"),
                   ("v1", "h2"), ("v2", "h2"), ("w1", "h2")),
    )


def one_negative_elliptic_disc(k: int = 3) -> FoliationGraph:
    """Disque vrillé transverse : un point elliptique négatif au centre, k tuiles ab positives."""
    positives = tuple(EllipticPoint(id=f"v{i + 1}", sign=1) for i in range(k))
    hyperbolic = tuple(HyperbolicPoint(id=f"h{i + 1}", sign=1, region="ab") for i in range(k))
    incidence = []
    for i in range(k):
        incidence += [(f"v{i + 1}", f"h{i + 1}"), (f"v{(i + 1) % k + 1}", f"h{i + 1}"), ("w", f"h{i + 1}")]
    return FoliationGraph(
        surface_topology=SurfaceTopology(genus=0, boundary_count=1),
        elliptic_points=positives + (EllipticPoint(id="w", sign=-1),),
        hyperbolic_points=hyperbolic,
        incidence=tuple(incidence),
    )


def two_point_bounds_graph() -> FoliationGraph:
    """
    Deux points elliptiques positifs fortement essentiels sur la reliure C,
    avec (p, n) = (3, 1) et (2, 2) : bornes multi-points [-1, 2].
    """
    elliptic = (
        EllipticPoint(id="v1", sign=1, essential=True, strongly_essential=True),
        EllipticPoint(id="v2", sign=1, essential=True, strongly_essential=True),
        EllipticPoint(id="w1", sign=-1), EllipticPoint(id="w2", sign=-1),
    )
    hyperbolic = (
        HyperbolicPoint(id="h1", sign=1, region="bb"),
        HyperbolicPoint(id="h2", sign=1, region="bb"),
        HyperbolicPoint(id="h3", sign=1, region="bb"),
        HyperbolicPoint(id="h4", sign=-1, region="bb"),
        HyperbolicPoint(id="h5", sign=-1, region="bb"),
    )
    incidence = []
    # v1 : h1, h2, h3 (+) et h4 (-) ; v2 : h1, h2 (+) et h4, h5 (-)
    corners = {
        "h1": ("v1", "v2", "w1", "w2"),
        "h2": ("v1", "v2", "w1", "w2"),
        "h3": ("v1", "v1", "w1", "w2"),
        "h4": ("v1", "v2", "w1", "w2"),
        "h5": ("v2", "v2", "w1", "w2"),
    }
    for hid, vids in corners.items():
        incidence += [(vid, hid) for vid in vids]
    return FoliationGraph(
        surface_topology=SurfaceTopology(genus=1, boundary_count=1, closed=False),
        elliptic_points=elliptic,
        hyperbolic_points=hyperbolic,
        incidence=tuple(incidence),
    )
