# core/curves.py

import logging
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from core.encoding import shorten, twist_encoding
from core.errors import CurveError
from core.surface import Triangulation

logger = logging.getLogger(__name__)


class Ordering(str, Enum):
    RIGHT_OF = "RightOf"
    LEFT_OF = "LeftOf"
    EQUAL = "Equal"


class NormalCoordinates(BaseModel):
    """
    Poids entiers par arête (précision arbitraire). Les extrémités d'arcs
    comptent dans le poids des arêtes de bord.
    """
    model_config = ConfigDict(frozen=True)

    triangulation: Triangulation
    weights: Tuple[int, ...]

    @property
    def is_arc(self) -> bool:
        t = self.triangulation
        return any(self.weights[e] for e in t.boundary_edges)

    @property
    def total(self) -> int:
        return sum(self.weights)

    def to_json(self) -> dict:
        return {"weights": {f"e{e}": w for e, w in enumerate(self.weights) if w}}


class ArcClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: NormalCoordinates
    start: Tuple[str, int]
    end: Optional[Tuple[str, int]] = None

    @property
    def label(self) -> str:
        return self.start[0]

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.coords.weights

    def to_json(self) -> dict:
        data = self.coords.to_json()
        data["start"] = list(self.start)
        if self.end is not None:
            data["end"] = list(self.end)
        return data


def coords_from_weights(t: Triangulation, weights: Sequence[int]) -> NormalCoordinates:
    weights = tuple(int(w) for w in weights)
    if len(weights) != t.edge_count:
        raise CurveError(f"expected {t.edge_count} weights, got {len(weights)}")
    return NormalCoordinates(triangulation=t, weights=weights)


def coords_from_json(t: Triangulation, data: dict) -> NormalCoordinates:
    raw = data.get("weights", data)
    weights = [0] * t.edge_count
    for name, value in raw.items():
        if not (isinstance(name, str) and name.startswith("e") and name[1:].isdigit()):
            raise CurveError(f"bad edge name '{name}'")
        e = int(name[1:])
        if e >= t.edge_count:
            raise CurveError(f"edge '{name}' does not exist ({t.edge_count} edges)")
        weights[e] = int(value)
    coords = coords_from_weights(t, weights)
    problems = matching_diagnostics(t, coords.weights)
    if problems:
        raise CurveError("; ".join(problems))
    return coords


def arc_from_json(t: Triangulation, data: dict) -> ArcClass:
    coords = coords_from_json(t, data)
    start = tuple(data.get("start", (t.surface.boundary_labels[0], 0)))
    end = tuple(data["end"]) if data.get("end") else None
    return ArcClass(coords=coords, start=(str(start[0]), int(start[1])), end=end)


# -- matching conditions ----------------------------------------------------

def corner(w: Sequence[int], tri: Tuple[int, int, int], i: int) -> int:
    """Arcs normaux autour du coin au départ de tri[i] (entre tri[i-1] et tri[i])."""
    a, b, c = w[tri[(i - 1) % 3] >> 1], w[tri[i] >> 1], w[tri[(i + 1) % 3] >> 1]
    return (a + b - c) // 2


def matching_diagnostics(t: Triangulation, weights: Sequence[int]) -> List[str]:
    problems = []
    for e, value in enumerate(weights):
        if value < 0:
            problems.append(f"e{e}: negative weight {value}")
    if problems:
        return problems
    for index, tri in enumerate(t.triangles):
        a, b, c = (weights[h >> 1] for h in tri)
        if (a + b + c) % 2:
            problems.append(f"triangle {index}: odd weight sum {a + b + c}")
        elif a > b + c or b > a + c or c > a + b:
            problems.append(f"triangle {index}: triangle inequality fails for weights {(a, b, c)}")
    return problems


def tighten(c: NormalCoordinates) -> NormalCoordinates:
    """
    Forme normale réduite : on valide les conditions de recollement puis on
    retire les composantes fermées parallèles à un point marqué.
    """
    t = c.triangulation
    problems = matching_diagnostics(t, c.weights)
    if problems:
        raise CurveError("malformed coordinates: " + "; ".join(problems))
    w = list(c.weights)
    for v, vertex in enumerate(t.vertices):
        if vertex.role != "puncture":
            continue
        corners = [corner(w, tri, i) for tri in t.triangles for i in range(3) if t.tails[tri[i]] == v]
        k = min(corners) if corners else 0
        if k:
            logger.debug(f"[DEBUG] tighten: removing {k} peripheral component(s) around puncture {vertex.puncture}")
            ends = t.edge_ends_at(v)
            w = [x - k * n for x, n in zip(w, ends)]
    if tuple(w) == c.weights:
        return c
    return NormalCoordinates(triangulation=t, weights=tuple(w))


# -- tracing ----------------------------------------------------------------

def trace(c: NormalCoordinates, label: str, slot: int) -> Iterator[Tuple[int, int]]:
    """
    Chemin dual d'un arc depuis son extrémité numéro `slot` sur l'arête de base
    de `label`. Produit les demi-arêtes de sortie et la position sur chacune ;
    le dernier élément est une demi-arête de bord.
    """
    t, w = c.triangulation, c.weights
    base = 2 * t.base_edge(label)
    if not 0 <= slot < w[base >> 1]:
        raise CurveError(f"no arc endpoint at slot {slot} of boundary {label}")
    h, p = base, slot
    while True:
        tri_index, i = t.locate(h)
        tri = t.triangles[tri_index]
        left, right = tri[(i - 1) % 3], tri[(i + 1) % 3]
        w_in, w_left = w[h >> 1], w[left >> 1]
        if p < corner(w, tri, i):
            out, q = left, w_left - 1 - p
        else:
            out, q = right, w_in - 1 - p
        yield out, q
        if t.partner(out) is None:
            return
        h, p = out ^ 1, w[out >> 1] - 1 - q


def is_right_turn(t: Triangulation, entry: int, exit_half: int) -> bool:
    return t.next_half(entry) == exit_half


def _check_same_base(g1: ArcClass, g2: ArcClass, label: Optional[str]) -> str:
    if g1.coords.triangulation != g2.coords.triangulation:
        raise CurveError("arcs live on different triangulations")
    if g1.start[0] != g2.start[0] or (label is not None and label != g1.start[0]):
        raise CurveError(f"arcs start at different base points ({g1.start[0]} vs {g2.start[0]})")
    return g1.start[0]


def compare_at_base(g1: ArcClass, g2: ArcClass, label: Optional[str] = None) -> Ordering:
    """
    RightOf : g1 > g2, c'est-à-dire g2 strictement à droite de g1 près du point base.
    """
    label = _check_same_base(g1, g2, label)
    if g1.weights == g2.weights and g1.start == g2.start:
        return Ordering.EQUAL
    t = g1.coords.triangulation
    entry = 2 * t.base_edge(label)
    for (h1, _), (h2, _) in zip(trace(g1.coords, label, g1.start[1]), trace(g2.coords, label, g2.start[1])):
        if h1 != h2:
            return Ordering.RIGHT_OF if is_right_turn(t, entry, h2) else Ordering.LEFT_OF
        if t.partner(h1) is None:
            return Ordering.EQUAL
        entry = h1 ^ 1
    return Ordering.EQUAL


# -- essential arcs ---------------------------------------------------------

def link_arc_weights(t: Triangulation, label: str) -> Tuple[int, ...]:
    """Arc qui contourne le point base de `label` : il est parallèle au bord."""
    w = list(t.edge_ends_at(t.base_vertex(label)))
    w[t.base_edge(label)] = 2
    return tuple(w)


def is_disc(t: Triangulation) -> bool:
    spec = t.surface
    return spec.genus == 0 and spec.d == 1 and spec.puncture_count == 0


def is_essential(g: ArcClass) -> bool:
    t = g.coords.triangulation
    if is_disc(t):
        return False
    return all(g.weights != link_arc_weights(t, label) for label in t.surface.boundary_labels)


def _single_arc(c: NormalCoordinates, label: str, slot: int) -> bool:
    t = c.triangulation
    crossings = 0
    for h, _ in trace(c, label, slot):
        if t.partner(h) is not None:
            crossings += 1
    return crossings == sum(c.weights[e] for e in t.interior_edges)


def enumerate_arcs(t: Triangulation, label: str, weight_bound: int, essential_only: bool = True) -> List[ArcClass]:
    """
    Arcs partant du point base de `label` dont le poids total (extrémités
    comprises) est au plus `weight_bound`, par recherche bornée sur le réseau.
    """
    base = t.base_edge(label)
    edges: List[int] = []
    for tri in t.triangles:
        for h in tri:
            if h >> 1 not in edges:
                edges.append(h >> 1)
    order = {e: i for i, e in enumerate(edges)}
    checks: Dict[int, List[Tuple[int, int, int]]] = {}
    for tri in t.triangles:
        last = max(order[h >> 1] for h in tri)
        checks.setdefault(last, []).append(tuple(h >> 1 for h in tri))

    found: List[ArcClass] = []
    w = [0] * t.edge_count

    def admissible(position: int) -> bool:
        for a, b, c in checks.get(position, ()):
            x, y, z = w[a], w[b], w[c]
            if (x + y + z) % 2 or x > y + z or y > x + z or z > x + y:
                return False
        return True

    def emit():
        coords = NormalCoordinates(triangulation=t, weights=tuple(w))
        for slot in range(w[base]):
            if not _single_arc(coords, label, slot):
                return
            arc = ArcClass(coords=coords, start=(label, slot))
            if not essential_only or is_essential(arc):
                found.append(arc)

    def search(position: int, budget: int, boundary_total: int):
        if position == len(edges):
            if boundary_total == 2 and w[base] >= 1:
                emit()
            return
        e = edges[position]
        if t.is_boundary(e):
            values = range(1, 3) if e == base else range(0, 2)
            values = [v for v in values if boundary_total + v <= 2]
        else:
            values = range(0, budget + 1)
        for value in values:
            if value > budget:
                break
            w[e] = value
            if admissible(position):
                search(position + 1, budget - value,
                       boundary_total + (value if t.is_boundary(e) else 0))
        w[e] = 0

    if weight_bound >= 2:
        search(0, weight_bound, 0)
    found.sort(key=lambda arc: (arc.coords.total, arc.weights, arc.start[1]))
    logger.debug(f"[DEBUG] enumerate_arcs({label}, {weight_bound}) -> {len(found)} arcs")
    return found


# -- boundary twists on arc endpoints ---------------------------------------

def _fan_period(t: Triangulation, label: str, positive: bool) -> List[int]:
    """Demi-arêtes traversées par un tour complet autour du point base."""
    hb = 2 * t.base_edge(label)
    first, stop = (t.next_half(hb), t.prev_half(hb)) if positive else (t.prev_half(hb), t.next_half(hb))
    period = [first]
    h = first
    while True:
        entry = h ^ 1
        if entry == stop:
            return period
        h = t.next_half(entry) if positive else t.prev_half(entry)
        period.append(h)


def _reversed_path(path: Sequence[int]) -> List[int]:
    return [h ^ 1 for h in reversed(path)]


def _reduce_path(path: Sequence[int]) -> List[int]:
    # un aller-retour à travers la même arête s'annule
    stack: List[int] = []
    for h in path:
        if stack and stack[-1] == h ^ 1:
            stack.pop()
        else:
            stack.append(h)
    return stack


def boundary_twist(c: NormalCoordinates, label: str, power: int) -> NormalCoordinates:
    """
    Action de T_C^power sur un arc : les deux extrémités posées sur C tournent
    du même nombre de tours d'éventail, puis le chemin dual complet est réduit.
    Les courbes fermées et les arcs qui évitent C sont fixes.
    """
    t = c.triangulation
    if power == 0 or is_disc(t) or not c.is_arc:
        return c
    base = t.base_edge(label)
    if not c.weights[base]:
        return c
    path = [h for h, _ in trace(c, label, 0)]
    inner, end = path[:-1], path[-1]
    wrap = _fan_period(t, label, power > 0) * abs(power)
    closing = _reversed_path(wrap) if end >> 1 == base else []
    reduced = _reduce_path(wrap + inner + closing)
    w = [c.weights[e] if t.is_boundary(e) else 0 for e in range(t.edge_count)]
    for h in reduced:
        w[h >> 1] += 1
    return NormalCoordinates(triangulation=t, weights=tuple(w))


def boundary_parallel_label(c: NormalCoordinates) -> Optional[str]:
    t = c.triangulation
    if c.is_arc or is_disc(t):
        return None
    for label in t.surface.boundary_labels:
        if c.weights == t.edge_ends_at(t.base_vertex(label)):
            return label
    return None


def is_peripheral(c: NormalCoordinates) -> bool:
    t = c.triangulation
    return any(v.role == "puncture" and c.weights == t.edge_ends_at(i) for i, v in enumerate(t.vertices))


# -- intersection numbers -----------------------------------------------------

def geometric_intersection(a: NormalCoordinates, b: NormalCoordinates) -> int:
    """
    i(a, b) avec a ou b courbe fermée. On rend la courbe courte, puis on lit la
    pente de e1 le long des itérés du twist (différences d'itérés successifs).
    """
    if a.triangulation != b.triangulation:
        raise CurveError("mismatched triangulations")
    if a.is_arc and b.is_arc:
        raise CurveError("intersection of two arcs is not supported")
    curve, other = (a, b) if not a.is_arc else (b, a)
    if not any(curve.weights) or is_peripheral(curve):
        return 0
    t = curve.triangulation
    label = boundary_parallel_label(curve)
    if label is not None:
        return other.weights[t.base_edge(label)] if other.is_arc else 0
    short = shorten(t, curve.weights)
    encoding = twist_encoding(t, curve.weights)
    w = short.prefix(other.weights)
    values = [w[short.e1]]
    for _ in range(8):
        w = encoding.core(w)
        values.append(w[short.e1])
    diffs = [y - x for x, y in zip(values, values[1:])]
    for first, second in zip(diffs, diffs[1:]):
        if first == second:
            return abs(first)
    raise CurveError("intersection sequence did not stabilise")
