# core/encoding.py

import logging
from collections import deque
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from config import SHORTEN_SEARCH_DEPTH
from core.errors import CurveError, MappingClassError, SurfaceError
from core.surface import Triangulation, find_isometry, flip, flip_quad

logger = logging.getLogger(__name__)

_MAX_GREEDY_STEPS = 10_000


class FlipStep(NamedTuple):
    edge: int
    a: int
    b: int
    c: int
    d: int


class Relabel(NamedTuple):
    edge_map: Tuple[int, ...]

    def inverse(self) -> "Relabel":
        inverse = [0] * len(self.edge_map)
        for e, image in enumerate(self.edge_map):
            inverse[image] = e
        return Relabel(tuple(inverse))


Step = Union[FlipStep, Relabel]


def flip_weight(w: Sequence[int], step: FlipStep) -> int:
    return max(w[step.a] + w[step.c], w[step.b] + w[step.d]) - w[step.edge]


class Encoding:
    """
    Suite de flips et de réétiquetages agissant sur les poids d'arêtes.
    Un flip se défait par le même flip (même quadrilatère).
    """

    def __init__(self, steps: Sequence[Step] = ()):
        self.steps: Tuple[Step, ...] = tuple(steps)

    def __call__(self, weights: Sequence[int]) -> List[int]:
        w = list(weights)
        for step in self.steps:
            if isinstance(step, FlipStep):
                w[step.edge] = flip_weight(w, step)
            else:
                moved = [0] * len(w)
                for e, image in enumerate(step.edge_map):
                    moved[image] = w[e]
                w = moved
        return w

    def inverse(self) -> "Encoding":
        return Encoding(
            step if isinstance(step, FlipStep) else step.inverse()
            for step in reversed(self.steps)
        )

    def __add__(self, other: "Encoding") -> "Encoding":
        return Encoding(self.steps + other.steps)

    def __len__(self) -> int:
        return len(self.steps)


class ShortCurve(NamedTuple):
    """
    Courbe rendue courte : elle ne coupe que e1 et e2, une fois chacune.
    T1 = (x, y, r) et T2 = (x^1, y^1, l) avec x, y demi-arêtes de e1, e2.
    """
    prefix: Encoding
    triangulation: Triangulation
    e1: int
    e2: int
    r: int
    l: int
    x: int
    y: int


def _flip_step(t: Triangulation, e: int) -> FlipStep:
    return FlipStep(e, *flip_quad(t, e))


def short_configuration(t: Triangulation, w: Sequence[int]) -> Optional[Tuple[int, int, int, int, int, int]]:
    support = [e for e in range(t.edge_count) if w[e]]
    if len(support) != 2 or any(w[e] != 1 or t.is_boundary(e) for e in support):
        return None
    for first, second in (support, support[::-1]):
        for x in (2 * first, 2 * first + 1):
            y = t.next_half(x)
            if y >> 1 != second:
                continue
            if t.next_half(x ^ 1) == y ^ 1:
                r = t.prev_half(x)
                l = t.prev_half(x ^ 1)
                return first, second, r >> 1, l >> 1, x, y
    return None


def _total(t: Triangulation, w: Sequence[int]) -> int:
    return sum(w[e] for e in t.interior_edges)


def _search_reduction(t: Triangulation, w: List[int], depth: int) -> Optional[List[int]]:
    """Parcours en largeur des suites de flips qui font baisser le poids total."""
    target = _total(t, w)
    queue = deque([(t, tuple(w), [])])
    seen = {(t.triangles, tuple(w))}
    while queue:
        cur, weights, path = queue.popleft()
        if len(path) >= depth:
            continue
        for e in cur.interior_edges:
            try:
                step = _flip_step(cur, e)
            except SurfaceError:
                continue
            new = list(weights)
            new[e] = flip_weight(new, step)
            nxt = flip(cur, e)
            if _total(nxt, new) < target or short_configuration(nxt, new):
                return path + [e]
            key = (nxt.triangles, tuple(new))
            if key not in seen:
                seen.add(key)
                queue.append((nxt, tuple(new), path + [e]))
    return None


@lru_cache(maxsize=256)
def shorten(t: Triangulation, weights: Tuple[int, ...]) -> ShortCurve:
    cur, w = t, list(weights)
    steps: List[FlipStep] = []

    def apply(e: int):
        nonlocal cur
        step = _flip_step(cur, e)
        w[e] = flip_weight(w, step)
        steps.append(step)
        cur = flip(cur, e)

    for _ in range(_MAX_GREEDY_STEPS):
        config = short_configuration(cur, w)
        if config:
            e1, e2, r, l, x, y = config
            logger.debug(f"[DEBUG] curve shortened with {len(steps)} flips (e1=e{e1}, e2=e{e2})")
            return ShortCurve(Encoding(steps), cur, e1, e2, r, l, x, y)
        best = None
        for e in cur.interior_edges:
            if not w[e]:
                continue
            try:
                step = _flip_step(cur, e)
            except SurfaceError:
                continue
            gain = flip_weight(w, step) - w[e]
            if gain < 0 and (best is None or gain < best[0]):
                best = (gain, e)
        if best is not None:
            apply(best[1])
            continue
        path = _search_reduction(cur, w, SHORTEN_SEARCH_DEPTH)
        if path is None:
            raise CurveError(f"curve with weights {list(weights)} cannot be made short "
                             f"(not an essential interior curve?)")
        for e in path:
            apply(e)
    raise CurveError("shortening did not terminate")


def _relabel_to(source: Triangulation, target: Triangulation) -> Relabel:
    iso = find_isometry(source, target)
    if iso is None:
        raise MappingClassError("no boundary-fixing isometry after twist flip")
    return Relabel(tuple(iso[2 * e] >> 1 for e in range(source.edge_count)))


class TwistEncoding(NamedTuple):
    """T^k = prefix^-1 . core^k . prefix (le préfixe rend la courbe courte)."""
    prefix: Encoding
    core: Encoding

    def apply(self, weights: Sequence[int], power: int) -> List[int]:
        if power == 0:
            return list(weights)
        step = self.core if power > 0 else self.core.inverse()
        w = self.prefix(weights)
        for _ in range(abs(power)):
            w = step(w)
        return self.prefix.inverse()(w)


@lru_cache(maxsize=256)
def twist_encoding(t: Triangulation, weights: Tuple[int, ...]) -> TwistEncoding:
    """Twist de Dehn à droite le long de la courbe : flip de e2 puis isométrie ancrée."""
    short = shorten(t, weights)
    step = _flip_step(short.triangulation, short.e2)
    flipped = flip(short.triangulation, short.e2)
    core = Encoding([step, _relabel_to(flipped, short.triangulation)])
    return TwistEncoding(short.prefix, core)


def _is_punctured_monogon(t: Triangulation, loop_half: int) -> bool:
    half = t.partner(loop_half)
    if half is None:
        return False
    tri_index, _ = t.locate(half)
    tri = t.triangles[tri_index]
    others = [h for h in tri if h != half]
    return len(others) == 2 and others[0] ^ 1 == others[1] and not t.is_boundary(others[0] >> 1)


@lru_cache(maxsize=256)
def half_twist_candidates(t: Triangulation, weights: Tuple[int, ...]) -> Tuple[TwistEncoding, ...]:
    """
    Demi-twists candidats autour de l'arc entouré par la courbe : on expose le
    monogone à un point marqué en flippant la boucle intérieure, puis un flip
    et l'isométrie ancrée. Le bon candidat vérifie H^2 = T (contrôlé par mcg).
    """
    short = shorten(t, weights)
    st = short.triangulation
    x, y = short.x, short.y
    r_half, l_half = st.prev_half(x), st.prev_half(x ^ 1)
    if _is_punctured_monogon(st, r_half):
        x, y = x ^ 1, y ^ 1
        r_half, l_half = l_half, r_half
    if not _is_punctured_monogon(st, l_half):
        raise MappingClassError("half-twist curve does not bound two punctures")
    loop = l_half >> 1
    loop_step = _flip_step(st, loop)
    exposed = flip(st, loop)
    candidates = []
    for edge in (y >> 1, x >> 1):
        try:
            step = _flip_step(exposed, edge)
            turned = flip(exposed, edge)
            relabel = _relabel_to(turned, exposed)
        except (SurfaceError, MappingClassError):
            continue
        core = Encoding([loop_step, step, relabel, loop_step])
        candidates.append(TwistEncoding(short.prefix, core))
    if not candidates:
        raise MappingClassError("no half-twist encoding found")
    return tuple(candidates)


def _vertex_map(source: Triangulation, target: Triangulation, iso: Sequence[int]) -> Dict[int, int]:
    mapping = {}
    for tri in source.triangles:
        for h in tri:
            mapping[source.tails[h]] = target.tails[iso[h]]
    return mapping


def half_twist_search(t: Triangulation, p: int, q: int, depth: int) -> Iterator[TwistEncoding]:
    """
    Recherche en largeur de suites de flips suivies d'une isométrie ancrée qui
    échangent les sommets p et q en fixant les autres. Sert quand la courbe
    autour de l'arc est parallèle au bord et ne peut pas être rendue courte.
    """
    queue = deque([(t, [])])
    while queue:
        cur, path = queue.popleft()
        if path:
            iso = find_isometry(cur, t)
            if iso is not None:
                vmap = _vertex_map(cur, t, iso)
                if vmap.get(p) == q and vmap.get(q) == p and all(
                        image == v for v, image in vmap.items() if v not in (p, q)):
                    relabel = Relabel(tuple(iso[2 * e] >> 1 for e in range(cur.edge_count)))
                    logger.debug(f"[DEBUG] half twist candidate after {len(path)} flips")
                    yield TwistEncoding(Encoding(), Encoding(path + [relabel]))
        if len(path) >= depth:
            continue
        for e in cur.interior_edges:
            if path and path[-1].edge == e:
                continue
            try:
                step = _flip_step(cur, e)
            except SurfaceError:
                continue
            queue.append((flip(cur, e), path + [step]))
