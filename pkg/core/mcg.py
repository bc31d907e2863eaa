# core/mcg.py

import logging
from functools import lru_cache
from math import lcm
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, PrivateAttr

from config import ACTS_PROBE_BOUND, HALF_TWIST_SEARCH_DEPTH
from core.curves import (
    ArcClass,
    NormalCoordinates,
    Ordering,
    boundary_parallel_label,
    boundary_twist,
    compare_at_base,
    enumerate_arcs,
    is_peripheral,
    matching_diagnostics,
)
from core.encoding import TwistEncoding, half_twist_candidates, half_twist_search, twist_encoding
from core.errors import CurveError, MappingClassError
from core.surface import Triangulation, standard_curves

logger = logging.getLogger(__name__)


class Generator(BaseModel):
    """
    Générateur : twist de Dehn à droite le long d'une courbe, twist de bord
    T_C, ou demi-twist de tresse sigma_i (échange p_i et p_{i+1}).
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["twist", "boundary", "braid"]
    power: int = 1
    curve: Optional[NormalCoordinates] = None
    name: Optional[str] = None
    label: Optional[str] = None
    index: Optional[int] = None

    def inverse(self) -> "Generator":
        return self.model_copy(update={"power": -self.power})

    def same_letter(self, other: "Generator") -> bool:
        return (self.kind, self.label, self.index) == (other.kind, other.label, other.index) and (
            self.curve is None or other.curve is None or self.curve.weights == other.curve.weights
        )

    def to_json(self) -> dict:
        if self.kind == "twist":
            return {"twist": self.name or "curve", "power": self.power}
        if self.kind == "boundary":
            return {"boundary": self.label, "power": self.power}
        return {"braid": self.index, "power": self.power}


class MappingClassWord(BaseModel):
    """Mot en générateurs, appliqué de droite à gauche."""
    model_config = ConfigDict(frozen=True)

    triangulation: Triangulation
    generators: Tuple[Generator, ...] = ()

    _permutation: Tuple[int, ...] = PrivateAttr(default=())

    def model_post_init(self, __context) -> None:
        n = self.triangulation.surface.puncture_count
        for g in self.generators:
            if g.kind == "braid" and (n < 2 or not 1 <= (g.index or 0) <= n - 1):
                raise MappingClassError(f"braid generator sigma_{g.index} needs punctures {g.index} and {g.index + 1 if g.index else '?'}"
                                        f" (surface has {n})")
            if g.kind == "boundary" and g.label not in self.triangulation.surface.boundary_labels:
                raise MappingClassError(f"unknown boundary label '{g.label}'")
            if g.kind == "twist" and (g.curve is None or g.curve.triangulation != self.triangulation):
                raise MappingClassError("twist curve does not live on the word's triangulation")
        perm = list(range(n))
        for g in reversed(self.generators):
            if g.kind == "braid" and g.power % 2:
                i, j = g.index - 1, g.index
                perm = [j if p == i else i if p == j else p for p in perm]
        self._permutation = tuple(perm)

    @property
    def permutation(self) -> Tuple[int, ...]:
        return self._permutation

    @property
    def length(self) -> int:
        return sum(abs(g.power) for g in self.generators)

    def to_json(self) -> List[dict]:
        return [g.to_json() for g in self.generators]


# -- constructeurs ----------------------------------------------------------

def identity(t: Triangulation) -> MappingClassWord:
    return MappingClassWord(triangulation=t)


def check_twist_curve(curve: NormalCoordinates) -> None:
    problems = matching_diagnostics(curve.triangulation, curve.weights)
    if problems:
        raise CurveError("; ".join(problems))
    if curve.is_arc:
        raise CurveError("twist curve must be a closed curve, not an arc")
    if not any(curve.weights) or is_peripheral(curve):
        raise CurveError("twist curve is inessential")


def twist(curve: NormalCoordinates, power: int = 1, name: Optional[str] = None) -> MappingClassWord:
    check_twist_curve(curve)
    return MappingClassWord(
        triangulation=curve.triangulation,
        generators=(Generator(kind="twist", power=power, curve=curve, name=name),),
    )


def boundary_word(t: Triangulation, label: str, power: int = 1) -> MappingClassWord:
    return MappingClassWord(triangulation=t, generators=(Generator(kind="boundary", power=power, label=label),))


def braid_word(t: Triangulation, index: int, power: int = 1) -> MappingClassWord:
    return MappingClassWord(triangulation=t, generators=(Generator(kind="braid", power=power, index=index),))


def named_curve(t: Triangulation, name: str) -> NormalCoordinates:
    table = standard_curves(t.surface)
    if name not in table:
        raise CurveError(f"unresolved curve {name}")
    return NormalCoordinates(triangulation=t, weights=table[name])


# -- algèbre des mots -------------------------------------------------------

def _same_surface(w1: MappingClassWord, w2: MappingClassWord) -> None:
    if w1.triangulation != w2.triangulation:
        raise MappingClassError("words live on different surfaces")


def compose(w1: MappingClassWord, w2: MappingClassWord) -> MappingClassWord:
    """w1 . w2 : w2 agit en premier."""
    _same_surface(w1, w2)
    left, right = list(w1.generators), list(w2.generators)
    while left and right and left[-1].same_letter(right[0]) and left[-1].power == -right[0].power:
        left.pop()
        right.pop(0)
    return MappingClassWord(triangulation=w1.triangulation, generators=tuple(left + right))


def invert(w: MappingClassWord) -> MappingClassWord:
    return MappingClassWord(
        triangulation=w.triangulation,
        generators=tuple(g.inverse() for g in reversed(w.generators)),
    )


def power(w: MappingClassWord, k: int) -> MappingClassWord:
    if k < 0:
        return power(invert(w), -k)
    result = identity(w.triangulation)
    for _ in range(k):
        result = compose(result, w)
    return result


def puncture_permutation_order(w: MappingClassWord) -> int:
    perm = w.permutation
    seen, order = set(), 1
    for start in range(len(perm)):
        if start in seen:
            continue
        size, cur = 0, start
        while cur not in seen:
            seen.add(cur)
            cur = perm[cur]
            size += 1
        order = lcm(order, size)
    return order


# -- action -----------------------------------------------------------------

def half_twist_curve(t: Triangulation, index: int) -> Tuple[int, ...]:
    """Bord d'un voisinage de l'arc de référence entre p_i et p_{i+1}."""
    arc = t.puncture_arcs[index - 1]
    p, q = t.tails[2 * arc], t.tails[2 * arc + 1]
    ends_p, ends_q = t.edge_ends_at(p), t.edge_ends_at(q)
    weights = [a + b for a, b in zip(ends_p, ends_q)]
    weights[arc] = 0
    return tuple(weights)


def _twist_weights(t: Triangulation, curve: Tuple[int, ...], weights: Tuple[int, ...], k: int) -> Tuple[int, ...]:
    label = boundary_parallel_label(NormalCoordinates(triangulation=t, weights=curve))
    if label is not None:
        coords = NormalCoordinates(triangulation=t, weights=weights)
        return boundary_twist(coords, label, k).weights
    return tuple(twist_encoding(t, curve).apply(weights, k))


def _half_twist_pool(t: Triangulation, index: int, curve: Tuple[int, ...]) -> Iterator[TwistEncoding]:
    if boundary_parallel_label(NormalCoordinates(triangulation=t, weights=curve)) is None:
        try:
            yield from half_twist_candidates(t, curve)
        except (CurveError, MappingClassError) as exc:
            logger.debug(f"[DEBUG] short half twist unavailable: {exc}")
    arc = t.puncture_arcs[index - 1]
    yield from half_twist_search(t, t.tails[2 * arc], t.tails[2 * arc + 1], HALF_TWIST_SEARCH_DEPTH)


@lru_cache(maxsize=64)
def _half_twist(t: Triangulation, index: int) -> TwistEncoding:
    """Candidat H retenu si H^2 coïncide avec le twist T_c sur les sondes."""
    curve = half_twist_curve(t, index)
    probes = [arc.weights for label in t.surface.boundary_labels
              for arc in enumerate_arcs(t, label, 8, essential_only=False)]
    probes += list(standard_curves(t.surface).values())
    expected = [_twist_weights(t, curve, w, 1) for w in probes]
    for candidate in _half_twist_pool(t, index, curve):
        if all(tuple(candidate.apply(w, 2)) == image for w, image in zip(probes, expected)):
            logger.debug(f"[DEBUG] half twist sigma_{index} calibrated on {len(probes)} probes")
            return candidate
    raise MappingClassError(f"no half-twist encoding squares to the twist around arc {index}")


def _apply_generator(g: Generator, t: Triangulation, weights: Tuple[int, ...]) -> Tuple[int, ...]:
    if g.kind == "boundary":
        coords = NormalCoordinates(triangulation=t, weights=weights)
        return boundary_twist(coords, g.label, g.power).weights
    if g.kind == "braid":
        return tuple(_half_twist(t, g.index).apply(weights, g.power))
    return _twist_weights(t, g.curve.weights, weights, g.power)


Target = Union[NormalCoordinates, ArcClass]


def apply(w: MappingClassWord, x: Target) -> Target:
    coords = x.coords if isinstance(x, ArcClass) else x
    if coords.triangulation != w.triangulation:
        raise MappingClassError("generator/triangulation mismatch")
    weights = coords.weights
    for g in reversed(w.generators):
        weights = _apply_generator(g, w.triangulation, weights)
    image = NormalCoordinates(triangulation=w.triangulation, weights=tuple(weights))
    if isinstance(x, ArcClass):
        return x.model_copy(update={"coords": image})
    return image


def apply_power(w: MappingClassWord, x: Target, k: int) -> Target:
    """phi^k(x) pour k >= 0, sans construire le mot puissance."""
    for _ in range(k):
        x = apply(w, x)
    return x


class IdentityCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: Literal["yes-on-probes", "no"]
    probes: int
    witness: Optional[dict] = None
    note: str = "semi-decision: agreement on probe arcs does not prove triviality"


def acts_identically(w: MappingClassWord, probe_bound: int = ACTS_PROBE_BOUND) -> IdentityCheck:
    count = 0
    for label in w.triangulation.surface.boundary_labels:
        for arc in enumerate_arcs(w.triangulation, label, probe_bound):
            count += 1
            if apply(w, arc).weights != arc.weights:
                return IdentityCheck(status="no", probes=count, witness=arc.to_json())
    return IdentityCheck(status="yes-on-probes", probes=count)


def compare_mapping_classes(w1: MappingClassWord, w2: MappingClassWord, arc: ArcClass) -> Ordering:
    """
    Ordre partiel phi <=_gamma psi (phi(gamma) >= psi(gamma)) : renvoie la
    comparaison de w1(gamma) avec w2(gamma) au point base.
    """
    _same_surface(w1, w2)
    return compare_at_base(apply(w1, arc), apply(w2, arc))


# -- format JSON ------------------------------------------------------------

def word_from_json(items: Sequence[dict], curves: Dict[str, NormalCoordinates], t: Triangulation) -> MappingClassWord:
    generators = []
    for position, item in enumerate(items):
        p = int(item.get("power", 1))
        if "twist" in item:
            name = item["twist"]
            if name not in curves:
                raise CurveError(f"unresolved curve {name}")
            check_twist_curve(curves[name])
            generators.append(Generator(kind="twist", power=p, curve=curves[name], name=name))
        elif "boundary" in item:
            generators.append(Generator(kind="boundary", power=p, label=str(item["boundary"])))
        elif "braid" in item:
            generators.append(Generator(kind="braid", power=p, index=int(item["braid"])))
        else:
            raise MappingClassError(f"word item {position}: expected 'twist', 'boundary' or 'braid'")
    return MappingClassWord(triangulation=t, generators=tuple(generators))
