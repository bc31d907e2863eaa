# core/surface.py

import logging
from collections import deque
from functools import lru_cache
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from core.errors import SurfaceError

logger = logging.getLogger(__name__)

NtType = Literal["periodic", "pseudoAnosov", "reducible", "unknown"]

_NT_ALIASES = {
    "periodic": "periodic",
    "per": "periodic",
    "pseudoanosov": "pseudoAnosov",
    "pa": "pseudoAnosov",
    "pseudo-anosov": "pseudoAnosov",
    "reducible": "reducible",
    "red": "reducible",
    "unknown": "unknown",
}


def normalize_nt_type(value: str) -> str:
    key = (value or "unknown").strip().lower()
    if key not in _NT_ALIASES:
        raise SurfaceError(f"unknown Nielsen-Thurston type '{value}'")
    return _NT_ALIASES[key]


class SurfaceSpec(BaseModel):
    """
    Surface S_{g,d} compacte orientée, avec n points marqués intérieurs.
    Format JSON : {"genus": 1, "boundary": ["C1"], "punctures": 0}
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    genus: int = Field(0, ge=0)
    boundary_labels: Tuple[str, ...] = Field(("C1",), alias="boundary")
    puncture_count: int = Field(0, ge=0, alias="punctures")

    @field_validator("boundary_labels")
    @classmethod
    def _check_labels(cls, labels):
        if len(labels) < 1:
            raise ValueError("a surface needs at least one boundary component (d >= 1)")
        if len(set(labels)) != len(labels):
            raise ValueError("boundary labels must be distinct")
        return tuple(labels)

    @property
    def d(self) -> int:
        return len(self.boundary_labels)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.d - self.puncture_count

    def to_json(self) -> dict:
        return {"genus": self.genus, "boundary": list(self.boundary_labels), "punctures": self.puncture_count}


def euler_characteristic(spec: SurfaceSpec) -> int:
    return spec.euler_characteristic


def fold_punctures(spec: SurfaceSpec) -> SurfaceSpec:
    """Transforme chaque point marqué en composante de bord (P1, P2, ...)."""
    labels = list(spec.boundary_labels)
    for i in range(1, spec.puncture_count + 1):
        name = f"P{i}"
        while name in labels:
            name += "'"
        labels.append(name)
    return SurfaceSpec(genus=spec.genus, boundary=tuple(labels), punctures=0)


class DenominatorBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: int
    degenerate: bool = False


def denominator_bound(spec: SurfaceSpec) -> DenominatorBound:
    # les points marqués comptent comme des composantes de bord
    g, d = spec.genus, spec.d + spec.puncture_count
    if g == 0 and d <= 2:
        return DenominatorBound(value=1, degenerate=True)
    return DenominatorBound(value=max(4 * g + 2, 4 * g + d - 3))


def admissible_values(spec: SurfaceSpec, nt_type: str = "unknown") -> Tuple[int, ...]:
    """
    Dénominateurs admissibles de c(phi, C) selon le type de Nielsen-Thurston.
    """
    nt_type = normalize_nt_type(nt_type)
    g, d = spec.genus, spec.d + spec.puncture_count
    periodic = set(range(1, 4 * g + 3))
    pseudo_anosov = set(range(1, 4 * g + d - 2))
    if nt_type == "periodic":
        return tuple(sorted(periodic))
    if nt_type == "pseudoAnosov":
        if not pseudo_anosov:
            raise SurfaceError("no pseudo-Anosov maps on this surface")
        return tuple(sorted(pseudo_anosov))
    return tuple(sorted(periodic | pseudo_anosov))


class Vertex(BaseModel):
    model_config = ConfigDict(frozen=True)

    role: Literal["base", "auxiliary", "puncture"]
    label: Optional[str] = None
    puncture: Optional[int] = None


class Triangulation(BaseModel):
    """
    Triangulation par demi-arêtes : l'arête e porte les demi-arêtes 2e et 2e+1
    (une arête de bord n'utilise que 2e). Chaque triangle est un triplet de
    demi-arêtes dans l'ordre trigonométrique, tails[h] est le sommet de départ de h.
    """
    model_config = ConfigDict(frozen=True)

    surface: SurfaceSpec
    vertices: Tuple[Vertex, ...]
    edge_count: int
    boundary_edges: Tuple[int, ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    tails: Tuple[int, ...]
    base_edges: Tuple[Tuple[str, int], ...]
    puncture_arcs: Tuple[int, ...] = ()

    _position: Dict[int, Tuple[int, int]] = PrivateAttr(default_factory=dict)
    _boundary: frozenset = PrivateAttr(default=frozenset())

    def model_post_init(self, __context) -> None:
        position = {}
        for t, tri in enumerate(self.triangles):
            for i, h in enumerate(tri):
                position.setdefault(h, (t, i))
        self._position = position
        self._boundary = frozenset(self.boundary_edges)

    # -- navigation -------------------------------------------------------

    def is_boundary(self, e: int) -> bool:
        return e in self._boundary

    @property
    def interior_edges(self) -> List[int]:
        return [e for e in range(self.edge_count) if e not in self._boundary]

    def partner(self, h: int) -> Optional[int]:
        if (h >> 1) in self._boundary:
            return None
        return h ^ 1

    def locate(self, h: int) -> Tuple[int, int]:
        return self._position[h]

    def next_half(self, h: int) -> int:
        t, i = self._position[h]
        return self.triangles[t][(i + 1) % 3]

    def prev_half(self, h: int) -> int:
        t, i = self._position[h]
        return self.triangles[t][(i + 2) % 3]

    def head(self, h: int) -> int:
        return self.tails[self.next_half(h)]

    def base_edge(self, label: str) -> int:
        for name, e in self.base_edges:
            if name == label:
                return e
        raise SurfaceError(f"unknown boundary label '{label}'")

    def base_vertex(self, label: str) -> int:
        return self.tails[2 * self.base_edge(label)]

    def puncture_vertex(self, index: int) -> int:
        for v, vertex in enumerate(self.vertices):
            if vertex.role == "puncture" and vertex.puncture == index:
                return v
        raise SurfaceError(f"unknown puncture index {index}")

    def edge_ends_at(self, v: int) -> Tuple[int, ...]:
        """Nombre d'extrémités de chaque arête intérieure au sommet v."""
        ends = [0] * self.edge_count
        for e in self.interior_edges:
            ends[e] = int(self.tails[2 * e] == v) + int(self.tails[2 * e + 1] == v)
        return tuple(ends)

    def to_json(self) -> dict:
        return {
            "surface": self.surface.to_json(),
            "vertices": [v.model_dump() for v in self.vertices],
            "edges": [
                {"id": f"e{e}", "boundary": self.is_boundary(e),
                 "tail": self.tails[2 * e], "head": self.head(2 * e)}
                for e in range(self.edge_count)
            ],
            "triangles": [list(tri) for tri in self.triangles],
        }


# -- flips and isometries ---------------------------------------------------

def flip_quad(t: Triangulation, e: int) -> Tuple[int, int, int, int]:
    """Renvoie les arêtes (a, b, c, d) du quadrilatère autour de e."""
    if t.is_boundary(e):
        raise SurfaceError(f"cannot flip boundary edge e{e}")
    t1, i1 = t.locate(2 * e)
    t2, i2 = t.locate(2 * e + 1)
    if t1 == t2:
        raise SurfaceError(f"cannot flip e{e}: both sides lie in triangle {t1}")
    tri1, tri2 = t.triangles[t1], t.triangles[t2]
    a, b = tri1[(i1 + 1) % 3], tri1[(i1 + 2) % 3]
    c, d = tri2[(i2 + 1) % 3], tri2[(i2 + 2) % 3]
    return a >> 1, b >> 1, c >> 1, d >> 1


def flip(t: Triangulation, e: int) -> Triangulation:
    flip_quad(t, e)
    t1, i1 = t.locate(2 * e)
    t2, i2 = t.locate(2 * e + 1)
    tri1, tri2 = t.triangles[t1], t.triangles[t2]
    h1, a, b = tri1[i1], tri1[(i1 + 1) % 3], tri1[(i1 + 2) % 3]
    h2, c, d = tri2[i2], tri2[(i2 + 1) % 3], tri2[(i2 + 2) % 3]
    triangles = list(t.triangles)
    triangles[t1] = (b, c, h1)
    triangles[t2] = (d, a, h2)
    tails = list(t.tails)
    tails[h1] = t.tails[d]
    tails[h2] = t.tails[b]
    return Triangulation(
        surface=t.surface,
        vertices=t.vertices,
        edge_count=t.edge_count,
        boundary_edges=t.boundary_edges,
        triangles=tuple(triangles),
        tails=tuple(tails),
        base_edges=t.base_edges,
        puncture_arcs=t.puncture_arcs,
    )


def find_isometry(source: Triangulation, target: Triangulation) -> Optional[Tuple[int, ...]]:
    """
    Isométrie combinatoire source -> target qui fixe la demi-arête de base du
    premier bord. Renvoie la table des demi-arêtes, ou None.
    """
    if len(source.triangles) != len(target.triangles) or source.edge_count != target.edge_count:
        return None
    anchor = 2 * source.base_edge(source.surface.boundary_labels[0])
    mapping: Dict[int, int] = {anchor: anchor}
    queue = deque([anchor])
    while queue:
        h = queue.popleft()
        image = mapping[h]
        pairs = [(source.next_half(h), target.next_half(image)),
                 (source.prev_half(h), target.prev_half(image))]
        ph, pi = source.partner(h), target.partner(image)
        if (ph is None) != (pi is None):
            return None
        if ph is not None:
            pairs.append((ph, pi))
        for x, y in pairs:
            if x in mapping:
                if mapping[x] != y:
                    return None
                continue
            mapping[x] = y
            queue.append(x)
    used = [h for tri in source.triangles for h in tri]
    if len(mapping) != len(used):
        return None
    for e in source.boundary_edges:
        if mapping.get(2 * e) != 2 * e:
            return None
    table = [-1] * (2 * source.edge_count)
    for x, y in mapping.items():
        table[x] = y
    return tuple(table)


# -- standard triangulations ------------------------------------------------

class _Builder:
    def __init__(self, spec: SurfaceSpec):
        self.spec = spec
        self.vertices: List[Vertex] = []
        self.tails: Dict[int, int] = {}
        self.triangles: List[Tuple[int, int, int]] = []
        self.boundary: List[int] = []
        self.base_edges: List[Tuple[str, int]] = []
        self.puncture_arcs: List[int] = []
        self.edge_count = 0
        self.curves: Dict[str, Dict[int, int]] = {}

    def vertex(self, role: str, label: str = None, puncture: int = None) -> int:
        self.vertices.append(Vertex(role=role, label=label, puncture=puncture))
        return len(self.vertices) - 1

    def edge(self, boundary: bool = False) -> int:
        e = self.edge_count
        self.edge_count += 1
        if boundary:
            self.boundary.append(e)
        return e

    def corner(self, weights: Dict[int, int], tri: Tuple[int, int, int], i: int) -> int:
        # nombre d'arcs normaux qui coupent le coin au sommet de départ de tri[i]
        w = [weights.get(h >> 1, 0) for h in tri]
        return (w[(i - 1) % 3] + w[i] - w[(i + 1) % 3]) // 2

    def insert_vertex(self, t: int, vertex: int) -> Tuple[int, int, int]:
        s0, s1, s2 = self.triangles[t]
        A, B, C = self.tails[s0], self.tails[s1], self.tails[s2]
        kA, kB, kC = self.edge(), self.edge(), self.edge()
        for k, x in ((kA, A), (kB, B), (kC, C)):
            self.tails[2 * k] = x
            self.tails[2 * k + 1] = vertex
        for weights in self.curves.values():
            cA = self.corner(weights, (s0, s1, s2), 0)
            cB = self.corner(weights, (s0, s1, s2), 1)
            cC = self.corner(weights, (s0, s1, s2), 2)
            weights[kA], weights[kB], weights[kC] = cA, cB, cC
        self.triangles[t] = (s0, 2 * kB, 2 * kA + 1)
        self.triangles.append((s1, 2 * kC, 2 * kB + 1))
        self.triangles.append((s2, 2 * kA, 2 * kC + 1))
        return kA, kB, kC

    def insert_puncture(self, t: int, index: int) -> int:
        p = self.vertex("puncture", puncture=index)
        _, _, kC = self.insert_vertex(t, p)
        return kC

    def insert_hole(self, t: int, label: str) -> None:
        v = self.vertex("base", label=label)
        kA, _, _ = self.insert_vertex(t, v)
        s2, _, kC1 = self.triangles[-1]
        A = self.tails[2 * kA]
        e = self.edge(boundary=True)
        m = self.edge()
        self.tails[2 * e] = v
        self.tails[2 * m] = A
        self.tails[2 * m + 1] = v
        for weights in self.curves.values():
            weights[m] = weights[kA]
        self.triangles[-1] = (2 * kA, 2 * e, 2 * m + 1)
        self.triangles.append((s2, 2 * m, kC1))
        self.base_edges.append((label, e))

    def build(self) -> Triangulation:
        tails = [-1] * (2 * self.edge_count)
        for h, v in self.tails.items():
            tails[h] = v
        return Triangulation(
            surface=self.spec,
            vertices=tuple(self.vertices),
            edge_count=self.edge_count,
            boundary_edges=tuple(sorted(self.boundary)),
            triangles=tuple(self.triangles),
            tails=tuple(tails),
            base_edges=tuple(sorted(self.base_edges, key=lambda item: self.spec.boundary_labels.index(item[0]))),
            puncture_arcs=tuple(self.puncture_arcs),
        )


def _polygon_base(b: _Builder) -> None:
    """Polygone à 4g+1 côtés a1 b1 a1^-1 b1^-1 ... puis le bord, en éventail depuis Q0."""
    g = b.spec.genus
    label = b.spec.boundary_labels[0]
    v = b.vertex("base", label=label)
    a_edges, b_edges = [], []
    for _ in range(g):
        a_edges.append(b.edge())
        b_edges.append(b.edge())
    diagonals = {m: b.edge() for m in range(2, 4 * g)}
    boundary = b.edge(boundary=True)
    sides = []
    for i in range(g):
        sides += [2 * a_edges[i], 2 * b_edges[i], 2 * a_edges[i] + 1, 2 * b_edges[i] + 1]
    sides.append(2 * boundary)
    for h in range(2 * b.edge_count):
        b.tails[h] = v
    del b.tails[2 * boundary + 1]
    for j in range(1, 4 * g):
        left = sides[0] if j == 1 else 2 * diagonals[j]
        right = sides[4 * g] if j + 1 == 4 * g else 2 * diagonals[j + 1] + 1
        b.triangles.append((left, sides[j], right))
    b.base_edges.append((label, boundary))
    for i in range(1, g + 1):
        a_curve = {b_edges[i - 1]: 1}
        b_curve = {a_edges[i - 1]: 1}
        for m in (4 * i - 2, 4 * i - 1):
            if m in diagonals:
                a_curve[diagonals[m]] = 1
        for m in (4 * i - 3, 4 * i - 2):
            if m in diagonals:
                b_curve[diagonals[m]] = 1
        b.curves[f"a{i}"] = a_curve
        b.curves[f"b{i}"] = b_curve


def _annulus_base(b: _Builder) -> None:
    first, second = b.spec.boundary_labels[:2]
    v1 = b.vertex("base", label=first)
    v2 = b.vertex("base", label=second)
    bc1, bc2 = b.edge(boundary=True), b.edge(boundary=True)
    k, diag = b.edge(), b.edge()
    b.tails.update({
        2 * diag: v2, 2 * k: v1, 2 * bc2: v2,
        2 * diag + 1: v1, 2 * k + 1: v2, 2 * bc1: v1,
    })
    b.triangles.append((2 * diag, 2 * k, 2 * bc2))
    b.triangles.append((2 * diag + 1, 2 * k + 1, 2 * bc1))
    b.base_edges += [(first, bc1), (second, bc2)]


def _monogon_base(b: _Builder) -> None:
    label = b.spec.boundary_labels[0]
    v = b.vertex("base", label=label)
    p = b.vertex("puncture", puncture=1)
    bc, f = b.edge(boundary=True), b.edge()
    b.tails.update({2 * bc: v, 2 * f: v, 2 * f + 1: p})
    b.triangles.append((2 * bc, 2 * f, 2 * f + 1))
    b.base_edges.append((label, bc))


def _disc_base(b: _Builder) -> None:
    label = b.spec.boundary_labels[0]
    v = b.vertex("base", label=label)
    u1, u2 = b.vertex("auxiliary", label=label), b.vertex("auxiliary", label=label)
    e0, e1, e2 = b.edge(boundary=True), b.edge(boundary=True), b.edge(boundary=True)
    b.tails.update({2 * e0: v, 2 * e1: u1, 2 * e2: u2})
    b.triangles.append((2 * e0, 2 * e1, 2 * e2))
    b.base_edges.append((label, e0))


@lru_cache(maxsize=64)
def _standard(spec: SurfaceSpec) -> Tuple[Triangulation, Tuple[Tuple[str, Tuple[int, ...]], ...]]:
    b = _Builder(spec)
    g, d, n = spec.genus, spec.d, spec.puncture_count
    punctures_done = 0
    if g >= 1:
        _polygon_base(b)
        holes = spec.boundary_labels[1:]
    elif d >= 2:
        _annulus_base(b)
        holes = spec.boundary_labels[2:]
    elif n >= 1:
        _monogon_base(b)
        holes = ()
        punctures_done = 1
    else:
        _disc_base(b)
        holes = ()
    for label in holes:
        b.insert_hole(0, label)
    for index in range(punctures_done + 1, n + 1):
        arc = b.insert_puncture(0, index)
        if index >= 2:
            b.puncture_arcs.append(arc)
    triangulation = b.build()
    curves = {}
    for name, weights in b.curves.items():
        curves[name] = tuple(weights.get(e, 0) for e in range(triangulation.edge_count))
    if not (g == 0 and d == 1 and n == 0):
        for label in spec.boundary_labels:
            curves[f"d_{label}"] = triangulation.edge_ends_at(triangulation.base_vertex(label))
    if g == 1:
        curves["a"], curves["b"] = curves["a1"], curves["b1"]
    logger.debug(f"[DEBUG] standard triangulation for {spec.to_json()}: "
                 f"{len(triangulation.triangles)} triangles, {triangulation.edge_count} edges")
    return triangulation, tuple(sorted(curves.items()))


def standard_triangulation(spec: SurfaceSpec) -> Triangulation:
    return _standard(spec)[0]


def standard_curves(spec: SurfaceSpec) -> Dict[str, Tuple[int, ...]]:
    """Table des courbes nommées (a1, b1, ..., d_<bord>) en poids d'arêtes."""
    return dict(_standard(spec)[1])


# -- validation -------------------------------------------------------------

def validate_triangulation(t: Triangulation) -> List[str]:
    diagnostics = []
    spec = t.surface
    counts: Dict[int, int] = {}
    for index, tri in enumerate(t.triangles):
        if len(set(tri)) != 3:
            diagnostics.append(f"triangle {index}: repeated half-edge slot")
        for h in tri:
            counts[h] = counts.get(h, 0) + 1
            if not 0 <= h < 2 * t.edge_count:
                diagnostics.append(f"triangle {index}: half-edge {h} out of range")
    edge_use: Dict[int, int] = {}
    for h, c in counts.items():
        edge_use[h >> 1] = edge_use.get(h >> 1, 0) + c
        if c > 1:
            diagnostics.append(f"e{h >> 1}: non-manifold edge (half-edge {h} used {c} times)")
    for e in range(t.edge_count):
        expected = 1 if t.is_boundary(e) else 2
        used = edge_use.get(e, 0)
        if used > 2 or (t.is_boundary(e) and used > 1):
            diagnostics.append(f"e{e}: non-manifold edge (glued to {used} triangle sides)")
        elif used < expected:
            diagnostics.append(f"e{e}: unglued edge side")
        if t.is_boundary(e) and counts.get(2 * e + 1):
            diagnostics.append(f"e{e}: boundary edge used on both sides")
    if diagnostics:
        return diagnostics

    for index, tri in enumerate(t.triangles):
        for i in range(3):
            h, nxt = tri[i], tri[(i + 1) % 3]
            if t.partner(h) is not None and t.tails[h ^ 1] != t.tails[nxt]:
                diagnostics.append(f"triangle {index}: edge e{h >> 1} endpoints inconsistent with gluing")

    v, e, f = len(t.vertices), t.edge_count, len(t.triangles)
    expected_chi = 2 - 2 * spec.genus - spec.d
    if v - e + f != expected_chi:
        diagnostics.append(f"chi mismatch: V-E+F = {v - e + f}, expected {expected_chi}")

    punctures = [x for x in t.vertices if x.role == "puncture"]
    if len(punctures) != spec.puncture_count:
        diagnostics.append(f"puncture count {len(punctures)} differs from {spec.puncture_count}")
    for label in spec.boundary_labels:
        bases = [x for x in t.vertices if x.role == "base" and x.label == label]
        if len(bases) != 1:
            diagnostics.append(f"boundary {label}: expected exactly one base point, found {len(bases)}")

    # nombre de cycles de bord
    nxt_boundary = {}
    for be in t.boundary_edges:
        nxt_boundary[t.tails[2 * be]] = nxt_boundary.get(t.tails[2 * be], []) + [be]
    seen, cycles = set(), 0
    for be in t.boundary_edges:
        if be in seen:
            continue
        cycles += 1
        cur = be
        while cur not in seen:
            seen.add(cur)
            following = nxt_boundary.get(t.head(2 * cur), [])
            if len(following) != 1:
                diagnostics.append(f"e{cur}: boundary trace is not a circle")
                break
            cur = following[0]
    if cycles != spec.d:
        diagnostics.append(f"boundary trace finds {cycles} components, expected {spec.d}")
    return diagnostics


def triangulation_summary(t: Triangulation) -> dict:
    spec = t.surface
    bound = denominator_bound(spec)
    return {
        "surface": spec.to_json(),
        "euler_characteristic": spec.euler_characteristic,
        "vertices": len(t.vertices),
        "edges": t.edge_count,
        "triangles": len(t.triangles),
        "denominator_bound": bound.value,
        "degenerate": bound.degenerate,
        "curves": sorted(standard_curves(spec)),
        "diagnostics": validate_triangulation(t),
    }
