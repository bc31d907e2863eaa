# core/problem.py

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError

from core.curves import ArcClass, NormalCoordinates, arc_from_json, coords_from_json
from core.errors import FDTCEngineError, ProblemError
from core.foliation import FoliationGraph, graph_from_json
from core.mcg import MappingClassWord, word_from_json
from core.surface import SurfaceSpec, Triangulation, normalize_nt_type, standard_curves, standard_triangulation
from core.topology import CoefficientAssignment

logger = logging.getLogger(__name__)

# T_a^-1, D_C1^2, s1 : twist, twist de bord, demi-twist de tresse
_TOKEN = re.compile(r"^(?P<kind>T_|D_|s)(?P<name>[A-Za-z0-9_']+?)(?:\^(?P<power>-?\d+))?$")


def parse_word_text(text: str) -> List[dict]:
    """Écriture compacte d'un mot : "T_a T_b^-1 D_C1 s2", appliqué de droite à gauche."""
    items = []
    for token in text.split():
        match = _TOKEN.match(token)
        if not match:
            raise ProblemError(f"cannot read word token '{token}'")
        power = int(match.group("power") or 1)
        kind, name = match.group("kind"), match.group("name")
        if kind == "T_":
            items.append({"twist": name, "power": power})
        elif kind == "D_":
            items.append({"boundary": name, "power": power})
        else:
            if not name.isdigit():
                raise ProblemError(f"braid generator '{token}' needs an index")
            items.append({"braid": int(name), "power": power})
    return items


class ProblemFile(BaseModel):
    """
    Fichier problème JSON. Les noms (courbes, mots, feuilletages) sont résolus
    à la lecture ; toute référence manquante est une erreur de lecture.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    surface: SurfaceSpec = SurfaceSpec()
    curves: Dict[str, Union[str, Dict[str, int]]] = {}
    arcs: Dict[str, Dict[str, Any]] = {}
    words: Dict[str, Union[str, List[Dict[str, Any]]]] = {}
    foliations: Dict[str, Dict[str, Any]] = {}
    coefficients: Dict[str, Union[str, int]] = {}
    connected_boundary: bool = False
    mode: Literal["monodromy", "braid"] = "monodromy"
    nt_type: str = "unknown"
    tight: bool = False
    tasks: List[Dict[str, Any]] = Field(default_factory=list)

    _triangulation: Optional[Triangulation] = PrivateAttr(default=None)
    _curves: Dict[str, NormalCoordinates] = PrivateAttr(default_factory=dict)
    _arcs: Dict[str, ArcClass] = PrivateAttr(default_factory=dict)
    _words: Dict[str, MappingClassWord] = PrivateAttr(default_factory=dict)
    _graphs: Dict[str, FoliationGraph] = PrivateAttr(default_factory=dict)

    # -- résolution ---------------------------------------------------------

    def resolve(self) -> "ProblemFile":
        errors: List[str] = []
        t = standard_triangulation(self.surface)
        self._triangulation = t
        table = {name: NormalCoordinates(triangulation=t, weights=w) for name, w in standard_curves(self.surface).items()}
        for name, value in self.curves.items():
            try:
                if isinstance(value, str):
                    if value not in table:
                        raise ProblemError(f"unresolved curve {value}")
                    table[name] = table[value]
                else:
                    table[name] = coords_from_json(t, value)
            except FDTCEngineError as exc:
                errors.append(f"curves.{name}: {exc}")
        self._curves = table
        for name, data in self.arcs.items():
            try:
                self._arcs[name] = arc_from_json(t, data)
            except FDTCEngineError as exc:
                errors.append(f"arcs.{name}: {exc}")
        for name, items in self.words.items():
            try:
                if isinstance(items, str):
                    items = parse_word_text(items)
                self._words[name] = word_from_json(items, table, t)
            except FDTCEngineError as exc:
                errors.append(f"words.{name}: {exc}")
        for name, data in self.foliations.items():
            try:
                self._graphs[name] = graph_from_json(data)
            except ValidationError as exc:
                errors.extend(f"foliations.{name}.{_loc(e)}: {e['msg']}" for e in exc.errors())
        try:
            normalize_nt_type(self.nt_type)
        except FDTCEngineError as exc:
            errors.append(f"nt_type: {exc}")
        if self.coefficients:
            try:
                self.assignment()
            except ProblemError as exc:
                errors.extend(exc.errors)
        if errors:
            raise ProblemError(errors)
        logger.debug(f"[DEBUG] problem resolved: {len(self._words)} words, {len(self._graphs)} foliations")
        return self

    # -- accès --------------------------------------------------------------

    @property
    def triangulation(self) -> Triangulation:
        if self._triangulation is None:
            self._triangulation = standard_triangulation(self.surface)
        return self._triangulation

    def _lookup(self, table: dict, kind: str, name: Optional[str]):
        if name is None:
            if len(table) == 1:
                return next(iter(table.values()))
            raise ProblemError(f"{kind} name required ({len(table)} defined)")
        if name not in table:
            raise ProblemError(f"unresolved {kind} {name}")
        return table[name]

    def word(self, name: Optional[str] = None) -> MappingClassWord:
        if name is None and not self._words:
            return MappingClassWord(triangulation=self.triangulation)
        return self._lookup(self._words, "word", name)

    def arc(self, name: Optional[str]) -> Optional[ArcClass]:
        return None if name is None else self._lookup(self._arcs, "arc", name)

    def graph(self, name: Optional[str] = None) -> FoliationGraph:
        return self._lookup(self._graphs, "foliation", name)

    def curve(self, name: str) -> NormalCoordinates:
        return self._lookup(self._curves, "curve", name)

    def assignment(self) -> CoefficientAssignment:
        try:
            return CoefficientAssignment(coefficients=self.coefficients, mode=self.mode,
                                         connected_boundary=self.connected_boundary)
        except ValidationError as exc:
            raise ProblemError([f"coefficients: {e['msg']}" for e in exc.errors()]) from exc


def _loc(error: dict) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def parse_problem(source: Union[str, Path, dict]) -> ProblemFile:
    """Chemin de fichier, texte JSON ou dictionnaire déjà chargé."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        path = Path(text)
        if not text.lstrip().startswith("{") and path.exists():
            text = path.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProblemError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ProblemError("problem file must be a JSON object")
    try:
        problem = ProblemFile.model_validate(data)
    except ValidationError as exc:
        raise ProblemError([f"{_loc(e)}: {e['msg']}" for e in exc.errors()]) from exc
    return problem.resolve()
