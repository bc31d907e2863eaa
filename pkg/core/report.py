# core/report.py

import json
import logging
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict
from tabulate import tabulate

logger = logging.getLogger(__name__)


class TaskResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    result: Dict[str, Any]
    citations: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = ()
    inconclusive: bool = False
    seconds: Optional[float] = None


class Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    surface: Dict[str, Any]
    results: Tuple[TaskResult, ...] = ()

    @property
    def inconclusive_only(self) -> bool:
        return bool(self.results) and all(r.inconclusive for r in self.results)

    def to_json(self, timing: bool = False) -> dict:
        exclude = None if timing else {"results": {"__all__": {"seconds"}}}
        return self.model_dump(mode="json", exclude=exclude)


def _flatten(prefix: str, value: Any, rows: List[Tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, (list, tuple)) and value and all(isinstance(v, dict) for v in value):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, json.dumps(value, sort_keys=True) if isinstance(value, (list, dict)) else str(value)))


def emit_report(report: Report, fmt: Literal["json", "text"] = "json", timing: bool = False) -> bytes:
    if fmt == "json":
        return json.dumps(report.to_json(timing), sort_keys=True, separators=(",", ":")).encode("utf-8")
    blocks = [f"surface: {json.dumps(report.surface, sort_keys=True)}"]
    for r in report.results:
        rows: List[Tuple[str, str]] = []
        _flatten("", r.result, rows)
        rows += [("citation", c) for c in r.citations]
        rows += [("warning", w) for w in r.warnings]
        if timing and r.seconds is not None:
            rows.append(("seconds", f"{r.seconds:.3f}"))
        blocks.append(f"== {r.command} ==\n" + tabulate(rows, headers=["field", "value"], tablefmt="simple"))
    return ("\n\n".join(blocks) + "\n").encode("utf-8")
