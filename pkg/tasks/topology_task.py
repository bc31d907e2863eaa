# tasks/topology_task.py

import logging

from .base_task import BaseTask
from core.report import TaskResult
from core.surface import normalize_nt_type
from core.topology import (
    atoroidality_verdict,
    geometry_verdict,
    irreducibility_verdict,
    stabilization_obstruction,
)

logger = logging.getLogger(__name__)


class TopologyTask(BaseTask):
    """`classify` : tous les critères, chacun rend un verdict ou Inconclusive."""

    def __init__(self):
        super().__init__(name="classify", actions=())

    def run(self, problem, action: str, options: dict) -> TaskResult:
        assignment = problem.assignment()
        if options.get("braid_mode"):
            assignment = assignment.model_copy(update={"mode": "braid"})
        nt_type = normalize_nt_type(options.get("nt_type") or problem.nt_type)
        tight = bool(options.get("tight", problem.tight))
        logger.info(f"TopologyTask: classify with nt_type={nt_type}, tight={tight}")

        verdicts = {
            "irreducibility": irreducibility_verdict(assignment),
            "atoroidality": atoroidality_verdict(assignment, nt_type, tight),
            "geometry": geometry_verdict(assignment, nt_type),
        }
        if assignment.mode == "monodromy":
            verdicts["stabilization"] = stabilization_obstruction(assignment)
        citations = tuple(tag for v in verdicts.values() for tag in v.criterion)
        warnings = ("nt_type caller-asserted",) if nt_type != "unknown" else ()
        return TaskResult(
            command="classify",
            result={name: v.to_json() for name, v in verdicts.items()},
            citations=citations,
            warnings=warnings,
            inconclusive=all(v.inconclusive for v in verdicts.values()),
        )
