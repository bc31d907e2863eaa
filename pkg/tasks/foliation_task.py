# tasks/foliation_task.py

import logging

from .base_task import BaseTask
from core.errors import FoliationError
from core.foliation import (
    aggregate_bounds,
    bc_annulus_witness_check,
    elliptic_point_bounds,
    multi_point_bounds,
    ot_complexity_interpret,
    self_linking,
    singularity_counts,
    transverse_ot_disc_check,
    validate_graph,
)
from core.report import TaskResult

logger = logging.getLogger(__name__)


class FoliationTask(BaseTask):
    def __init__(self):
        super().__init__(name="foliation", actions=("check", "bounds", "otdisc", "bcannulus", "complexity"))

    def run(self, problem, action: str, options: dict) -> TaskResult:
        command = f"foliation {action}"

        if action == "complexity":
            value = int(options.get("value", 0))
            upper = bool(options.get("upper_bound", False))
            return TaskResult(command=command, citations=("overtwisted-complexity-trichotomy",),
                              result={"value": value, "upper_bound": upper,
                                      "verdict": ot_complexity_interpret(value, upper)})

        graph = problem.graph(options.get("foliation"))
        logger.info(f"FoliationTask: {command} on {len(graph.elliptic_points)} elliptic points")

        if action == "check":
            problems = validate_graph(graph)
            counts = singularity_counts(graph)
            result = {"ok": not problems, "diagnostics": problems, "counts": counts.model_dump()}
            if not graph.surface_topology.closed:
                result["self_linking"] = self_linking(counts)
            return TaskResult(command=command, result=result, citations=("euler-characteristic-count",))

        if action == "bounds":
            points = options.get("points") or [v.id for v in graph.elliptic_points if v.sign > 0][:1]
            if isinstance(points, str):
                points = [p for p in points.split(",") if p]
            mode = options.get("mode") or problem.mode
            if options.get("aggregate"):
                report = aggregate_bounds(points, graph, mode)
            elif len(points) == 1:
                report = elliptic_point_bounds(points[0], graph, mode)
            else:
                report = multi_point_bounds(points, graph, mode)
            return TaskResult(command=command, result=report.to_json(), citations=(report.source,),
                              warnings=tuple(f"{a} caller-asserted" for a in report.assumptions))

        if action == "otdisc":
            check = transverse_ot_disc_check(graph)
            return TaskResult(command=command, result=check.to_json(), citations=("transverse-overtwisted-disc",),
                              warnings=("positive unknot boundary caller-asserted",))

        if action == "bcannulus":
            witness = bc_annulus_witness_check(graph)
            result = {"witness": None if witness is None else witness.model_dump()}
            return TaskResult(command=command, result=result, citations=("degenerated-bc-annulus",),
                              warnings=("c-circle essentiality caller-asserted",))

        raise FoliationError(f"unknown foliation subcommand '{action}'")
