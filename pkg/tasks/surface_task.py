# tasks/surface_task.py

from .base_task import BaseTask
from core.report import TaskResult
from core.surface import (
    admissible_values,
    denominator_bound,
    standard_curves,
    triangulation_summary,
    validate_triangulation,
)


class SurfaceTask(BaseTask):
    def __init__(self):
        super().__init__(name="surface", actions=("info",))

    def run(self, problem, action: str, options: dict) -> TaskResult:
        spec = problem.surface
        t = problem.triangulation
        bound = denominator_bound(spec)
        result = {
            "surface": spec.to_json(),
            "euler_characteristic": spec.euler_characteristic,
            "denominator_bound": bound.value,
            "degenerate": bound.degenerate,
            "admissible": list(admissible_values(spec, "unknown")),
            "triangulation": triangulation_summary(t),
            "curves": sorted(standard_curves(spec)),
            "diagnostics": validate_triangulation(t),
        }
        return TaskResult(command="surface info", result=result, citations=("denominator-bound",))
