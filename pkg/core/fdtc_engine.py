# core/fdtc_engine.py

import logging
import time
from typing import List, Optional

from core.errors import FDTCEngineError, ProblemError
from core.problem import ProblemFile
from core.report import Report, TaskResult
from tasks import FDTCTask, FoliationTask, SurfaceTask, TopologyTask

logger = logging.getLogger(__name__)


class FDTCEngine:
    def __init__(self):
        """
        Initialise le moteur : une tâche par famille de sous-commandes.
        """
        self.fdtc_task = FDTCTask()
        self.foliation_task = FoliationTask()
        self.topology_task = TopologyTask()
        self.surface_task = SurfaceTask()
        self.tasks = [self.fdtc_task, self.foliation_task, self.topology_task, self.surface_task]

    def _dispatch(self, problem: ProblemFile, command: str, options: dict) -> TaskResult:
        for task in self.tasks:
            if task.handles(command):
                words = command.split()
                action = words[1] if len(words) > 1 else ""
                start = time.perf_counter()
                result = task.run(problem, action, options)
                return result.model_copy(update={"seconds": time.perf_counter() - start})
        raise ProblemError(f"unknown command '{command}'")

    def run(self, problem: ProblemFile, command: Optional[str] = None, options: Optional[dict] = None) -> Report:
        """
        Exécute une commande, ou la liste `tasks` du fichier quand aucune
        commande n'est donnée. L'ordre des résultats suit l'ordre d'entrée.
        """
        if command:
            jobs = [dict(options or {}, command=command)]
        else:
            jobs = list(problem.tasks)
            if not jobs:
                raise ProblemError("no command given and the problem file lists no tasks")
        results: List[TaskResult] = []
        for position, job in enumerate(jobs):
            job = dict(job)
            name = job.pop("command", None)
            if not name:
                raise ProblemError(f"tasks[{position}]: missing 'command'")
            try:
                results.append(self._dispatch(problem, name, job))
            except ProblemError:
                raise
            except FDTCEngineError as exc:
                logger.debug(f"[DEBUG] task '{name}' failed: {exc}")
                raise type(exc)(f"{name}: {exc}") from exc
        return Report(surface=problem.surface.to_json(), results=tuple(results))
