# tasks/fdtc_task.py

import logging

from .base_task import BaseTask
from core.errors import FDTCError
from core.fdtc import (
    braid_fdtc,
    fdtc_exact,
    key_lemma_interval,
    probe_arc,
    quasimorphism_audit,
    right_veering_test,
    translation_estimate,
)
from core.report import TaskResult
from core.surface import normalize_nt_type

logger = logging.getLogger(__name__)


class FDTCTask(BaseTask):
    def __init__(self):
        super().__init__(name="fdtc", actions=("exact", "interval", "braid", "audit", "veering"))

    def run(self, problem, action: str, options: dict) -> TaskResult:
        label = options.get("boundary") or problem.surface.boundary_labels[0]
        word = problem.word(options.get("word"))
        nt_type = normalize_nt_type(options.get("nt_type") or problem.nt_type)
        command = f"fdtc {action}"
        logger.info(f"FDTCTask: {command} on boundary {label}, word length {word.length}")

        if action in ("exact", "braid"):
            result = fdtc_exact(word, label, nt_type) if action == "exact" else braid_fdtc(word, label)
            return TaskResult(command=command, result=result.to_json(),
                              citations=(result.provenance,), warnings=result.warnings)

        if action == "interval":
            gamma = problem.arc(options.get("arc")) or probe_arc(word, label)
            if gamma is None:
                raise FDTCError("Key Lemma requires essential arc")
            if options.get("n_max"):
                intervals = translation_estimate(word, label, int(options["n_max"]), gamma)
                return TaskResult(command=command, citations=("TranslationEstimate",), result={
                    "intervals": [i.to_json() for i in intervals], "probe": gamma.to_json()})
            n = int(options.get("n", 1))
            interval = key_lemma_interval(word, label, gamma, n)
            citation = "PeriodicityCorollary" if interval.is_point else "KeyLemma"
            return TaskResult(command=command, citations=(citation,), result={
                "interval": interval.to_json(), "N": n, "probe": gamma.to_json()})

        if action == "audit":
            other = problem.word(options.get("word2"))
            audit = quasimorphism_audit(word, other, label)
            return TaskResult(command=command, result=audit.to_json(),
                              citations=("quasimorphism-defect", "conjugation-invariance"))

        if action == "veering":
            bound = int(options.get("bound", 6))
            report = right_veering_test(word, label, bound, nt_type)
            warnings = ("conditional on caller-asserted nt_type",) if report.conditional else ()
            citations = ("right-veering-definition",)
            if report.fdtc is not None:
                citations += (report.fdtc.provenance,)
            return TaskResult(command=command, result=report.to_json(), citations=citations, warnings=warnings)

        raise FDTCError(f"unknown fdtc subcommand '{action}'")
