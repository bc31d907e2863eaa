# app.py

import argparse
import json
import logging
import sys
from pathlib import Path

from config import LOG_LEVEL, REPORT_FORMAT
from core.errors import FDTCEngineError, ProblemError
from core.fdtc_engine import FDTCEngine
from core.problem import parse_problem
from core.report import emit_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_COMPUTATION = 3
EXIT_INCONCLUSIVE = 4


# --------------------------------------------------------------------------------
# ARGUMENTS
# --------------------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser, needs_file: bool = True) -> None:
    parser.add_argument("file", nargs=None if needs_file else "?", help="Fichier problème JSON")
    parser.add_argument("--format", choices=("json", "text"), default=REPORT_FORMAT, help="Format du rapport")
    parser.add_argument("--timing", action="store_true", help="Inclure les durées dans le rapport")


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="fdtc", description="Coefficient fractionnaire de twist de Dehn : calcul exact et critères")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Niveau de log (DEBUG, INFO, ...)")
    families = parser.add_subparsers(dest="family", required=True)

    fdtc = families.add_parser("fdtc", help="Calculs de c(phi, C)")
    fdtc_actions = fdtc.add_subparsers(dest="action", required=True)
    for action in ("exact", "interval", "braid", "audit", "veering"):
        sub = fdtc_actions.add_parser(action)
        _common(sub)
        sub.add_argument("--word", help="Nom du mot dans le fichier")
        sub.add_argument("--boundary", help="Étiquette de la composante de bord C")
        sub.add_argument("--nt-type", dest="nt_type", help="Type de Nielsen-Thurston affirmé")
        if action == "interval":
            sub.add_argument("--n", type=int, default=1, help="Nombre d'itérations N")
            sub.add_argument("--n-max", dest="n_max", type=int, help="Suite d'intervalles pour N = 1..N_max")
            sub.add_argument("--arc", help="Nom de l'arc sonde")
        if action == "audit":
            sub.add_argument("--word2", required=True, help="Second mot")
        if action == "veering":
            sub.add_argument("--bound", type=int, default=6, help="Borne de poids des arcs témoins")

    foliation = families.add_parser("foliation", help="Feuilletages de livre ouvert")
    foliation_actions = foliation.add_subparsers(dest="action", required=True)
    for action in ("check", "bounds", "otdisc", "bcannulus", "complexity"):
        sub = foliation_actions.add_parser(action)
        _common(sub, needs_file=action != "complexity")
        sub.add_argument("--foliation", help="Nom du feuilletage dans le fichier")
        if action == "bounds":
            sub.add_argument("--points", help="Points elliptiques, séparés par des virgules")
            sub.add_argument("--mode", choices=("monodromy", "braid"))
            sub.add_argument("--aggregate", action="store_true", help="Borne agrégée (inf f+/f-)")
        if action == "complexity":
            sub.add_argument("--value", type=int, required=True, help="n(S, phi) ou une borne supérieure")
            sub.add_argument("--upper-bound", dest="upper_bound", action="store_true")

    classify = families.add_parser("classify", help="Verdicts topologiques")
    _common(classify, needs_file=False)
    classify.add_argument("--coeffs", help="Fichier JSON des coefficients")
    classify.add_argument("--nt-type", dest="nt_type", help="Type de Nielsen-Thurston affirmé")
    classify.add_argument("--tight", action="store_true", default=None)
    classify.add_argument("--braid-mode", dest="braid_mode", action="store_true")

    surface = families.add_parser("surface", help="Informations sur la surface")
    surface_actions = surface.add_subparsers(dest="action", required=True)
    _common(surface_actions.add_parser("info"))

    run = families.add_parser("run", help="Exécute la liste 'tasks' du fichier")
    _common(run)
    return parser.parse_args(argv)


_GLOBAL = {"family", "action", "file", "format", "timing", "log_level", "coeffs"}


def _options(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _GLOBAL and v is not None}


def _source(args: argparse.Namespace):
    """Fichier problème, complété par le fichier --coeffs (table nue ou objet complet)."""
    coeffs = getattr(args, "coeffs", None)
    if not coeffs:
        return args.file or "{}"
    data = json.loads(Path(args.file).read_text(encoding="utf-8")) if args.file else {}
    extra = json.loads(Path(coeffs).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or not isinstance(extra, dict):
        raise ProblemError("problem and coefficient files must be JSON objects")
    data.update(extra if "coefficients" in extra else {"coefficients": extra})
    return data


# --------------------------------------------------------------------------------
# POINT D'ENTRÉE
# --------------------------------------------------------------------------------

def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO))
    engine = FDTCEngine()

    try:
        problem = parse_problem(_source(args))
    except ProblemError as exc:
        for error in exc.errors:
            print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    command = None if args.family == "run" else " ".join(p for p in (args.family, getattr(args, "action", None)) if p)
    try:
        report = engine.run(problem, command, _options(args))
    except ProblemError as exc:
        for error in exc.errors:
            print(f"error: {error}", file=sys.stderr)
        return EXIT_PARSE
    except FDTCEngineError as exc:
        logger.error(f"computation failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION

    sys.stdout.write(emit_report(report, args.format, args.timing).decode("utf-8"))
    if args.format == "json":
        sys.stdout.write("\n")
    return EXIT_INCONCLUSIVE if report.inconclusive_only else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
