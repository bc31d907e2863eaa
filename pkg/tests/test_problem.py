# tests/test_problem.py

import json

import pytest

from core.errors import FDTCError, ProblemError
from core.fdtc_engine import FDTCEngine
from core.problem import parse_problem, parse_word_text
from core.report import Report, TaskResult, emit_report

CHAIN = {"surface": {"genus": 1, "boundary": ["C1"]}, "words": {"phi": "T_a T_b"}}

TWO_POINTS = {
    "surface": {"genus": 1, "boundary": ["C1"]},
    "foliations": {"F": {
        "surface_topology": {"genus": 1, "boundary_count": 1},
        "elliptic_points": [
            {"id": "v1", "sign": 1, "essential": True, "strongly_essential": True},
            {"id": "v2", "sign": 1, "essential": True, "strongly_essential": True},
            {"id": "w1", "sign": -1}, {"id": "w2", "sign": -1},
        ],
        "hyperbolic_points": [
            {"id": "h1", "sign": 1, "region": "bb"}, {"id": "h2", "sign": 1, "region": "bb"},
            {"id": "h3", "sign": 1, "region": "bb"}, {"id": "h4", "sign": -1, "region": "bb"},
            {"id": "h5", "sign": -1, "region": "bb"},
        ],
        "singular_leaf_incidence": [
            ["v1", "h1"], ["v2", "h1"], ["w1", "h1"], ["w2", "h1"],
            ["v1", "h2"], ["v2", "h2"], ["w1", "h2"], ["w2", "h2"],
            ["v1", "h3"], ["v1", "h3"], ["w1", "h3"], ["w2", "h3"],
            ["v1", "h4"], ["v2", "h4"], ["w1", "h4"], ["w2", "h4"],
            ["v2", "h5"], ["v2", "h5"], ["w1", "h5"], ["w2", "h5"],
        ],
    }},
}


@pytest.fixture(scope="module")
def engine():
    return FDTCEngine()


def test_parse_word_text():
    assert parse_word_text("T_a T_b^-1 D_C1^2 s1") == [
        {"twist": "a", "power": 1}, {"twist": "b", "power": -1},
        {"boundary": "C1", "power": 2}, {"braid": 1, "power": 1},
    ]
    with pytest.raises(ProblemError):
        parse_word_text("T_a ?")


def test_minimal_problem():
    problem = parse_problem(CHAIN)
    assert problem.word("phi").length == 2
    assert problem.word().length == 2


def test_problem_from_text_and_path(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(CHAIN), encoding="utf-8")
    assert parse_problem(str(path)).word("phi").length == 2
    assert parse_problem(json.dumps(CHAIN)).word("phi").length == 2


def test_unresolved_curve():
    with pytest.raises(ProblemError) as info:
        parse_problem({"surface": {"genus": 1}, "words": {"phi": "T_z"}})
    assert any("unresolved curve z" in e for e in info.value.errors)


def test_empty_word_is_identity():
    problem = parse_problem({"surface": {"genus": 1}, "words": {"phi": []}})
    assert problem.word("phi").generators == ()


def test_no_words_gives_identity():
    assert parse_problem({"surface": {"genus": 1}}).word().generators == ()


def test_errors_carry_locations():
    with pytest.raises(ProblemError) as info:
        parse_problem({"surface": {"genus": -1}})
    assert info.value.errors[0].startswith("surface.genus")


def test_json_syntax_error_location():
    with pytest.raises(ProblemError, match="line 1"):
        parse_problem('{"surface": ')


def test_named_curve_alias():
    problem = parse_problem({"surface": {"genus": 1}, "curves": {"alpha": "a"}, "words": {"phi": "T_alpha"}})
    assert problem.curve("alpha").weights == problem.curve("a").weights


def test_bad_coefficients_are_parse_errors():
    with pytest.raises(ProblemError, match="coefficients"):
        parse_problem({"coefficients": {"C1": 2, "C2": 3}, "connected_boundary": True})


def test_classify_without_coefficients(engine):
    problem = parse_problem(CHAIN)
    with pytest.raises(ProblemError, match="coefficient assignment is empty"):
        problem.assignment()
    with pytest.raises(ProblemError):
        engine.run(problem, "classify", {"nt_type": "pA"})


def test_engine_fdtc_exact(engine):
    report = engine.run(parse_problem(CHAIN), "fdtc exact", {"word": "phi"})
    result = report.results[0].result
    assert result["value"] == "1/6"
    assert result["N"] == 31
    assert result["D"] == 6
    assert report.results[0].citations == ("ExactTheorem",)


def test_engine_classify(engine):
    problem = parse_problem({"coefficients": {"C1": "3/2"}, "connected_boundary": True, "nt_type": "pA"})
    report = engine.run(problem, "classify", {})
    assert report.results[0].result["geometry"]["conclusion"] == "Hyperbolic"
    assert not report.inconclusive_only


def test_engine_foliation_bounds(engine):
    report = engine.run(parse_problem(TWO_POINTS), "foliation bounds", {"points": "v1,v2"})
    result = report.results[0].result
    assert (result["lower"], result["upper"]) == ("-1", "2")
    assert "strongly essential caller-asserted" in report.results[0].warnings


def test_engine_runs_task_list_in_order(engine):
    problem = parse_problem(dict(CHAIN, tasks=[{"command": "surface info"},
                                               {"command": "fdtc interval", "word": "phi", "n": 31}]))
    report = engine.run(problem)
    assert [r.command for r in report.results] == ["surface info", "fdtc interval"]
    assert report.results[1].result["interval"]["lo"] == "5/31"


def test_engine_unknown_command(engine):
    with pytest.raises(ProblemError, match="unknown command"):
        engine.run(parse_problem(CHAIN), "fdtc guess", {})


def test_engine_needs_tasks(engine):
    with pytest.raises(ProblemError, match="no command"):
        engine.run(parse_problem(CHAIN))


def test_computation_errors_name_the_command(engine):
    with pytest.raises(FDTCError, match="^fdtc braid: "):
        engine.run(parse_problem(CHAIN), "fdtc braid", {"word": "phi"})


def test_emit_report_is_deterministic(engine):
    problem = parse_problem(CHAIN)
    first = emit_report(engine.run(problem, "surface info", {}))
    second = emit_report(engine.run(problem, "surface info", {}))
    assert first == second
    assert json.loads(first)["surface"] == {"genus": 1, "boundary": ["C1"], "punctures": 0}


def test_emit_report_timing_is_opt_in():
    report = Report(surface={}, results=(TaskResult(command="x", result={}, seconds=0.5),))
    assert "seconds" not in json.loads(emit_report(report))["results"][0]
    assert json.loads(emit_report(report, timing=True))["results"][0]["seconds"] == 0.5


def test_warnings_in_both_formats():
    report = Report(surface={"genus": 0}, results=(
        TaskResult(command="foliation otdisc", result={"valid": True}, citations=("transverse-overtwisted-disc",),
                   warnings=("positive unknot boundary caller-asserted",)),))
    as_json = emit_report(report, "json").decode("utf-8")
    as_text = emit_report(report, "text").decode("utf-8")
    for output in (as_json, as_text):
        assert "positive unknot boundary caller-asserted" in output
    assert "transverse-overtwisted-disc" in as_text
