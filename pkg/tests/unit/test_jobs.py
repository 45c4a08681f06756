import json
import math
import time

import pytest

from canonical_heights.core.curve import format_rational, multiply, negate, new_curve, point
from canonical_heights.errors import EXIT_DOMAIN, InvalidJob, SingularCurve
from canonical_heights.jobs import dump, parse_job, run_batch, run_job, run_lines

MORDELL = ["0", "0", "0", "0", "-2"]


def test_parse_job_accepts_strings_and_lists():
    job = parse_job({"curve": "0,0,0,0,-2", "point": [3, "5"], "place": "P:5", "max_iter": 12})
    assert job.curve == tuple(MORDELL)
    assert job.point == ("3", "5")
    assert job.place == "p:5"
    assert job.prime == 5
    assert job.n_max == 12
    assert job.build_point().y == 5


@pytest.mark.parametrize(
    "payload",
    [
        {"curve": MORDELL, "point": ["3", "5"], "place": "p:4"},
        {"curve": MORDELL, "point": ["3", "5"], "place": "complex"},
        {"curve": MORDELL, "point": [3.0, 5]},
        {"curve": MORDELL[:4], "point": ["3", "5"]},
        {"curve": MORDELL, "point": ["3", "five"]},
        {"curve": MORDELL, "point": ["3", "5"], "tol": -1},
        {"curve": MORDELL, "point": ["3", "5"], "colour": "blue"},
    ],
)
def test_parse_job_rejects(payload):
    with pytest.raises(InvalidJob) as exc_info:
        parse_job(payload)
    assert exc_info.value.exit_code == EXIT_DOMAIN


def test_run_job_real():
    result = run_job(parse_job({"curve": MORDELL, "point": ["3", "5"], "place": "real", "trace": True}))
    assert result.place == "real"
    assert result.exact is False
    assert result.certificate.r == 0
    assert result.certificate.witness == "-8"
    assert len(result.trace) == result.iterations
    assert result.error_bound < 1e-12


def test_run_job_padic():
    result = run_job(parse_job({"curve": MORDELL, "point": ["129/100", "-383/1000"], "place": "p:5"}))
    assert result.coefficient == "1"
    assert result.log_p == pytest.approx(math.log(5))
    assert result.exact is True
    assert result.error_bound == 0.0
    assert result.certificate.reason == "non_residue_unit"


def test_run_job_global():
    result = run_job(parse_job({"curve": MORDELL, "point": ["3", "5"]}))
    assert result.place == "global"
    assert set(result.finite_parts) == {"2", "3"}
    assert result.finite_parts["2"] == "0"
    assert result.total == result.lambda_
    assert result.torsion_order is None


def test_run_job_global_torsion():
    result = run_job(parse_job({"curve": ["0", "0", "0", "0", "1"], "point": ["2", "3"]}))
    assert result.total == 0.0
    assert result.torsion_order == 6
    assert result.exact is True


def test_run_job_propagates_domain_errors():
    with pytest.raises(SingularCurve):
        run_job(parse_job({"curve": ["0", "0", "0", "0", "0"], "point": ["0", "0"]}))


def test_dump_uses_wire_names():
    result = run_job(parse_job({"curve": MORDELL, "point": ["3", "5"], "place": "real"}))
    document = json.loads(dump(result))
    assert document["status"] == "ok"
    assert "lambda" in document
    assert "lambda_" not in document
    assert "trace" not in document
    assert " " not in dump(result)


def test_run_lines_reports_each_line():
    lines = [
        json.dumps({"curve": MORDELL, "point": ["3", "5"], "place": "global"}),
        "",
        json.dumps({"curve": MORDELL, "point": ["3", "5"], "place": "real"}),
        json.dumps({"curve": ["0", "0", "0", "0", "0"], "point": ["0", "0"], "place": "real"}),
        "{not json",
        "[1, 2]",
    ]
    documents = list(run_lines(lines))
    assert [d.status for d in documents] == ["ok", "ok", "error", "error", "error"]
    assert [d.line for d in documents] == [1, 3, 4, 5, 6]
    assert documents[2].kind == "SingularCurve"
    assert documents[2].exit_code == 2
    assert documents[3].kind == "InvalidJob"


def test_run_lines_point_off_curve():
    [document] = run_lines([json.dumps({"curve": MORDELL, "point": ["3", "6"], "place": "real"})])
    assert document.status == "error"
    assert document.kind == "PointNotOnCurve"


def test_run_batch(tmp_path):
    path = tmp_path / "jobs.jsonl"
    path.write_text(
        json.dumps({"curve": MORDELL, "point": ["3", "5"], "place": "p:2"})
        + "\n"
        + json.dumps({"curve": ["0", "0", "0", "0", "1"], "point": ["-1", "0"], "place": "real"})
        + "\n"
    )
    documents = list(run_batch(path))
    assert [d.status for d in documents] == ["ok", "ok"]
    assert documents[0].coefficient == "0"
    assert documents[1].lambda_ == pytest.approx(0.25 * math.log(3))


def test_run_batch_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert list(run_batch(path)) == []


def test_run_batch_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        list(run_batch(tmp_path / "missing.jsonl"))


def test_thousand_point_batch_runs_under_a_second():
    E = new_curve(*MORDELL)
    points = []
    for n in range(1, 5):
        Q = multiply(E, n, point(3, 5))
        points += [Q, negate(E, Q)]
    lines = [
        json.dumps({"curve": MORDELL, "point": [format_rational(Q.x), format_rational(Q.y)], "place": "real"})
        for Q in points
    ] * 125

    start = time.perf_counter()
    documents = list(run_lines(lines))
    elapsed = time.perf_counter() - start

    assert len(documents) == 1000
    assert all(d.status == "ok" for d in documents)
    assert elapsed < 1.0
