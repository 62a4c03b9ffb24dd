import json
import re
from pathlib import Path

import pytest

from conftest import build_reference_ward
from rosterly import io as sio
from rosterly.cli import EXIT_ERROR, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, main

SUMMARY = re.compile(
    r"^status=(\S+) objective=(\S+) slack=(\S+) hires=(\d+) time_s=\d+\.\d{3}$",
    re.M,
)


@pytest.fixture
def fileset(tmp_path, reference_ward):
    return sio.export_instance(reference_ward, tmp_path / "inst")


def _flags(fs):
    return [
        "--nurses", str(fs.nurses),
        "--shifts", str(fs.shifts),
        "--demand", str(fs.demand),
        "--config", str(fs.config),
    ]


def test_validate_ok(fileset, capsys):
    assert main(["validate", *_flags(fileset)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "status=ok" in out


def test_validate_reports_errors_and_exits_1(fileset, capsys):
    cfg = json.loads(Path(fileset.config).read_text())
    cfg["big_m"] = 0.5  # dominated by every weight
    Path(fileset.config).write_text(json.dumps(cfg))
    assert main(["validate", *_flags(fileset)]) == EXIT_ERROR
    captured = capsys.readouterr()
    assert "status=invalid" in captured.out
    assert "big-m" in captured.err


def test_solve_writes_artifacts_and_summary(fileset, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["solve", *_flags(fileset), "--out", str(out)]) == EXIT_OK
    captured = capsys.readouterr()
    m = SUMMARY.search(captured.out)
    assert m and m.group(1) == "optimal"
    assert float(m.group(2)) == pytest.approx(1_000_002.0)
    assert m.group(3) == "1"
    assert (out / "roster.json").exists()
    assert (out / "kpis.json").exists()
    assert (out / "understaffing.json").exists()
    assert (out / "sheets" / "summary.csv").exists()
    assert "nodes=" in captured.err


def test_missing_file_exits_1(fileset, tmp_path, capsys):
    args = _flags(fileset)
    args[1] = str(tmp_path / "nope.csv")
    assert main(["solve", *args, "--out", str(tmp_path / "o")]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_malformed_csv_exits_1_with_location(fileset, tmp_path, capsys):
    Path(fileset.demand).write_text("day_label,patients\nd1,many\nd2,4\n")
    assert main(["solve", *_flags(fileset), "--out", str(tmp_path / "o")]) \
        == EXIT_ERROR
    assert "demand:1" in capsys.readouterr().err


def test_usage_error_exits_64(capsys):
    assert main(["solve", "--nurses", "x.csv"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_staff_plan_accepts_one_hire(fileset, tmp_path, capsys):
    out = tmp_path / "plan"
    assert main(["staff-plan", *_flags(fileset), "--out", str(out)]) == EXIT_OK
    captured = capsys.readouterr()
    m = SUMMARY.search(captured.out)
    assert m.group(4) == "1"
    assert float(m.group(2)) == pytest.approx(2.0)
    doc = json.loads((out / "hiring_plan.json").read_text())
    assert doc["hires_accepted"] == 1
    assert doc["stop_reason"] == "improvement-below-c"


def test_hire_cost_override_blocks_hiring(fileset, tmp_path, capsys):
    out = tmp_path / "plan"
    rc = main(
        ["staff-plan", *_flags(fileset), "--hire-cost", "1e9",
         "--out", str(out)]
    )
    assert rc == EXIT_OK
    assert SUMMARY.search(capsys.readouterr().out).group(4) == "0"


def test_kpi_roundtrip_through_stored_roster(fileset, tmp_path, capsys):
    out = tmp_path / "run"
    main(["solve", *_flags(fileset), "--out", str(out)])
    capsys.readouterr()
    rc = main(
        ["kpi", *_flags(fileset), "--roster", str(out / "roster.json")]
    )
    assert rc == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "kpi-report"
    assert doc["total_slack_units"] == 1


def test_kpi_rejects_roster_for_other_instance(fileset, tmp_path, capsys):
    out = tmp_path / "run"
    main(["solve", *_flags(fileset), "--out", str(out)])
    capsys.readouterr()
    rc = main(
        ["kpi", *_flags(fileset), "--p1", "2.5",
         "--roster", str(out / "roster.json")]
    )
    assert rc == EXIT_ERROR
    assert "fingerprint" in capsys.readouterr().err


def test_export_rederives_sheets(fileset, tmp_path, capsys):
    out = tmp_path / "run"
    main(["solve", *_flags(fileset), "--out", str(out)])
    out2 = tmp_path / "re"
    rc = main(
        ["export", *_flags(fileset), "--roster", str(out / "roster.json"),
         "--out", str(out2)]
    )
    assert rc == EXIT_OK
    assert (out2 / "sheets" / "n1.csv").read_bytes() == \
        (out / "sheets" / "n1.csv").read_bytes()


def test_solve_exit_2_on_budget_exhaustion(tmp_path, capsys):
    # A ward whose relaxation is fractional at the root, given no time
    # to branch.
    import random

    from conftest import random_guarded_instance

    inst = random_guarded_instance(random.Random(0))
    fs = sio.export_instance(inst, tmp_path / "big")
    rc = main(
        ["solve", *_flags(fs), "--time-limit", "0", "--out",
         str(tmp_path / "o")]
    )
    captured = capsys.readouterr()
    assert rc == EXIT_LIMIT
    assert SUMMARY.search(captured.out).group(1) in ("feasible", "limit_reached")
    assert "budget exhausted" in captured.err
