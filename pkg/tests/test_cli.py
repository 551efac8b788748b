import json
import subprocess
import sys
from pathlib import Path

import pytest

from injdim.cli import InputError, main, parse_input, run
from injdim.render import parse_text, render_text, to_json

GOLDEN = Path(__file__).parent / "golden"
JOBS = sorted((GOLDEN / "jobs").glob("*.json"))


def cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "injdim", *args], input=stdin, capture_output=True, text=True)


class TestParseInput:
    def test_valid(self):
        job = parse_input({"algebra": {"kind": "truncated_ci", "p": 2, "exponents": [2, 2]}, "command": "resolve",
                           "target": {"kind": "trivial"}, "bound": 10})
        assert job.command == "resolve" and job.bound == 10 and job.format == "json"

    def test_missing_command(self):
        with pytest.raises(InputError) as exc:
            parse_input({"algebra": {"kind": "truncated_ci", "p": 2, "exponents": [2]}, "target": {"kind": "trivial"}})
        assert exc.value.path == "/command"

    def test_factor_not_power_of_p(self):
        with pytest.raises(InputError) as exc:
            parse_input({"algebra": {"kind": "group_algebra", "p": 2, "factors": [3]}, "command": "resolve",
                         "target": {"kind": "trivial"}})
        assert exc.value.path == "/algebra/factors/0" and "not a power" in exc.value.message

    def test_composite_characteristic(self):
        with pytest.raises(InputError) as exc:
            parse_input({"algebra": {"kind": "truncated_ci", "p": 4, "exponents": [2]}, "command": "ext",
                         "target": {"kind": "trivial"}})
        assert exc.value.path == "/algebra/p"

    def test_nested_target_error(self):
        with pytest.raises(InputError) as exc:
            parse_input({"algebra": {"kind": "truncated_ci", "p": 2, "exponents": [2]}, "command": "ext",
                         "target": {"kind": "sum", "summands": [{"kind": "free"}]}})
        assert exc.value.path == "/target/summands/0/rank"

    def test_bad_enum(self):
        with pytest.raises(InputError) as exc:
            parse_input({"command": "solve"})
        assert exc.value.path == "/command"

    def test_verify_needs_no_algebra(self):
        assert parse_input({"command": "verify", "count": 2}).count == 2

    def test_invalid_json_text(self):
        with pytest.raises(InputError) as exc:
            parse_input("{not json")
        assert exc.value.path == "/"

    def test_bad_module_actions_reported_at_target(self):
        job = parse_input({"algebra": {"kind": "truncated_ci", "p": 2, "exponents": [2]}, "command": "ext",
                           "target": {"kind": "module", "dim": 1, "actions": [[[1]], [[1]]]}})
        with pytest.raises(InputError) as exc:
            run(job)
        assert exc.value.path == "/target"


class TestRun:
    def test_resolve_betti_row(self):
        job = parse_input(json.loads((GOLDEN / "jobs" / "resolve_k_xy.json").read_text()))
        status, out = run(job)
        assert status == 0 and out["betti"] == list(range(1, 12))
        assert parse_text(render_text(out))["betti"] == [str(n) for n in range(1, 12)]

    def test_check_fid_free(self):
        status, out = run(parse_input(json.loads((GOLDEN / "jobs" / "checkfid_free.json").read_text())))
        assert status == 0
        assert out["verdict"] == "FINITE" and out["criterion"]["fired"] == "WINDOW(n=1)"
        assert out["oracle"]["text"] == "Finite(0)"

    def test_verify_small(self):
        status, out = run(parse_input({"command": "verify", "zoo": ["f2_x2"], "count": 5, "bound": 6}))
        assert status == 0 and out["violations"] == []
        assert render_text(out).endswith("0 violations\n")

    def test_koszul_operator_out_of_range(self):
        job = parse_input({"algebra": {"kind": "truncated_ci", "p": 2, "exponents": [2]}, "command": "koszul",
                           "target": {"kind": "trivial"}, "ops": [1]})
        with pytest.raises(InputError, match="out of range"):
            run(job)


@pytest.mark.parametrize("job", JOBS, ids=lambda p: p.stem)
class TestGolden:
    def test_json(self, job):
        status, out = run(parse_input(json.loads(job.read_text())))
        assert status == 0
        assert to_json(out) == (GOLDEN / f"{job.stem}.out.json").read_text()

    def test_text(self, job):
        _, out = run(parse_input(json.loads(job.read_text())))
        assert render_text(out) == (GOLDEN / f"{job.stem}.out.txt").read_text()

    def test_text_agrees_with_json(self, job):
        _, out = run(parse_input(json.loads(job.read_text())))
        rows = parse_text(render_text(out))
        data = json.loads(to_json(out))
        assert rows["command"] == [data["command"]]
        for key in ("betti", "ext_table", "ranks"):
            if key in data:
                label = {"ext_table": "ext", "ranks": "rank"}.get(key, key)
                assert rows[label] == [str(v) for v in data[key]]
        if "verdict" in data:
            assert rows["verdict"] == [data["verdict"]]
            assert rows["oracle"] == [data["oracle"]["text"]]
        if "pd" in data:
            assert rows["pd"] == [data["pd"]["text"]]


class TestMain:
    def test_exit_zero_and_byte_identical(self):
        job = str(GOLDEN / "jobs" / "checkfid_free.json")
        a, b = cli(job), cli(job)
        assert a.returncode == 0 and a.stdout == b.stdout
        assert a.stdout == (GOLDEN / "checkfid_free.out.json").read_text()

    def test_input_error_exit_one(self):
        r = cli("-", stdin=json.dumps({"algebra": {"kind": "group_algebra", "p": 2, "factors": [3]},
                                       "command": "resolve", "target": {"kind": "trivial"}}))
        assert r.returncode == 1 and "/algebra/factors/0" in r.stderr and r.stdout == ""

    def test_missing_file(self, tmp_path):
        assert main([str(tmp_path / "nope.json")]) == 1

    def test_flags_override_document(self, capsys):
        job = str(GOLDEN / "jobs" / "resolve_k_xy.json")
        assert main([job, "--bound", "3", "--format", "text"]) == 0
        rows = parse_text(capsys.readouterr().out)
        assert rows["betti"] == ["1", "2", "3", "4"] and rows["bound"] == ["3"]

    def test_verify_text(self, tmp_path, capsys):
        job = tmp_path / "verify.json"
        job.write_text(json.dumps({"command": "verify", "count": 4}))
        assert main([str(job), "--zoo", "f3_x3", "--bound", "6", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert out.endswith("0 violations\n") and parse_text(out)["targets"] == ["4"]
