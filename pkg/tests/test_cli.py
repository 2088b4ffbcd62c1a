import io
import json
import subprocess
import sys

import pytest

from nicolas_lab import primes
from nicolas_lab.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _reset_cache_setting():
    yield
    primes.configure(cache_path=None)


def test_primes():
    code, out, err = call("primes", "--limit", "30")
    assert code == 0
    assert out.split() == ["2", "3", "5", "7", "11", "13", "17", "19", "23", "29"]
    assert err.startswith("# nicolas-lab")
    code, out, _ = call("primes", "--limit", "10", "--format", "json")
    assert json.loads(out) == [2, 3, 5, 7]


def test_table_at_two():
    code, out, _ = call("table", "--x", "2", "--format", "json", "--tail-limit", "100000")
    row = json.loads(out)[0]
    assert code == 0
    assert row["theta"] == pytest.approx(0.6931471805599453)
    assert row["S"] == 0.5


def test_nicolas_at_10():
    code, out, _ = call("nicolas", "--x", "10", "--exact", "--format", "json", "--tail-limit", "100000")
    rec = json.loads(out)
    assert code == 0
    assert rec["holds"] is True
    assert rec["margin"] == pytest.approx(0.381949305047, abs=1e-12)
    assert rec["exact_agrees"] is True


def test_error_term():
    code, out, _ = call("error-term", "--x", "1000", "--tail-limit", "1000000", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["contains"] is True


def test_scan_to_file(tmp_path):
    path = tmp_path / "s.csv"
    code, out, _ = call("scan", "--from", "10", "--to", "100", "--out", str(path), "--tail-limit", "100000")
    assert code == 0 and out == ""
    assert len(path.read_text().splitlines()) == 23


def test_scan_grids():
    code, out, _ = call("scan", "--from", "10", "--to", "100000", "--grid", "geometric:10",
                        "--tail-limit", "1000000")
    assert code == 0 and len(out.splitlines()) == 6
    code, out, _ = call("scan", "--from", "10", "--to", "1000", "--grid", "list:10,500,1000",
                        "--format", "json", "--tail-limit", "100000")
    assert [r["x"] for r in json.loads(out)] == [10, 500, 1000]


def test_byte_identical_runs_and_threads():
    args = ("scan", "--from", "1000", "--to", "50000", "--tail-limit", "1000000")
    a = call(*args)[1]
    b = call(*args)[1]
    c = call(*args, "--threads", "4")[1]
    assert a == b == c


def test_exit_usage():
    assert call()[0] == 2
    assert call("bogus")[0] == 2
    assert call("primes")[0] == 2
    assert call("primes", "--limit", "1")[0] == 2
    assert call("nicolas", "--x", "2")[0] == 2
    assert call("nicolas", "--x", "60", "--exact")[0] == 2
    assert call("scan", "--from", "10", "--to", "100", "--grid", "weird")[0] == 2


def test_exit_resource():
    assert call("primes", "--limit", str(2**40))[0] == 3
    assert call("scan", "--from", "10", "--to", str(2**40))[0] == 3
    assert call("error-term", "--x", "10", "--tail-limit", str(2**40))[0] == 3


def test_exit_failure(monkeypatch):
    from nicolas_lab import cli
    from nicolas_lab.scanner import Verdict
    monkeypatch.setattr(cli, "reproduce_paper", lambda L: [Verdict("forced", False, 1.0)])
    code, out, err = call("reproduce", "--prime-limit", "1000000")
    assert code == 1
    assert "forced,FAIL" in out
    assert "FAILED: forced" in err


def test_env_cache_overrides(tmp_path, monkeypatch):
    env_path = tmp_path / "env.bin"
    flag_path = tmp_path / "flag.bin"
    monkeypatch.setenv("NICOLAS_LAB_CACHE", str(env_path))
    code, _, _ = call("primes", "--limit", "1000", "--cache", str(flag_path))
    assert code == 0
    assert primes.default_cache() == env_path


def test_error_term_domain():
    assert call("error-term", "--x", "100", "--tail-limit", "50")[0] == 2


def test_help_exit_zero():
    assert call("--help")[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nicolas_lab", "primes", "--limit", "10"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.split() == ["2", "3", "5", "7"]
