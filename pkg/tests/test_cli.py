import io
import json
import subprocess
import sys

import pytest

from kmsatake import cli
from kmsatake.satake import RouteMismatch
from kmsatake.series import series_from_json

from conftest import CONFIGS, datum


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def cfg(name):
    return str(CONFIGS / f"{name}.json")


def test_satake_a1_example():
    code, out, _ = run("satake", "--config", cfg("a1"), "--lambda", "1", "--depth", "2", "--q", "symbolic",
                       "--route", "both")
    assert code == 0
    assert out.strip() == "q·e^{(1)} + (q−1)·e^{(0)} + q·e^{(−1)}"


def test_mzero_a2_example():
    code, out, _ = run("mzero", "--config", cfg("a2"), "--depth", "4")
    assert code == 0 and out.strip() == "1"


def test_tables_check_example():
    code, out, _ = run("tables-check", "--nmax", "4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "tables-check: pass"


def test_json_round_trip():
    code, out, _ = run("satake", "--config", cfg("a2"), "--lambda", "1,1", "--depth", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1 and data["route"] == "closed"
    from kmsatake.satake import satake
    rd = datum("a2")
    assert series_from_json(rd, data["series"]) == satake(rd, (1, 1), 3).series


@pytest.mark.parametrize("argv", [
    ("inspect", "--config", cfg("affine_a1"), "--depth", "3"),
    ("hall-littlewood", "--config", cfg("a2"), "--lambda", "0,1", "--depth", "3"),
    ("character", "--config", cfg("a2"), "--lambda", "1,1", "--depth", "4", "--format", "json"),
    ("cherednik-check", "--config", cfg("affine_a1"), "--depth", "2", "--lv", "2"),
])
def test_deterministic_output(argv):
    first = run(*argv)
    assert first[0] == 0
    assert run(*argv) == first


def test_output_is_stable_across_processes():
    argv = ["satake", "--config", cfg("hyperbolic"), "--lambda", "1,1", "--depth", "3", "--format", "json"]
    outs = [subprocess.run([sys.executable, "-m", "kmsatake", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1]


def test_cherednik_pretty():
    code, out, _ = run("cherednik-check", "--config", cfg("hyperbolic"), "--depth", "2", "--lv", "1")
    assert code == 0
    assert out.splitlines()[0] == "v=e: pass"
    assert out.strip().endswith("pass")


def test_config_error_has_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"cartan": [[2, -1],\n [-1, 2]')
    code, _, err = run("inspect", "--config", str(bad))
    assert code == 2 and "line 2" in err


def test_config_field_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1, "cartan": [[2, 1], [1, 2]]}))
    code, _, err = run("inspect", "--config", str(bad))
    assert code == 2 and "cartan" in err


def test_unsupported_schema(tmp_path):
    bad = tmp_path / "v2.json"
    bad.write_text(json.dumps({"schema": 2, "cartan": [[2]]}))
    code, _, err = run("inspect", "--config", str(bad))
    assert code == 2 and "schema" in err


def test_element_cap_names_bound():
    code, _, err = run("mzero", "--config", cfg("hyperbolic"), "--depth", "6", "--element-cap", "5")
    assert code == 2 and "cap 5" in err


def test_bad_lambda():
    assert run("satake", "--config", cfg("a2"), "--lambda", "1,x")[0] == 2
    code, _, err = run("satake", "--config", cfg("a2"), "--lambda", "1")
    assert code == 2 and "2 coordinates" in err
    code, _, err = run("satake", "--config", cfg("a2"), "--lambda", "1,-1")
    assert code == 2 and "not dominant" in err


def test_bad_q_and_depth():
    assert run("satake", "--config", cfg("a1"), "--lambda", "1", "--q", "-2")[0] == 2
    assert run("satake", "--config", cfg("a1"), "--lambda", "1", "--q", "abc")[0] == 2
    assert run("satake", "--config", cfg("a1"), "--lambda", "1", "--depth", "-1")[0] == 2


def test_numeric_q():
    code, out, _ = run("satake", "--config", cfg("a1"), "--lambda", "1", "--q", "4")
    assert code == 0 and out.strip() == "4·e^{(1)} + 3·e^{(0)} + 4·e^{(−1)}"


def test_symbolic_prefactor():
    code, out, _ = run("satake", "--config", cfg("b2_auto"), "--lambda", "1,0", "--depth", "2")
    assert code == 0 and out.startswith("δ^(1/2)(λ)·[")


def test_route_mismatch_exit_code(monkeypatch):
    def boom(self, lam, route="both", q="symbolic"):
        raise RouteMismatch((0,), "1", "2")
    monkeypatch.setattr(cli.SatakeEngine, "satake", boom)
    code, _, err = run("satake", "--config", cfg("a1"), "--lambda", "1")
    assert code == 1 and "route mismatch" in err


def test_cache_hit(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    argv = ("satake", "--config", cfg("a1"), "--lambda", "1", "--depth", "2")
    first = run(*argv)
    files = list((tmp_path / "cache").iterdir())
    assert len(files) == 1

    def fail(job):
        raise AssertionError("cache was not used")
    monkeypatch.setattr(cli, "execute", fail)
    assert run(*argv) == first
    # a different depth is a different key
    with pytest.raises(AssertionError):
        run("satake", "--config", cfg("a1"), "--lambda", "1", "--depth", "3")


def test_unknown_command():
    assert run("frobnicate")[0] == 2
