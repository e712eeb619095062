import csv
import json
import math
import subprocess
import sys

import pytest

from expsum_kit import bounds as bnd
from expsum_kit.cli import (ConfigError, RunConfig, flags_to_str, main, run,
                            tables_for)


def _read_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "# expsum-kit v1"
    return list(csv.DictReader(lines[1:]))


def test_sweep_deterministic_bytes(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        cfg = RunConfig(command="sweep", x=2000, q_range=(1, 6),
                        output=str(out), seed=3)
        assert run(cfg) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_workers_same_rows(tmp_path):
    out1, out2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
    run(RunConfig(command="sweep", x=2000, q_range=(1, 6), output=str(out1)))
    run(RunConfig(command="sweep", x=2000, q_range=(1, 6), output=str(out2),
                  workers=2))
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_flags_consistent_with_reevaluation(tmp_path):
    out = tmp_path / "s.csv"
    run(RunConfig(command="sweep", x=2000, q_range=(1, 8), output=str(out),
                  delta_list=(0.0, 6.0)))
    for row in _read_csv(out):
        q = int(row["q"])
        delta0 = float(row["delta0"])
        pc = bnd.choose_params(2000.0, q, delta0, 1.0 / 15.0)
        assert row["flags"] == flags_to_str(pc.condition_flags)
        assert row["all_flags"] == str(int(all(pc.condition_flags.values())))
        assert delta0 == max(1.0, abs(float(row["delta"])) / 4.0)


def test_sweep_emits_both_functions_per_pair(tmp_path):
    out = tmp_path / "s.csv"
    run(RunConfig(command="sweep", x=2000, q_range=(1, 5), output=str(out)))
    rows = _read_csv(out)
    pairs = {(r["function"], r["q"], r["a"]) for r in rows}
    phis = sum(1 if q == 1 else len([a for a in range(1, q) if math.gcd(a, q) == 1])
               for q in range(1, 6))
    assert len(rows) == 2 * phis
    assert len(pairs) == len(rows)


def test_sweep_sample_mode(tmp_path):
    out = tmp_path / "s.csv"
    run(RunConfig(command="sweep", x=2000, q_range=(97, 97), output=str(out),
                  a_mode="sample:4", seed=11))
    rows = _read_csv(out)
    assert len(rows) == 2 * 4


def test_compare_residual_within_budget(tmp_path):
    out = tmp_path / "c.csv"
    code = run(RunConfig(command="compare", x=2000, q_range=(3, 3),
                         a_mode="sample:1", output=str(out),
                         weight_overrides=(5.0, 20.0, 4.0, 10.0)))
    assert code == 0
    rows = _read_csv(out)
    by_fn = {}
    for r in rows:
        by_fn.setdefault(r["function"], {})[r["component"]] = complex(
            float(r["re"]), float(r["im"]))
    for fn, comps in by_fn.items():
        combined = comps["I1"] - comps["I2"] + comps["II"] + comps["tail"]
        assert abs(comps["direct"] - combined) < 1e-9 * 2000


def test_bound_command_json(tmp_path):
    out = tmp_path / "b.json"
    code = run(RunConfig(command="bound", x=10**6, q_range=(2, 2),
                         output=str(out), format="json"))
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["q"] == 2 and "bound_mangoldt" in payload
    assert payload["config"]["command"] == "bound"


def test_verify_identity_command(tmp_path):
    out = tmp_path / "v.json"
    code = run(RunConfig(command="verify-identity", x=300, q_range=(1, 1),
                         weight_overrides=(2.0, 4.0, 3.0, 5.0),
                         output=str(out), format="json"))
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["mangoldt"]["max_abs_residual"] < 1e-25
    assert payload["mobius"]["max_abs_residual"] < 1e-25


def test_config_errors():
    with pytest.raises(ConfigError):
        run(RunConfig(command="sweep", x=50))
    with pytest.raises(ConfigError):
        run(RunConfig(command="sweep", eta=0.5))
    with pytest.raises(ConfigError):
        run(RunConfig(command="sweep", a_mode="sample:zero"))
    with pytest.raises(ConfigError):
        run(RunConfig(command="nope"))


def test_degenerate_derived_weights_is_config_error(tmp_path):
    # at x = 400, q = 2 the canonical R drops below 1
    with pytest.raises(ConfigError, match="degenerate"):
        run(RunConfig(command="compare", x=400, q_range=(2, 2),
                      a_mode="sample:1", output=str(tmp_path / "c.csv")))


def test_main_exit_codes(tmp_path):
    out = tmp_path / "b.json"
    assert main(["bound", "--x", "1000000", "--q-range", "3", "3",
                 "-o", str(out)]) == 0
    assert main(["bound", "--x", "50", "-o", str(out)]) == 2


def test_cli_subprocess_smoke(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "expsum_kit.cli", "sweep", "--x", "1000",
         "--q-range", "1", "3", "-o", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_table_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("EXPSUM_KIT_CACHE", str(tmp_path / "cache"))
    t1 = tables_for(500)
    assert (tmp_path / "cache" / "arith_500.npz").exists()
    t2 = tables_for(500)
    assert (t1.mobius == t2.mobius).all()
    assert (t1.primes == t2.primes).all()
