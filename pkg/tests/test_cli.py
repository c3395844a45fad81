import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ybmaps.action import LagrangianParams, SigmaField
from ybmaps.cli import parse_complex, resolve_seed, run_command
from ybmaps.classical_lattice import ChainState, random_state
from ybmaps.liouville import TauField, build_tau, random_params, saw_block, uv_from_tau


def _run(argv, tmp_path):
    out = tmp_path / "report.json"
    code = run_command([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_check_classical_example(tmp_path):
    code, rep = _run(["check", "classical", "--trials", "10", "--seed", "7"], tmp_path)
    assert code == 0 and rep["pass"]
    assert rep["suite"] == "classical"
    for key in ("ybe", "symplectic_uv", "hexagon"):
        assert any(k.startswith(key) for k in rep["residuals"]), key
    assert set(rep["tolerances"]) >= set(rep["residuals"])


def test_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_command(["check", "classical", "--trials", "5", "--seed", "3", "--out", str(a)]) == 0
    assert run_command(["check", "classical", "--trials", "5", "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("YB_SEED", "11")
    assert resolve_seed(None) == 11
    assert resolve_seed(4) == 4
    monkeypatch.delenv("YB_SEED")
    assert resolve_seed(None) == 0


def test_tolerance_failure_exit_2(tmp_path):
    code, rep = _run(["check", "classical", "--trials", "3", "--tol", "ybe=0"], tmp_path)
    assert code == 2 and rep is not None
    assert not rep["pass"] and "ybe" in rep["failed"]
    assert rep["tolerances"]["ybe"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["check", "nothing"],
        ["evolve", "--sites", "3", "--steps", "1"],
        ["evolve", "--sites", "4", "--steps", "1", "--z1", "1.0"],
        ["check", "classical", "--tol", "ybe"],
        ["liouville", "verify", "--n1", "2", "--n2", "2", "--field", "missing.json"],
        ["action", "verify", "--field", "missing.json"],
    ],
)
def test_usage_errors_exit_1(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run_command(argv) == 1


def test_check_quantum(tmp_path):
    code, rep = _run(["check", "quantum", "--spin", "1/2", "--sites", "2"], tmp_path)
    assert code == 0, rep["failed"]
    assert "map_K1" in rep["residuals"] and "chain_transfer_commute" in rep["residuals"]
    assert all(k.endswith("_literal") for k in rep["diagnostics"])


def test_check_qdilog(tmp_path):
    code, rep = _run(["check", "qdilog", "--seed", "1"], tmp_path)
    assert code == 0, rep["failed"]
    assert rep["residuals"]["quasiclassical_decreasing"] == 0


def test_csv_report(tmp_path):
    out = tmp_path / "r.csv"
    assert run_command(["check", "classical", "--trials", "2", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][:2] == ["name", "value"]


def test_evolve_zero_steps_is_noop(tmp_path, rng):
    st = random_state(rng, 2, 1.2 + 0.3j, 0.8 - 0.2j)
    sp = tmp_path / "state.json"
    sp.write_text(json.dumps(st.to_json()))
    code, rep = _run(["evolve", "--sites", "4", "--steps", "0", "--state", str(sp), "--out-dir", str(tmp_path)], tmp_path)
    assert code == 0
    final = ChainState.from_json((tmp_path / "final_state.json").read_text())
    assert np.array_equal(final.u, st.u) and np.array_equal(final.v, st.v)


def test_evolve_outputs(tmp_path):
    code, rep = _run(["evolve", "--sites", "4", "--steps", "5", "--seed", "2", "--out-dir", str(tmp_path)], tmp_path)
    assert code == 0 and rep["pass"]
    states = list(csv.reader((tmp_path / "states.csv").open()))
    assert states[0] == ["t", "site", "re_u", "im_u", "re_v", "im_v"] and len(states) == 1 + 6 * 4
    cons = list(csv.reader((tmp_path / "conserved.csv").open()))
    assert cons[0][:4] == ["t", "lambda_index", "re_t", "im_t"]


def test_liouville_build_then_verify(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, rep = _run(["liouville", "build", "--n1", "8", "--n2", "8"], tmp_path)
    assert code == 0 and (tmp_path / "tau.json").exists()
    code, rep = _run(["liouville", "verify", "--n1", "8", "--n2", "8"], tmp_path)
    assert code == 0 and rep["residuals"]["liouville"] < 1e-12
    assert run_command(["liouville", "verify", "--n1", "7", "--n2", "8"]) == 1


def test_liouville_params_file(tmp_path):
    a, b, p, g = random_params(np.random.default_rng(5), 4, 4)
    enc = lambda x: [[c.real, c.imag] for c in x]  # noqa: E731
    pf = tmp_path / "params.json"
    pf.write_text(json.dumps({"alpha": enc(a), "beta": enc(b), "phi": enc(p), "gamma": enc(g)}))
    field = tmp_path / "t.json"
    code, _ = _run(["liouville", "build", "--n1", "4", "--n2", "4", "--params", str(pf), "--field", str(field)], tmp_path)
    assert code == 0
    got = TauField.from_json(field.read_text())
    assert np.array_equal(got.tau, build_tau(a, b, p, g, 4, 4).tau)


def test_action_verify(tmp_path, rng):
    z1, z2 = 1.3 + 0.4j, -0.7 + 0.9j
    f = build_tau(*random_params(rng, 14, 14), 14, 14)
    v, _ = saw_block(uv_from_tau(f, z1, z2), 3, 5)
    p = LagrangianParams.from_z(z1, z2)
    fp = tmp_path / "field.json"
    fp.write_text(json.dumps(SigmaField.from_v(v, p, periodic=False).to_json(p)))
    code, rep = _run(["action", "verify", "--field", str(fp)], tmp_path)
    assert code == 0, rep
    assert rep["residuals"]["gradient"] < 1e-8 and "windings" in rep


def test_parse_complex():
    assert parse_complex("1.5,-2") == 1.5 - 2j


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ybmaps", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "check" in out.stdout
