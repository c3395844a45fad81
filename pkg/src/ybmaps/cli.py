"""Command-line front end: verification suites, chain simulation, Liouville
solutions and action checks. Reports are JSON {suite, residuals, tolerances, pass}."""

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import action, classical_lattice, classical_map, liouville, qdilog, quantum_lattice, quantum_rep
from .errors import YBError
from .numsupport import commutator, max_abs

EXIT_OK, EXIT_USAGE, EXIT_TOL = 0, 1, 2

# residual name -> tolerance; names not listed fall back to DEFAULT_TOL
TOLERANCES = {
    "classical": {
        "ybe": 1e-9,
        "symplectic_uv": 1e-6,
        "sklyanin": 1e-6,
        "symplectic_evolve": 1e-6,
        "im_brackets": 1e-6,
        "trace_drift": 1e-8,
        "casimir_drift": 1e-12,
    },
    "quantum": {},
    "qdilog": {
        "functional_equation": 1e-6,
        "inversion_phi": 1e-8,
        "inversion_aux_phi": 1e-8,
        "phi_left_limit": 1e-6,
        "w_symmetry": 1e-9,
        "fourier_duality": 1e-4,
        "recurrence_s1": 1e-5,
        "recurrence_s2": 1e-5,
        "recurrence_s1p": 1e-5,
        "recurrence_s2p": 1e-5,
        "quasiclassical_decreasing": 0.5,
        "three_leg": 1e-8,
    },
    "evolve": {"trace_drift": 1e-8, "casimir_drift": 1e-12, "z_drift": 1e-12},
    "liouville": {"liouville": 1e-12, "uv_relations": 1e-10, "uuuu": 1e-10, "map_consistency": 1e-10},
    "action": {"eom": 1e-10, "gradient": 1e-8},
}
DEFAULT_TOL = {"classical": 1e-10, "quantum": 1e-10, "qdilog": 1e-6, "evolve": 1e-8, "liouville": 1e-10, "action": 1e-8}
DIAGNOSTIC_SUFFIX = "_literal"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text):
    """'RE,IM' -> complex."""
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from exc


def parse_tol(text):
    name, _, val = text.partition("=")
    try:
        return name, float(val)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}") from exc


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("YB_SEED")
    if env is None:
        return 0
    try:
        val = int(env)
    except ValueError as exc:
        raise UsageError(f"YB_SEED must be an integer, got {env!r}") from exc
    if not 0 <= val < 2**64:
        raise UsageError("YB_SEED must be a 64-bit unsigned integer")
    return val


def build_report(suite, residuals, overrides=None, diagnostics=None, extra=None):
    table = TOLERANCES.get(suite, {})
    overrides = overrides or {}
    tols = {}
    failed = []
    clean = {}
    for name, val in residuals.items():
        val = float(val)
        clean[name] = val
        tol = overrides.get(name, table.get(name, DEFAULT_TOL.get(suite, 1e-10)))
        tols[name] = tol
        if not (val <= tol):
            failed.append(name)
    report = {"suite": suite, "residuals": clean, "tolerances": tols, "pass": not failed, "failed": failed}
    if diagnostics:
        report["diagnostics"] = {k: float(v) for k, v in diagnostics.items()}
    if extra:
        report.update(extra)
    return report


def split_diagnostics(res):
    main = {k: v for k, v in res.items() if not k.endswith(DIAGNOSTIC_SUFFIX)}
    diag = {k: v for k, v in res.items() if k.endswith(DIAGNOSTIC_SUFFIX)}
    return main, diag


def write_report(report, out, fmt):
    if fmt == "csv":
        rows = [["name", "value", "tolerance", "pass"]]
        for k, v in report["residuals"].items():
            tol = report["tolerances"][k]
            rows.append([k, repr(v), repr(tol), str(v <= tol)])
        text = "\n".join(",".join(r) for r in rows) + "\n"
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# -- suites -------------------------------------------------------------------


def classical_residuals(rng, trials, chain_sites=2, steps=20):
    res = dict(classical_map.identity_suite(rng, trials))
    res.update(classical_lattice.residual_suite(rng))
    state = classical_lattice.random_state(rng, chain_sites)
    res["symplectic_evolve"] = classical_lattice.evolve_symplectic_residual(state)
    res["im_brackets"] = float(np.max(np.abs(classical_lattice.im_brackets(state))))
    res.update(conservation_residuals(classical_lattice.evolve(state, steps)))
    return res


def conservation_residuals(states, lams=None):
    s0 = states[0]
    if lams is None:
        lams = conserved_lambdas()
    drift = 0.0
    for lam in lams:
        for which in ("t", "tbar"):
            t0 = classical_lattice.monodromy_trace(s0, lam, which)
            for st in states[1:]:
                t = classical_lattice.monodromy_trace(st, lam, which)
                drift = max(drift, abs(t - t0) / max(1.0, abs(t0)))
    c0 = s0.site_casimirs()
    cas = max((float(np.max(np.abs(st.site_casimirs() - c0))) for st in states[1:]), default=0.0)
    zd = max((max(abs(st.z1 - s0.z1), abs(st.z2 - s0.z2)) for st in states[1:]), default=0.0)
    return {"trace_drift": drift, "casimir_drift": cas, "z_drift": zd}


def conserved_lambdas(count=8):
    return [complex(np.exp(0.15 * k) * np.exp(0.4j * k)) for k in range(count)]


def quantum_residuals(spin, sites, lam_pairs=None):
    if lam_pairs is None:
        lam_pairs = [(1.1 + 0.2j, 0.7 - 0.3j), (0.8 + 0.5j, 1.3 - 0.1j), (1.5 - 0.4j, 0.6 + 0.6j),
                     (0.9 + 0.9j, 1.2 + 0.3j), (1.7 + 0.1j, 0.5 - 0.5j)]
    rep = quantum_rep.spin_rep(spin)
    res = {}
    res.update({f"map_{k}": v for k, v in quantum_rep.quantum_map_residual(rep).items()})
    res.update({f"rll_{k}": v for k, v in quantum_rep.rll_ybe_residual(rep, lam_pairs).items()})
    res.update({f"hopf_{k}": v for k, v in quantum_rep.hopf_residual_suite(rep).items()})
    if sites:
        space = quantum_lattice.chain_space(sites, spin)
        res.update({f"chain_{k}": v for k, v in quantum_lattice.im_operators(space).residuals.items()})
        res.update({f"chain_{k}": v for k, v in quantum_lattice.evolution_invariance(space).items()})
        res["chain_transfer_commute"] = transfer_commutators(space)
    return res


def transfer_commutators(space, lams=(1.1 + 0.3j, 0.7 - 0.5j, 1.9 + 0.1j)):
    mats = []
    for lam in lams:
        mats.append(quantum_lattice.transfer_matrix(space, lam, "T"))
        mats.append(quantum_lattice.transfer_matrix(space, lam, "Tbar"))
    return max(max_abs(commutator(a, b)) for a in mats for b in mats)


# -- subcommand handlers ------------------------------------------------------


def _parts(c):
    c = complex(c)
    return repr(c.real), repr(c.imag)


def _cmd_check(args, seed):
    rng = np.random.default_rng(seed)
    diag = None
    if args.suite == "classical":
        res = classical_residuals(rng, args.trials)
    elif args.suite == "quantum":
        res, diag = split_diagnostics(quantum_residuals(Fraction(args.spin), args.sites))
    else:
        res = qdilog.residual_suite(rng)
    return build_report(args.suite, res, dict(args.tol), diag, {"seed": seed})


def _state_for_evolve(args, rng):
    if args.sites % 2:
        raise UsageError("--sites must be even (2N)")
    N = args.sites // 2
    if args.state:
        state = classical_lattice.ChainState.from_json(Path(args.state).read_text())
        if state.N != N:
            raise UsageError(f"state has {2 * state.N} sites, --sites says {args.sites}")
        return state
    return classical_lattice.random_state(rng, N, args.z1, args.z2)


def _cmd_evolve(args, seed):
    rng = np.random.default_rng(seed)
    state = _state_for_evolve(args, rng)
    states = classical_lattice.evolve(state, args.steps)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "states.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "site", "re_u", "im_u", "re_v", "im_v"])
        for t, st in enumerate(states):
            for i in range(2 * st.N):
                w.writerow([t, i + 1, *_parts(st.u[i]), *_parts(st.v[i])])
    lams = conserved_lambdas()
    with open(out_dir / "conserved.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "lambda_index", "re_t", "im_t", "re_tbar", "im_tbar"])
        for t, st in enumerate(states):
            for k, lam in enumerate(lams):
                a = classical_lattice.monodromy_trace(st, lam, "t")
                b = classical_lattice.monodromy_trace(st, lam, "tbar")
                w.writerow([t, k, *_parts(a), *_parts(b)])
    (out_dir / "final_state.json").write_text(json.dumps(states[-1].to_json(), indent=2) + "\n")
    res = conservation_residuals(states, lams)
    return build_report("evolve", res, dict(args.tol), extra={"seed": seed, "steps": args.steps})


def _liouville_params(args, rng):
    if args.params:
        data = json.loads(Path(args.params).read_text())
        c = lambda a: np.array([complex(*p) for p in a])  # noqa: E731
        return c(data["alpha"]), c(data["beta"]), c(data["phi"]), c(data["gamma"])
    return liouville.random_params(rng, args.n1, args.n2)


def _liouville_checks(field, z1, z2):
    lat = liouville.uv_from_tau(field, z1, z2)
    return {
        "liouville": liouville.liouville_residual(field),
        "uv_relations": max(liouville.hamiltonian_residuals(lat).values()),
        "uuuu": liouville.uuuu_residual(lat),
        "map_consistency": liouville.map_consistency_residual(lat),
    }


def _cmd_liouville(args, seed):
    rng = np.random.default_rng(seed)
    path = Path(args.field)
    if args.action == "build":
        field = liouville.build_tau(*_liouville_params(args, rng), args.n1, args.n2)
        path.write_text(json.dumps(field.to_json()) + "\n")
    else:
        if not path.exists():
            raise UsageError(f"no tau field at {path}; run 'liouville build' first")
        field = liouville.TauField.from_json(path.read_text())
        if (field.N1, field.N2) != (args.n1, args.n2):
            raise UsageError(f"field is {field.N1}x{field.N2}, flags say {args.n1}x{args.n2}")
    res = _liouville_checks(field, args.z1, args.z2)
    return build_report("liouville", res, dict(args.tol), extra={"seed": seed, "field": str(path)})


def _cmd_action(args, seed):
    field, params = action.SigmaField.from_json(Path(args.field).read_text())
    if params is None:
        raise UsageError("field file must carry 'params' (a1, a2, b1, b2)")
    _, grad = action.action_and_gradient(field, params)
    b = np.where(np.arange(field.K) % 2 == 0, params.b1, params.b2)[:, None]
    v = np.exp(field.sigma - b)
    res = {
        "gradient": float(np.max(np.abs(grad))) if grad.size else 0.0,
        "eom": action.eom_residual(v, params.z1, params.z2, field.periodic),
    }
    return build_report("action", res, dict(args.tol), extra={"windings": action.branch_windings(field, params).tolist()})


def make_parser():
    p = _Parser(prog="ybmaps", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $YB_SEED, then 0)")
    common.add_argument("--out", default="-", help="report path, '-' for stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=parse_tol, action="append", default=[], metavar="NAME=VALUE")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    chk = sub.add_parser("check", parents=[common], help="run a verification suite")
    chk.add_argument("suite", choices=("classical", "quantum", "qdilog"))
    chk.add_argument("--trials", type=int, default=100)
    chk.add_argument("--spin", default="1/2")
    chk.add_argument("--sites", type=int, default=2)

    ev = sub.add_parser("evolve", parents=[common], help="simulate the classical chain")
    ev.add_argument("--sites", type=int, required=True, help="number of sites 2N")
    ev.add_argument("--steps", type=int, required=True)
    ev.add_argument("--z1", type=parse_complex, default=complex(1.2, 0.3))
    ev.add_argument("--z2", type=parse_complex, default=complex(0.8, -0.2))
    ev.add_argument("--state", default=None, help="initial state JSON")
    ev.add_argument("--out-dir", default=".", help="directory for CSV output")

    lv = sub.add_parser("liouville", parents=[common], help="build or verify a tau-function solution")
    lv.add_argument("action", choices=("build", "verify"))
    lv.add_argument("--n1", type=int, required=True)
    lv.add_argument("--n2", type=int, required=True)
    lv.add_argument("--params", default=None, help="JSON with alpha, beta, phi, gamma as [re, im] lists")
    lv.add_argument("--field", default="tau.json", help="tau field file written by build, read by verify")
    lv.add_argument("--z1", type=parse_complex, default=complex(1.3, 0.4))
    lv.add_argument("--z2", type=parse_complex, default=complex(-0.7, 0.9))

    ac = sub.add_parser("action", parents=[common], help="check stationarity of a field")
    ac.add_argument("action", choices=("verify",))
    ac.add_argument("--field", required=True)
    return p


HANDLERS = {"check": _cmd_check, "evolve": _cmd_evolve, "liouville": _cmd_liouville, "action": _cmd_action}


def run_command(argv):
    try:
        args = make_parser().parse_args(argv)
        if getattr(args, "trials", 1) < 1 or getattr(args, "steps", 0) < 0:
            raise UsageError("trials must be positive and steps non-negative")
        if args.command == "check" and args.suite == "quantum":
            try:
                Fraction(args.spin)
            except ValueError as exc:
                raise UsageError(f"bad --spin {args.spin!r}") from exc
        seed = resolve_seed(args.seed)
        report = HANDLERS[args.command](args, seed)
    except UsageError as exc:
        print(f"ybmaps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError, YBError, ValueError) as exc:
        print(f"ybmaps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_report(report, args.out, args.format)
    if not report["pass"]:
        print("ybmaps: residuals over tolerance: " + ", ".join(report["failed"]), file=sys.stderr)
        return EXIT_TOL
    return EXIT_OK


def main():
    sys.exit(run_command(sys.argv[1:]))
