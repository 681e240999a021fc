"""Command-line front end.

Subcommands: ``teleport``, ``match``, ``bell``, ``oracle-check``, ``example``.
Global flags (before or after the subcommand): ``--seed``, ``--json``, ``--tol``.

Exit codes:
    0 success
    1 input error (malformed file, bad arguments)
    2 zero-probability outcome
    3 dimension mismatch
    4 singular shared state
    5 oracle mismatch
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import oracle
from .antilinear import (
    AntilinearOp,
    is_maximally_entangled,
    measurement_state_from_op,
    op_from_measurement_state,
    op_from_state,
    state_from_op,
)
from .errors import (
    DimensionMismatch,
    NonUnitaryArgument,
    NotMatching,
    SingularSharedState,
    ZeroProbabilityOutcome,
)
from .linalg import (
    DensityOperator,
    density_fidelity,
    derive_seed,
    fidelity,
    random_pure_state,
    random_unitary,
)
from .matching import is_matching, matching_orbit_check, matching_outcome, schmidt_example
from .serialize import StateFileError, dumps, load, write_files
from .teleport import bell_basis, teleport_density, teleport_pure

DEFAULT_SEED = 20011019
DEFAULT_TOL = 1e-9
# --alphas takes rounded decimals; renormalize when this close to unit norm
ALPHA_NORM_TOL = 1e-3

EXIT_OK, EXIT_INPUT, EXIT_ZERO_PROB, EXIT_DIM, EXIT_SINGULAR, EXIT_ORACLE = range(6)

_PROB_KEYS = {"probability", "success_probability"}


class InputError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _pairs(a) -> list:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in a]
    return [_pairs(r) for r in a]


def _prob(p: float) -> float:
    return float(f"{p:.12g}")


def _load(path: str, allowed: tuple[str, ...]):
    try:
        obj, kind, digest = load(path)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    if kind not in allowed:
        raise InputError(f"{path}: kind {kind!r} not accepted here (expected one of {allowed})")
    return obj, kind, digest


def _as_shared(obj, kind) -> AntilinearOp:
    return obj if kind == "antilinear_op" else op_from_state(obj)


def _as_outcome(obj, kind) -> AntilinearOp:
    return obj if kind == "antilinear_op" else op_from_measurement_state(obj)


def _parse_alphas(text: str) -> np.ndarray:
    try:
        vals = [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse --alphas {text!r}: {exc}") from exc
    a = np.array(vals, dtype=np.complex128)
    if a.size == 0 or np.any(np.abs(a) <= 1e-12):
        raise InputError("Schmidt coefficients must be non-zero")
    norm_sq = float(np.sum(np.abs(a) ** 2))
    if abs(norm_sq - 1.0) > ALPHA_NORM_TOL:
        raise InputError(f"Schmidt coefficients are not normalized (sum |a|^2 = {norm_sq:.6g})")
    return a / np.sqrt(norm_sq)


def _oracle_block(p_delta: float, f_defect: float, tol: float) -> dict:
    return {
        "probability_delta": p_delta,
        "fidelity_defect": f_defect,
        "tol": tol,
        "passed": bool(p_delta < tol and f_defect < tol),
    }


# ---------------------------------------------------------------- commands


def cmd_teleport(args) -> tuple[dict, int]:
    shared_obj, sk, sd = _load(args.shared, ("antilinear_op", "pure_state"))
    out_obj, ok, od = _load(args.outcome, ("antilinear_op", "pure_state"))
    in_obj, ik, idg = _load(args.input, ("pure_state", "density_operator"))
    shared = _as_shared(shared_obj, sk)
    outcome = _as_outcome(out_obj, ok)
    if not (shared.is_square and outcome.matrix.shape == shared.matrix.shape and in_obj.dim == shared.dim_in):
        raise DimensionMismatch(
            f"shared {shared.matrix.shape}, outcome {outcome.matrix.shape}, input dim {in_obj.dim}"
        )
    iso = None
    if args.iso:
        iso, _, _ = _load(args.iso, ("unitary",))

    try:
        matching, recovery = is_matching(shared, outcome, i_ac=iso)
    except SingularSharedState:
        matching, recovery = False, None
    use = recovery if (args.recover and matching) else None

    if ik == "pure_state":
        rep = teleport_pure(shared, outcome, in_obj, recovery=use, i_ac=iso)
        output = _pairs(rep.output_state.amplitudes)
    else:
        rep = teleport_density(shared, outcome, in_obj, recovery=use, i_ac=iso)
        output = _pairs(rep.output_state.matrix)

    report = {
        "command": "teleport",
        "inputs": {"shared": sd, "outcome": od, "input": idg},
        "probability": _prob(rep.probability),
        "fidelity_raw": rep.fidelity_raw,
        "fidelity_corrected": rep.fidelity_corrected,
        "linear": rep.linear,
        "reversible": rep.reversible,
        "matching": matching,
        "recovery_unitary": _pairs(recovery) if recovery is not None else None,
        "output_state": output,
        "oracle": None,
    }
    code = EXIT_OK
    if args.oracle:
        shared_state = state_from_op(shared)
        sigma_q = measurement_state_from_op(outcome)
        if ik == "pure_state":
            res = oracle.simulate_outcome(shared_state, sigma_q, in_obj)
            p_oracle = res.probability
            defect = 1.0 - fidelity(res.conditional_state, rep.output_state)
        else:
            p_oracle, rho = oracle.simulate_mixture(shared_state, sigma_q, in_obj)
            rho = DensityOperator.from_matrix(rho, normalize=True)
            defect = 1.0 - density_fidelity(rho, rep.output_state)
        block = _oracle_block(abs(p_oracle - rep.probability), defect, args.tol)
        block["probability"] = _prob(p_oracle)
        report["oracle"] = block
        if not block["passed"]:
            code = EXIT_ORACLE
    return report, code


def cmd_match(args) -> tuple[dict, int]:
    shared_obj, sk, sd = _load(args.shared, ("antilinear_op", "pure_state"))
    shared = _as_shared(shared_obj, sk)
    if not shared.is_square:
        raise DimensionMismatch("matching needs equal dimensions on B and C")
    n = shared.dim_in
    iso = None
    if args.iso:
        iso, _, _ = _load(args.iso, ("unitary",))
    fixed_u = None
    if args.unitary:
        fixed_u, _, _ = _load(args.unitary, ("unitary",))
    if args.count < 1:
        raise InputError("--count must be at least 1")

    results = []
    for k in range(args.count):
        if args.random_unitary:
            u = random_unitary(n, derive_seed(args.seed, k))
        else:
            u = fixed_u
        results.append(matching_outcome(shared, u, iso))

    out_dir = Path(args.out)
    files = {}
    entries = []
    for k, res in enumerate(results):
        member, _ = is_matching(shared, res.outcome, i_ac=iso)
        of = out_dir / f"outcome_{k:03d}.json"
        rf = out_dir / f"recovery_{k:03d}.json"
        files[of] = dumps(res.outcome)
        files[rf] = dumps(res.recovery, kind="unitary")
        entries.append({"outcome_file": str(of), "recovery_file": str(rf), "member": member})
    orbit_ok = True
    for res in results[1:]:
        try:
            matching_orbit_check(shared, results[0].outcome, res.outcome, iso)
        except NotMatching:
            orbit_ok = False
    write_files(files)

    report = {
        "command": "match",
        "inputs": {"shared": sd},
        "dim": n,
        "probability": _prob(results[0].probability),
        "outcomes": entries,
        "all_members": all(e["member"] for e in entries),
        "orbit_check": orbit_ok,
        "seed": args.seed,
    }
    return report, EXIT_OK


def cmd_bell(args) -> tuple[dict, int]:
    n = args.N
    if not 2 <= n <= 8:
        raise InputError("N must lie in 2..8")
    basis = bell_basis(n)
    out_dir = Path(args.out)
    files = {out_dir / f"bell_{q:02d}.json": dumps(op) for q, op in enumerate(basis)}
    vecs = np.array([op.matrix.reshape(-1) for op in basis])
    gram_defect = float(np.max(np.abs(vecs.conj() @ vecs.T - np.eye(n * n))))
    write_files(files)
    report = {
        "command": "bell",
        "dim": n,
        "files": [str(f) for f in files],
        "gram_defect": gram_defect,
        "all_maximally_entangled": all(is_maximally_entangled(op) for op in basis),
    }
    return report, EXIT_OK


def oracle_check(n_trials: int, dim: int, seed: int, tol: float = DEFAULT_TOL) -> dict:
    """Random ``(L, L_q, phi)`` triples through the engine and the oracle."""
    if not 1 <= dim <= oracle.MAX_DIM:
        raise InputError(f"--dim must lie in 1..{oracle.MAX_DIM}")
    if n_trials < 0:
        raise InputError("--n-trials must be non-negative")
    max_dp = 0.0
    max_df = 0.0
    skipped = 0
    for t in range(n_trials):
        shared_state = random_pure_state(dim * dim, derive_seed(seed, t, 0), (dim, dim))
        sigma_q = random_pure_state(dim * dim, derive_seed(seed, t, 1), (dim, dim))
        phi = random_pure_state(dim, derive_seed(seed, t, 2))
        try:
            rep = teleport_pure(op_from_state(shared_state), op_from_measurement_state(sigma_q), phi)
        except ZeroProbabilityOutcome:
            skipped += 1
            continue
        res = oracle.simulate_outcome(shared_state, sigma_q, phi)
        max_dp = max(max_dp, abs(res.probability - rep.probability))
        max_df = max(max_df, 1.0 - fidelity(res.conditional_state, rep.output_state))
    block = _oracle_block(max_dp, max_df, tol)
    return {
        "command": "oracle-check",
        "n_trials": n_trials,
        "dim": dim,
        "seed": seed,
        "skipped_zero_probability": skipped,
        "max_probability_delta": max_dp,
        "max_fidelity_defect": max_df,
        "tol": tol,
        "passed": block["passed"],
    }


def cmd_oracle_check(args) -> tuple[dict, int]:
    report = oracle_check(args.n_trials, args.dim, args.seed, args.tol)
    return report, EXIT_OK if report["passed"] else EXIT_ORACLE


def cmd_example(args) -> tuple[dict, int]:
    alphas = _parse_alphas(args.alphas)
    try:
        shared, outcome, p = schmidt_example(alphas)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    n = alphas.size
    member, recovery = is_matching(shared, outcome)
    phi = random_pure_state(n, args.seed)
    rep = teleport_pure(shared, outcome, phi, recovery=recovery)
    res = oracle.simulate_outcome(state_from_op(shared), measurement_state_from_op(outcome), phi)
    block = _oracle_block(
        abs(res.probability - rep.probability),
        1.0 - fidelity(res.conditional_state, rep.output_state),
        args.tol,
    )
    if args.out:
        out_dir = Path(args.out)
        write_files(
            {
                out_dir / "shared.json": dumps(shared),
                out_dir / "outcome.json": dumps(outcome),
                out_dir / "input.json": dumps(phi),
            }
        )
    report = {
        "command": "example",
        "alphas": _pairs(alphas),
        "shared_operator": _pairs(shared.matrix),
        "matching_outcome": _pairs(outcome.matrix),
        "success_probability": _prob(p),
        "probability": _prob(rep.probability),
        "matching": member,
        "fidelity_raw": rep.fidelity_raw,
        "fidelity_corrected": rep.fidelity_corrected,
        "oracle": block,
        "seed": args.seed,
    }
    return report, EXIT_OK if block["passed"] else EXIT_ORACLE


# ---------------------------------------------------------------- output


def _fmt(key: str, v) -> str:
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return str(v)
    if isinstance(v, float):
        return f"{v:.4g}" if key in _PROB_KEYS or key.startswith("fidelity") else f"{v:.3e}"
    if isinstance(v, list) and v and isinstance(v[0], list) and len(v[0]) == 2 and not isinstance(v[0][0], list):
        return "[" + ", ".join(f"{complex(a, b):.4g}" for a, b in v) + "]"
    return json.dumps(v)


def render_text(report: dict, indent: str = "") -> str:
    lines = []
    for key, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{key}:")
            lines.append(render_text(v, indent + "  "))
        elif (
            isinstance(v, list) and v and isinstance(v[0], list)
            and v[0] and isinstance(v[0][0], list)
        ):
            lines.append(f"{indent}{key}:")
            lines.extend(f"{indent}  {_fmt(key, row)}" for row in v)
        else:
            lines.append(f"{indent}{key}: {_fmt(key, v)}")
    return "\n".join(lines)


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # subcommand copies default to SUPPRESS so they never clobber values given earlier
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help=f"RNG seed (default {DEFAULT_SEED})")
    g.add_argument("--json", dest="json", action="store_true", default=d(False), help="JSON report")
    g.add_argument("--text", dest="json", action="store_false", default=d(False), help="text report")
    g.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help=f"oracle tolerance (default {DEFAULT_TOL:g})")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(defaults=False)
    p = argparse.ArgumentParser(
        prog="entmatch", description=__doc__.splitlines()[0], parents=[_global_flags(defaults=True)]
    )
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("teleport", parents=[common], help="teleport through one outcome")
    t.add_argument("shared", help="shared state file (pure_state or antilinear_op)")
    t.add_argument("outcome", help="measurement outcome file (pure_state or antilinear_op)")
    t.add_argument("input", help="input state file (pure_state or density_operator)")
    t.add_argument("--recover", action=argparse.BooleanOptionalAction, default=True)
    t.add_argument("--oracle", action="store_true", help="cross-check with the brute-force simulation")
    t.add_argument("--iso", help="unitary file for the A -> C identification")
    t.set_defaults(func=cmd_teleport)

    m = sub.add_parser("match", parents=[common], help="construct matching outcomes")
    m.add_argument("shared")
    g = m.add_mutually_exclusive_group()
    g.add_argument("--unitary", help="unitary file for Bob's recovery")
    g.add_argument("--random-unitary", action="store_true")
    m.add_argument("--iso", help="unitary file for the A -> C identification")
    m.add_argument("--count", type=int, default=1)
    m.add_argument("--out", default="matching_outcomes")
    m.set_defaults(func=cmd_match)

    b = sub.add_parser("bell", parents=[common], help="write a Bell-type measurement basis")
    b.add_argument("N", type=int)
    b.add_argument("--out", default="bell_basis")
    b.set_defaults(func=cmd_bell)

    o = sub.add_parser("oracle-check", parents=[common], help="engine vs brute-force batch")
    o.add_argument("--n-trials", type=int, default=500)
    o.add_argument("--dim", type=int, default=2)
    o.set_defaults(func=cmd_oracle_check)

    e = sub.add_parser("example", parents=[common], help="diagonal Schmidt matching example")
    e.add_argument("--alphas", required=True, help="comma-separated Schmidt coefficients")
    e.add_argument("--out", help="directory for shared/outcome/input files")
    e.set_defaults(func=cmd_example)
    return p


def run(argv=None) -> tuple[dict | None, int, str]:
    """Parse and execute; returns ``(report, exit_code, rendered_output)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_INPUT if exc.code else EXIT_OK, ""
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except ZeroProbabilityOutcome as exc:
        return None, EXIT_ZERO_PROB, f"error: {exc}"
    except DimensionMismatch as exc:
        return None, EXIT_DIM, f"error: dimension mismatch: {exc}"
    except SingularSharedState as exc:
        return None, EXIT_SINGULAR, f"error: singular shared state: {exc}"
    except (InputError, StateFileError, NonUnitaryArgument, ValueError, OSError) as exc:
        return None, EXIT_INPUT, f"error: {exc}"
    report["wall_time_s"] = time.perf_counter() - start
    text = json.dumps(report, indent=2) if args.json else render_text(report)
    return report, code, text


def main(argv=None) -> int:
    report, code, text = run(argv)
    if text:
        print(text, file=sys.stdout if report is not None else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
