"""Command-line front end and the file formats it speaks.

Subcommands: ``learn`` (trajectory CSV -> model JSON), ``rollout`` (model ->
trajectory CSV, optionally transformed or chasing a moving goal), ``update``
(partial re-learning of a segment), ``regress`` (directory of demos -> one
model), ``bench`` (named sweep -> report CSV), and ``gen`` (synthetic data).

Trajectory CSV: header ``t,x1,...,xd``, decimal point, time strictly
increasing.  Model JSON: versioned schema, byte-stable round trips.  Report
CSV: ``family,N,metric,value,seed``.  Exit status 0 on success, 2 on
validation errors, 3 on numerical errors, each with a one-line diagnostic
naming the inner error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .basis import BasisFamily, BasisSet, make_basis
from .bench import (
    add_noise,
    gen_limit_cycle_dataset,
    gen_target,
    gen_update_pair,
    run_condition_sweep,
    run_error_sweep,
    run_sparsity,
    run_timing_sweep,
)
from .dmp import rollout
from .errors import NumericalError, ValidationError
from .learn import DmpModel, Gains, Trajectory, learn_dmp, update_segment
from .phase import PhaseConfig
from .regress import DemoSet, align_demos, regress_weights

__all__ = [
    "main",
    "run_cli",
    "read_trajectory_csv",
    "write_trajectory_csv",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
]

MODEL_SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Trajectory CSV


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Write ``t,x1,...,xd`` rows with shortest round-trip float formatting."""
    header = "t," + ",".join(f"x{i + 1}" for i in range(traj.dims))
    lines = [header]
    for t, row in zip(traj.times, traj.positions):
        lines.append(",".join([repr(float(t))] + [repr(float(v)) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> Trajectory:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ValidationError(f"{path}: empty trajectory file")
    header = [h.strip() for h in text[0].split(",")]
    if header[0] != "t" or len(header) < 2:
        raise ValidationError(f"{path}: expected header 't,x1,...,xd'")
    try:
        data = np.array(
            [[float(v) for v in line.split(",")] for line in text[1:] if line.strip()]
        )
    except ValueError as exc:
        raise ValidationError(f"{path}: malformed numeric row ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValidationError(f"{path}: ragged rows")
    return Trajectory(times=data[:, 0], positions=data[:, 1:])


# ---------------------------------------------------------------------------
# Model JSON


def model_to_dict(model: DmpModel) -> dict:
    basis = model.basis
    return {
        "schema": MODEL_SCHEMA_VERSION,
        "dims": model.dims,
        "gains": {
            "elastic": model.gains.elastic.tolist(),
            "damping": model.gains.damping.tolist(),
        },
        "phase": {
            "alpha": model.phase.alpha,
            "tau": model.phase.tau,
            "horizon": model.phase.horizon,
        },
        "basis": {
            "family": basis.family.tag,
            "n_basis": basis.n_intervals,
            "overlap": basis.overlap,
            "trunc_kappa": basis.family.trunc_kappa,
            "biased": basis.biased,
            "centers": basis.centers.tolist(),
            "widths": basis.widths.tolist(),
        },
        "weights": model.weights.tolist(),
        "biases": model.biases.tolist() if model.biases is not None else None,
        "learned_x0": model.learned_x0.tolist(),
        "learned_g": model.learned_g.tolist(),
    }


def model_from_dict(payload: dict) -> DmpModel:
    try:
        if payload["schema"] != MODEL_SCHEMA_VERSION:
            raise ValidationError(f"unsupported model schema {payload['schema']!r}")
        family = BasisFamily(payload["basis"]["family"], payload["basis"]["trunc_kappa"])
        basis = BasisSet(
            family=family,
            centers=np.array(payload["basis"]["centers"]),
            widths=np.array(payload["basis"]["widths"]),
            overlap=payload["basis"]["overlap"],
            biased=payload["basis"]["biased"],
        )
        biases = payload["biases"]
        return DmpModel(
            gains=Gains(
                elastic=np.array(payload["gains"]["elastic"]),
                damping=np.array(payload["gains"]["damping"]),
            ),
            phase=PhaseConfig(**payload["phase"]),
            basis=basis,
            weights=np.array(payload["weights"]),
            biases=None if biases is None else np.array(biases),
            learned_x0=np.array(payload["learned_x0"]),
            learned_g=np.array(payload["learned_g"]),
        )
    except KeyError as exc:
        raise ValidationError(f"model file missing field {exc}") from exc


def save_model(path, model: DmpModel) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n")


def load_model(path) -> DmpModel:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(payload)


# ---------------------------------------------------------------------------
# Report CSV


def write_report_csv(path, reports) -> None:
    lines = ["family,N,metric,value,seed"]
    for report in reports:
        for family, n, metric, value, seed in report.rows():
            lines.append(f"{family},{n},{metric},{value!r},{seed}")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Argument helpers


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from exc


def _gains_for(args, dims: int) -> Gains:
    if args.damping is not None:
        return Gains(elastic=np.full(dims, args.k), damping=np.full(dims, args.damping))
    return Gains.critically_damped(args.k, dims)


def _basis_for(args, alpha: float, horizon: float) -> BasisSet:
    family = BasisFamily(args.basis, trunc_kappa=args.trunc_kappa)
    return make_basis(family, args.n, alpha, horizon, overlap=args.h_tilde, biased=args.biased)


def _add_model_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--basis", default="mollifier", help="basis family tag")
    parser.add_argument("--n", type=int, default=50, help="basis count N (N+1 functions)")
    parser.add_argument("--k", type=float, default=150.0, help="elastic gain")
    parser.add_argument(
        "--damping", type=float, default=None, help="damping gain (default 2*sqrt(k))"
    )
    parser.add_argument("--alpha", type=float, default=4.0, help="phase decay rate")
    parser.add_argument("--h-tilde", type=float, default=1.0, help="basis overlap parameter")
    parser.add_argument(
        "--trunc-kappa",
        type=float,
        default=BasisFamily("truncated_gaussian").trunc_kappa,
        help="truncation multiplier for truncated Gaussians",
    )
    parser.add_argument(
        "--biased", action="store_true", help="learn bias terms alongside the weights"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmpkit", description="movement-primitive learning, rollout, and benchmarks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a model from a trajectory CSV")
    p.add_argument("trajectory", help="demonstration CSV file")
    p.add_argument("--out", required=True, help="output model JSON")
    _add_model_params(p)

    p = sub.add_parser("rollout", help="execute a model and write a trajectory CSV")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--out", required=True, help="output trajectory CSV")
    p.add_argument("--x0", type=_vector, default=None, help="start, comma-separated")
    p.add_argument("--goal", type=_vector, default=None, help="static goal, comma-separated")
    p.add_argument("--goal-path", default=None, help="moving-goal CSV (t,x1,...,xd)")
    p.add_argument(
        "--formulation",
        choices=("original", "classical", "extended"),
        default="classical",
    )
    p.add_argument("--tau", type=float, default=1.0, help="temporal scaling")
    p.add_argument("--duration", type=float, default=None, help="default: twice the horizon")
    p.add_argument("--dt", type=float, default=None, help="default: horizon/1000")

    p = sub.add_parser("update", help="re-learn the weights covering a modified segment")
    p.add_argument("model", help="model JSON file")
    p.add_argument("segment", help="updated demonstration CSV (full horizon)")
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--indices-out", default=None, help="optional JSON file for the index set")

    p = sub.add_parser("regress", help="learn one model from a directory of demos")
    p.add_argument("demo_dir", help="directory of trajectory CSV files")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--horizon", type=float, default=1.0, help="common time horizon")
    _add_model_params(p)

    p = sub.add_parser("bench", help="run a named benchmark sweep")
    p.add_argument("sweep", choices=("error", "condition", "timing", "sparsity"))
    p.add_argument("--out", required=True, help="output report CSV")
    p.add_argument(
        "--families",
        default="gaussian,mollifier",
        help="comma-separated family labels (append _biased for bias terms)",
    )
    p.add_argument("--n-values", default="10,20,50", help="comma-separated basis counts")
    p.add_argument("--target", default="hat_eta", help="error sweep target curve")
    p.add_argument("--samples", type=int, default=1001, help="target sample count")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--rhs-count", type=int, default=30, help="timing right-hand sides")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="generate synthetic datasets")
    kind = p.add_subparsers(dest="kind", required=True)

    q = kind.add_parser("limit-cycle", help="seeded demos spiraling to the origin")
    q.add_argument("--count", type=int, default=50)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--noise-variance", type=float, default=None)
    q.add_argument("--noise-seed", type=int, default=0)
    q.add_argument("--out", required=True, help="output directory")

    q = kind.add_parser("curve", help="analytic benchmark curve")
    q.add_argument("--kind", dest="curve", default="spiral_curve",
                   choices=("hat_eta", "plane_curve", "spiral_curve"))
    q.add_argument("--samples", type=int, default=1001)
    q.add_argument("--out", required=True, help="output CSV")

    q = kind.add_parser("update-pair", help="base and middle-modified spline pair")
    q.add_argument("--samples", type=int, default=1501)
    q.add_argument("--out", required=True, help="output directory")

    return parser


# ---------------------------------------------------------------------------
# Subcommand implementations


def _cmd_learn(args) -> int:
    traj = read_trajectory_csv(args.trajectory)
    phase = PhaseConfig(alpha=args.alpha, tau=1.0, horizon=traj.duration)
    model = learn_dmp(
        traj,
        gains=_gains_for(args, traj.dims),
        phase=phase,
        basis=_basis_for(args, args.alpha, traj.duration),
    )
    save_model(args.out, model)
    return 0


def _cmd_rollout(args) -> int:
    model = load_model(args.model)
    goal = None
    if args.goal_path is not None:
        path = read_trajectory_csv(args.goal_path)

        def goal(t, _path=path):
            clipped = min(max(t, _path.times[0]), _path.times[-1])
            return np.array(
                [np.interp(clipped, _path.times, _path.positions[:, i])
                 for i in range(_path.dims)]
            )

    elif args.goal is not None:
        goal = args.goal
    traj = rollout(
        model,
        x0=args.x0,
        goal=goal,
        tau=args.tau,
        duration=args.duration,
        dt=args.dt,
        formulation=args.formulation,
    )
    write_trajectory_csv(args.out, traj)
    return 0


def _cmd_update(args) -> int:
    model = load_model(args.model)
    segment = read_trajectory_csv(args.segment)
    updated, indices = update_segment(model, segment, args.t0, args.t1)
    save_model(args.out, updated)
    payload = json.dumps({"indices": [int(i) for i in indices]})
    if args.indices_out:
        Path(args.indices_out).write_text(payload + "\n")
    print(payload)
    return 0


def _cmd_regress(args) -> int:
    files = sorted(Path(args.demo_dir).glob("*.csv"))
    if not files:
        raise ValidationError(f"{args.demo_dir}: no trajectory CSV files found")
    demos = DemoSet(demos=tuple(read_trajectory_csv(f) for f in files))
    aligned = align_demos(demos, horizon=args.horizon)
    phase = PhaseConfig(alpha=args.alpha, tau=1.0, horizon=args.horizon)
    model = regress_weights(
        aligned,
        _gains_for(args, demos.dims),
        phase,
        _basis_for(args, args.alpha, args.horizon),
    )
    save_model(args.out, model)
    return 0


def _cmd_bench(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    n_values = [int(v) for v in args.n_values.split(",")]
    if args.sweep == "error":
        report = run_error_sweep(
            families, n_values, gen_target(args.target, args.samples), alpha=args.alpha
        )
    elif args.sweep == "condition":
        report = run_condition_sweep(families, n_values, alpha=args.alpha)
    elif args.sweep == "timing":
        report = run_timing_sweep(
            families, n_values, rhs_count=args.rhs_count, seed=args.seed, alpha=args.alpha
        )
    else:
        report = run_sparsity(families, n_values, alpha=args.alpha)
    write_report_csv(args.out, [report])
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "limit-cycle":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        demos = gen_limit_cycle_dataset(args.count, args.seed)
        if args.noise_variance is not None:
            demos = add_noise(demos, args.noise_variance, args.noise_seed)
        for j, demo in enumerate(demos.demos):
            write_trajectory_csv(out / f"demo_{j:03d}.csv", demo)
    elif args.kind == "curve":
        write_trajectory_csv(args.out, gen_target(args.curve, args.samples))
    else:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        base, modified, (t0, t1) = gen_update_pair(args.samples)
        write_trajectory_csv(out / "update_base.csv", base)
        write_trajectory_csv(out / "update_modified.csv", modified)
        print(json.dumps({"t0": t0, "t1": t1}))
    return 0


_COMMANDS = {
    "learn": _cmd_learn,
    "rollout": _cmd_rollout,
    "update": _cmd_update,
    "regress": _cmd_regress,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
}


def run_cli(argv=None) -> int:
    """Parse arguments and dispatch; returns the process exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run_cli())
