"""Command-line front end: construct | train | extract | sweep.

Each command writes its artifacts into --out: a checkpoint and/or CSV
tables, rendered figures (unless --no-figures), and a manifest.json with the
resolved configuration and SHA-256 digests of every output.  With
--threads 1 a rerun of the same command produces byte-identical checkpoints
and CSVs.

Heavy imports happen inside the command handlers, after the thread count
has been pinned into the BLAS environment variables; importing this module
stays cheap.
"""

import argparse
import json
import os
import sys
import time

CHECKPOINT_NAME = "checkpoint.json"
MANIFEST_NAME = "manifest.json"

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _fmt_float(value) -> str:
    return format(float(value), ".17g")


def _write_csv(path, header, rows):
    """CSV with a header row, '.' decimals and 17-significant-digit floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for cell in row:
                if isinstance(cell, (int,)) and not isinstance(cell, bool):
                    cells.append(str(cell))
                else:
                    cells.append(_fmt_float(cell))
            fh.write(",".join(cells) + "\n")


def _add_target_flags(parser):
    parser.add_argument("--target", required=True,
                        help="registry target: sin, poly, gauss2 or xy")
    parser.add_argument("--L", type=float, default=None,
                        help="domain length (target-specific default)")
    parser.add_argument("--M", type=float, default=None,
                        help="sin frequency")
    parser.add_argument("--coeffs", default=None,
                        help="poly coefficients, ascending, comma-separated")
    parser.add_argument("--a", type=float, default=None, help="gauss2 sharpness")
    parser.add_argument("--x1", type=float, default=None, help="gauss2 first center x")
    parser.add_argument("--y1", type=float, default=None, help="gauss2 first center y")
    parser.add_argument("--x2", type=float, default=None, help="gauss2 second center x")
    parser.add_argument("--y2", type=float, default=None, help="gauss2 second center y")


def _add_common_flags(parser):
    parser.add_argument("--out", default=None,
                        help="output directory (default reluscope_<command>)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1,
                        help="BLAS/OpenMP thread count; 1 gives bitwise reproducibility")
    parser.add_argument("--grid", type=int, default=None,
                        help="evaluation grid size (per axis in 2-D)")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering")


def _target_params(args) -> dict:
    """Collect the provided target parameters into registry keyword form."""
    params = {}
    if args.target == "sin":
        if args.M is not None:
            params["M"] = args.M
    elif args.target == "poly":
        if args.coeffs is None:
            raise ValueError("the poly target needs --coeffs")
        params["coeffs"] = tuple(float(v) for v in args.coeffs.split(","))
    elif args.target == "gauss2":
        for key in ("a", "x1", "y1", "x2", "y2"):
            value = getattr(args, key)
            if value is not None:
                params[key] = value
    if args.L is not None:
        params["L"] = args.L
    return params


def _resolve_target(args):
    from .targets import get_target

    params = _target_params(args)
    target = get_target(args.target, **params)
    return target


def _out_dir(args, command):
    out = args.out or f"reluscope_{command}"
    os.makedirs(out, exist_ok=True)
    return out


def _parse_J_list(text):
    values = [int(v) for v in str(text).split(",") if v != ""]
    if not values:
        raise ValueError("--J needs at least one value")
    return values


def _eval_rows(target, net, grid_size):
    from .targets import evaluate_target
    from .verify import default_grid_size, grid_points

    grid_size = grid_size or default_grid_size(target.input_dim)
    pts = grid_points(target.domain_length, target.input_dim, grid_size)
    f_vals = evaluate_target(target, pts)
    net_vals = net.evaluate_many(pts)
    residual = net_vals - f_vals
    if target.input_dim == 1:
        header = ["x", "f", "F", "residual"]
        rows = zip(pts[:, 0], f_vals, net_vals, residual)
    else:
        header = ["x", "y", "f", "F", "residual"]
        rows = zip(pts[:, 0], pts[:, 1], f_vals, net_vals, residual)
    return header, list(rows), pts, f_vals, net_vals


def _render_eval_figures(out, target, net, pts, f_vals, net_vals):
    from . import figures
    from .canonical import breakpoint_ratios

    paths = []
    if target.input_dim == 1:
        paths.append(figures.approximation_figure(
            os.path.join(out, "approximation.png"), pts[:, 0], f_vals, net_vals))
        entries, _ = breakpoint_ratios(net)
        paths.append(figures.breakpoints_figure(
            os.path.join(out, "breakpoints.png"),
            [t for t, _, _ in entries], target.domain_length))
    else:
        side = int(round(len(f_vals) ** 0.5))
        axis = pts[:side, 1]
        paths.append(figures.surface_figure(
            os.path.join(out, "surfaces.png"), axis,
            f_vals.reshape(side, side), net_vals.reshape(side, side)))
    return paths


def _cmd_construct(args):
    from .checkpoint import save_checkpoint
    from .construct import build_bidirectional, build_network, error_bound
    from .manifest import write_manifest
    from .network import uniform_division
    from .verify import sup_error
    from . import __version__

    t0 = time.perf_counter()
    target = _resolve_target(args)
    division = uniform_division(args.J, target.domain_length)
    if args.lam == 1.0:
        net = build_network(target, division)
    else:
        net = build_bidirectional(target, division, args.lam)
    bound = error_bound(target, division)
    stats = sup_error(target, net, args.grid)
    out = _out_dir(args, "construct")

    ckpt_path = os.path.join(out, CHECKPOINT_NAME)
    save_checkpoint(net, ckpt_path)
    header, rows, pts, f_vals, net_vals = _eval_rows(target, net, args.grid)
    eval_path = os.path.join(out, "eval.csv")
    _write_csv(eval_path, header, rows)
    outputs = [ckpt_path, eval_path]
    if not args.no_figures:
        outputs += _render_eval_figures(out, target, net, pts, f_vals, net_vals)

    config = {
        "command": "construct",
        "target": target.name,
        "params": target.params,
        "J": args.J,
        "lambda": args.lam,
        "grid": args.grid,
        "threads": args.threads,
        "figures": not args.no_figures,
    }
    metrics = {
        "max_error": stats.max_error,
        "mse": stats.mse,
        "c1": bound.c1,
        "mesh_norm": bound.mesh_norm,
        "bound": bound.bound,
        "estimated_norms": bound.estimated_norms,
        "n_units": net.n_units,
    }
    write_manifest(os.path.join(out, MANIFEST_NAME), "construct", config,
                   args.seed, __version__, time.perf_counter() - t0,
                   outputs, metrics=metrics)
    return 0


def _cmd_train(args):
    from .checkpoint import save_checkpoint
    from .manifest import write_manifest
    from .training import TrainConfig, sample_dataset, train
    from . import __version__

    t0 = time.perf_counter()
    target = _resolve_target(args)
    data = sample_dataset(target.name, target.params, args.n, args.seed)
    cfg = TrainConfig(units=args.J, epochs=args.epochs, batch_size=args.batch,
                      optimizer=args.optimizer, learning_rate=args.lr,
                      seed=args.seed, eval_grid_size=args.grid or 0)
    report = train(data, cfg)
    out = _out_dir(args, "train")

    outputs = []
    loss_path = os.path.join(out, "loss.csv")
    _write_csv(loss_path, ["epoch", "mse"],
               [(e + 1, v) for e, v in enumerate(report.loss_curve)])
    outputs.append(loss_path)
    if report.network is not None:
        ckpt_path = os.path.join(out, CHECKPOINT_NAME)
        save_checkpoint(report.network, ckpt_path)
        outputs.append(ckpt_path)

    config = {
        "command": "train",
        "target": target.name,
        "params": target.params,
        "J": args.J,
        "n": args.n,
        "epochs": args.epochs,
        "batch": args.batch,
        "optimizer": args.optimizer,
        "lr": args.lr,
        "grid": args.grid,
        "threads": args.threads,
        "figures": not args.no_figures,
    }
    manifest_path = os.path.join(out, MANIFEST_NAME)

    if report.diverged:
        metrics = {"diverged": True, "epochs_completed": len(report.loss_curve)}
        write_manifest(manifest_path, "train", config, args.seed, __version__,
                       time.perf_counter() - t0, outputs, status="failed",
                       metrics=metrics)
        print("error: training diverged (non-finite loss)", file=sys.stderr)
        return 3

    header, rows, pts, f_vals, net_vals = _eval_rows(target, report.network,
                                                     args.grid)
    eval_path = os.path.join(out, "eval.csv")
    _write_csv(eval_path, header, rows)
    outputs.append(eval_path)
    if not args.no_figures:
        from . import figures
        outputs.append(figures.loss_figure(os.path.join(out, "loss.png"),
                                           report.loss_curve))
        outputs += _render_eval_figures(out, target, report.network,
                                        pts, f_vals, net_vals)
    metrics = {
        "max_error": report.max_error,
        "mse": report.mse,
        "final_train_loss": report.loss_curve[-1] if report.loss_curve else None,
        "train_seconds": report.seconds,
        "diverged": False,
    }
    write_manifest(manifest_path, "train", config, args.seed, __version__,
                   time.perf_counter() - t0, outputs, metrics=metrics)
    return 0


def _cmd_extract(args):
    from .canonical import breakpoint_ratios
    from .checkpoint import load_checkpoint
    from .manifest import write_manifest
    from .spectrum import compare_spectrum, extract_spectrum
    from . import __version__

    t0 = time.perf_counter()
    net = load_checkpoint(args.checkpoint)
    target = _resolve_target(args)
    L = args.L if args.L is not None else target.domain_length
    spec = extract_spectrum(net, args.h, L)
    comparison = compare_spectrum(spec, target,
                                  include_bin0=not args.exclude_bin0)
    out = _out_dir(args, "extract")

    spectrum_path = os.path.join(out, "spectrum.csv")
    _write_csv(
        spectrum_path,
        ["k", "t", "b_plus", "b_minus", "sum", "f2_theory", "residual"],
        [(k, comparison.t[k], comparison.b_plus[k], comparison.b_minus[k],
          comparison.total[k], comparison.theory[k], comparison.residual[k])
         for k in range(spec.K)],
    )
    summary = {
        "rms": comparison.rms,
        "correlation": comparison.correlation,
        "include_bin0": comparison.include_bin0,
        "out_of_range_mass": spec.out_of_range_mass,
        "degenerate_count": spec.degenerate_count,
        "h": spec.h,
        "K": spec.K,
        "L": spec.L,
    }
    summary_path = os.path.join(out, "summary.json")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    outputs = [spectrum_path, summary_path]
    if not args.no_figures:
        from . import figures
        outputs.append(figures.spectrum_figure(
            os.path.join(out, "spectrum.png"), comparison.t,
            comparison.total, comparison.theory, spec.h))
        entries, _ = breakpoint_ratios(net)
        outputs.append(figures.breakpoints_figure(
            os.path.join(out, "breakpoints.png"),
            [t for t, _, _ in entries], L))

    config = {
        "command": "extract",
        "checkpoint": str(args.checkpoint),
        "target": target.name,
        "params": target.params,
        "h": args.h,
        "L": L,
        "exclude_bin0": args.exclude_bin0,
        "threads": args.threads,
        "figures": not args.no_figures,
    }
    write_manifest(os.path.join(out, MANIFEST_NAME), "extract", config,
                   args.seed, __version__, time.perf_counter() - t0,
                   outputs, metrics={"rms": comparison.rms,
                                     "correlation": comparison.correlation})
    return 0


def _cmd_sweep(args):
    from .manifest import write_manifest
    from .verify import convergence_sweep, hardness_sweep
    from . import __version__

    t0 = time.perf_counter()
    target = _resolve_target(args)
    J_list = _parse_J_list(args.J)
    out = _out_dir(args, "sweep")
    outputs = []

    if args.kind == "convergence":
        rows = convergence_sweep(target, J_list, args.grid or 4096)
        table_path = os.path.join(out, "convergence.csv")
        _write_csv(table_path, ["J", "mesh_norm", "max_error", "bound", "ratio"],
                   [(r.J, r.mesh_norm, r.max_error, r.bound, r.ratio)
                    for r in rows])
        outputs.append(table_path)
        if not args.no_figures:
            from . import figures
            outputs.append(figures.convergence_figure(
                os.path.join(out, "convergence.png"),
                [r.J for r in rows], [r.max_error for r in rows],
                [r.bound for r in rows]))
        metrics = {"worst_ratio": max((r.ratio for r in rows), default=0.0)}
    else:
        rows = hardness_sweep(target, J_list, n=args.n, epochs=args.epochs,
                              batch_size=args.batch, learning_rate=args.lr,
                              seed=args.seed, grid_size=args.grid or 256)
        table_path = os.path.join(out, "hardness.csv")
        _write_csv(table_path, ["J", "mse", "max_error", "seconds"],
                   [(r.J, r.mse, r.max_error, r.seconds) for r in rows])
        outputs.append(table_path)
        if not args.no_figures:
            from . import figures
            outputs.append(figures.hardness_figure(
                os.path.join(out, "hardness.png"),
                [r.J for r in rows], [r.mse for r in rows],
                [r.max_error for r in rows]))
        from .verify import XY_HARDNESS_NOTE
        metrics = {"note": XY_HARDNESS_NOTE}

    config = {
        "command": "sweep",
        "kind": args.kind,
        "target": target.name,
        "params": target.params,
        "J": J_list,
        "grid": args.grid,
        "threads": args.threads,
        "figures": not args.no_figures,
    }
    if args.kind == "hardness":
        config.update({"n": args.n, "epochs": args.epochs,
                       "batch": args.batch, "lr": args.lr})
    write_manifest(os.path.join(out, MANIFEST_NAME), "sweep", config,
                   args.seed, __version__, time.perf_counter() - t0,
                   outputs, metrics=metrics)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reluscope",
        description="Construct, train, certify and inspect one-hidden-layer "
                    "ReLU networks on an interval.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct",
                       help="build a network from a target's derivatives")
    _add_target_flags(p)
    _add_common_flags(p)
    p.add_argument("--J", type=int, required=True, help="number of mesh intervals")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="forward/backward curvature split in [0, 1]; 1 is forward-only")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("train", help="fit a network by mini-batch gradient descent")
    _add_target_flags(p)
    _add_common_flags(p)
    p.add_argument("--J", type=int, required=True, help="hidden units")
    p.add_argument("--n", type=int, default=10000, help="training samples")
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default="adam")
    p.add_argument("--lr", type=float, default=1e-3)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("extract",
                       help="bin a checkpoint's kink mass into a spectrum")
    _add_target_flags(p)
    _add_common_flags(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--h", type=float, required=True, help="bin width")
    p.add_argument("--exclude-bin0", action="store_true",
                   help="drop bin 0 from the summary statistics")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("sweep", help="convergence or hardness study")
    p.add_argument("kind", choices=("convergence", "hardness"))
    _add_target_flags(p)
    _add_common_flags(p)
    p.add_argument("--J", required=True,
                   help="comma-separated unit counts, e.g. 10,20,40")
    p.add_argument("--n", type=int, default=4000, help="training samples (hardness)")
    p.add_argument("--epochs", type=int, default=60)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-2)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    for var in _THREAD_VARS:
        os.environ[var] = str(args.threads)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
