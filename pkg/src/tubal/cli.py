"""Command-line interface wiring generators, solvers and metrics together.

Subcommands: synth, degrade, complete, rpca, metrics, tsvd.  Every stochastic
step takes a mandatory seed, and reruns with an identical command line write
byte-identical tensors and reports.  When ``--report`` is given, the path
receives key=value lines, ``<path>.json`` the machine-readable summary, and
matplotlib figures land alongside (``<path>.objective.png`` etc.).

Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import io as tio
from .errors import (
    DegenerateInputError,
    DimensionError,
    FileFormatError,
    ImagResidueTooLarge,
    NumericalError,
)
from .metrics import metrics_report
from .penalties import PenaltyParams
from .reports import sanitize_json, write_json_summary, write_kv_report
from .solvers import SolverConfig, convex_tc, convex_trpca, default_sparse_lambda, lrtc_mm, trpca_mm
from .synth import add_salt_pepper, add_uniform_noise, random_mask, synth_low_tubal_rank
from .tensor import spectral_singular_values

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def _dims(text):
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3 or min(parts) < 1:
        raise argparse.ArgumentTypeError(f"dims must be three positive ints, got {text!r}")
    return tuple(parts)


def _perm(text):
    parts = tuple(int(p) for p in text.split(","))
    if sorted(parts) != [1, 2, 3]:
        raise argparse.ArgumentTypeError(f"twist must permute 1,2,3, got {text!r}")
    return parts


def _add_solver_flags(p):
    p.add_argument("--mu0", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=1.1)
    p.add_argument("--mu-max", type=float, default=1e10)
    p.add_argument("--inner-tol", type=float, default=1e-7)
    p.add_argument("--inner-iters", type=int, default=500)
    p.add_argument("--outer-iters", type=int, default=10)
    p.add_argument("--twist", type=_perm, default=None, metavar="I,J,K")
    p.add_argument("--init", default="tnn", metavar="tnn|file:PATH")
    p.add_argument("--freeze-weights", action="store_true",
                   help="divide shrinkage weights by mu0 once instead of the running mu")


def build_parser():
    parser = argparse.ArgumentParser(prog="tubal")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a low-tubal-rank tensor")
    p.add_argument("--dims", type=_dims, required=True, metavar="N1,N2,N3")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("degrade", help="mask or add noise to a tensor")
    p.add_argument("--in", dest="in_path", required=True)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--mask-rate", type=float)
    kind.add_argument("--salt-pepper", type=float)
    kind.add_argument("--uniform-noise", type=float)
    p.add_argument("--peak", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mask-out")

    p = sub.add_parser("complete", help="low-rank tensor completion")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--penalty", choices=("scad", "mcp", "tnn"), default="mcp")
    p.add_argument("--gamma", type=float, default=25.0)
    _add_solver_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--report")

    p = sub.add_parser("rpca", help="decompose into low-rank plus sparse")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--penalty", choices=("scad", "mcp", "tnn"), default="mcp")
    p.add_argument("--gamma1", type=float, default=20.0)
    p.add_argument("--gamma2", type=float, default=20.0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    _add_solver_flags(p)
    p.add_argument("--out-l", required=True)
    p.add_argument("--out-e", required=True)
    p.add_argument("--report")

    p = sub.add_parser("metrics", help="quality indexes of an estimate")
    p.add_argument("--ref", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--peak", type=float, default=1.0)
    p.add_argument("--report", required=True)

    p = sub.add_parser("tsvd", help="dump the spectral singular values")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--dump-spectrum", required=True)

    return parser


def _read_data(path):
    if path.endswith((".pgm", ".ppm")):
        return tio.image_to_tensor(path)
    return tio.read_tensor(path, expect="data")


def _solver_config(args, penalty):
    return SolverConfig(
        penalty=penalty,
        rank_gamma=getattr(args, "gamma1", None),
        mu0=args.mu0,
        rho=args.rho,
        mu_max=args.mu_max,
        inner_tol=args.inner_tol,
        inner_max_iters=args.inner_iters,
        outer_iters=args.outer_iters,
        init="provided" if args.init.startswith("file:") else args.init,
        twist_perm=args.twist,
        freeze_weight_mu=args.freeze_weights,
    )


def _load_init(args):
    if args.init.startswith("file:"):
        return tio.read_tensor(args.init[len("file:"):], expect="data")
    if args.init != "tnn":
        raise ValueError(f"--init must be 'tnn' or 'file:PATH', got {args.init!r}")
    return None


def _solve_records(args, report, extra):
    records = {"command": args.command}
    records.update(extra)
    records.update(
        mu0=args.mu0, rho=args.rho, mu_max=args.mu_max,
        inner_tol=args.inner_tol, inner_iters=args.inner_iters,
        outer_iters=args.outer_iters,
        init=args.init,
        twist=",".join(map(str, args.twist)) if args.twist else "none",
        iterations_used=report.iterations_used,
        converged=report.converged,
        final_residual=report.feasibility_trace[-1],
        objective_initial=report.objective_trace[0],
        objective_final=report.objective_trace[-1],
    )
    return records


def _emit_solve_report(args, report, extra):
    if not args.report:
        return
    records = _solve_records(args, report, extra)
    write_kv_report(args.report, records)
    summary = dict(records)
    summary["objective_trace"] = list(report.objective_trace)
    summary["feasibility_trace"] = list(report.feasibility_trace)
    summary["inner_iterations"] = list(report.inner_iterations)
    write_json_summary(args.report + ".json", sanitize_json(summary))
    from .plots import save_solve_figures

    save_solve_figures(report, args.report)


def cmd_synth(args):
    n1, n2, n3 = args.dims
    tio.write_tensor(args.out, synth_low_tubal_rank(n1, n2, n3, args.rank, args.seed))
    return EXIT_OK


def cmd_degrade(args):
    a = _read_data(args.in_path)
    if args.mask_rate is not None:
        mask = random_mask(a.shape, args.mask_rate, args.seed)
        tio.write_tensor(args.out, a * mask)
        if args.mask_out:
            tio.write_tensor(args.mask_out, mask, mask=True)
    elif args.salt_pepper is not None:
        tio.write_tensor(args.out, add_salt_pepper(a, args.salt_pepper, args.peak, args.seed))
    else:
        tio.write_tensor(args.out, add_uniform_noise(a, args.uniform_noise, args.seed))
    return EXIT_OK


def cmd_complete(args):
    o = _read_data(args.in_path)
    mask = tio.read_tensor(args.mask, expect="mask").astype(np.float64)
    x0 = _load_init(args)
    if args.penalty == "tnn":
        penalty = PenaltyParams("mcp", 1.0, 1e8)
        cfg = _solver_config(args, penalty)
        report = convex_tc(o, mask, cfg, x0)
    else:
        penalty = PenaltyParams(args.penalty, 1.0, args.gamma)
        cfg = _solver_config(args, penalty)
        report = lrtc_mm(o, mask, cfg, x0)
    tio.write_tensor(args.out, report.estimate)
    _emit_solve_report(args, report, {
        "task": "complete",
        "penalty": args.penalty,
        "gamma": args.gamma,
        "dims": ",".join(map(str, o.shape)),
        "observed_fraction": float(mask.mean()),
    })
    return EXIT_OK


def cmd_rpca(args):
    x = _read_data(args.in_path)
    lam = default_sparse_lambda(x.shape) if args.lam is None else args.lam
    x0 = _load_init(args)
    l0 = e0 = None
    if x0 is not None:
        l0, e0 = x0, x - x0
    if args.penalty == "tnn":
        cfg = _solver_config(args, PenaltyParams("mcp", lam, 1e8))
        report = convex_trpca(x, lam, cfg, l0, e0)
    else:
        penalty = PenaltyParams(args.penalty, lam, args.gamma2)
        cfg = _solver_config(args, penalty)
        report = trpca_mm(x, cfg, l0, e0)
    tio.write_tensor(args.out_l, report.estimate)
    tio.write_tensor(args.out_e, report.sparse)
    _emit_solve_report(args, report, {
        "task": "rpca",
        "penalty": args.penalty,
        "gamma1": args.gamma1,
        "gamma2": args.gamma2,
        "lambda": lam,
        "dims": ",".join(map(str, x.shape)),
    })
    return EXIT_OK


def cmd_metrics(args):
    ref = _read_data(args.ref)
    est = _read_data(args.est)
    rep = metrics_report(ref, est, peak=args.peak)
    records = {
        "command": "metrics",
        "ref": args.ref,
        "est": args.est,
        "peak": args.peak,
        "mse": rep.mse,
        "mse_x1e4": rep.mse * 1e4,
        "psnr": rep.psnr,
        "ssim": rep.ssim,
        "ergas": rep.ergas,
        "sam": rep.sam,
        "sam_skipped": rep.sam_skipped,
    }
    write_kv_report(args.report, records)
    write_json_summary(args.report + ".json", sanitize_json(records))
    from .plots import save_error_figure

    save_error_figure(ref, est, args.report + ".error.png")
    return EXIT_OK


def cmd_tsvd(args):
    a = _read_data(args.in_path)
    sdiag = spectral_singular_values(a)
    lines = []
    for k in range(sdiag.shape[1]):
        for i in range(sdiag.shape[0]):
            lines.append(f"slice={k + 1} index={i + 1} value={float(sdiag[i, k])!r}\n")
    with open(args.dump_spectrum, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    return EXIT_OK


_COMMANDS = {
    "synth": cmd_synth,
    "degrade": cmd_degrade,
    "complete": cmd_complete,
    "rpca": cmd_rpca,
    "metrics": cmd_metrics,
    "tsvd": cmd_tsvd,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FileFormatError, DimensionError, DegenerateInputError, OSError, ValueError) as exc:
        print(f"tubal: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ImagResidueTooLarge, NumericalError, np.linalg.LinAlgError) as exc:
        print(f"tubal: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
