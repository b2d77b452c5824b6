"""Command-line interface: ``wovenframes <subcommand> ...``.

Every run prints one JSON report on stdout with the keys
``command, inputs, result, seed, timing`` and a short summary on stderr.
Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or parse
error, 3 enumeration cap exceeded.  ``FW_CAP`` sets the enumeration cap
when ``--cap`` is not given.  Assignment labels and vector indices in
reports are 1-based.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import certificates as C
from .core import classify, optimal_bounds, require_frame
from .duality import (
    alternate_dual_family,
    approximate_dual_defect,
    approximate_dual_family,
    bessel_sequence,
    canonical_dual,
    dual_defect,
    excess_and_kernel,
    null_bessel,
    riesz_decompose,
)
from .errors import (
    DimensionMismatch,
    EmptyFamily,
    EnumerationTooLarge,
    FrameError,
    InfeasibleShape,
    InvalidAlpha,
    NonFiniteEntry,
    ParseError,
    SpecInconsistent,
)
from .fileformat import frame_document, parse_frame_file, parse_operator_file, serialize_frame
from .generators import harmonic_frame, leveled_example, random_frame
from .sweep import GENERATORS, soundness_sweep
from .weaving import DEFAULT_CAP, min_partition_distance, subspace_distance, woven_oracle

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# input problems, as opposed to negative mathematical verdicts
_USAGE_ERRORS = (ParseError, DimensionMismatch, NonFiniteEntry, EmptyFamily, InvalidAlpha,
                 InfeasibleShape, SpecInconsistent)


_PATH_OPTIONS = {"file", "files", "file1", "file2", "alternate", "theta_from", "u", "t_file",
                 "t1_file", "t2_file", "out", "u_out"}


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)  # "inf", "-inf", "nan"
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(x.real), _jsonable(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, allow_nan=False, ensure_ascii=False)


class Run:
    """Collects inputs and the result of one invocation."""

    def __init__(self, args):
        self.args = args
        self.files = []
        self.seed = getattr(args, "seed", None)

    def frame(self, path):
        f = parse_frame_file(path)
        self.files.append(hashlib.sha256(Path(path).read_bytes()).hexdigest())
        return f

    def operator(self, path, dim):
        T = parse_operator_file(path, dim)
        self.files.append(hashlib.sha256(Path(path).read_bytes()).hexdigest())
        return T

    def inputs(self):
        options = {k: v for k, v in sorted(vars(self.args).items())
                   if k not in ("func", "command")}
        # file contents enter the digest through their hashes, not their paths
        content = {k: v for k, v in options.items() if k not in _PATH_OPTIONS}
        digest = hashlib.sha256(dumps({"command": self.args.command, "options": content,
                                       "files": self.files, "seed": self.seed}).encode())
        return {"files_sha256": self.files, "options": options, "sha256": digest.hexdigest()}


def _cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get("FW_CAP")
    if env is None:
        return DEFAULT_CAP
    try:
        cap = int(env)
    except ValueError:
        raise UsageError(f"FW_CAP must be an integer, got {env!r}") from None
    if cap < 1:
        raise UsageError("FW_CAP must be positive")
    return cap


def _one_based(indices):
    return [int(i) + 1 for i in indices]


def _oracle_dict(rep):
    return {"universal_lower": rep.universal_lower, "universal_upper": rep.universal_upper,
            "is_woven": rep.is_woven, "worst_assignment": list(rep.worst_assignment.one_based()),
            "assignments_checked": rep.assignments_checked}


def _operator_arg(run, args, dim):
    """The operator from ``--t-file``, ``--t-phase`` or ``--t-scale`` (identity if none)."""
    given = [x is not None for x in (args.t_file, args.t_phase, args.t_scale)]
    if sum(given) > 1:
        raise UsageError("give at most one of --t-file, --t-phase, --t-scale")
    if args.t_file is not None:
        return run.operator(args.t_file, dim)
    if args.t_phase is not None:
        return np.exp(1j * args.t_phase) * np.eye(dim)
    scale = 1.0 if args.t_scale is None else args.t_scale
    return scale * np.eye(dim)


def _default_direction(phi):
    """Null direction with kernel coefficients ``I[:dim, :excess]``."""
    excess, _ = excess_and_kernel(phi)
    return null_bessel(phi, np.eye(phi.dim, excess))


def _direction_arg(run, path, phi):
    if path is None:
        return _default_direction(phi)
    u = run.frame(path)
    if u.dim != phi.dim or u.m != phi.m:
        raise DimensionMismatch(f"direction has shape ({u.dim}, {u.m}), frame has ({phi.dim}, {phi.m})")
    return bessel_sequence(u.dim, u.vectors)


# --- subcommands ---------------------------------------------------------------------------

def cmd_gen(run, args):
    extra = {}
    if args.family == "example":
        frame, U = leveled_example(args.dim)
        if args.u_out:
            Path(args.u_out).write_text(serialize_frame(U.as_frame()), encoding="utf-8")
            extra["u_out"] = args.u_out
    elif args.family == "random":
        m = args.m if args.m is not None else args.dim
        upper = args.upper if args.upper is not None else args.lower
        frame = random_frame(args.dim, m, (args.lower, upper), seed=args.seed, field=args.field)
    else:
        frame = harmonic_frame(args.dim, args.m if args.m is not None else args.dim)
    text = serialize_frame(frame)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    b = optimal_bounds(frame)
    result = {"family": args.family, "dim": frame.dim, "m": frame.m, "out": args.out,
              "frame": frame_document(frame), "lower": b.lower, "upper": b.upper, **extra}
    return EXIT_OK, result, f"generated {args.family} frame: dim={frame.dim}, m={frame.m}"


def cmd_bounds(run, args):
    f = run.frame(args.file)
    cls = classify(f)
    b = optimal_bounds(f)
    result = {"lower": b.lower, "upper": b.upper, "is_frame": cls.is_frame, "dim": f.dim, "m": f.m}
    code = EXIT_OK if cls.is_frame else EXIT_NEGATIVE
    return code, result, f"optimal bounds [{b.lower:.12g}, {b.upper:.12g}]"


def cmd_classify(run, args):
    f = run.frame(args.file)
    cls = classify(f)
    result = asdict(cls)
    flags = [k for k in ("is_frame", "is_riesz_basis", "is_parseval") if result[k]]
    code = EXIT_OK if cls.is_frame else EXIT_NEGATIVE
    return code, result, "classification: " + (", ".join(flags) or "not a frame")


def cmd_dual(run, args):
    phi = run.frame(args.file)
    if args.alternate is not None and args.approx:
        raise UsageError("--alternate and --approx are exclusive")
    if args.alternate is None and not args.approx:
        dual = canonical_dual(phi)
        result = {"kind": "canonical", "dual": frame_document(dual), "dual_defect": dual_defect(phi, dual)}
        return EXIT_OK, result, "canonical dual computed"
    if args.alpha is None:
        raise UsageError("--alpha is required with --alternate or --approx")
    if args.alternate is not None:
        U = _direction_arg(run, args.alternate, phi)
        family = alternate_dual_family(phi, U)
    else:
        T = _operator_arg(run, args, phi.dim)
        U = _direction_arg(run, args.theta_from, phi)
        family = approximate_dual_family(phi, T, U.vectors.conj())
    psi = family.member(args.alpha)
    admitted = family.admits(args.alpha)
    result = {
        "kind": family.kind,
        "alpha": args.alpha,
        "epsilon_star": family.epsilon_star,
        "admitted": admitted,
        "lower_bound": family.lower_bound(args.alpha) if admitted else None,
        "dual": frame_document(psi),
        "dual_defect": dual_defect(phi, psi),
        "approximate_dual_defect": approximate_dual_defect(phi, psi),
    }
    code = EXIT_OK if admitted else EXIT_NEGATIVE
    verdict = "inside" if admitted else "outside"
    return code, result, f"{family.kind} dual: alpha={args.alpha} is {verdict} (0, {family.epsilon_star:.12g})"


def cmd_excess(run, args):
    f = run.frame(args.file)
    require_frame(f)
    excess, _ = excess_and_kernel(f)
    riesz, redundant = riesz_decompose(f)
    result = {"excess": excess, "m": f.m, "dim": f.dim,
              "riesz_indices": _one_based(riesz), "redundant_indices": _one_based(redundant)}
    return EXIT_OK, result, f"excess {excess}"


def cmd_weave_oracle(run, args):
    frames = [run.frame(p) for p in args.files]
    rep = woven_oracle(frames, cap=_cap(args), workers=args.workers)
    code = EXIT_OK if rep.is_woven else EXIT_NEGATIVE
    word = "woven" if rep.is_woven else "not woven"
    return code, _oracle_dict(rep), (f"{word}: universal bounds [{rep.universal_lower:.12g}, "
                                     f"{rep.universal_upper:.12g}], worst {rep.worst_assignment.one_based()}")


def cmd_distance(run, args):
    phi, psi = run.frame(args.file1), run.frame(args.file2)
    threshold = math.sqrt(phi.tol)
    if args.min_partition:
        best, arg = min_partition_distance(phi, psi, cap=_cap(args))
        result = {"min_distance": best, "threshold": threshold,
                  "assignment": list(arg.one_based()), "J": _one_based(arg.subset(0))}
        positive = best > threshold
        summary = f"min partition distance {best:.6g} at J={result['J']}"
    else:
        d = subspace_distance(phi.vectors, psi.vectors, dim=phi.dim)
        result = {"d_w1_of_w2": d.d_w1_of_w2, "d_w2_of_w1": d.d_w2_of_w1, "d": d.d,
                  "threshold": threshold}
        positive = d.d > threshold
        summary = f"subspace distance {d.d:.6g}"
    result["positive"] = positive
    return (EXIT_OK if positive else EXIT_NEGATIVE), result, summary


def _certify(run, args):
    kind = args.kind
    files = args.files
    need = 2 if kind in ("two-op", "perturb", "paulsen") else 1
    if len(files) != need:
        raise UsageError(f"--kind {kind} takes {need} frame file(s), got {len(files)}")
    frames = [run.frame(p) for p in files]
    phi = frames[0]
    cap = _cap(args)

    def need_alpha():
        if args.alpha is None:
            raise UsageError(f"--kind {kind} needs --alpha")
        return args.alpha

    if kind == "invertible":
        return C.cert_invertible_operator(phi, _operator_arg(run, args, phi.dim))
    if kind == "dual":
        return C.cert_dual_weaving(phi, _direction_arg(run, args.u, phi), need_alpha())
    if kind == "approx-dual":
        U = _direction_arg(run, args.u, phi)
        return C.cert_approx_dual_weaving(phi, _operator_arg(run, args, phi.dim), U.vectors.conj(),
                                          need_alpha())
    if kind == "canonical":
        return C.cert_canonical_dual_woven(phi, reading=args.reading, cap=cap)
    if kind == "two-op":
        psi = frames[1]
        if args.canonical:
            return C.cert_two_operator(phi, psi, canonical=True, cap=cap)
        if args.t1_file is None or args.t2_file is None:
            raise UsageError("--kind two-op needs --canonical or both --t1-file and --t2-file")
        return C.cert_two_operator(phi, psi, run.operator(args.t1_file, phi.dim),
                                   run.operator(args.t2_file, phi.dim), cap=cap)
    if kind == "admissible":
        return C.cert_admissible(phi, _operator_arg(run, args, phi.dim))
    if kind == "perturb":
        psi = frames[1]
        if args.mu is None:
            raise UsageError("--kind perturb needs --mu (a number, or 'auto')")
        if args.mu == "auto":
            if args.lambda1 or args.lambda2:
                raise UsageError("--mu auto uses lambda1 = lambda2 = 0")
            return C.cert_perturbation(phi, psi)
        try:
            mu = float(args.mu)
        except ValueError:
            raise UsageError(f"--mu must be a number or 'auto', got {args.mu!r}") from None
        return C.cert_perturbation(phi, psi, args.lambda1, args.lambda2, mu, mode="probe",
                                   probes=args.probes, seed=args.seed)
    if kind == "paulsen":
        if args.eps is None:
            raise UsageError("--kind paulsen needs --eps")
        return C.cert_equal_norm_parseval(phi, frames[1], args.eps, need_alpha())
    raise UsageError(f"unknown kind {kind!r}")


def cmd_certify(run, args):
    try:
        cert = _certify(run, args)
    except ValueError as exc:
        if isinstance(exc, FrameError):
            raise
        raise UsageError(str(exc)) from None
    result = cert.to_dict()
    details = result["details"]
    for key in ("riesz_indices", "redundant_indices", "argmin"):
        if key in details:
            details[key] = _one_based(details[key])
    if args.verify:
        result["oracle"] = _oracle_dict(C.certify_by_oracle(cert, cap=_cap(args)))
    code = EXIT_OK if cert.holds else EXIT_NEGATIVE
    return code, result, f"{cert.kind}: {'holds' if cert.holds else 'fails'} ({cert.message})"


def cmd_soundness_sweep(run, args):
    kinds = args.kinds.split(",") if args.kinds else None
    if kinds:
        bad = [k for k in kinds if k not in GENERATORS]
        if bad:
            raise UsageError(f"unknown kinds: {', '.join(bad)}")
    res = soundness_sweep(seed=args.seed, trials=args.trials, kinds=kinds, cap=_cap(args))
    viol = [asdict(r) for r in res.violations]
    bviol = [asdict(r) for r in res.bessel_violations]
    result = {"trials": len(res.records), "summary": res.summary(),
              "violations": viol, "bessel_violations": bviol}
    ok = not viol and not bviol
    return (EXIT_OK if ok else EXIT_NEGATIVE), result, (
        f"{len(res.records)} instances, {len(viol)} soundness violations, "
        f"{len(bviol)} upper-bound violations")


# --- parser --------------------------------------------------------------------------------

def _add_operator_flags(p):
    p.add_argument("--t-scale", type=float, help="operator T = S * identity")
    p.add_argument("--t-phase", type=float, help="operator T = exp(i * THETA) * identity")
    p.add_argument("--t-file", help="operator grid file")


def _add_cap(p):
    p.add_argument("--cap", type=int, help="enumeration cap (default: $FW_CAP or 2**20)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wovenframes", description="Woven frame toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a frame file")
    p.add_argument("family", choices=["example", "random", "harmonic"])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--m", type=int, help="number of vectors (random, harmonic)")
    p.add_argument("--lower", type=float, default=1.0, help="optimal lower bound (random)")
    p.add_argument("--upper", type=float, help="optimal upper bound (random; default = lower)")
    p.add_argument("--field", choices=["real", "complex"], default="complex")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="frame file to write")
    p.add_argument("--u-out", help="example only: file for the null direction")
    p.set_defaults(func=cmd_gen)

    for name, func in (("bounds", cmd_bounds), ("classify", cmd_classify), ("excess", cmd_excess)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.set_defaults(func=func)

    p = sub.add_parser("dual", help="canonical, alternate or approximate dual")
    p.add_argument("file")
    p.add_argument("--alternate", metavar="U_FILE", help="null direction for S^-1 phi + alpha U")
    p.add_argument("--approx", action="store_true", help="approximate dual T* S^-1 phi + alpha theta* delta")
    p.add_argument("--theta-from", metavar="U_FILE",
                   help="--approx: theta is the analysis operator of this family")
    p.add_argument("--alpha", type=float)
    _add_operator_flags(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("weave-oracle", help="decide wovenness by full enumeration")
    p.add_argument("files", nargs="+")
    p.add_argument("--workers", type=int, default=1)
    _add_cap(p)
    p.set_defaults(func=cmd_weave_oracle)

    p = sub.add_parser("distance", help="subspace distance between spans")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--min-partition", action="store_true",
                   help="minimise d(span phi_J, span psi_J^c) over all J")
    _add_cap(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("certify", help="evaluate a sufficient condition for wovenness")
    p.add_argument("--kind", required=True, choices=list(GENERATORS))
    p.add_argument("files", nargs="+")
    p.add_argument("--u", metavar="U_FILE", help="dual/approx-dual: direction family")
    p.add_argument("--alpha", type=float)
    p.add_argument("--reading", choices=["frame", "riesz"], default="frame")
    p.add_argument("--canonical", action="store_true", help="two-op: use S^-1 of each frame")
    p.add_argument("--t1-file")
    p.add_argument("--t2-file")
    p.add_argument("--mu", help="perturb: 'auto' (exact operator norm) or a number (probe mode)")
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--eps", type=float, help="paulsen: nearly equal-norm Parseval epsilon")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="also run the enumeration oracle")
    _add_operator_flags(p)
    _add_cap(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("soundness-sweep", help="randomised certificate-vs-oracle check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=240)
    p.add_argument("--kinds", help="comma-separated subset of certificate kinds")
    _add_cap(p)
    p.set_defaults(func=cmd_soundness_sweep)
    return parser


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    run = Run(args)
    t0 = time.perf_counter()
    try:
        code, result, summary = args.func(run, args)
    except (UsageError, *_USAGE_ERRORS) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except EnumerationTooLarge as exc:
        code, result, summary = EXIT_CAP, {"error": "EnumerationTooLarge", "count": exc.count,
                                           "cap": exc.cap}, f"error: {exc}"
    except FrameError as exc:
        code, result, summary = EXIT_NEGATIVE, {"error": type(exc).__name__,
                                                "message": str(exc)}, f"negative: {exc}"
    report = {
        "command": args.command,
        "inputs": run.inputs(),
        "result": result,
        "seed": run.seed,
        "timing": {"seconds": time.perf_counter() - t0},
    }
    print(dumps(report), file=stdout)
    print(summary, file=stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run_command(argv))
