"""Command line: ``solve``, ``gen``, ``verify`` and ``bench``.

Complex numbers are written as ``[re, im]`` pairs in JSON.
"""

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import instances, verify
from .blaschke import BlaschkeProduct
from .solver import SolveOptions, classify, solve
from .structure import validate_points

log = logging.getLogger("critblaschke")

CSV_HEADER = (
    "instance",
    "n",
    "family",
    "transformed",
    "iterations",
    "cpu_seconds",
    "max_error",
    "max_abs_derivative",
    "classification",
    "solved",
)

EXIT_FAILED = 1
EXIT_USAGE = 2


class FormatError(ValueError):
    pass


# --- serialisation -------------------------------------------------------------------------------


def encode_complex(values):
    return [[float(z.real), float(z.imag)] for z in np.atleast_1d(values)]


def decode_complex(items, field):
    if not isinstance(items, list):
        raise FormatError(f"field '{field}': expected a list of [re, im] pairs")
    out = []
    for pos, item in enumerate(items):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise FormatError(f"field '{field}' entry {pos}: expected [re, im], got {item!r}")
        out.append(complex(item[0], item[1]))
    return np.array(out, dtype=np.complex128)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from exc


def _check_n(doc, values, path, field):
    if "n" not in doc:
        raise FormatError(f"{path}: missing field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"{path}: field 'n' must be a positive integer, got {n!r}")
    if values.size != n:
        raise FormatError(f"{path}: field 'n' is {n} but field '{field}' has {values.size} entries")


def read_instance(path):
    doc = _load_json(path)
    if not isinstance(doc, dict) or "points" not in doc:
        raise FormatError(f"{path}: missing field 'points'")
    points = decode_complex(doc["points"], "points")
    _check_n(doc, points, path, "points")
    return points, doc


def read_coefficients(path):
    doc = _load_json(path)
    if not isinstance(doc, dict) or "a" not in doc:
        raise FormatError(f"{path}: missing field 'a'")
    a = decode_complex(doc["a"], "a")
    _check_n(doc, a, path, "a")
    return a


def instance_document(points, **meta):
    doc = {"n": int(len(points)), "points": encode_complex(points)}
    doc.update({k: v for k, v in meta.items() if v is not None})
    return doc


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc):
    return json.dumps(doc, indent=2) + "\n"


def _report_csv(rep):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["max_error", "max_abs_derivative", "classification", "solved", "status", "iterations"])
    w.writerow([repr(rep.max_error), repr(rep.max_abs_derivative), rep.classification,
                int(rep.accurately_solved), rep.status, rep.iterations])
    return buf.getvalue()


# --- solve / gen / verify ------------------------------------------------------------------------


def _options(args):
    return SolveOptions(
        residual_tol=args.tol,
        max_iterations=args.max_iter,
        transform_enabled=not args.no_transform,
        rng_seed=args.seed,
    )


def cmd_solve(args):
    points, _ = read_instance(args.input)
    opts = _options(args)
    validate_points(points, allow_zero=opts.transform_enabled)
    result = solve(points, opts)
    rep = verify.report(points, result)
    B = result.product
    doc = {
        "n": B.n,
        "a": encode_complex(B.a),
        "zeros": encode_complex(B.zeros()),
        "critical_points": encode_complex(rep.computed_points),
        "transformed": opts.transform_enabled,
        "center": None if result.automorphism is None else encode_complex(result.automorphism.z_star)[0],
        "warnings": list(result.warnings),
        "report": rep.as_dict(),
    }
    _emit(_report_csv(rep) if args.format == "csv" else _dump(doc), args.out)
    if result.status != "converged":
        print(f"solver failed: status {result.status} after {result.iterations} iterations",
              file=sys.stderr)
        return EXIT_FAILED
    return 0


def cmd_gen(args):
    spec = instances.InstanceSpec(args.family, args.n, args.r, args.seed)
    doc = instance_document(spec.points(), family=spec.family, r=spec.r, seed=spec.seed)
    _emit(_dump(doc), args.out)
    return 0


def verify_coefficients(a, points):
    """Critical points, pairing and accuracy of a given product, without solving."""
    B = BlaschkeProduct(a)
    kind, _ = classify(B.a)
    zc = verify.computed_critical_points(B)
    assign = verify.bottleneck_assign(np.abs(points[:, None] - zc[None, :]))
    return {
        "n": B.n,
        "classification": kind,
        "critical_points": encode_complex(zc),
        "pairing": [int(v) for v in assign.pairing],
        "max_error": assign.max_distance,
        "max_abs_derivative": float(np.max(np.abs(B.derivative(zc)))),
        "accurate": bool(assign.max_distance < verify.ACCURACY),
    }


def cmd_verify(args):
    a = read_coefficients(args.coefficients)
    points, _ = read_instance(args.points)
    if a.size != points.size:
        raise FormatError(f"coefficient file has n={a.size} but points file has n={points.size}")
    try:
        doc = verify_coefficients(a, points)
    except ValueError as exc:
        doc = {"n": int(a.size), "classification": classify(a)[0], "error": str(exc), "accurate": False}
    _emit(_dump(doc), args.out)
    return 0


# --- bench ---------------------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchConfig:
    family: str
    n: int
    r: float
    transformed: bool


def suite_configs(args):
    both = (True, False)
    if args.suite == "test1":
        return [BenchConfig("disk", 20, 0.99, t) for t in both]
    if args.suite == "test2":
        return [BenchConfig("disk", 30, round(0.1 * k, 1), True) for k in range(1, 11)]
    if args.suite == "test3":
        return [BenchConfig("disk", n, 0.999, True) for n in range(10, 61, 10)]
    if args.suite == "test4":
        return [BenchConfig("cluster", 10, 0.0, t) for t in both] + [
            BenchConfig("circle", 50, 0.95, t) for t in both
        ]
    sizes = args.n or [10]
    modes = both if args.both else (not args.no_transform,)
    return [BenchConfig(args.family, n, args.r, t) for n in sizes for t in modes]


def instance_id(cfg, idx):
    tag = "T" if cfg.transformed else "U"
    return f"{cfg.family}-n{cfg.n}-r{cfg.r:g}-{tag}-{idx:03d}"


def run_instance(job):
    cfg, idx, seed, tol, max_iter = job
    points = instances.generate(cfg.family, cfg.n, cfg.r, seed + idx)
    opts = SolveOptions(residual_tol=tol, max_iterations=max_iter,
                        transform_enabled=cfg.transformed, rng_seed=seed + idx)
    t0 = time.process_time()
    result = solve(points, opts)
    cpu = time.process_time() - t0
    rep = verify.report(points, result)
    return {
        "instance": instance_id(cfg, idx),
        "n": cfg.n,
        "family": cfg.family,
        "transformed": int(cfg.transformed),
        "iterations": result.iterations,
        "cpu_seconds": cpu,
        "max_error": rep.max_error,
        "max_abs_derivative": rep.max_abs_derivative,
        "classification": result.classification,
        "solved": int(rep.accurately_solved),
    }


def triplet(values):
    v = np.asarray(values, dtype=np.float64)
    return [float(v.min()), float(np.median(v)), float(v.max())]


def summarize(configs, rows, count):
    """Min/median/max triplets and solved percentage per configuration."""
    out = []
    for ci, cfg in enumerate(configs):
        chunk = rows[ci * count : (ci + 1) * count]
        if not chunk:
            break
        out.append({
            "family": cfg.family,
            "n": cfg.n,
            "r": cfg.r,
            "transformed": cfg.transformed,
            "instances": len(chunk),
            "iterations": triplet([r["iterations"] for r in chunk]),
            "cpu_seconds": triplet([r["cpu_seconds"] for r in chunk]),
            "max_error": triplet([r["max_error"] for r in chunk]),
            "max_abs_derivative": triplet([r["max_abs_derivative"] for r in chunk]),
            "solved_percent": 100.0 * sum(r["solved"] for r in chunk) / len(chunk),
        })
    return out


def _csv_cell(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else v


def cmd_bench(args):
    configs = suite_configs(args)
    jobs = [(cfg, idx, args.seed, args.tol, args.max_iter) for cfg in configs for idx in range(args.N)]
    csv_fh = open(args.out + ".csv", "w", newline="") if args.out else None
    if csv_fh is None and args.format == "csv":
        csv_fh = sys.stdout
    writer = csv.writer(csv_fh, lineterminator="\n") if csv_fh else None
    if writer:
        writer.writerow(CSV_HEADER)
    rows = []
    interrupted = False
    pool = ProcessPoolExecutor(args.jobs) if args.jobs > 1 else None
    try:
        results = pool.map(run_instance, jobs) if pool else map(run_instance, jobs)
        for row in results:
            rows.append(row)
            if writer:
                writer.writerow([_csv_cell(row[k]) for k in CSV_HEADER])
                csv_fh.flush()
            log.info("%s iterations=%d max_error=%.2e solved=%d", row["instance"], row["iterations"],
                     row["max_error"], row["solved"])
    except KeyboardInterrupt:
        interrupted = True
        print(f"interrupted after {len(rows)} of {len(jobs)} instances", file=sys.stderr)
    finally:
        if pool:
            pool.shutdown(wait=not interrupted, cancel_futures=True)
        if csv_fh not in (None, sys.stdout):
            csv_fh.close()
    summary = {
        "suite": args.suite,
        "instances_per_config": args.N,
        "seed": args.seed,
        "complete": not interrupted,
        "configs": summarize(configs, rows, args.N),
    }
    if args.out:
        with open(args.out + ".json", "w") as fh:
            fh.write(_dump(summary))
    if args.format == "json":
        sys.stdout.write(_dump(summary))
    return 130 if interrupted else 0


# --- argument parsing ----------------------------------------------------------------------------


def _solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-12, help="residual tolerance (default 1e-12)")
    p.add_argument("--max-iter", type=int, default=5000, help="iteration budget (default 5000)")
    p.add_argument("--no-transform", action="store_true", help="solve on the raw points")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="critblaschke",
        description="Finite Blaschke products with prescribed critical points.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("input")
    _solver_flags(p)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("family", choices=instances.FAMILIES)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a coefficient file against prescribed points")
    p.add_argument("coefficients")
    p.add_argument("points")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("suite", choices=("test1", "test2", "test3", "test4", "custom"))
    p.add_argument("-N", type=int, default=50, help="instances per configuration")
    p.add_argument("--family", choices=instances.FAMILIES, default="disk")
    p.add_argument("--n", type=int, nargs="+", help="sizes for the custom suite")
    p.add_argument("-r", type=float, default=0.99)
    p.add_argument("--both", action="store_true", help="custom suite: transformed and raw")
    _solver_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write OUT.csv and OUT.json")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="what goes to stdout")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
