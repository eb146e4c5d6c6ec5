"""Command-line interface.

One JSON report object per invocation on stdout; logs and tracebacks stay on
stderr.  Exit code 0 on success, 2 on precondition/format/io violations with
a machine-readable {"code", "message"} object.  Seeds are echoed in every
report that consumes one.
"""

from __future__ import annotations

import argparse
import sys

from . import fileio, lowrank, nmf, sconelab
from .errors import FormatError, PreconditionError
from .matcore import ExactMatrix, FloatMatrix, GridSpec, rank_exact, rank_float, robbins_matrix
from .nnfactor import bounds, residual, verify
from .rank3geo import nnrank_rank3
from .sconelab import IceCreamPoint


def _emit(obj) -> None:
    sys.stdout.write(fileio.canonical_json(obj) + "\n")


def _fail(code: str, message: str) -> int:
    _emit({"code": code, "message": message})
    return 2


def _load_matrix(path: str, scalar: str):
    return fileio.read_matrix(path, scalar=scalar)


def _rank_of(M, tol: float):
    if isinstance(M, ExactMatrix):
        return rank_exact(M), "exact"
    return rank_float(M, tol), "float"


def _cmd_rank(args) -> int:
    M = _load_matrix(args.infile, args.scalar)
    r, method = _rank_of(M, args.tol)
    _emit({"command": "rank", "rank": r, "method": method, "rows": M.rows, "cols": M.cols})
    return 0


def _witness_obj(F):
    return fileio.factorization_to_json_obj(F)


def _cmd_nnrank(args) -> int:
    M = _load_matrix(args.infile, args.scalar)
    if args.method == "bounds":
        b = bounds(M, args.tol if isinstance(M, FloatMatrix) else 1e-8)
        _emit(
            {
                "command": "nnrank",
                "method": "bounds",
                "lower": b.lower,
                "upper": b.upper,
                "reference_upper": b.reference_upper,
            }
        )
        return 0
    if args.method == "exact2":
        F = lowrank.factor_rank_le2(M)
        if args.out:
            fileio.write_factorization_json(F, args.out)
        _emit({"command": "nnrank", "method": "exact2", "k": F.k, "witness": _witness_obj(F)})
        return 0
    if args.method == "exact3":
        result = nnrank_rank3(M, seed=args.seed, restarts=args.restarts)
        if args.out:
            fileio.write_factorization_json(result.witness, args.out)
        if args.plot_out:
            _write_plot_csv(result, args.plot_out)
        _emit(
            {
                "command": "nnrank",
                "method": "exact3",
                "k": result.k,
                "k_restricted": result.k_restricted,
                "provenance": result.method,
                "seed": args.seed,
                "polygon": [[x, y] for (x, y) in result.polygon.vertices],
                "witness": _witness_obj(result.witness),
            }
        )
        return 0
    # nmf
    if args.k is not None:
        res = nmf.search_upper(M, args.k, restarts=args.restarts, seed=args.seed, fit_tol=args.tol, iters=args.iters)
        report = {
            "command": "nnrank",
            "method": "nmf",
            "k": args.k,
            "found": res.found,
            "residual": fileio.format_sig(res.residual),
            "seed": args.seed,
            "restarts": args.restarts,
        }
        if res.witness is not None:
            if args.out:
                fileio.write_factorization_json(res.witness, args.out)
            report["witness"] = _witness_obj(res.witness)
        _emit(report)
        return 0
    k_hi = args.k_hi if args.k_hi is not None else min(M.rows, M.cols)
    scan = nmf.min_k_search(M, args.k_lo, k_hi, restarts=args.restarts, seed=args.seed, fit_tol=args.tol, iters=args.iters)
    report = {
        "command": "nnrank",
        "method": "nmf",
        "k_best": scan.k_best if scan.k_best is not None else "none",
        "residuals": {str(k): fileio.format_sig(v) for k, v in sorted(scan.residuals.items())},
        "seed": args.seed,
        "restarts": args.restarts,
    }
    if scan.witness is not None:
        if args.out:
            fileio.write_factorization_json(scan.witness, args.out)
        report["witness"] = _witness_obj(scan.witness)
    _emit(report)
    return 0


def _write_plot_csv(result, path: str) -> None:
    lines = ["kind,x,y,z"]
    for (x, y) in result.instance.inner:
        lines.append(f"inner,{x!r},{y!r},")
    for (u, v, w) in result.instance.outer:
        lines.append(f"outer,{u!r},{v!r},{w!r}")
    for (x, y) in result.polygon.vertices:
        lines.append(f"vertex,{x!r},{y!r},")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_factor(args) -> int:
    M = _load_matrix(args.infile, args.scalar)
    F = lowrank.factor_rank_le2(M)
    if args.out:
        fileio.write_factorization_json(F, args.out)
    _emit({"command": "factor", "k": F.k, "witness": _witness_obj(F)})
    return 0


def _cmd_verify(args) -> int:
    M = _load_matrix(args.infile, args.scalar)
    F = fileio.read_factorization_json(args.witness)
    ok = verify(M, F, args.tol)
    _emit(
        {
            "command": "verify",
            "valid": bool(ok),
            "k": F.k,
            "residual": fileio.format_sig(residual(M, F)),
            "tol": args.tol,
        }
    )
    return 0


def _cmd_demo_robbins(args) -> int:
    T = robbins_matrix()
    result = nnrank_rank3(T)
    _emit(
        {
            "command": "demo-robbins",
            "rank": rank_exact(T),
            "nnrank": result.k,
            "polygon": [[x, y] for (x, y) in result.polygon.vertices],
            "witness": _witness_obj(result.witness),
            "witness_exact": result.witness.is_exact(),
        }
    )
    return 0


def _cmd_scone_membership(args) -> int:
    p = IceCreamPoint(args.a, args.b, args.c)
    mem = sconelab.cone_membership(p, args.eps)
    _emit(
        {
            "command": "scone membership",
            "a": args.a,
            "b": args.b,
            "c": args.c,
            "classification": mem.region,
            "margin": mem.margin,
        }
    )
    return 0


def _cmd_scone_preimage(args) -> int:
    p = IceCreamPoint(args.a, args.b, args.c)
    grid = GridSpec(args.n, args.offset)
    f = sconelab.poisson_preimage(p, args.r, grid)
    if args.out:
        fileio.write_grid_function_csv(f, args.out)
    mom = sconelab.moments(f)
    _emit(
        {
            "command": "scone preimage",
            "target": [args.a, args.b, args.c],
            "r": args.r if args.r is not None else (p.radius / p.c + 1.0) / 2.0 if not p.is_zero() else None,
            "n": args.n,
            "min_value": float(f.values.min()),
            "moments": [mom.a, mom.b, mom.c],
            "moment_error": max(abs(mom.a - args.a), abs(mom.b - args.b), abs(mom.c - args.c)),
            "out": args.out,
        }
    )
    return 0


def _cmd_scone_growth(args) -> int:
    ns = [int(x) for x in args.ns.split(",") if x.strip()]
    rows = sconelab.growth_experiment(
        ns, offset=args.offset, seed=args.seed, restarts=args.restarts, fit_tol=args.tol
    )
    csv_text = sconelab.growth_rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    _emit(
        {
            "command": "scone growth",
            "seed": args.seed,
            "restarts": args.restarts,
            "offset": args.offset,
            "rows": [
                {
                    "n": r.n,
                    "rank_float": r.rank_float,
                    "k_exact3": r.k_exact3,
                    "k_nmf": r.k_nmf,
                    "residual_at_k_minus_1": None
                    if r.residual_at_k_minus_1 is None
                    else fileio.format_sig(r.residual_at_k_minus_1),
                }
                for r in rows
            ],
            "out": args.out,
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conerank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrix_opts(p):
        p.add_argument("--in", dest="infile", required=True, help="matrix file (.csv or .json)")
        p.add_argument("--scalar", choices=["auto", "rational", "float"], default="auto")

    p_rank = sub.add_parser("rank", help="matrix rank (exact for rational input)")
    add_matrix_opts(p_rank)
    p_rank.add_argument("--tol", type=float, default=1e-8, help="relative tolerance for numeric rank")
    p_rank.set_defaults(func=_cmd_rank)

    p_nn = sub.add_parser("nnrank", help="nonnegative rank: exact (rank<=3), heuristic, or bounds")
    add_matrix_opts(p_nn)
    p_nn.add_argument("--method", choices=["exact2", "exact3", "nmf", "bounds"], required=True)
    p_nn.add_argument("--k", type=int, default=None, help="single inner dimension for nmf")
    p_nn.add_argument("--k-lo", type=int, default=1)
    p_nn.add_argument("--k-hi", type=int, default=None)
    p_nn.add_argument("--restarts", type=int, default=nmf.DEFAULT_RESTARTS)
    p_nn.add_argument("--seed", type=int, default=0)
    p_nn.add_argument("--iters", type=int, default=nmf.DEFAULT_ITERS)
    p_nn.add_argument("--tol", type=float, default=nmf.DEFAULT_FIT_TOL)
    p_nn.add_argument("--out", default=None, help="write the witness JSON here")
    p_nn.add_argument("--plot-out", default=None, help="write plot data CSV (inner/outer/vertex rows)")
    p_nn.set_defaults(func=_cmd_nnrank)

    p_fac = sub.add_parser("factor", help="exact k = rank factorization for rank <= 2 input")
    add_matrix_opts(p_fac)
    p_fac.add_argument("--out", default=None, help="write the witness JSON here")
    p_fac.set_defaults(func=_cmd_factor)

    p_ver = sub.add_parser("verify", help="check a factorization witness against a matrix")
    add_matrix_opts(p_ver)
    p_ver.add_argument("--witness", required=True, help="factorization JSON file")
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.set_defaults(func=_cmd_verify)

    p_demo = sub.add_parser("demo-robbins", help="rank 3 vs nonnegative rank 4 on the canonical matrix")
    p_demo.set_defaults(func=_cmd_demo_robbins)

    p_scone = sub.add_parser("scone", help="cone membership, Poisson preimages, growth experiment")
    scone_sub = p_scone.add_subparsers(dest="scone_command", required=True)

    p_mem = scone_sub.add_parser("membership")
    for flag in ("--a", "--b", "--c"):
        p_mem.add_argument(flag, type=float, required=True)
    p_mem.add_argument("--eps", type=float, default=1e-9)
    p_mem.set_defaults(func=_cmd_scone_membership)

    p_pre = scone_sub.add_parser("preimage")
    for flag in ("--a", "--b", "--c"):
        p_pre.add_argument(flag, type=float, required=True)
    p_pre.add_argument("--r", type=float, default=None)
    p_pre.add_argument("--n", type=int, default=512)
    p_pre.add_argument("--offset", type=float, default=0.0)
    p_pre.add_argument("--out", default=None, help="write the sampled function CSV here")
    p_pre.set_defaults(func=_cmd_scone_preimage)

    p_gro = scone_sub.add_parser("growth")
    p_gro.add_argument("--ns", required=True, help="comma-separated grid sizes, e.g. 4,6,8")
    p_gro.add_argument("--offset", type=float, default=0.0)
    p_gro.add_argument("--seed", type=int, default=0)
    p_gro.add_argument("--restarts", type=int, default=nmf.DEFAULT_RESTARTS)
    p_gro.add_argument("--tol", type=float, default=nmf.DEFAULT_FIT_TOL)
    p_gro.add_argument("--out", default=None, help="write the growth CSV here")
    p_gro.set_defaults(func=_cmd_scone_growth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _fail("io", str(exc))
    except OSError as exc:
        return _fail("io", str(exc))
    except FormatError as exc:
        return _fail("format", str(exc))
    except PreconditionError as exc:
        return _fail("precondition", str(exc))


if __name__ == "__main__":
    sys.exit(main())
