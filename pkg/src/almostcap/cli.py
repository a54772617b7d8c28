"""Command line front end: ``almostcap <subcommand> [flags]``.

Every subcommand prints one JSON run report (or CSV for sweeps).  Exit
status is 0 on success, 1 on a domain error (with an ``{"error": ...}``
report) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import ap, bounds, capsearch, chain, hypergraph, tensor
from .errors import BadConfigError, CapError
from .field import PointSet, parse_set, serialize_set

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

# flags describing how to run rather than what to compute; kept out of reports
_RUNTIME_FLAGS = {"threads", "format", "config", "command", "out"}


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


class UsageError(Exception):
    pass


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise BadConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _range(text: str) -> list:
    """``lo:hi[:step]`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step <= 0:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(v) for v in text.split(",") if v.strip()]
    except (ValueError, IndexError) as exc:
        raise BadConfigError(f"bad range {text!r}") from exc


def read_config(path: str) -> dict:
    """``key=value`` lines; ``#`` comments and blank lines ignored."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BadConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise BadConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise BadConfigError(f"line {lineno}: empty key")
        out[key.replace("-", "_")] = value
    return out


def _load_set(args) -> PointSet:
    if not args.set:
        raise UsageError("--set is required")
    try:
        text = Path(args.set).read_text(encoding="utf-8")
    except OSError as exc:
        raise CapError(f"cannot read set file {args.set}: {exc}") from exc
    return parse_set(text)


def _triple(args, q: int) -> ap.CoeffTriple:
    if not args.coeffs:
        return ap.CoeffTriple.default(q)
    cs = _int_list(args.coeffs)
    if len(cs) != 3:
        raise UsageError("--coeffs needs exactly three values for this subcommand")
    return ap.CoeffTriple(*cs, q)


def _codes(points: PointSet) -> list:
    return [int(c) for c in points.codes]


# -- subcommands -------------------------------------------------------------


def cmd_profile(args):
    points = _load_set(args)
    prof = ap.degree_profile(points, _triple(args, points.q), threads=args.threads)
    if args.format == "csv":
        rows = [["code", "degree"]] + [[int(c), int(d)] for c, d in zip(points.codes, prof.degrees)]
        return points, rows
    out = prof.to_json()
    out["total"] = prof.total
    return points, out


def cmd_classify(args):
    points = _load_set(args)
    if args.eps is None or args.delta is None:
        raise UsageError("classify needs --eps and --delta")
    prof = ap.degree_profile(points, _triple(args, points.q), threads=args.threads)
    result = ap.classify_eps_delta(prof, args.eps, args.delta).to_json()
    result["size"] = len(points)
    return points, result


def cmd_capcheck(args):
    points = _load_set(args)
    t = _triple(args, points.q)
    sol = ap.nonconstant_solution(points, t)
    return points, {"is_cap_set": sol is None, "nonconstant_solution": list(sol) if sol else None}


def cmd_tensor(args):
    if args.clp:
        if args.q is None or args.n is None:
            raise UsageError("--clp needs --q and --n")
        t = _triple(args, args.q)
        dec = tensor.clp_decomposition(args.q, args.n, t)
        out = dec.to_json()
        out["bound"] = 3 * bounds.monomial_count(args.q, args.n)
        return None, out
    points = _load_set(args)
    T = tensor.ap_tensor(points, _triple(args, points.q))
    out = T.to_json()
    out["points"] = _codes(points)
    if args.rank:
        out["slice_rank"] = tensor.slice_rank_exact_small(T)
    return points, out


def cmd_indep(args):
    points = _load_set(args)
    t = _triple(args, points.q)
    T = tensor.ap_tensor(points, t)
    subset = range(len(points))
    if args.eps is not None and args.delta is not None:
        prof = ap.degree_profile(points, t, threads=args.threads)
        light = ap.classify_eps_delta(prof, args.eps, args.delta).witness
        subset = [int(i) for i in points.index_of(light.codes)]
    H = hypergraph.support_hypergraph(T, subset)
    chosen = hypergraph.caro_wei_greedy(H, args.trials, args.seed, threads=args.threads)
    diag = sorted(v for v in chosen if (v, v, v) in T.entries)
    bound = hypergraph.caro_wei_bound(H)
    return points, {
        "hypergraph": H.to_json(),
        "independent_set": [int(points.codes[v]) for v in sorted(chosen)],
        "size": len(chosen),
        "caro_wei_sum": bound,
        "ratio": len(chosen) / bound if bound else None,
        "rank_lower_bound": tensor.diagonal_rank_certificate(T, diag),
    }


def cmd_bounds(args):
    if args.q is None:
        raise UsageError("bounds needs --q")
    if args.n_sweep:
        rows = [["n", "M_n", "finite_rate"]]
        for n in _range(args.n_sweep):
            if n < 1:
                raise BadConfigError("sweep values of n must be >= 1")
            rows.append([n, bounds.monomial_count(args.q, n), repr(bounds.finite_rate(args.q, n))])
        return None, rows
    return None, bounds.bounds_report(args.q, args.n, args.tol).to_json()


def cmd_chain(args):
    points = _load_set(args)
    if not args.coeffs:
        raise UsageError("chain needs --coeffs")
    cv = chain.CoeffVector(tuple(_int_list(args.coeffs)), points.q)
    res = chain.find_distinct_solution(
        points, cv, budget=args.budget, deterministic=args.deterministic, threads=args.threads
    )
    return points, res.to_json()


def cmd_search(args):
    if args.q is None or args.n is None:
        raise UsageError("search needs --q and --n")
    res = capsearch.max_cap_exact(args.q, args.n, _triple(args, args.q), mode=args.mode, budget=args.budget)
    return None, res.to_json()


def cmd_gen(args):
    if args.q is None or args.n is None:
        raise UsageError("gen needs --q and --n")
    if args.planted is not None:
        res = capsearch.planted_light_set(
            args.q, args.n, _triple(args, args.q), args.planted, seed=args.seed,
            density=args.density, eps=args.eps if args.eps is not None else 0.5,
        )
        points, extra = res.points, {"achieved_fraction": res.achieved, "removed": res.removed}
    else:
        points, extra = capsearch.random_subset(args.q, args.n, args.density, args.seed), {}
    if args.out:
        Path(args.out).write_text(serialize_set(points), encoding="utf-8")
    return None, {"q": points.q, "n": points.n, "size": len(points), "codes": _codes(points), **extra}


SCAN_KEYS = {"q", "n", "density", "eps", "seeds", "coeffs", "sets"}
SCAN_HEADER = ["q", "n", "density", "seed", "eps", "size", "heavy_fraction"]


def scan_rows(config: dict, threads: int = 1) -> list:
    """Heavy-set fraction sweep described by a ``key=value`` config."""
    unknown = set(config) - SCAN_KEYS - {"config", "format", "threads"}
    if unknown:
        raise BadConfigError(f"unknown scan keys: {sorted(unknown)}")
    qs = _range(config.get("q", ""))
    ns = _range(config.get("n", ""))
    densities = _float_list(config.get("density", ""))
    epss = _float_list(config.get("eps", ""))
    seeds = _range(config.get("seeds", "0"))
    coeffs = config.get("coeffs", "")
    rows = [SCAN_HEADER]

    def triple(q):
        if not coeffs:
            return ap.CoeffTriple.default(q)
        cs = _int_list(coeffs)
        if len(cs) != 3:
            raise BadConfigError("coeffs must list three values")
        return ap.CoeffTriple(*cs, q)

    def emit(points, t, density, seed):
        prof = ap.degree_profile(points, t, threads=threads) if len(points) else None
        for eps in epss:
            if prof is None:
                frac = "nan"
            else:
                frac = repr(len(ap.heavy_set(prof, eps)) / len(points))
            rows.append([points.q, points.n, density, seed, repr(eps), len(points), frac])

    for q in qs:
        t = triple(q)
        for n in ns:
            for density in densities:
                for seed in seeds:
                    emit(capsearch.random_subset(q, n, density, seed), t, repr(density), seed)
    for path in [p for p in config.get("sets", "").split(",") if p.strip()]:
        try:
            points = parse_set(Path(path.strip()).read_text(encoding="utf-8"))
        except OSError as exc:
            raise BadConfigError(f"cannot read set file {path}: {exc}") from exc
        emit(points, triple(points.q), "", "")
    return rows


def cmd_scan(args):
    if not args.config:
        raise UsageError("scan needs --config")
    return None, scan_rows(args._config, threads=args.threads)


COMMANDS = {
    "profile": cmd_profile,
    "classify": cmd_classify,
    "capcheck": cmd_capcheck,
    "tensor": cmd_tensor,
    "indep": cmd_indep,
    "bounds": cmd_bounds,
    "chain": cmd_chain,
    "search": cmd_search,
    "gen": cmd_gen,
    "scan": cmd_scan,
}

CSV_COMMANDS = {"profile", "bounds", "scan"}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--set", help="point-set file")
    shared.add_argument("--coeffs", help="comma-separated coefficients, e.g. 1,1,1")
    shared.add_argument("--eps", type=float)
    shared.add_argument("--delta", type=float)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--format", choices=["json", "csv"], default="json")
    shared.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    shared.add_argument("--budget", type=int)
    shared.add_argument("--config", help="key=value file supplying defaults for any flag")

    parser = argparse.ArgumentParser(prog="almostcap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommand_parsers = {}
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[shared])
        parser.subcommand_parsers[name] = p
        if name in ("tensor", "bounds", "search", "gen"):
            p.add_argument("--q", type=int)
            p.add_argument("--n", type=int)
        if name == "tensor":
            p.add_argument("--clp", action="store_true", help="CLP slice decomposition of F_q^n")
            p.add_argument("--rank", action="store_true", help="add the exact slice rank")
        if name == "indep":
            p.add_argument("--trials", type=int, default=200)
        if name == "bounds":
            p.add_argument("--n-sweep", help="lo:hi:step, emits CSV")
            p.add_argument("--tol", type=float, default=1e-12)
        if name == "chain":
            p.add_argument("--deterministic", action="store_true")
        if name == "search":
            p.add_argument("--mode", choices=["bnb", "exhaustive"], default="bnb",
                           help="exact search; only the size is reproducible across --threads")
        if name == "gen":
            p.add_argument("--density", type=float, default=0.5)
            p.add_argument("--planted", type=float, help="target light fraction")
            p.add_argument("--out", help="write the set file here")
    return parser


def _apply_config(parser, args) -> None:
    args._config = {}
    if not args.config:
        return
    cfg = read_config(args.config)
    args._config = cfg
    if args.command == "scan":
        return
    actions = {a.dest: a for a in parser.subcommand_parsers[args.command]._actions}
    for key, value in cfg.items():
        action = actions.get(key)
        if action is None:
            raise BadConfigError(f"unknown config key {key!r}")
        if getattr(args, key) != action.default:
            continue  # explicit flag wins
        if action.const is True:
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        else:
            setattr(args, key, action.type(value) if action.type else value)


def _report(args, points, results, elapsed_ms) -> dict:
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in _RUNTIME_FLAGS and not k.startswith("_") and v is not None
    }
    # the set enters through its canonical serialisation, not its file name
    hashed = {k: v for k, v in params.items() if k != "set"}
    canonical = (serialize_set(points) if points is not None else "") + json.dumps(hashed, sort_keys=True)
    return {
        "subcommand": args.command,
        "input_digest": f"{fnv1a_64(canonical.encode('utf-8')):016x}",
        "parameters": params,
        "results": results,
        "seed": args.seed,
        "wall_time_ms": round(elapsed_ms, 3),
    }


def _to_builtin(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _apply_config(parser, args)
        if args.format == "csv" and args.command not in CSV_COMMANDS:
            raise UsageError(f"--format csv is not available for {args.command}")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        points, results = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (CapError, ValueError) as exc:
        code = getattr(exc, "code", "invalid_argument")
        json.dump({"error": {"code": code, "message": str(exc)}}, stdout, indent=2)
        stdout.write("\n")
        return 1
    elapsed = (time.perf_counter() - start) * 1000
    sweep = args.command == "scan" or (args.command == "bounds" and args.n_sweep)
    csv_out = sweep or (args.format == "csv" and isinstance(results, list))
    if csv_out:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(results)
        stdout.write(buf.getvalue())
    else:
        json.dump(_report(args, points, results, elapsed), stdout, indent=2, default=_to_builtin)
        stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
