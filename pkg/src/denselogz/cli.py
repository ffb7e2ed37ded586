"""Command-line interface. Every command prints one JSON document (or a
table with ``--pretty``).

Exit codes: 0 ok, 2 parse/usage error, 3 resource cap exceeded, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from denselogz import exact
from denselogz.errors import NumericalError, ParseError, ResourceError
from denselogz.estimator import EstimatorConfig, estimate_log_z, estimate_log_z_mrf
from denselogz.experiments import budget_sweep, tightness_table
from denselogz.instance_io import format_instance, load_instance
from denselogz.magnetization import estimate_magnetization
from denselogz.model import (
    IsingInstance,
    MrfInstance,
    gen_curie_weiss,
    gen_random_dense,
    gen_random_mrf,
    gen_tightness_pair,
    norms,
)
from denselogz.regularity import fk_decompose, tensor_decompose


def _float_list(text):
    """``3..8`` (integer range), ``2,4,6`` or a single number."""
    if ".." in text:
        a, b = text.split("..", 1)
        return [float(v) for v in range(int(a), int(b) + 1)]
    return [float(v) for v in text.split(",") if v]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def _emit(payload, pretty: bool, out=None):
    out = out or sys.stdout
    payload = _jsonable(payload)
    if not pretty:
        json.dump(payload, out, sort_keys=True)
        out.write("\n")
        return
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if rows:
        cols = list(rows[0].keys())
        out.write("  ".join(f"{c:>14s}" for c in cols) + "\n")
        for r in rows:
            out.write("  ".join(_cell(r.get(c)) for c in cols) + "\n")
        return
    for k, v in _flatten(payload):
        out.write(f"{k:32s} {v}\n")


def _cell(v):
    if isinstance(v, float):
        return f"{v:14.6g}"
    return f"{str(v):>14s}"


def _flatten(d, prefix=""):
    for k, v in d.items():
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        else:
            yield f"{prefix}{k}", v


def _config(args) -> EstimatorConfig:
    return EstimatorConfig(
        eps=args.epsilon,
        fail_prob=args.fail_prob,
        seed=args.seed,
        mode=args.mode,
        lam=args.lam,
        sweep=args.sweep,
        cap_cells=args.cap_cells,
        threads=args.threads,
    )


def cmd_estimate(args) -> dict:
    inst = load_instance(args.input)
    cfg = _config(args)
    if isinstance(inst, MrfInstance):
        rep = estimate_log_z_mrf(inst, mode=args.regime, config=cfg)
    else:
        rep = estimate_log_z(inst, config=cfg)
    out = rep.as_dict()
    out["n"] = inst.n
    if args.exact:
        truth = (exact.exact_log_z_mrf(inst, cap_n=args.cap_n) if isinstance(inst, MrfInstance)
                 else exact.exact_log_z(inst, cap_n=args.cap_n)).log_value
        diff = abs(rep.log_z_hat - truth)
        out["exact"] = {"log_z": truth, "abs_diff": diff, "within_budget": diff <= rep.budget.total}
    return out


def cmd_exact(args) -> dict:
    inst = load_instance(args.input)
    if isinstance(inst, MrfInstance):
        res = exact.exact_log_z_mrf(inst, cap_n=args.cap_n)
        return {"n": inst.n, "k": inst.k, "log_z": res.log_value, "states": res.states_enumerated}
    res = exact.exact_log_z(inst, cap_n=args.cap_n)
    out = {"n": inst.n, "log_z": res.log_value, "states": res.states_enumerated}
    if args.shift is not None:
        out["magnetization"] = exact.exact_magnetization(inst, args.shift, cap_n=args.cap_n)
        out["shift"] = args.shift
    return out


def cmd_decompose(args) -> dict:
    inst = load_instance(args.input)
    mode = args.mode if args.mode != "auto" else ("exact" if inst.n <= 16 else "sampled")
    if isinstance(inst, MrfInstance):
        dec = tensor_decompose(inst, args.epsilon, args.fail_prob, mode, args.seed, regime=args.regime)
    else:
        dec = fk_decompose(inst, args.epsilon, args.fail_prob, mode, args.seed)
    if inst.n <= args.cap_n:
        dec = dec.certify(cap_n=args.cap_n)
    return {
        "n": dec.n,
        "order": dec.order,
        "eps": dec.eps,
        "mode": dec.mode,
        "width": dec.width,
        "coefficients": dec.coefficients,
        "sets": [list(map(list, c.sets)) for c in dec.cuts],
        "coefficient_length": dec.coefficient_length,
        "potentials": list(dec.potentials),
        "threshold": dec.threshold,
        "claimed_error": dec.claimed_error,
        "certified_error": dec.certified_error,
        "certified_within_claim": None if dec.certified_error is None
        else dec.certified_error <= dec.claimed_error,
    }


def cmd_magnetize(args) -> dict:
    inst = load_instance(args.input)
    if not isinstance(inst, IsingInstance):
        raise ParseError("magnetize needs an Ising instance")
    est = estimate_magnetization(inst, args.h0, config=_config(args))
    out = est.as_dict()
    if args.exact:
        out["exact"] = exact.exact_magnetization(inst, args.h0, cap_n=args.cap_n)
    return out


def cmd_gen(args):
    if args.family == "random":
        inst = gen_random_dense(args.n, args.delta, args.seed)
    elif args.family == "curie-weiss":
        inst = gen_curie_weiss(args.n, args.beta)
    elif args.family == "mrf":
        inst = gen_random_mrf(args.n, args.k, args.delta, args.seed)
    else:
        heavy, uniform = gen_tightness_pair(args.n, args.M, args.eps, args.delta, args.seed)
        inst = heavy if args.which == "heavy" else uniform
    text = format_instance(inst)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        return {"written": args.output, "n": inst.n, "delta_max": norms(inst).delta_max}
    sys.stdout.write(text)
    return None


def cmd_experiment(args) -> dict:
    if args.name == "tightness":
        rows = tightness_table(args.n, args.eps, args.delta, [float(m) for m in args.M], args.seed,
                               cap_n=args.cap_n)
        return {"experiment": "tightness", "n": args.n, "eps": args.eps, "delta": args.delta, "rows": rows}
    inst = load_instance(args.input)
    cfg = _config(args)
    rows = budget_sweep(inst, args.eps_values, seed=args.seed, fail_prob=args.fail_prob, config=cfg,
                        cap_n=args.cap_n)
    return {"experiment": "budget-sweep", "n": inst.n, "rows": rows}


def _add_common(p, estimator=True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--cap-n", type=int, default=24, help="largest n for exact enumeration")
    if estimator:
        p.add_argument("--epsilon", type=float, default=0.5)
        p.add_argument("--fail-prob", type=float, default=0.125)
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--mode", choices=["auto", "exact", "sampled"], default="auto",
                       help="cut-norm search")
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="entropy solver accuracy (default eps/2)")
        p.add_argument("--sweep", choices=["auto", "profiles", "grid"], default="auto")
        p.add_argument("--cap-cells", type=int, default=200_000)
        p.add_argument("--regime", choices=["constant", "linear"], default="constant",
                       help="width regime for order >= 3 instances")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="denselogz", description="log-partition estimates for dense models")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate log Z with an error budget")
    p.add_argument("input")
    p.add_argument("--exact", action="store_true", help="also run the exact oracle")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", help="exact log Z by enumeration")
    p.add_argument("input")
    p.add_argument("--shift", type=float, default=None, help="also report the magnetization at this field shift")
    _add_common(p, estimator=False)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("decompose", help="cut decomposition report")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("magnetize", help="magnetization by finite differences")
    p.add_argument("input")
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--exact", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_magnetize)

    p = sub.add_parser("gen", help="write a generated instance")
    gsub = p.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=float, default=1.0)
    g = gsub.add_parser("curie-weiss")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--beta", type=float, required=True)
    g = gsub.add_parser("tightness")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--M", type=float, required=True)
    g.add_argument("--eps", type=float, default=0.2)
    g.add_argument("--delta", type=float, default=0.25)
    g.add_argument("--which", choices=["heavy", "uniform"], default="heavy")
    g = gsub.add_parser("mrf")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--delta", type=float, default=0.5)
    for g in gsub.choices.values():
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("-o", "--output", default=None)
        g.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="experiment tables")
    esub = p.add_subparsers(dest="name", required=True)
    e = esub.add_parser("tightness")
    e.add_argument("--n", type=int, default=10)
    e.add_argument("--eps", type=float, default=0.2)
    e.add_argument("--delta", type=float, default=0.25)
    e.add_argument("--M", type=_float_list, default=[2.0, 4.0, 6.0, 8.0],
                   help="values of M: '3..8', '2,4,6' or one number")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--pretty", action="store_true")
    e.add_argument("--cap-n", type=int, default=24)
    e = esub.add_parser("budget-sweep")
    e.add_argument("input")
    e.add_argument("--eps-values", type=_float_list, default=[0.4, 0.6, 0.8])
    _add_common(e)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        payload = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return 2
    if payload is not None:
        _emit(payload, getattr(args, "pretty", False))
    return 0


if __name__ == "__main__":
    sys.exit(main())
