"""Command-line front end.

Subcommands
    kernel     evaluate a kernel on points or grids (CSV rows)
    apply      apply an operator to a test-function preset at points
    verify     run the named verification suite (JSON-lines report)
    region     emit a (p, delta) region map for an operator (CSV)
    sharpness  run a quantitative sharpness experiment (JSON report)

All floats are emitted with 17 significant digits so artifacts round-trip
losslessly; runs with the same configuration and seed are byte-identical.
Exit codes: 0 success, 2 usage/validation error, 3 numeric failure
(tolerance or verification FAIL).  The environment variable
BESSEL_HARMONIC_THREADS bounds the region-map worker pool.
"""

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels as _k
from . import operators as _o
from . import theory as _t
from . import verify as _v
from .errors import BesselHarmonicError, DomainError, NumericalError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(x):
    return "%.17g" % float(x)


def _parse_grid(txt):
    """start:stop:step grids, or a comma list, or a single value."""
    if ":" in txt:
        a, b, h = (float(v) for v in txt.split(":"))
        n = int(math.floor((b - a) / h + 1e-9)) + 1
        return [a + i * h for i in range(n)]
    if "," in txt:
        return [float(v) for v in txt.split(",")]
    return [float(txt)]


def _make_function(name):
    """Preset test functions: indicator:a:b, bump:center:width,
    power:alpha:a:b."""
    parts = name.split(":")
    kind = parts[0]
    if kind == "indicator":
        return _o.SampledFunction.indicator(float(parts[1]), float(parts[2]))
    if kind == "bump":
        return _o.SampledFunction.smooth_bump(float(parts[1]), float(parts[2]))
    if kind == "power":
        return _o.SampledFunction.power_cutoff(
            float(parts[1]), float(parts[2]), float(parts[3]))
    raise DomainError("unknown test function preset %r" % (name,))


def _out_stream(args):
    if args.output and args.output != "-":
        return open(args.output, "w")
    return sys.stdout


def _load_config(path):
    cfg = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _merge_config(args, parser):
    if getattr(args, "config", None):
        cfg = _load_config(args.config)
        for key, val in cfg.items():
            if hasattr(args, key) and parser.get_default(key) == getattr(args, key):
                default = parser.get_default(key)
                cast = type(default) if default is not None else str
                setattr(args, key, cast(val))
    return args


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_kernel(args, out):
    lam = args.lam
    rows = []
    xs = _parse_grid(args.x)
    ys = _parse_grid(args.y)
    ts = _parse_grid(args.t) if args.t is not None else [float("nan")]
    for t in ts:
        for x in xs:
            for y in ys:
                if args.name == "heat":
                    val = _k.heat_kernel(lam, t, x, y)
                    method = "closed_form"
                elif args.name == "poisson":
                    val = _k.poisson_kernel(lam, t, x, y, method=args.method or "closed_form")
                    method = args.method or "closed_form"
                elif args.name == "conj_poisson":
                    val = _k.conj_poisson_kernel(lam, t, x, y)
                    method = "theta_quadrature"
                elif args.name == "riesz":
                    method = args.method or "t_integral"
                    val = _k.riesz_kernel(lam, x, y, method=method)
                elif args.name == "dheat_dx":
                    val = _k.dheat_dx(lam, t, x, y)
                    method = "closed_form"
                elif args.name == "dheat_dt":
                    val = _k.dheat_dt(lam, t, x, y)
                    method = "closed_form"
                else:
                    raise DomainError("unknown kernel %r" % (args.name,))
                if args.tilde:
                    val = val * (x * y) ** lam
                rows.append((t, x, y, val, method))
    out.write("t,x,y,value,method,err_est\n")
    for t, x, y, v, m in rows:
        out.write("%s,%s,%s,%s,%s,%s\n" % (_fmt(t), _fmt(x), _fmt(y), _fmt(v), m, _fmt(1e-12 * abs(v))))
    return EXIT_OK


def cmd_apply(args, out):
    f = _make_function(args.function)
    lam = args.lam
    rows = []
    for x in _parse_grid(args.x):
        if args.op == "heat":
            val = _o.heat_apply(lam, args.t, f, x)
        elif args.op == "poisson":
            val = _o.poisson_apply(lam, args.t, f, x)
        elif args.op == "wmax":
            val = _o.maximal_apply("heat", lam, f, x)
        elif args.op == "pmax":
            val = _o.maximal_apply("poisson", lam, f, x)
        elif args.op == "riesz":
            val = _o.riesz_apply(lam, f, x)
        elif args.op == "riesz_adjoint":
            val = _o.riesz_adjoint_apply(lam, f, x)
        elif args.op == "potential":
            val = _o.potential_apply(lam, f, x)
        elif args.op == "g":
            val = _o.g_heat(lam, f, x)
        elif args.op == "g_poisson":
            val = _o.g_poisson(lam, f, x)
        elif args.op == "g_loc":
            val = _o.g_loc(lam, f, x)
        elif args.op == "hardy0":
            val = _o.hardy_apply("origin", args.eta, f, x)
        elif args.op == "hardy_inf":
            val = _o.hardy_apply("infinity", args.eta, f, x)
        else:
            raise DomainError("unknown operator %r" % (args.op,))
        rows.append((x, val))
    out.write("x,value\n")
    for x, v in rows:
        out.write("%s,%s\n" % (_fmt(x), _fmt(v)))
    return EXIT_OK


def cmd_verify(args, out):
    results = _v.run_suite(args.suite, seed=args.seed)
    all_pass = True
    for r in results:
        rec = {
            "suite": r.suite,
            "check": r.name,
            "passed": bool(r.passed),
            "statement": r.statement,
            "metrics": {k: float(v) for k, v in sorted(r.metrics.items())},
        }
        out.write(json.dumps(rec, sort_keys=True) + "\n")
        all_pass &= r.passed
    return EXIT_OK if all_pass else EXIT_NUMERIC


def cmd_region(args, out):
    ops = {"wmax": "W_max", "pmax": "P_max", "riesz": "Riesz",
           "riesz_adjoint": "RieszAdjoint", "g": "g", "h0": "H0", "hinf": "Hinf"}
    if args.op not in ops:
        raise DomainError("unknown region operator %r" % (args.op,))
    p_grid = _parse_grid(args.p)
    d_grid = _parse_grid(args.delta)
    threads = int(os.environ.get("BESSEL_HARMONIC_THREADS", "1") or "1")
    operator = ops[args.op]

    def _row(p):
        return _t.region_map(operator, args.lam, [p], d_grid, tilde=args.tilde)

    ps = sorted(p_grid)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_row, ps))
    else:
        chunks = [_row(p) for p in ps]
    out.write("p,delta,strong,weak,restricted_weak\n")
    for chunk in chunks:  # deterministic: sorted p outer, sorted delta inner
        for p, d, s, w, rw in chunk:
            out.write("%s,%s,%d,%d,%d\n" % (_fmt(p), _fmt(d), s, w, rw))
    return EXIT_OK


def cmd_sharpness(args, out):
    if args.kind == "l1":
        ops = {"wmax": "W_max", "riesz": "Riesz", "gloc": "g_loc"}
        rep = _t.sharpness_l1_blowup(ops[args.op], args.lam, args.delta)
        ok = rep.verdict == "PASS"
    elif args.kind == "boundary":
        rep = _t.sharpness_boundary_weak(args.lam, args.p, args.delta)
        ok = rep.verdict.endswith("PASS")
    else:
        raise DomainError("sharpness kind must be l1 or boundary")
    rec = {
        "experiment": rep.experiment,
        "grid": [float(g) for g in rep.grid],
        "ratios": [float(r) for r in rep.ratios],
        "slope": float(rep.slope),
        "intercept": float(rep.intercept),
        "r_squared": float(rep.r_squared),
        "verdict": rep.verdict,
        "notes": rep.notes,
    }
    out.write(json.dumps(rec, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser():
    ap = argparse.ArgumentParser(
        prog="bessel-harmonic",
        description="Kernels, operators, verification and sharp-region "
                    "classification for the half-line Bessel operator.")
    ap.add_argument("--seed", type=int, default=0, help="RNG seed for sampled grids")
    ap.add_argument("--output", "-o", default="-", help="output path (default stdout)")
    ap.add_argument("--config", default=None,
                    help="key=value file; keys mirror long flags")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate a kernel")
    k.add_argument("name", choices=["heat", "poisson", "conj_poisson", "riesz",
                                    "dheat_dx", "dheat_dt"])
    k.add_argument("--lambda", dest="lam", type=float, required=True)
    k.add_argument("--t", default=None)
    k.add_argument("--x", required=True)
    k.add_argument("--y", required=True)
    k.add_argument("--method", default=None)
    k.add_argument("--tilde", action="store_true",
                   help="multiply by (xy)^lambda (conjugated setting)")
    k.set_defaults(fn=cmd_kernel)

    a = sub.add_parser("apply", help="apply an operator to a preset function")
    a.add_argument("op", choices=["heat", "poisson", "wmax", "pmax", "riesz",
                                  "riesz_adjoint", "potential", "g", "g_poisson",
                                  "g_loc", "hardy0", "hardy_inf"])
    a.add_argument("--lambda", dest="lam", type=float, default=1.0)
    a.add_argument("--eta", type=float, default=0.0)
    a.add_argument("--t", type=float, default=1.0)
    a.add_argument("--x", required=True)
    a.add_argument("--function", "-f", required=True,
                   help="indicator:a:b | bump:center:width | power:alpha:a:b")
    a.set_defaults(fn=cmd_apply)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=["kernels", "identities", "lemmas", "all"])
    v.set_defaults(fn=cmd_verify)

    r = sub.add_parser("region", help="emit a (p, delta) region map")
    r.add_argument("--op", required=True)
    r.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="order lambda (or eta for Hardy operators)")
    r.add_argument("--p", required=True, help="grid start:stop:step")
    r.add_argument("--delta", required=True, help="grid start:stop:step")
    r.add_argument("--tilde", action="store_true")
    r.set_defaults(fn=cmd_region)

    s = sub.add_parser("sharpness", help="run a sharpness experiment")
    s.add_argument("kind", choices=["l1", "boundary"])
    s.add_argument("--op", default="wmax")
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--delta", type=float, default=0.0)
    s.set_defaults(fn=cmd_sharpness)

    # let values like -3:7:0.1 or -2.5 pass as arguments, not options
    matcher = re.compile(r"^-\d+(\.\d*)?([:,.-]\d+(\.\d*)?)*$")
    for p in (ap, k, a, v, r, s):
        p._negative_number_matcher = matcher
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    args = _merge_config(args, parser)
    np.random.seed(args.seed % (2 ** 32))
    out = _out_stream(args)
    try:
        code = args.fn(args, out)
    except DomainError as e:
        print("error: %s" % e, file=sys.stderr)
        code = EXIT_USAGE
    except (NumericalError, BesselHarmonicError) as e:
        print("numeric failure: %s" % e, file=sys.stderr)
        code = EXIT_NUMERIC
    finally:
        if out is not sys.stdout:
            out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
