"""Command-line entry point: zeros, spectrum, verify, expand.

Exit status is 0 on success, 2 for invalid input (flags, CSV), 1 for a
numerical failure or a failing verification suite.

CSV outputs:
  zeros     m,nu,k,lambda
  spectrum  eigenvalue,multiplicity,witnesses   (witnesses as n:lambda separated by ;)
  verify    suite,name,residual,tolerance,kind,passed
  expand    k,lambda,coefficient,norm_sq,defect (k = 0 is the x^nu term)
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import expansion, hilbert, spectrum, verify
from .errors import CanonLapError, CSVFormatError, DomainError
from .lfun import LFun
from .zeros import find_zeros

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


# deterministic JSON: fixed key order and 17 significant digits


def _encode(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return _encode(obj) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# argument parsing


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _nu_list(text):
    """'3', '-2,0,5' or an inclusive range '-2:4'."""
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mode list {text!r}; use N, N,M,... or LO:HI") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_nonneg_int, default=0, help="twist degree m >= 0 (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=1, metavar="N")
    common.add_argument("--quad-panels", type=_positive_int, default=8, metavar="P", help="panels per unit interval")
    common.add_argument("--quad-nodes", type=_positive_int, default=16, metavar="Q", help="Gauss nodes per panel")

    p = _Parser(prog="canonlap", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeros", parents=[common], help="positive zeros of L_{m,nu}")
    z.add_argument("--nu", type=_nu_list, required=True, help="mode(s): N, N,M,... or LO:HI")
    z.add_argument("--cutoff", type=_positive_float, required=True)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues with multiplicities")
    s.add_argument("--cutoff", type=_positive_float, required=True, help="largest lambda (eigenvalue lambda^2/4)")
    s.add_argument("--max-nu", type=int, default=None, help="cap on the mode-class scan")

    v = sub.add_parser("verify", parents=[common], help="run the property suites")
    v.add_argument("--suite", action="append", choices=sorted(verify.SUITES), metavar="NAME",
                   help=f"one of {', '.join(verify.SUITES)}; repeatable (default all)")
    v.add_argument("--full", action="store_true", help="use the full-size grids")
    v.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)

    e = sub.add_parser("expand", parents=[common], help="expand a sampled function on one mode")
    e.add_argument("input", metavar="CSV", help="header branch,x,value; outer rows use x = 1/r")
    e.add_argument("--nu", type=int, required=True)
    e.add_argument("--k-terms", type=_positive_int, default=50)
    return p


def _quad(args) -> hilbert.Quadrature:
    return hilbert.Quadrature(panels_per_unit=args.quad_panels, nodes_per_panel=args.quad_nodes)


def _map(threads, fn, items):
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# subcommands: each returns (exit status, text)


def cmd_zeros(args):
    sets = _map(args.threads, lambda nu: find_zeros(LFun(args.m, nu), args.cutoff), args.nu)
    if args.format == "csv":
        rows = [(zs.fun.m, zs.fun.nu, k, lam) for zs in sets for k, lam in enumerate(zs.zeros, start=1)]
        return 0, _csv(["m", "nu", "k", "lambda"], rows)
    doc = {"schema_version": SCHEMA_VERSION, "m": args.m, "cutoff": args.cutoff,
           "sets": [{"nu": zs.fun.nu, "zeros": list(zs.zeros)} for zs in sets]}
    return 0, dumps(doc)


def cmd_spectrum(args):
    lines = spectrum.compute_spectrum(args.m, args.cutoff, args.max_nu, threads=args.threads)
    if args.format == "csv":
        rows = [(ln.eigenvalue, ln.multiplicity, ";".join(f"{w.n}:{format(w.lam, '.17g')}" for w in ln.witnesses))
                for ln in lines]
        return 0, _csv(["eigenvalue", "multiplicity", "witnesses"], rows)
    doc = {"schema_version": SCHEMA_VERSION, "m": args.m, "cutoff": args.cutoff,
           "lines": [ln.to_record() for ln in lines]}
    return 0, dumps(doc)


def cmd_verify(args):
    cfg = verify.VerifyConfig(quadrature=_quad(args), perturb=args.perturb, full=args.full, threads=args.threads)
    checks, notes = verify.run_suites(args.suite, cfg)
    ok = all(c.passed for c in checks)
    if args.format == "csv":
        rows = [(c.suite, c.name, c.residual, c.tolerance, c.kind, c.passed) for c in checks]
        return (0 if ok else 1), _csv(["suite", "name", "residual", "tolerance", "kind", "passed"], rows)
    doc = {"schema_version": SCHEMA_VERSION, "passed": ok,
           "checks": [c.to_record() for c in checks], "notes": [n.to_record() for n in notes]}
    return (0 if ok else 1), dumps(doc)


def cmd_expand(args):
    f = hilbert.read_radial_csv(args.input)
    q = _quad(args)
    c = expansion.expand(f, args.m, args.nu, args.k_terms, q)
    curve = expansion.parseval_curve(f, c, q)
    if args.format == "csv":
        rows = []
        if c.poly_coeff is not None:
            rows.append((0, 0.0, float(c.poly_coeff.real), hilbert.monomial_norm_sq(args.m, args.nu), ""))
        rows += [(mc.k, mc.lam, float(complex(mc.a).real), mc.norm_sq, float(d))
                 for mc, d in zip(c.mode_coeffs, curve)]
        return 0, _csv(["k", "lambda", "coefficient", "norm_sq", "defect"], rows)
    doc = {"schema_version": SCHEMA_VERSION, **c.to_record(), "parseval_defect": [float(d) for d in curve]}
    return 0, dumps(doc)


COMMANDS = {"zeros": cmd_zeros, "spectrum": cmd_spectrum, "verify": cmd_verify, "expand": cmd_expand}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        status, text = COMMANDS[args.command](args)
    except CSVFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CanonLapError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
