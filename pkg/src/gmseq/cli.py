"""Command-line front end (``gmseq``).

Exit codes: 0 success (every check passed), 1 some check failed,
2 configuration or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

from .classes import (gm_bar_diagnostic, gm_classic_diagnostic, gm_real_inclusion_diagnostic,
                      gm_star_diagnostic, wm_diagnostic)
from .experiments import (ConfigError, fmt, parse_family, parse_p_list, parse_sizes,
                          reports_to_json, run_equivalence, run_norms, run_reproduce)
from .functionals import j_p
from .sequence import EXAMPLES, read_sequence, write_sequence
from .trig import MULTIPLIERS, QuadratureSpec, apply_multiplier, evaluate, grid, lp_norm

CLASSES = {
    "gm-star": lambda a, lam: gm_star_diagnostic(a),
    "gm-bar": lambda a, lam: gm_bar_diagnostic(a),
    "gm": lambda a, lam: gm_classic_diagnostic(a, lam),
    "wm": lambda a, lam: wm_diagnostic(a),
    "gm-real-inclusion": lambda a, lam: gm_real_inclusion_diagnostic(a),
}


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _quadrature(args) -> QuadratureSpec:
    try:
        return QuadratureSpec(sample_count=args.sample_count, oversample=args.oversample,
                              refine_tolerance=args.tolerance)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _grid_dump(a, spec, path):
    m = spec.samples_for(a)
    x = grid(m)
    f = evaluate(a, x)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "re", "im"])
    for xi, fi in zip(x, f):
        w.writerow([fmt(xi), fmt(fi.real), fmt(fi.imag)])
    _emit(buf.getvalue(), path)


def cmd_norms(args) -> int:
    a = read_sequence(args.input)
    spec = _quadrature(args)
    reports = run_norms(a, parse_p_list(args.p), spec)
    _emit(reports_to_json(reports), args.out)
    if args.grid_dump:
        _grid_dump(a, spec, args.grid_dump)
    return 0


def cmd_classify(args) -> int:
    a = read_sequence(args.input)
    names = [c.strip() for c in args.classes.split(",") if c.strip()]
    unknown = [c for c in names if c not in CLASSES]
    if unknown or not names:
        raise ConfigError(f"unknown class(es) {unknown}; expected some of {sorted(CLASSES)}")
    if not args.lam > 1:
        raise ConfigError("lambda must be > 1")
    try:
        diags = [CLASSES[c](a, args.lam) for c in names]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.format == "csv":
        text = "".join(f"# {d.class_name} verdict={d.verdict}\n{d.to_csv()}" for d in diags)
    else:
        text = json.dumps([d.to_dict() for d in diags], indent=2) + "\n"
    _emit(text, args.out)
    return 0


def cmd_reproduce(args) -> int:
    table = run_reproduce(args.name, args.nmax)
    _emit(table.to_csv(), args.out)
    failed = sum(not r.passed for r in table.rows)
    print(f"{args.name} nmax={args.nmax}: {len(table.rows) - failed} PASS, {failed} FAIL",
          file=sys.stderr)
    return 0 if table.passed else 1


def cmd_equivalence(args) -> int:
    family = parse_family(args.family)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = run_equivalence(family, parse_p_list(args.p), parse_sizes(args.sizes),
                                _quadrature(args))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(table.to_csv(), args.out)
    return 0


def cmd_multiplier(args) -> int:
    a = read_sequence(args.input)
    if a.is_zero():
        raise ConfigError("sequence is identically zero")
    spec = _quadrature(args)
    b = apply_multiplier(a, args.kind)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "jP", "jP_multiplied", "lp", "lp_multiplied", "lp_rel_change"])
    for p in parse_p_list(args.p):
        la, lb = lp_norm(a, p, spec), lp_norm(b, p, spec)
        w.writerow([fmt(p), fmt(j_p(a, p)), fmt(j_p(b, p)), fmt(la), fmt(lb),
                    fmt(abs(lb - la) / la)])
    _emit(buf.getvalue(), args.out)
    if args.write_sequence:
        write_sequence(b, args.write_sequence)
    if args.grid_dump:
        _grid_dump(b, spec, args.grid_dump)
    return 0


def _int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def quad(p):
        p.add_argument("--sample-count", type=_int, default=1024,
                       help="minimum quadrature grid size (power of two)")
        p.add_argument("--oversample", type=_int, default=4)
        p.add_argument("--tolerance", type=float, default=1e-6,
                       help="relative refinement tolerance")

    p = sub.add_parser("norms", help="norm report for one sequence (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--p", required=True, help="comma-separated exponents")
    p.add_argument("--out")
    p.add_argument("--grid-dump", help="write x, re f, im f to this CSV")
    quad(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("classify", help="class membership diagnostics")
    p.add_argument("--input", required=True)
    p.add_argument("--classes", required=True, help=f"comma-separated, from {', '.join(CLASSES)}")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reproduce", help="per-level checks of an example construction")
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--nmax", type=_int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("equivalence", help="lp / jP across truncation sizes (CSV)")
    p.add_argument("--family", required=True, help="power:alpha=<real> or random:seed=<int>")
    p.add_argument("--p", required=True)
    p.add_argument("--sizes", required=True, help="2^6..2^12 or a comma list")
    p.add_argument("--out")
    quad(p)
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("multiplier", help="apply an idempotent multiplier and compare norms")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", required=True, choices=MULTIPLIERS)
    p.add_argument("--p", default="1.5,2,3")
    p.add_argument("--out")
    p.add_argument("--write-sequence", help="save the multiplied sequence here")
    p.add_argument("--grid-dump")
    quad(p)
    p.set_defaults(func=cmd_multiplier)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        # ConfigError and SequenceFormatError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
