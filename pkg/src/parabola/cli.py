"""Command line front end.

Subcommands
-----------
  pair       exact pairing of two classes, or a gamma x sigma table
  orbit      holonomies of phi^n applied to a class
  asymptote  pair(phi^n g, s) against its predicted decay
  mixing     Area(phi^n A & B) for horizontal cylinders against the mixing law
  geometric  summed |pairings| of phi^n(alpha) with gamma against mu_s mu_u
  spectra    eigenvalues, beta and decay data of a word
  scan       spectral radius of the family on a grid of c values
  trace      crossing counts of traced saddle connections against |pair|

Exit status: 0 success, 1 domain error, 2 usage error. Output files are
written atomically, so a failing run never leaves a partial file.

Examples
--------
  parabola pair --gamma 1 --sigma 0
  parabola pair --table 3 3
  parabola asymptote --word abc --gamma 1 --sigma 0 --n-max 256 --report report.json
  parabola scan --word abc --from -1 --to 0.99 --step 0.01
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import hp
from .asymptotics import (
    convergence_diagnostics,
    intersection_report,
    intersection_sequence,
    mixing_report,
    partial_sums,
)
from .errors import ParabolaError
from .exact import as_fraction, rat_text
from .homology import RelClass, gamma_class, parse_class, sigma_class
from .pairing import geodesic_pair_bounds, pair, pairing_table, sample_transverse_pairs
from .spectral import (
    barwedge_taylor,
    beta,
    decay_constant,
    geometric_constant,
    mu_measures,
    scan_grid,
    spectral_data,
    spectral_radius,
)
from .surface import horizontal_cylinder
from .veech import GroupWord, orbit, rho

N_MAX_LIMIT = 4096


class UsageError(Exception):
    """Bad command line input; mapped to exit status 2."""


@dataclass
class RunConfig:
    subcommand: str
    word: Optional[str] = None
    classes: List[Tuple[str, str]] = field(default_factory=list)
    n_max: int = 256
    fit: Optional[Tuple[int, int]] = None
    order: int = 16
    bits: int = hp.DEFAULT_BITS
    digits: int = 20
    output: Optional[str] = None
    report: Optional[str] = None
    fmt: str = "csv"

    @classmethod
    def from_args(cls, args) -> RunConfig:
        fit = getattr(args, "fit", None)
        return cls(
            subcommand=args.subcommand,
            word=getattr(args, "word", None),
            classes=list(getattr(args, "classes", None) or []),
            n_max=getattr(args, "n_max", None) or 0,
            fit=tuple(fit) if fit else None,
            order=getattr(args, "order", 16),
            bits=_bits(args),
            digits=getattr(args, "digits", 20),
            output=getattr(args, "output", None),
            report=getattr(args, "report", None),
            fmt=getattr(args, "fmt", "csv"),
        )

    def validate(self):
        if not 0 <= self.n_max <= N_MAX_LIMIT:
            raise UsageError(f"--n-max must lie in [0, {N_MAX_LIMIT}]")
        if self.bits < 64:
            raise UsageError("--bits must be at least 64")
        if self.fit is not None and self.fit[0] >= self.fit[1]:
            raise UsageError("--fit needs LO < HI")
        if self.digits < 1:
            raise UsageError("--digits must be positive")


class _ClassAction(argparse.Action):
    """Collect ``--sigma``, ``--gamma`` and ``--class`` operands in order."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, "classes", None) or [])
        items.append((self.const, values))
        namespace.classes = items


def _add_class_options(p, help_suffix=""):
    p.add_argument("--sigma", action=_ClassAction, const="sigma", metavar="J", help="class sigma_J" + help_suffix)
    p.add_argument("--gamma", action=_ClassAction, const="gamma", metavar="J", help="class gamma_J" + help_suffix)
    p.add_argument(
        "--class",
        action=_ClassAction,
        const="json",
        metavar="JSON",
        help='class as JSON, e.g. \'{"sigma":{"0":"1","-1":"2"}}\'',
    )


def _add_common(p, word=True, series=False):
    if word:
        p.add_argument("--word", required=True, help='group word such as "abc" or "-abcb"')
    p.add_argument("--bits", type=int, default=None, help=f"float mantissa bits (default ${hp.PREC_ENV} or {hp.DEFAULT_BITS})")
    p.add_argument("--digits", type=int, default=20, help="significant digits for float output")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    if series:
        p.add_argument("--n-max", type=int, default=256)
        p.add_argument("--fit", type=int, nargs=2, metavar=("LO", "HI"), default=None, help="regression window")
        p.add_argument("--report", default=None, help="also write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parabola", description="Deformation holonomy calculus on the parabola surface.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("pair", help="exact intersection pairing")
    _add_class_options(p, " (first operand is phi side)")
    p.add_argument("--table", type=int, nargs=2, metavar=("JMAX", "KMAX"), help="gamma_j x sigma_k table as CSV")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("orbit", help="holonomies of phi^n(class)")
    _add_common(p)
    _add_class_options(p)
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("asymptote", help="decay of pair(phi^n g, s)")
    _add_common(p, series=True)
    _add_class_options(p, " (defaults: gamma 1 then sigma 0)")

    p = sub.add_parser("mixing", help="overlap areas of iterated horizontal cylinders")
    _add_common(p, series=True)
    p.add_argument("--a", type=int, default=0, help="index of cylinder A (default 0)")
    p.add_argument("--b", type=int, default=1, help="index of cylinder B (default 1)")
    p.add_argument("--inverse", action="store_true", help="iterate phi^-1 instead of phi")
    p.add_argument("--sums", type=int, nargs="*", default=None, metavar="N", help="also report exact partial sums up to these N")

    p = sub.add_parser("geometric", help="summed |pairings| against transverse measures")
    _add_common(p, series=True)
    p.add_argument("--alpha", action="append", default=None, help='class descriptor for a piece of alpha ("gamma:1", "sigma:0" or JSON)')
    p.add_argument("--against", action="append", default=None, help="class descriptor for a piece of the fixed curve")

    p = sub.add_parser("spectra", help="eigen data of a word")
    _add_common(p)
    _add_class_options(p, " (defaults: gamma 1 then sigma 0)")
    p.add_argument("--order", type=int, default=16, help="series order K")

    p = sub.add_parser("scan", help="spectral radius on a grid of c")
    _add_common(p)
    p.add_argument("--from", dest="c_lo", default="-1")
    p.add_argument("--to", dest="c_hi", default="0.99")
    p.add_argument("--step", default="0.01")

    p = sub.add_parser("trace", help="crossing counts against |pair|")
    _add_common(p, word=False)
    p.add_argument("--max-index", type=int, default=6)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dy", type=int, default=12, help="largest |dy| of enumerated displacements")
    return parser


# ---------------------------------------------------------------------------
# Parsing helpers


def _class_from(kind: str, value: str) -> RelClass:
    try:
        if kind == "sigma":
            return sigma_class(int(value))
        if kind == "gamma":
            return gamma_class(int(value))
        return parse_class(json.loads(value))
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad class {kind} {value!r}: {exc}") from exc


def _compact_class(text: str) -> RelClass:
    text = text.strip()
    if text.startswith("{"):
        return _class_from("json", text)
    kind, _, value = text.partition(":")
    if kind not in ("sigma", "gamma") or not value:
        raise UsageError(f"class descriptor must be sigma:J, gamma:J or JSON, got {text!r}")
    return _class_from(kind, value)


def _classes(args, defaults=()) -> List[RelClass]:
    items = list(getattr(args, "classes", None) or [])
    if not items:
        items = list(defaults)
    return [_class_from(k, v) for k, v in items]


def _word(text: str) -> GroupWord:
    try:
        return GroupWord.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _bits(args) -> int:
    if getattr(args, "bits", None) is not None:
        return args.bits
    try:
        return hp.default_bits()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str):
    """Replace ``path`` with ``text`` in one step; no partial files on failure."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".parabola-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Commands; each returns a list of (path or None, text) to emit


def cmd_pair(args):
    if args.table is not None:
        jmax, kmax = args.table
        if jmax < 1 or kmax < 0:
            raise UsageError("--table needs JMAX >= 1 and KMAX >= 0")
        rows = [["j"] + [f"sigma{k}" for k in range(-kmax, kmax + 1)]]
        for j, vals in pairing_table(jmax, kmax):
            rows.append([f"gamma{j}"] + [rat_text(v) for v in vals])
        return [(args.output, _csv_text(rows))]
    cls = _classes(args)
    if len(cls) != 2:
        raise UsageError("pair needs exactly two classes (or --table)")
    return [(args.output, rat_text(pair(cls[0], cls[1])) + "\n")]


def cmd_orbit(args):
    w = _word(args.word)
    cls = _classes(args, [("gamma", "1")])
    if len(cls) != 1:
        raise UsageError("orbit takes one class")
    if not 0 <= args.n_max <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [0, {N_MAX_LIMIT}]")
    items = []
    for n, s in orbit(w, cls[0], args.n_max):
        x1, y1 = s.hvec.eval(1)
        items.append((n, s, x1, y1))
    if args.fmt == "json":
        obj = {
            "word": str(w),
            "rho": rho(w).to_json(),
            "orbit": [{"n": n, "class": s.to_json(), "hol_at_1": [rat_text(x), rat_text(y)]} for n, s, x, y in items],
        }
        return [(args.output, _json_text(obj))]
    rows = [["n", "hvec_x", "hvec_y", "hol1_x", "hol1_y"]]
    for n, s, x, y in items:
        rows.append([n, json.dumps(s.hvec.x.to_json()), json.dumps(s.hvec.y.to_json()), rat_text(x), rat_text(y)])
    return [(args.output, _csv_text(rows))]


def _series_outputs(args, report, extra_json=None):
    obj = report.to_json(args.digits)
    if extra_json:
        obj.update(extra_json)
    outputs = []
    if args.fmt == "json":
        header, *body = report.csv_rows(args.digits)
        obj["rows"] = [dict(zip(header, r)) for r in body]
        outputs.append((args.output, _json_text(obj)))
    else:
        outputs.append((args.output, _csv_text(report.csv_rows(args.digits))))
    if args.report:
        outputs.append((args.report, _json_text(obj)))
    return outputs


def _check_series_args(args):
    if not 1 <= args.n_max <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [1, {N_MAX_LIMIT}]")
    if args.fit is not None and not args.fit[0] < args.fit[1]:
        raise UsageError("--fit needs LO < HI")


def cmd_asymptote(args):
    _check_series_args(args)
    w = _word(args.word)
    cls = _classes(args, [("gamma", "1"), ("sigma", "0")])
    if len(cls) != 2:
        raise UsageError("asymptote takes two classes: g then s")
    bits = _bits(args)
    report = intersection_report(w, cls[0], cls[1], args.n_max, fit=args.fit and tuple(args.fit), bits=bits)
    sd = spectral_data(w)
    return _series_outputs(args, report, {"word": str(w), "lambda_u": sd.lam_u.pretty()})


def cmd_mixing(args):
    _check_series_args(args)
    w = _word(args.word)
    if args.a < 0 or args.b < 0:
        raise UsageError("cylinder indices must be nonnegative")
    A, B = horizontal_cylinder(args.a), horizontal_cylinder(args.b)
    bits = _bits(args)
    report = mixing_report(w, A, B, args.n_max, fit=args.fit and tuple(args.fit), bits=bits, inverse=args.inverse)
    extra = {
        "word": str(w),
        "inverse": args.inverse,
        "area_A": rat_text(A.area),
        "area_B": rat_text(B.area),
    }
    if args.sums:
        if max(args.sums) > args.n_max or min(args.sums) < 1:
            raise UsageError("--sums cutoffs must lie in [1, --n-max]")
        totals = partial_sums([(r.n, r.value) for r in report.rows], args.sums)
        ctx = hp.context(bits)
        extra["partial_sums"] = {str(N): rat_text(v) for N, v in totals.items()}
        extra["partial_sums_decimal"] = {
            str(N): hp.fmt(ctx, ctx.mpf(v.numerator) / v.denominator, args.digits) for N, v in totals.items()
        }
    return _series_outputs(args, report, extra)


def cmd_geometric(args):
    _check_series_args(args)
    w = _word(args.word)
    alpha = [_compact_class(t) for t in (args.alpha or ["gamma:1"])]
    against = [_compact_class(t) for t in (args.against or ["gamma:-1"])]
    bits = _bits(args)
    ctx = hp.context(bits)
    sd = spectral_data(w)
    C = geometric_constant(w, alpha, against, bits)
    seqs = [intersection_sequence(w, a, g, args.n_max) for a in alpha for g in against]
    summed = [(n, sum((abs(s[n][1]) for s in seqs), Fraction(0))) for n in range(args.n_max + 1)]
    report = convergence_diagnostics(summed, abs(sd.lam_u), 0, C, fit=args.fit and tuple(args.fit), bits=bits)
    mu_u_alpha, mu_s_alpha = mu_measures(w, alpha, bits)
    mu_u_g, mu_s_g = mu_measures(w, against, bits)
    lo, hi = geodesic_pair_bounds(alpha, against)
    extra = {
        "word": str(w),
        "mu_s_alpha": hp.fmt(ctx, mu_s_alpha, args.digits),
        "mu_u_alpha": hp.fmt(ctx, mu_u_alpha, args.digits),
        "mu_u_against": hp.fmt(ctx, mu_u_g, args.digits),
        "mu_s_against": hp.fmt(ctx, mu_s_g, args.digits),
        "bounds_at_n0": [rat_text(lo), rat_text(hi)],
    }
    return _series_outputs(args, report, extra)


def cmd_spectra(args):
    w = _word(args.word)
    cls = _classes(args, [("gamma", "1"), ("sigma", "0")])
    if len(cls) != 2:
        raise UsageError("spectra takes two classes: g then s")
    if args.order < 1:
        raise UsageError("--order must be positive")
    bits = _bits(args)
    ctx = hp.context(bits)
    sd = spectral_data(w)
    b = beta(w)
    k, kappa = barwedge_taylor(w, cls[0], cls[1], K=args.order)
    C = decay_constant(k, kappa, b, ctx)
    uu, us = sd.unit_u(ctx), sd.unit_s(ctx)
    fields = [
        ("word", str(w)),
        ("trace", str(sd.trace)),
        ("det", str(sd.det)),
        ("lambda_u", sd.lam_u.pretty()),
        ("lambda_s", sd.lam_s.pretty()),
        ("lambda_u_decimal", hp.fmt(ctx, sd.lam_u.embed(ctx), args.digits)),
        ("beta", b.pretty()),
        ("beta_decimal", hp.fmt(ctx, b.embed(ctx), args.digits)),
        ("u_u", " ".join(hp.fmt(ctx, x, args.digits) for x in uu)),
        ("u_s", " ".join(hp.fmt(ctx, x, args.digits) for x in us)),
        ("k", str(k)),
        ("kappa", kappa.pretty()),
        ("C", hp.fmt(ctx, C, args.digits)),
    ]
    if args.fmt == "json":
        return [(args.output, _json_text(dict(fields)))]
    return [(args.output, _csv_text([["field", "value"]] + [list(f) for f in fields]))]


def cmd_scan(args):
    w = _word(args.word)
    try:
        c_lo, c_hi, step = as_fraction(args.c_lo), as_fraction(args.c_hi), as_fraction(args.step)
        grid = scan_grid(c_lo, c_hi, step)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    if c_hi >= 1:
        raise UsageError("--to must be below 1")
    rows = [(c, spectral_radius(w, c)) for c in grid]
    best_c, best = max(rows, key=lambda r: r[1])
    if args.fmt == "json":
        obj = {"word": str(w), "points": len(rows), "max": repr(best), "argmax": rat_text(best_c)}
        try:
            lam = spectral_data(w).lam_u
            obj["lambda_u"] = lam.pretty()
            obj["below_lambda_u"] = bool(best < abs(float(lam)))
        except ParabolaError:
            obj["lambda_u"] = None
        return [(args.output, _json_text(obj))]
    out = [["c", "spectral_radius"]] + [[rat_text(c), repr(r)] for c, r in rows]
    return [(args.output, _csv_text(out))]


def cmd_trace(args):
    if args.max_index < 0 or args.samples < 1:
        raise UsageError("--max-index must be >= 0 and --samples >= 1")
    rows = sample_transverse_pairs(args.max_index, args.samples, args.seed, args.max_dy)
    if args.fmt == "json":
        obj = [
            {"a": a, "b": b, "crossings": n, "pair": rat_text(p), "discrepancy": rat_text(abs(n - abs(p)))}
            for a, b, n, p in rows
        ]
        return [(args.output, _json_text(obj))]
    out = [["a", "b", "crossings", "pair", "discrepancy"]]
    out += [[a, b, n, rat_text(p), rat_text(abs(n - abs(p)))] for a, b, n, p in rows]
    return [(args.output, _csv_text(out))]


COMMANDS = {
    "pair": cmd_pair,
    "orbit": cmd_orbit,
    "asymptote": cmd_asymptote,
    "mixing": cmd_mixing,
    "geometric": cmd_geometric,
    "spectra": cmd_spectra,
    "scan": cmd_scan,
    "trace": cmd_trace,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        RunConfig.from_args(args).validate()
        outputs = COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"parabola {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except ParabolaError as exc:
        print(f"parabola {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    for path, text in outputs:
        if path is None:
            sys.stdout.write(text)
        else:
            write_atomic(path, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
