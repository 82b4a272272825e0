"""Exact decay sequences and their convergence diagnostics.

Sequences are produced exactly (pairings of iterated classes, overlap areas
of iterated cylinders) and only then embedded as high-precision floats for
ratio, slope and extrapolation estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import hp
from .errors import DegenerateSequence, ParallelCylinders
from .exact import PolyVec, QuadNum, rat_text
from .homology import RelClass
from .pairing import pair
from .spectral import (
    AnyClass,
    SurdClass,
    barwedge_taylor,
    beta,
    decay_constant,
    mixing_constant,
    spectral_data,
)
from .surface import Cylinder
from .veech import GroupWord, rho

Exact = Union[Fraction, QuadNum]


def _iterate(w: GroupWord, h: PolyVec, n_max: int, inverse: bool = False):
    m = rho(w)
    if inverse:
        m = m.inverse()
    for n in range(n_max + 1):
        yield n, h
        h = m @ h


def intersection_sequence(
    w: GroupWord, g: AnyClass, s: RelClass, n_max: int, inverse: bool = False
) -> List[Tuple[int, Exact]]:
    """``[(n, pair(phi^n g, s))]`` for ``n = 0..n_max``; exact throughout."""
    if isinstance(g, SurdClass):
        rs = [pair(RelClass(h), s) for _, h in _iterate(w, g.rational, n_max, inverse)]
        qs = [pair(RelClass(h), s) for _, h in _iterate(w, g.surd, n_max, inverse)]
        return [(n, QuadNum(a, b, g.D)) for n, (a, b) in enumerate(zip(rs, qs))]
    return [(n, pair(RelClass(h), s)) for n, h in _iterate(w, g.hvec, n_max, inverse)]


def overlap_sequence(
    w: GroupWord, A: Cylinder, B: Cylinder, n_max: int, inverse: bool = False, n_min: int = 1
) -> List[Tuple[int, Fraction]]:
    """``[(n, Area(phi^n A & B))]``; ``inverse`` iterates ``phi^-1`` instead."""
    hb = B.core
    hb1 = hb.eval(1)
    out = []
    for n, h in _iterate(w, A.core, n_max, inverse):
        if n < n_min:
            continue
        h1 = h.eval(1)
        wedge = h1[0] * hb1[1] - h1[1] * hb1[0]
        if wedge == 0:
            raise ParallelCylinders(f"cylinders are parallel at n = {n}")
        area = abs(pair(RelClass(h), RelClass(hb))) * A.area * B.area / abs(wedge)
        out.append((n, area))
    return out


# ---------------------------------------------------------------------------
# Diagnostics


def _embed(x, ctx):
    if isinstance(x, QuadNum):
        return x.embed(ctx)
    x = Fraction(x)
    return ctx.mpf(x.numerator) / x.denominator


def exact_str(x) -> str:
    if isinstance(x, QuadNum):
        return str(x)
    return rat_text(Fraction(x))


@dataclass
class DiagnosticRow:
    n: int
    value: Exact
    log_ratio: object
    r: object


@dataclass
class AsymptoticReport:
    k: int
    kappa: Optional[QuadNum]
    beta: Optional[QuadNum]
    C: object
    rows: List[DiagnosticRow]
    slope: object
    richardson_limit: object
    fit_range: Tuple[int, int]
    bits: int = hp.DEFAULT_BITS
    extra: dict = field(default_factory=dict)

    def row(self, n: int) -> DiagnosticRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_json(self, digits: int = 20) -> dict:
        ctx = hp.context(self.bits)
        out = {
            "k": self.k,
            "kappa": None if self.kappa is None else str(self.kappa),
            "beta": None if self.beta is None else str(self.beta),
            "C": hp.fmt(ctx, self.C, digits),
            "slope": hp.fmt(ctx, self.slope, digits),
            "richardson_limit": hp.fmt(ctx, self.richardson_limit, digits),
            "fit_range": list(self.fit_range),
        }
        for key, value in self.extra.items():
            out[key] = value if isinstance(value, (str, int, list, dict)) else hp.fmt(ctx, value, digits)
        return out

    def csv_rows(self, digits: int = 20):
        ctx = hp.context(self.bits)
        yield ["n", "exact_value", "log_ratio", "r_n"]
        for r in self.rows:
            yield [str(r.n), exact_str(r.value), hp.fmt(ctx, r.log_ratio, digits), hp.fmt(ctx, r.r, digits)]


def least_squares_slope(xs: Sequence, ys: Sequence, ctx):
    n = len(xs)
    mx = ctx.fsum(xs) / n
    my = ctx.fsum(ys) / n
    sxx = ctx.fsum((x - mx) ** 2 for x in xs)
    sxy = ctx.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    if sxx == 0:
        raise DegenerateSequence("slope needs at least two distinct n")
    return sxy / sxx


def richardson(points: Sequence[Tuple[int, object]], ctx, power=0.5):
    """Neville extrapolation to ``h = 0`` with ``h = n^-power``."""
    if not points:
        raise DegenerateSequence("nothing to extrapolate")
    hs = [ctx.mpf(n) ** (-ctx.mpf(power)) for n, _ in points]
    table = [ctx.mpf(v) for _, v in points]
    m = len(table)
    for level in range(1, m):
        for i in range(m - level):
            h_i, h_j = hs[i], hs[i + level]
            table[i] = (h_i * table[i + 1] - h_j * table[i]) / (h_i - h_j)
    return table[0]


def richardson_points(ns: Iterable[int], n_hi: int, count: int = 4) -> List[int]:
    """``n_hi, n_hi/2, ...`` restricted to available ``ns``, largest last."""
    have = set(ns)
    out = []
    n = n_hi
    while n >= 1 and len(out) < count:
        if n in have:
            out.append(n)
        n //= 2
    return sorted(out)


def convergence_diagnostics(
    seq: Sequence[Tuple[int, Exact]],
    lam,
    k: int,
    C,
    fit: Optional[Tuple[int, int]] = None,
    bits: Optional[int] = None,
    richardson_count: int = 4,
    kappa: Optional[QuadNum] = None,
    beta_value: Optional[QuadNum] = None,
) -> AsymptoticReport:
    """Ratios to ``C * lam^n * n^-(k+3/2)``, log-log slope, extrapolated limit.

    ``lam`` is an exact growth rate (``QuadNum``, rational, or ``1`` for
    sequences without exponential growth); ``lam^n`` is handled in the log
    domain so ``n`` in the thousands never overflows.
    """
    ctx = hp.context(bits)
    rows_in = [(n, v) for n, v in seq if n > 0]
    if not rows_in:
        raise DegenerateSequence("empty sequence")
    lam_f = _embed(lam, ctx)
    if lam_f == 0:
        raise DegenerateSequence("growth rate is zero")
    log_lam = ctx.log(abs(lam_f))
    lam_neg = lam_f < 0
    C = ctx.mpf(C)
    if C == 0:
        raise DegenerateSequence("predicted constant is zero")
    log_C = ctx.log(abs(C))
    expo = k + ctx.mpf(3) / 2
    rows = []
    for n, v in rows_in:
        vf = _embed(v, ctx)
        if vf == 0:
            rows.append(DiagnosticRow(n, v, ctx.ninf, ctx.mpf(0)))
            continue
        log_ratio = ctx.log(abs(vf)) - n * log_lam
        sign = (1 if vf > 0 else -1) * (-1 if lam_neg and n % 2 else 1) * (1 if C > 0 else -1)
        r = sign * ctx.exp(log_ratio + expo * ctx.log(n) - log_C)
        rows.append(DiagnosticRow(n, v, log_ratio, r))
    nonzero = [r for r in rows if r.r != 0]
    if not nonzero:
        raise DegenerateSequence("sequence is identically zero")
    if fit is None:
        fit = (nonzero[0].n, nonzero[-1].n)
    lo, hi = fit
    pts = [r for r in nonzero if lo <= r.n <= hi]
    if len(pts) < 2:
        raise DegenerateSequence(f"fewer than two nonzero terms in [{lo}, {hi}]")
    slope = least_squares_slope([ctx.log(r.n) for r in pts], [r.log_ratio for r in pts], ctx)
    by_n = {r.n: r.r for r in nonzero}
    picks = richardson_points(by_n, pts[-1].n, richardson_count)
    limit = richardson([(n, by_n[n]) for n in picks], ctx)
    return AsymptoticReport(
        k=k,
        kappa=kappa,
        beta=beta_value,
        C=C,
        rows=rows,
        slope=slope,
        richardson_limit=limit,
        fit_range=(lo, hi),
        bits=ctx.prec,
    )


# ---------------------------------------------------------------------------
# End-to-end reports


def intersection_report(
    w: GroupWord,
    g: AnyClass,
    s: RelClass,
    n_max: int,
    fit: Optional[Tuple[int, int]] = None,
    bits: Optional[int] = None,
) -> AsymptoticReport:
    """Compare ``pair(phi^n g, s)`` with its predicted asymptotic form."""
    ctx = hp.context(bits)
    sd = spectral_data(w)
    k, kappa = barwedge_taylor(w, g, s)
    b = beta(w)
    C = decay_constant(k, kappa, b, ctx)
    seq = intersection_sequence(w, g, s, n_max)
    return convergence_diagnostics(seq, sd.lam_u, k, C, fit=fit, bits=ctx.prec, kappa=kappa, beta_value=b)


def mixing_report(
    w: GroupWord,
    A: Cylinder,
    B: Cylinder,
    n_max: int,
    fit: Optional[Tuple[int, int]] = None,
    bits: Optional[int] = None,
    inverse: bool = False,
) -> AsymptoticReport:
    """Compare ``Area(phi^n A & B)`` with ``Area A Area B / (4 sqrt(2 pi) (beta n)^(3/2))``."""
    ctx = hp.context(bits)
    ww = w.inverse() if inverse else w
    b = beta(ww)
    C = mixing_constant(ww, A.area, B.area, ctx.prec)
    seq = overlap_sequence(w, A, B, n_max, inverse=inverse)
    return convergence_diagnostics(seq, 1, 0, C, fit=fit, bits=ctx.prec, beta_value=b)


def partial_sums(seq: Sequence[Tuple[int, Fraction]], cutoffs: Sequence[int]) -> dict:
    """Exact partial sums of a sequence at each cutoff ``N`` (terms with ``n <= N``)."""
    out = {}
    total = Fraction(0)
    it = iter(sorted(seq))
    pending = None
    for N in sorted(cutoffs):
        while True:
            if pending is None:
                pending = next(it, None)
                if pending is None:
                    break
            if pending[0] > N:
                break
            total += pending[1]
            pending = None
        out[N] = total
    return out
