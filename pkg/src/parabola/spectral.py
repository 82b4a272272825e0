"""Eigen-data of the representation near ``c = 1`` over a quadratic field.

For a hyperbolic word the matrix at ``c = 1`` has integer entries and
eigenvalues in Q(sqrt D). Writing the matrix in ``eps = c - 1`` and solving
the characteristic equation with a series square root gives the unstable
and stable eigenvalue germs and spectral projections exactly, so the
Taylor coefficients that govern the polynomial decay rates are exact field
elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from . import hp
from .errors import NotHyperbolic, TruncationCapExceeded
from .exact import (
    Poly,
    PolyVec,
    QuadNum,
    QuadSeries,
    as_fraction,
    quad_series_sqrt,
    squarefree_decomposition,
)
from .homology import RelClass
from .veech import GroupWord, det_sign, is_hyperbolic, rho, rho_at

DEFAULT_ORDER = 16
ORDER_CAP = 64


@dataclass(frozen=True)
class SpectralData:
    word: GroupWord
    trace: Poly
    det: int
    lam_u: QuadNum
    lam_s: QuadNum
    vec_u: Tuple[QuadNum, QuadNum]
    vec_s: Tuple[QuadNum, QuadNum]
    D: int

    def unit_u(self, ctx=None):
        return _unit(self.vec_u, ctx)

    def unit_s(self, ctx=None):
        return _unit(self.vec_s, ctx)


def _unit(v, ctx=None):
    ctx = ctx or hp.context()
    x, y = v[0].embed(ctx), v[1].embed(ctx)
    r = ctx.sqrt(x * x + y * y)
    return (x / r, y / r)


def _eigenvector(m, lam: QuadNum):
    """Kernel vector of ``m - lam*I`` for a 2x2 rational matrix ``m``."""
    (p, q), (r, s) = m
    if q != 0 or (lam - p):
        cand = (QuadNum.rational(q, lam.D), lam - p)
        if not (cand[0].is_zero() and cand[1].is_zero()):
            return cand
    return (lam - s, QuadNum.rational(r, lam.D))


def _require_hyperbolic(w: GroupWord):
    if not is_hyperbolic(w):
        raise NotHyperbolic()


def spectral_data(w: GroupWord) -> SpectralData:
    _require_hyperbolic(w)
    t = rho(w).trace()
    d = det_sign(w)
    t1 = t.eval(1)
    disc = t1 * t1 - 4 * d
    assert disc.denominator == 1 and disc > 0
    f, D = squarefree_decomposition(int(disc))
    # hyperbolic traces never make the discriminant a perfect square
    assert D > 1
    sgn = 1 if t1 > 0 else -1
    half = Fraction(1, 2)
    lam_u = QuadNum(t1 * half, sgn * f * half, D)
    lam_s = QuadNum(t1 * half, -sgn * f * half, D)
    m = rho_at(w, 1)
    return SpectralData(
        word=w,
        trace=t,
        det=d,
        lam_u=lam_u,
        lam_s=lam_s,
        vec_u=_eigenvector(m, lam_u),
        vec_s=_eigenvector(m, lam_s),
        D=D,
    )


def beta(w: GroupWord) -> QuadNum:
    """Logarithmic derivative of the unstable eigenvalue at ``c = 1``."""
    sd = spectral_data(w)
    dt = sd.trace.derivative().eval(1)
    return QuadNum.rational(dt, sd.D) / (2 * sd.lam_u - sd.trace.eval(1))


# ---------------------------------------------------------------------------
# Eigen series


SeriesMatrix = Tuple[QuadSeries, QuadSeries, QuadSeries, QuadSeries]


def smat_mul(A: SeriesMatrix, B: SeriesMatrix) -> SeriesMatrix:
    a11, a12, a21, a22 = A
    b11, b12, b21, b22 = B
    return (
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    )


def smat_apply(A: SeriesMatrix, v):
    return (A[0] * v[0] + A[1] * v[1], A[2] * v[0] + A[3] * v[1])


@dataclass(frozen=True)
class EigenSeries:
    lam_u: QuadSeries
    lam_s: QuadSeries
    Pu: SeriesMatrix
    Ps: SeriesMatrix
    M: SeriesMatrix
    K: int
    D: int


def eigen_series(w: GroupWord, K: int = DEFAULT_ORDER) -> EigenSeries:
    sd = spectral_data(w)
    D = sd.D
    M = tuple(QuadSeries.from_poly(e.shift(), D, K) for e in rho(w).entries())
    T = M[0] + M[3]
    root = quad_series_sqrt(T * T - 4 * sd.det)
    sgn = 1 if sd.trace.eval(1) > 0 else -1
    half = Fraction(1, 2)
    lam_u = (T + root * sgn) * half
    lam_s = (T - root * sgn) * half
    gap = root * sgn
    Pu = ((M[0] - lam_s) / gap, M[1] / gap, M[2] / gap, (M[3] - lam_s) / gap)
    one = QuadSeries.constant(1, D, K)
    zero = QuadSeries.constant(0, D, K)
    Ps = (one - Pu[0], zero - Pu[1], zero - Pu[2], one - Pu[3])
    return EigenSeries(lam_u, lam_s, Pu, Ps, M, K, D)


# ---------------------------------------------------------------------------
# Classes with coefficients in Q(sqrt D)


@dataclass(frozen=True)
class SurdClass:
    """Relative class ``rational + sqrt(D) * surd`` with rational parts."""

    rational: PolyVec
    surd: PolyVec
    D: int

    def parts(self):
        return (RelClass(self.rational), RelClass(self.surd))

    def combine(self, a, b) -> QuadNum:
        return QuadNum(as_fraction(a), as_fraction(b), self.D)

    def series(self, K: int):
        r, q = self.rational.shift(), self.surd.shift()
        n = K + 1

        def comp(pr: Poly, pq: Poly):
            cs = [QuadNum(pr[m], pq[m], self.D) for m in range(n)]
            return QuadSeries(cs, self.D, K)

        return (comp(r.x, q.x), comp(r.y, q.y))

    def to_json(self) -> dict:
        return {"rational": self.rational.to_json(), "surd": self.surd.to_json(), "D": self.D}


AnyClass = Union[RelClass, SurdClass]


def _class_series(g: AnyClass, D: int, K: int):
    if isinstance(g, SurdClass):
        if g.D != D:
            raise ValueError(f"class over Q(sqrt {g.D}) used with Q(sqrt {D})")
        return g.series(K)
    h = g.hvec.shift()
    return (QuadSeries.from_poly(h.x, D, K), QuadSeries.from_poly(h.y, D, K))


def _is_zero(g: AnyClass) -> bool:
    if isinstance(g, SurdClass):
        return not g.rational and not g.surd
    return not g.hvec


def barwedge_series(es: EigenSeries, g: AnyClass, s: AnyClass) -> QuadSeries:
    gu = smat_apply(es.Pu, _class_series(g, es.D, es.K))
    sv = _class_series(s, es.D, es.K)
    return gu[0] * sv[1] - gu[1] * sv[0]


def barwedge_taylor(
    w: GroupWord, g: AnyClass, s: AnyClass, K: int = DEFAULT_ORDER, cap: int = ORDER_CAP
) -> Tuple[int, QuadNum]:
    """Order ``k`` and leading coefficient ``kappa`` of ``(Pu g) ^ s`` in ``eps``."""
    if _is_zero(g) or _is_zero(s):
        raise ValueError("classes must be nonzero")
    _require_hyperbolic(w)
    order = K
    while True:
        bw = barwedge_series(eigen_series(w, order), g, s)
        k = bw.valuation()
        if k is not None:
            return k, bw[k]
        if order >= cap:
            raise TruncationCapExceeded(f"barwedge vanishes through order {order}")
        order = min(2 * order, cap)


def _eps_to_class(vx: Sequence[QuadNum], vy: Sequence[QuadNum], D: int) -> SurdClass:
    def split(cs):
        return Poly([q.a for q in cs]).unshift(), Poly([q.b for q in cs]).unshift()

    rx, qx = split(vx)
    ry, qy = split(vy)
    return SurdClass(PolyVec(rx, ry), PolyVec(qx, qy), D)


def jet_class(w: GroupWord, k: int, s: AnyClass = None) -> SurdClass:
    """A class whose barwedge against ``s`` vanishes to order exactly ``k``.

    Its holonomy agrees with a stable eigenvector field to order ``k - 1``
    and then picks up a rational transverse term at order ``k``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if s is None:
        s = RelClass(PolyVec.of(1, 1))
    es = eigen_series(w, max(DEFAULT_ORDER, k + 4))
    D = es.D
    stable = smat_apply(es.Ps, (QuadSeries.constant(1, D, es.K), QuadSeries.constant(0, D, es.K)))
    for tail in ((0, 1), (1, 0), (1, 1)):
        vx = [stable[0][m] for m in range(k)] + [QuadNum.rational(tail[0], D)]
        vy = [stable[1][m] for m in range(k)] + [QuadNum.rational(tail[1], D)]
        g = _eps_to_class(vx, vy, D)
        if barwedge_taylor(w, g, s, K=es.K)[0] == k:
            return g
    raise AssertionError("no transverse tail produced the requested order")


# ---------------------------------------------------------------------------
# Constants


def gamma_half(k: int, ctx):
    """Gamma(k + 3/2) as (2k+1)!! sqrt(pi) / 2^(k+1)."""
    dfact = 1
    for m in range(1, 2 * k + 2, 2):
        dfact *= m
    return ctx.mpf(dfact) * ctx.sqrt(ctx.pi) / ctx.mpf(2) ** (k + 1)


def decay_constant(k: int, kappa: QuadNum, b: QuadNum, ctx=None):
    ctx = ctx or hp.context()
    sign = -1 if k % 2 else 1
    return (
        sign
        * gamma_half(k, ctx)
        * kappa.embed(ctx)
        * ctx.sqrt(2)
        / (4 * ctx.pi * b.embed(ctx) ** (k + ctx.mpf(3) / 2))
    )


def asymptotic_constant(w: GroupWord, g: AnyClass, s: AnyClass, bits=None):
    """Predicted limit of ``n^(k+3/2) / lam^n * pair(phi^n g, s)``."""
    ctx = hp.context(bits)
    k, kappa = barwedge_taylor(w, g, s)
    return decay_constant(k, kappa, beta(w), ctx)


def mixing_constant(w: GroupWord, area_a, area_b, bits=None):
    """Predicted limit of ``n^(3/2) * Area(phi^n A & B)``."""
    ctx = hp.context(bits)
    b = beta(w).embed(ctx)
    a = ctx.mpf(as_fraction(area_a).numerator) / as_fraction(area_a).denominator
    bb = ctx.mpf(as_fraction(area_b).numerator) / as_fraction(area_b).denominator
    return a * bb / (4 * ctx.sqrt(2 * ctx.pi) * b ** (ctx.mpf(3) / 2))


def _wedge(u, v):
    return u[0] * v[1] - u[1] * v[0]


def mu_measures(w: GroupWord, parts: Sequence[RelClass], bits=None):
    """Transverse measures ``(mu_u, mu_s)`` of a chain of saddle connections."""
    sd = spectral_data(w)
    ctx = hp.context(bits)
    uu, us = sd.unit_u(ctx), sd.unit_s(ctx)
    mu_u = ctx.mpf(0)
    mu_s = ctx.mpf(0)
    for p in parts:
        hx, hy = p.hvec.eval(1)
        h = (ctx.mpf(hx.numerator) / hx.denominator, ctx.mpf(hy.numerator) / hy.denominator)
        mu_u += abs(_wedge(uu, h))
        mu_s += abs(_wedge(us, h))
    return mu_u, mu_s


def geometric_constant(w: GroupWord, alpha: Sequence[RelClass], gamma: Sequence[RelClass], bits=None):
    """``mu_s(alpha) mu_u(gamma) / (4 beta^(3/2) sqrt(2 pi) |u_u ^ u_s|)``."""
    ctx = hp.context(bits)
    sd = spectral_data(w)
    _, mu_s_alpha = mu_measures(w, alpha, bits)
    mu_u_gamma, _ = mu_measures(w, gamma, bits)
    b = beta(w).embed(ctx)
    cross = abs(_wedge(sd.unit_u(ctx), sd.unit_s(ctx)))
    return mu_s_alpha * mu_u_gamma / (4 * b ** (ctx.mpf(3) / 2) * ctx.sqrt(2 * ctx.pi) * cross)


# ---------------------------------------------------------------------------
# Spectral radius along the family


def spectral_radius(w: GroupWord, at) -> float:
    """Largest eigenvalue modulus of the evaluated matrix."""
    (p, q), (r, s) = rho_at(w, at)
    t = p + s
    d = p * s - q * r
    disc = t * t - 4 * d
    if disc < 0:
        return float(abs(d)) ** 0.5
    return (abs(float(t)) + float(disc) ** 0.5) / 2


def scan_grid(c_lo, c_hi, step):
    lo, hi, h = as_fraction(c_lo), as_fraction(c_hi), as_fraction(step)
    if h <= 0:
        raise ValueError("step must be positive")
    n = int((hi - lo) / h)
    return [lo + i * h for i in range(n + 1)]


def spectral_radius_scan(w: GroupWord, c_lo, c_hi, step) -> float:
    if as_fraction(c_hi) >= 1:
        raise ValueError("scan must stay strictly below c = 1")
    return max(spectral_radius(w, c) for c in scan_grid(c_lo, c_hi, step))
