from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parabola import hp
from parabola.asymptotics import (
    convergence_diagnostics,
    intersection_sequence,
    least_squares_slope,
    overlap_sequence,
    partial_sums,
    richardson,
    richardson_points,
)
from parabola.errors import DegenerateSequence, NotHyperbolic, TruncationCapExceeded
from parabola.exact import QuadNum
from parabola.homology import RelClass, gamma_class, sigma_class
from parabola.pairing import cylinder_overlap_area, pair
from parabola.spectral import (
    asymptotic_constant,
    barwedge_taylor,
    beta,
    decay_constant,
    eigen_series,
    gamma_half,
    geometric_constant,
    jet_class,
    mu_measures,
    smat_mul,
    spectral_data,
    spectral_radius,
    spectral_radius_scan,
)
from parabola.surface import horizontal_cylinder
from parabola.veech import GroupWord, act_power, is_hyperbolic, rho_at
from strategies import words

ABC = GroupWord.parse("abc")
HYPERBOLIC = [GroupWord.parse(t) for t in ("abc", "acb", "abcb", "-abc", "abcabcb", "cab")]
HYPERBOLIC = [w for w in HYPERBOLIC if is_hyperbolic(w)]


def numeric_eigs(w, at=1):
    return np.linalg.eigvals(np.array(rho_at(w, at), dtype=float))


def test_abc_data():
    sd = spectral_data(ABC)
    assert sd.lam_u == QuadNum(2, 1, 5)
    assert sd.lam_s == QuadNum(2, -1, 5)
    assert sd.det == -1 and sd.D == 5
    assert beta(ABC) == QuadNum(0, Fraction(1, 5), 5)


def test_not_hyperbolic():
    with pytest.raises(NotHyperbolic):
        spectral_data(GroupWord.parse("ab"))
    with pytest.raises(NotHyperbolic):
        beta(GroupWord.parse("bc"))


@pytest.mark.parametrize("w", HYPERBOLIC, ids=str)
def test_eigenvalues_match_numpy(w):
    sd = spectral_data(w)
    ev = sorted(numeric_eigs(w).real, key=abs)
    assert math.isclose(float(sd.lam_u), ev[1], rel_tol=1e-12)
    assert math.isclose(float(sd.lam_s), ev[0], rel_tol=1e-9, abs_tol=1e-12)


@given(words(10))
def test_eigenvectors(w):
    if not is_hyperbolic(w):
        return
    sd = spectral_data(w)
    (p, q), (r, s) = rho_at(w, 1)
    for lam, (x, y) in ((sd.lam_u, sd.vec_u), (sd.lam_s, sd.vec_s)):
        assert not (x.is_zero() and y.is_zero())
        assert (x * p + y * q) == lam * x
        assert (x * r + y * s) == lam * y


def _lam_u_at(w, c, ctx):
    (p, q), (r, s) = rho_at(w, c)
    t = ctx.mpf(p.numerator) / p.denominator + ctx.mpf(s.numerator) / s.denominator
    d = p * s - q * r
    d = ctx.mpf(d.numerator) / d.denominator
    root = ctx.sqrt(t * t - 4 * d)
    return max((t + root) / 2, (t - root) / 2, key=abs)


@pytest.mark.parametrize("w", HYPERBOLIC, ids=str)
def test_beta_is_log_derivative(w):
    ctx = hp.context(200)
    h = Fraction(1, 10**6)
    up = ctx.log(abs(_lam_u_at(w, 1 + h, ctx)))
    dn = ctx.log(abs(_lam_u_at(w, 1 - h, ctx)))
    fd = (up - dn) / (2 * ctx.mpf(h.numerator) / h.denominator)
    assert abs(fd - beta(w).embed(ctx)) < 1e-9


@pytest.mark.parametrize("w", HYPERBOLIC, ids=str)
def test_eigen_series_identities(w):
    es = eigen_series(w, 8)
    sd = spectral_data(w)
    assert es.lam_u[0] == sd.lam_u and es.lam_s[0] == sd.lam_s
    assert es.lam_u * es.lam_s == es.lam_u * 0 + sd.det
    # projector and eigen relations
    Pu2 = smat_mul(es.Pu, es.Pu)
    assert all(a == b for a, b in zip(Pu2, es.Pu))
    MP = smat_mul(es.M, es.Pu)
    assert all(a == b * es.lam_u for a, b in zip(MP, es.Pu))
    assert all(a + b == b * 0 + int(i in (0, 3)) for i, (a, b) in enumerate(zip(es.Pu, es.Ps)))
    # ratio of first two coefficients is beta
    assert es.lam_u[1] / es.lam_u[0] == beta(w)


def test_barwedge_examples():
    k, kappa = barwedge_taylor(ABC, gamma_class(1), sigma_class(0))
    assert k == 0 and kappa.sign() != 0
    with pytest.raises(ValueError):
        barwedge_taylor(ABC, RelClass(gamma_class(1).hvec * 0), sigma_class(0))


@pytest.mark.parametrize("k", range(0, 6))
def test_jet_class_order(k):
    g = jet_class(ABC, k)
    assert barwedge_taylor(ABC, g, RelClass(sigma_class(0).hvec))[0] == k


def test_truncation_cap():
    g = jet_class(ABC, 20)
    with pytest.raises(TruncationCapExceeded):
        barwedge_taylor(ABC, g, sigma_class(0), K=4, cap=8)
    assert barwedge_taylor(ABC, g, sigma_class(0), K=4, cap=32)[0] == 20


def test_gamma_half_matches_mpmath():
    ctx = hp.context(128)
    for k in range(8):
        assert abs(gamma_half(k, ctx) - ctx.gamma(k + ctx.mpf(3) / 2)) < ctx.mpf(10) ** -30


def test_decay_constant_sign_alternates():
    one = QuadNum(1, 0, 5)
    b = beta(ABC)
    signs = [decay_constant(k, one, b) > 0 for k in range(4)]
    assert signs == [True, False, True, False]


def test_abc_constant_value():
    C = asymptotic_constant(ABC, gamma_class(1), sigma_class(0), bits=128)
    ctx = hp.context(128)
    kappa = barwedge_taylor(ABC, gamma_class(1), sigma_class(0))[1].embed(ctx)
    b = ctx.sqrt(5) / 5
    ref = ctx.gamma(ctx.mpf(3) / 2) * kappa * ctx.sqrt(2) / (4 * ctx.pi * b ** ctx.mpf(1.5))
    assert abs(C - ref) < ctx.mpf(10) ** -30


# ---------------------------------------------------------------------------
# transverse measures


def test_mu_scaling():
    ctx = hp.context(128)
    lam = abs(spectral_data(ABC).lam_u.embed(ctx))
    alpha = [gamma_class(1), sigma_class(2)]
    fwd = [act_power(ABC, a, 1) for a in alpha]
    back = [act_power(ABC, a, -1) for a in alpha]
    mu_u, mu_s = mu_measures(ABC, alpha, 128)
    assert abs(mu_measures(ABC, back, 128)[0] - lam * mu_u) < 1e-30
    assert abs(mu_measures(ABC, fwd, 128)[1] - lam * mu_s) < 1e-30
    assert abs(mu_measures(ABC, fwd, 128)[0] - mu_u / lam) < 1e-30


def test_geometric_constant_matches_barwedge_constant():
    # alpha is iterated, gamma stays fixed
    g, a = gamma_class(1), gamma_class(-1)
    geo = geometric_constant(ABC, [g], [a], 128)
    alg = asymptotic_constant(ABC, g, a, 128)
    assert abs(geo - abs(alg)) < 1e-25


# ---------------------------------------------------------------------------
# spectral radius along the family


@given(st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_spectral_radius_matches_numpy(c):
    ref = max(abs(numeric_eigs(ABC, c)))
    assert math.isclose(spectral_radius(ABC, c), ref, rel_tol=1e-9)


def test_scan_stays_below_lambda():
    top = spectral_radius_scan(ABC, Fraction(-1), Fraction(99, 100), Fraction(1, 100))
    assert top < float(spectral_data(ABC).lam_u)
    assert math.isclose(spectral_radius(ABC, 1), float(spectral_data(ABC).lam_u), rel_tol=1e-15)
    with pytest.raises(ValueError):
        spectral_radius_scan(ABC, 0, 1, Fraction(1, 10))


# ---------------------------------------------------------------------------
# sequences and diagnostics


def test_intersection_sequence_matches_action():
    seq = intersection_sequence(ABC, gamma_class(1), sigma_class(0), 6)
    for n, v in seq:
        assert v == pair(act_power(ABC, gamma_class(1), n), sigma_class(0))


def test_surd_sequence_is_linear_combination():
    g = jet_class(ABC, 1)
    seq = intersection_sequence(ABC, g, sigma_class(0), 5)
    rs = intersection_sequence(ABC, RelClass(g.rational), sigma_class(0), 5)
    qs = intersection_sequence(ABC, RelClass(g.surd), sigma_class(0), 5)
    for (n, v), (_, a), (_, b) in zip(seq, rs, qs):
        assert v == QuadNum(a, b, 5)


def test_overlap_sequence_matches_direct_area():
    A0, A1 = horizontal_cylinder(0), horizontal_cylinder(1)
    for n, area in overlap_sequence(ABC, A0, A1, 8):
        assert area == cylinder_overlap_area(A0, A1, (ABC, n))
    inv = overlap_sequence(ABC, A0, A1, 4, inverse=True)
    assert inv[0][0] == 1 and len(inv) == 4


def _synthetic(n_max, lam, k, C, corr):
    seq = [(n, Fraction(C * lam**n * n ** -(k + 1.5) * (1 + corr / math.sqrt(n)))) for n in range(1, n_max + 1)]
    return seq


def test_diagnostics_recover_synthetic_limit():
    seq = _synthetic(256, 1, 0, 3.0, 0.5)
    rep = convergence_diagnostics(seq, 1, 0, 3.0, fit=(64, 256))
    assert abs(rep.richardson_limit - 1) < 1e-9
    assert abs(rep.slope + 1.5) < 0.05
    assert abs(rep.row(256).r - (1 + 0.5 / 16)) < 1e-12


def test_diagnostics_growth_in_log_domain():
    lam = QuadNum(2, 1, 5)
    ctx = hp.context(256)
    lf = lam.embed(ctx)
    seq = [(n, lam**n * QuadNum(Fraction(1, n * n), 0, 5)) for n in (1000, 1500, 2000, 3000)]
    rep = convergence_diagnostics(seq, lam, 0, 1, bits=256)
    assert all(abs(r.log_ratio + 2 * ctx.log(r.n)) < 1e-9 for r in rep.rows)
    assert rep.rows[-1].r > 0 and lf > 4


def test_diagnostics_degenerate():
    with pytest.raises(DegenerateSequence):
        convergence_diagnostics([], 1, 0, 1)
    with pytest.raises(DegenerateSequence):
        convergence_diagnostics([(1, Fraction(1))], 1, 0, 0)
    with pytest.raises(DegenerateSequence):
        convergence_diagnostics([(1, Fraction(0)), (2, Fraction(0))], 1, 0, 1)
    with pytest.raises(DegenerateSequence):
        convergence_diagnostics([(1, Fraction(1)), (2, Fraction(1))], 0, 0, 1)


def test_richardson_is_exact_on_polynomials_in_h():
    ctx = hp.context(128)
    pts = [(n, 2 + 3 * ctx.mpf(n) ** -0.5 - 5 / ctx.mpf(n) + 7 * ctx.mpf(n) ** -1.5) for n in (8, 16, 32, 64)]
    assert abs(richardson(pts, ctx) - 2) < 1e-30
    assert richardson_points(range(1, 300), 256) == [32, 64, 128, 256]


def test_least_squares_slope_on_a_line():
    ctx = hp.context(64)
    xs = [ctx.mpf(x) for x in range(5)]
    assert abs(least_squares_slope(xs, [3 * x - 1 for x in xs], ctx) - 3) < 1e-15
    with pytest.raises(DegenerateSequence):
        least_squares_slope([ctx.mpf(1)] * 3, [ctx.mpf(1)] * 3, ctx)


def test_partial_sums():
    seq = [(n, Fraction(1, n)) for n in range(1, 7)]
    out = partial_sums(seq, [1, 3, 6, 10])
    assert out == {1: 1, 3: Fraction(11, 6), 6: Fraction(49, 20), 10: Fraction(49, 20)}
