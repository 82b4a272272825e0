"""Algebraic intersection pairing computed by an integral over the family.

For classes with deformation holonomies ``u(c)`` and ``v(c)`` the pairing is

    (1/2pi) * integral_0^pi (u ^ v)(cos t) * (1 - cos t) dt,

which is exact rational arithmetic once the wedge is expanded in powers of
``c``: only the moments ``W(m)`` of ``cos^m t (1 - cos t)`` are needed, and
those have a Wallis closed form.
"""

from __future__ import annotations

import random
import threading
from fractions import Fraction
from math import comb
from typing import Optional, Sequence, Tuple

from .errors import ParabolaError, ParallelCylinders
from .exact import Poly
from .homology import RelClass
from .surface import Cylinder, count_crossings, enumerate_saddle_connections
from .veech import GroupWord, act_power


def _half_wallis(m: int) -> Fraction:
    """(1/2pi) * integral_0^pi cos^m t dt."""
    if m % 2:
        return Fraction(0)
    return Fraction(comb(m, m // 2), 2 ** (m + 1))


class MomentTable:
    """Append-only cache of ``W(m)``; safe for concurrent readers and writers."""

    def __init__(self):
        self._values = []
        self._lock = threading.Lock()

    def __call__(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError(f"moment index must be nonnegative, got {m}")
        values = self._values
        if m < len(values):
            return values[m]
        with self._lock:
            while len(self._values) <= m:
                k = len(self._values)
                self._values.append(_half_wallis(k) - _half_wallis(k + 1))
            return self._values[m]

    def __len__(self):
        return len(self._values)


_TABLE = MomentTable()


def moment(m: int) -> Fraction:
    return _TABLE(m)


def integrate_wedge(p: Poly) -> Fraction:
    """Weighted integral of a polynomial in ``c = cos t``."""
    coeffs = p.coeffs
    if not coeffs:
        return Fraction(0)
    moment(len(coeffs) - 1)
    return sum((a * _TABLE(m) for m, a in enumerate(coeffs) if a), Fraction(0))


def pair(g: RelClass, s: RelClass) -> Fraction:
    """Extended intersection number; equals the algebraic count when ``g`` is absolute."""
    return integrate_wedge(g.hvec.wedge(s.hvec))


def pairing_table(jmax: int, kmax: int):
    """Rows ``(j, [pair(gamma_j, sigma_k) for k in -kmax..kmax])`` for 0 < |j| <= jmax."""
    from .homology import gamma_class, sigma_class

    sigmas = [sigma_class(k) for k in range(-kmax, kmax + 1)]
    rows = []
    for j in range(-jmax, jmax + 1):
        if j == 0:
            continue
        g = gamma_class(j)
        rows.append((j, [pair(g, s) for s in sigmas]))
    return rows


def _wedge_at_one(u: RelClass, v: RelClass) -> Fraction:
    (ux, uy), (vx, vy) = u.hvec.eval(1), v.hvec.eval(1)
    return ux * vy - uy * vx


def cylinder_overlap_area(
    A: Cylinder, B: Cylinder, transform: Optional[Tuple[GroupWord, int]] = None
) -> Fraction:
    """Area of ``phi^n(A) & B``; affine maps with det +-1 preserve A's area."""
    core = RelClass(A.core)
    if transform is not None:
        w, n = transform
        core = act_power(w, core, n)
    core_b = RelClass(B.core)
    wedge = _wedge_at_one(core, core_b)
    if wedge == 0:
        raise ParallelCylinders("cylinder directions are parallel")
    return abs(pair(core, core_b)) * A.area * B.area / abs(wedge)


def geodesic_pair_bounds(
    alpha: Sequence[RelClass], gamma: Sequence[RelClass]
) -> Tuple[Fraction, Fraction]:
    """Interval ``center +- 2kl`` around the summed absolute pairings."""
    if not alpha or not gamma:
        raise ValueError("both sequences of saddle connections must be nonempty")
    center = sum((abs(pair(a, g)) for a in alpha for g in gamma), Fraction(0))
    slack = 2 * len(alpha) * len(gamma)
    return center - slack, center + slack


def sample_transverse_pairs(max_index: int, samples: int, seed: int, max_dy: int = 12):
    """Deterministic sample of transverse saddle-connection pairs with crossing data."""
    conns = enumerate_saddle_connections(max_index, max_dx=max_index, max_dy=max_dy)
    rng = random.Random(seed)
    out = []
    seen = set()
    attempts = 0
    while len(out) < samples and attempts < 100 * samples:
        attempts += 1
        i, j = rng.randrange(len(conns)), rng.randrange(len(conns))
        if i == j or (i, j) in seen:
            continue
        seen.add((i, j))
        (la, a), (lb, b) = conns[i], conns[j]
        try:
            n = count_crossings(a, b)
        except ParabolaError:
            continue
        p = pair(RelClass(a.hvec), RelClass(b.hvec))
        out.append((la, lb, n, p))
    return out
