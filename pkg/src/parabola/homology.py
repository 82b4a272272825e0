"""Homology classes of the parabola surface, stored as deformation holonomies.

A relative class (curves joining singularities allowed) is identified with
its holonomy vector written as a pair of polynomials in ``c``; this
identification is a linear isomorphism, so class arithmetic is vector
arithmetic. Absolute classes are exactly those whose y-polynomial vanishes
at ``c = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping

from .errors import DegreeTooHigh, NotAbsolute, OutsideSpan, ZeroIndex
from .exact import Poly, PolyVec, as_fraction, rat_str
from .surface import vertex


@dataclass(frozen=True)
class RelClass:
    hvec: PolyVec

    def _combine(self, other, hvec):
        if isinstance(self, AbsClass) and isinstance(other, AbsClass):
            return AbsClass(hvec)
        return RelClass(hvec)

    def __add__(self, other: RelClass) -> RelClass:
        return self._combine(other, self.hvec + other.hvec)

    def __sub__(self, other: RelClass) -> RelClass:
        return self._combine(other, self.hvec - other.hvec)

    def __neg__(self):
        return type(self)(-self.hvec)

    def __mul__(self, k):
        return type(self)(self.hvec * as_fraction(k))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.hvec)

    def to_json(self) -> dict:
        return {"kind": "absolute" if isinstance(self, AbsClass) else "relative", "hvec": self.hvec.to_json()}


@dataclass(frozen=True)
class AbsClass(RelClass):
    def __post_init__(self):
        if self.hvec.y.eval(-1) != 0:
            raise NotAbsolute("y-component does not vanish at c = -1")


def relative(hvec: PolyVec) -> RelClass:
    return RelClass(hvec)


def absolute_or_relative(hvec: PolyVec) -> RelClass:
    """Tag a holonomy vector as absolute whenever its boundary weight is zero."""
    if hvec.y.eval(-1) == 0:
        return AbsClass(hvec)
    return RelClass(hvec)


def sigma_class(j: int) -> RelClass:
    return RelClass(vertex(j + 1).position - vertex(j).position)


def gamma_class(j: int) -> AbsClass:
    if j == 0:
        raise ZeroIndex("gamma_0 is not defined")
    v = vertex(j + 1).position + vertex(j).position - vertex(1).position - vertex(0).position
    return AbsClass(v)


def epsilon(s: RelClass) -> Fraction:
    """Boundary weight: the y-polynomial evaluated at ``c = -1``."""
    return s.hvec.y.eval(-1)


def hol_at(s: RelClass, at) -> tuple:
    return s.hvec.eval(at)


def sigma_coords(s: RelClass, max_index: int) -> Dict[int, Fraction]:
    """Coordinates in the basis sigma_{-n-1}, ..., sigma_n with n = max_index.

    sigma_k and sigma_{-k-1} are the only basis vectors of degree k (their
    leading terms are (2c)^k * (1, +-1)), so elimination runs from the top
    degree down, solving one 2x2 system per degree.
    """
    h = s.hvec
    if h.degree > max_index:
        raise DegreeTooHigh(f"degree {h.degree} exceeds max_index {max_index}")
    coords: Dict[int, Fraction] = {}
    residual = h
    for k in range(max_index, -1, -1):
        up, down = sigma_class(k).hvec, sigma_class(-k - 1).hvec
        a11, a21 = up.x[k], up.y[k]
        a12, a22 = down.x[k], down.y[k]
        det = a11 * a22 - a12 * a21
        assert det != 0, "basis is triangular by degree"
        bx, by = residual.x[k], residual.y[k]
        u = (bx * a22 - a12 * by) / det
        w = (a11 * by - bx * a21) / det
        if u:
            coords[k] = u
            residual = residual - up * u
        if w:
            coords[-k - 1] = w
            residual = residual - down * w
    assert not residual, "sigma basis spans every polynomial vector"
    return dict(sorted(coords.items()))


def from_sigma(coords: Mapping[int, object]) -> RelClass:
    total = PolyVec(Poly(), Poly())
    for j, w in coords.items():
        total = total + sigma_class(int(j)).hvec * as_fraction(w)
    return absolute_or_relative(total)


def from_gamma(coords: Mapping[int, object]) -> AbsClass:
    total = PolyVec(Poly(), Poly())
    for j, w in coords.items():
        total = total + gamma_class(int(j)).hvec * as_fraction(w)
    return AbsClass(total)


def gamma_coords(s: RelClass, max_index: int) -> Dict[int, Fraction]:
    """Coordinates of an absolute class in the gamma_j, 0 < |j| <= max_index.

    In sigma coordinates gamma_j (j > 0) is sigma_0 + 2(sigma_1 + ... +
    sigma_{j-1}) + sigma_j, and gamma_j (j < 0) is the negated mirror, so the
    outermost sigma weight on each side determines the outermost gamma weight.
    """
    if epsilon(s) != 0:
        raise NotAbsolute("class has nonzero boundary weight")
    degree = max(s.hvec.degree, 0)
    sig = sigma_coords(s, max(degree, max_index + 1))
    coords: Dict[int, Fraction] = {}
    for j in range(max(sig, default=0), 0, -1):
        w = sig.get(j, Fraction(0))
        if w:
            if j > max_index:
                raise OutsideSpan(f"class needs gamma_{j}, beyond index {max_index}")
            coords[j] = w
            g = sigma_coords(gamma_class(j), j)
            for k, v in g.items():
                sig[k] = sig.get(k, Fraction(0)) - w * v
    for j in range(min(sig, default=0), 0):
        w = sig.get(j, Fraction(0))
        if w:
            if -j > max_index:
                raise OutsideSpan(f"class needs gamma_{j}, beyond index {max_index}")
            coeff = -w
            coords[j] = coeff
            g = sigma_coords(gamma_class(j), -j)
            for k, v in g.items():
                sig[k] = sig.get(k, Fraction(0)) - coeff * v
    if any(sig.values()):
        raise OutsideSpan("class is not in the span of the requested gammas")
    return dict(sorted(coords.items()))


def parse_class(desc) -> RelClass:
    """Build a class from ``{"sigma": {...}}``, ``{"gamma": {...}}`` or ``{"hvec": ...}``.

    Several keys are summed.
    """
    if not isinstance(desc, Mapping) or not desc:
        raise ValueError(f"class descriptor must be a nonempty object, got {desc!r}")
    total = PolyVec(Poly(), Poly())
    for key, value in desc.items():
        if key == "sigma":
            total = total + from_sigma({int(k): v for k, v in value.items()}).hvec
        elif key == "gamma":
            total = total + from_gamma({int(k): v for k, v in value.items()}).hvec
        elif key == "hvec":
            total = total + PolyVec.from_json(value)
        elif key == "kind":
            continue
        else:
            raise ValueError(f"unknown class key {key!r}")
    return absolute_or_relative(total)


def class_json(s: RelClass, max_index: int = None) -> dict:
    """Canonical output: always ``hvec``, plus sigma coordinates."""
    out = s.to_json()
    n = max(s.hvec.degree, 0) if max_index is None else max_index
    out["sigma"] = {str(k): rat_str(v) for k, v in sigma_coords(s, n).items()}
    return out
