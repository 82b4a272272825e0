"""Exact arithmetic: polynomials over Q in the deformation variable ``c``,
2x2 polynomial matrices, the quadratic fields Q(sqrt D) and truncated power
series over them.

Rationals are :class:`fractions.Fraction`. Polynomials keep an integer
numerator vector over one common denominator, which keeps products of the
large integer polynomials produced by matrix powers cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import hp
from .errors import (
    FieldMismatch,
    NegativeConstantTerm,
    NonUnitConstantTerm,
    NotInField,
)

Rational = Union[int, Fraction]

# digit chunk size kept below the interpreter's int/str conversion limit
_CHUNK_DIGITS = 1000
_CHUNK = 10**_CHUNK_DIGITS


def int_str(n: int) -> str:
    """Decimal string of an integer of any size."""
    if -_CHUNK < n < _CHUNK:
        return str(n)
    sign, n = ("-", -n) if n < 0 else ("", n)
    parts = []
    while n:
        n, r = divmod(n, _CHUNK)
        parts.append(r)
    head = str(parts.pop())
    return sign + head + "".join(f"{p:0{_CHUNK_DIGITS}d}" for p in reversed(parts))


def parse_int(text: str) -> int:
    """Inverse of :func:`int_str`."""
    text = text.strip()
    if len(text) <= _CHUNK_DIGITS:
        return int(text)
    sign, digits = (-1, text[1:]) if text[0] == "-" else (1, text.lstrip("+"))
    if not digits.isdigit():
        raise ValueError(f"invalid integer literal of length {len(text)}")
    cut = len(digits) % _CHUNK_DIGITS or _CHUNK_DIGITS
    n = int(digits[:cut])
    for i in range(cut, len(digits), _CHUNK_DIGITS):
        n = n * _CHUNK + int(digits[i : i + _CHUNK_DIGITS])
    return sign * n


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        x = x.strip()
        if len(x) <= _CHUNK_DIGITS:
            return Fraction(x)
        num, _, den = x.partition("/")
        return Fraction(parse_int(num), parse_int(den) if den else 1)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rat_str(q: Fraction) -> str:
    """``"num/den"`` serialization used in every JSON interface."""
    return f"{int_str(q.numerator)}/{int_str(q.denominator)}"


def rat_text(q) -> str:
    """Human-facing form: ``"3"`` for integers, ``"3/4"`` otherwise."""
    q = as_fraction(q)
    if q.denominator == 1:
        return int_str(q.numerator)
    return f"{int_str(q.numerator)}/{int_str(q.denominator)}"


def rational_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or ``None``."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def squarefree_decomposition(n: int):
    """Return ``(f, D)`` with ``n == f*f*D`` and ``D`` squarefree, ``n > 0``."""
    if n <= 0:
        raise ValueError("n must be positive")
    f, D = 1, 1
    p = 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            D *= p
        p += 1
    D *= m
    return f, D


# ---------------------------------------------------------------------------
# Polynomials


class Poly:
    """Univariate polynomial over Q; index ``m`` is the coefficient of c^m."""

    __slots__ = ("_num", "_den")

    def __init__(self, coeffs: Iterable = ()):
        fr = [as_fraction(c) for c in coeffs]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        self._set([f.numerator * (den // f.denominator) for f in fr], den)

    @classmethod
    def _raw(cls, nums, den=1) -> Poly:
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    def _set(self, nums, den):
        nums = list(nums)
        while nums and nums[-1] == 0:
            nums.pop()
        if not nums:
            den = 1
        else:
            if den < 0:
                den = -den
                nums = [-n for n in nums]
            if den != 1:
                g = math.gcd(den, *nums)
                if g != 1:
                    den //= g
                    nums = [n // g for n in nums]
        object.__setattr__(self, "_num", tuple(nums))
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, x) -> Poly:
        q = as_fraction(x)
        return cls._raw([q.numerator], q.denominator)

    @classmethod
    def variable(cls) -> Poly:
        return cls._raw([0, 1])

    @classmethod
    def from_json(cls, data: Sequence[str]) -> Poly:
        return cls(data)

    def to_json(self) -> list:
        return [rat_str(q) for q in self.coeffs]

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(n, self._den) for n in self._num)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._num) - 1

    def is_integral(self) -> bool:
        return self._den == 1

    def __getitem__(self, m: int) -> Fraction:
        if 0 <= m < len(self._num):
            return Fraction(self._num[m], self._den)
        return Fraction(0)

    def __len__(self):
        return len(self._num)

    def __bool__(self):
        return bool(self._num)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self._num, self._den))

    def __neg__(self):
        return Poly._raw([-n for n in self._num], self._den)

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        den = math.lcm(self._den, other._den)
        a, b = den // self._den, den // other._den
        n1, n2 = self._num, other._num
        if len(n1) < len(n2):
            n1, n2, a, b = n2, n1, b, a
        out = [x * a for x in n1]
        for i, y in enumerate(n2):
            out[i] += y * b
        return Poly._raw(out, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Poly._raw([n * q.numerator for n in self._num], self._den * q.denominator)
        if not isinstance(other, Poly):
            return NotImplemented
        return Poly._raw(_convolve(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def __call__(self, at) -> Fraction:
        return self.eval(at)

    def eval(self, at) -> Fraction:
        """Exact value at a rational point (integer Horner on p/q)."""
        if not self._num:
            return Fraction(0)
        q = as_fraction(at)
        p, r = q.numerator, q.denominator
        acc = 0
        scale = 1
        for n in reversed(self._num):
            acc = acc * p + n * scale
            scale *= r
        # acc = sum n_m p^m r^(deg-m); scale = r^(deg+1)
        return Fraction(acc * r, scale * self._den)

    def derivative(self) -> Poly:
        return Poly._raw([m * n for m, n in enumerate(self._num)][1:], self._den)

    def taylor_shift(self, a: int) -> Poly:
        """The polynomial ``p(x + a)`` for an integer ``a``."""
        nums = list(self._num)
        n = len(nums)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                nums[j] += a * nums[j + 1]
        return Poly._raw(nums, self._den)

    def shift(self) -> Poly:
        """Rewrite in eps = c - 1, i.e. return ``p(1 + eps)``."""
        return self.taylor_shift(1)

    def unshift(self) -> Poly:
        """Inverse of :meth:`shift`: ``q(c - 1)``."""
        return self.taylor_shift(-1)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self._num:
            return "0"
        parts = []
        for m in range(len(self._num) - 1, -1, -1):
            q = self[m]
            if q == 0:
                continue
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            if m == 0:
                body = str(mag)
            else:
                mono = "c" if m == 1 else f"c^{m}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _coerce_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.constant(x)
    if isinstance(x, (list, tuple)):
        return Poly(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Poly")


def _convolve(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y == 0:
            continue
        for i, x in enumerate(a):
            out[i + j] += x * y
    return out


ZERO = Poly()
ONE = Poly.constant(1)
C = Poly.variable()


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_eval(p: Poly, at) -> Fraction:
    return p.eval(at)


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_shift(p: Poly) -> Poly:
    return p.shift()


# ---------------------------------------------------------------------------
# Vectors and matrices over Q[c]


@dataclass(frozen=True)
class PolyVec:
    x: Poly
    y: Poly

    @classmethod
    def of(cls, x, y) -> PolyVec:
        return cls(_coerce_poly(x), _coerce_poly(y))

    def __add__(self, other: PolyVec) -> PolyVec:
        return PolyVec(self.x + other.x, self.y + other.y)

    def __sub__(self, other: PolyVec) -> PolyVec:
        return PolyVec(self.x - other.x, self.y - other.y)

    def __neg__(self) -> PolyVec:
        return PolyVec(-self.x, -self.y)

    def __mul__(self, k) -> PolyVec:
        if isinstance(k, (int, Fraction, Poly)):
            return PolyVec(self.x * k, self.y * k)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    @property
    def degree(self) -> int:
        return max(self.x.degree, self.y.degree)

    def eval(self, at) -> tuple:
        return (self.x.eval(at), self.y.eval(at))

    def wedge(self, other: PolyVec) -> Poly:
        """(a, b) ^ (c, d) = ad - bc, as a polynomial."""
        return self.x * other.y - self.y * other.x

    def shift(self) -> PolyVec:
        return PolyVec(self.x.shift(), self.y.shift())

    def unshift(self) -> PolyVec:
        return PolyVec(self.x.unshift(), self.y.unshift())

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data) -> PolyVec:
        return cls(Poly.from_json(data["x"]), Poly.from_json(data["y"]))

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class PolyMatrix:
    a11: Poly
    a12: Poly
    a21: Poly
    a22: Poly

    @classmethod
    def of(cls, rows) -> PolyMatrix:
        (a, b), (c, d) = rows
        return cls(*(_coerce_poly(e) for e in (a, b, c, d)))

    @classmethod
    def identity(cls) -> PolyMatrix:
        return cls(ONE, ZERO, ZERO, ONE)

    def entries(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            return PolyMatrix(
                self.a11 * other.a11 + self.a12 * other.a21,
                self.a11 * other.a12 + self.a12 * other.a22,
                self.a21 * other.a11 + self.a22 * other.a21,
                self.a21 * other.a12 + self.a22 * other.a22,
            )
        if isinstance(other, PolyVec):
            return PolyVec(
                self.a11 * other.x + self.a12 * other.y,
                self.a21 * other.x + self.a22 * other.y,
            )
        return NotImplemented

    __mul__ = __matmul__

    def scale(self, k) -> PolyMatrix:
        return PolyMatrix(*(e * k for e in self.entries()))

    def __neg__(self):
        return self.scale(-1)

    def __pow__(self, n: int) -> PolyMatrix:
        if n < 0:
            return self.inverse() ** (-n)
        result = PolyMatrix.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def det(self) -> Poly:
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self) -> Poly:
        return self.a11 + self.a22

    def adjugate(self) -> PolyMatrix:
        return PolyMatrix(self.a22, -self.a12, -self.a21, self.a11)

    def inverse(self) -> PolyMatrix:
        """Exact inverse; the determinant must be a nonzero constant."""
        d = self.det()
        if d.degree != 0:
            raise ValueError("determinant is not a nonzero constant")
        return self.adjugate().scale(1 / d[0])

    def eval(self, at) -> tuple:
        return (
            (self.a11.eval(at), self.a12.eval(at)),
            (self.a21.eval(at), self.a22.eval(at)),
        )

    def shift(self) -> PolyMatrix:
        return PolyMatrix(*(e.shift() for e in self.entries()))

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries()]

    @classmethod
    def from_json(cls, data) -> PolyMatrix:
        return cls(*(Poly.from_json(e) for e in data))

    def __str__(self):
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"


def pmat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    return A @ B


def pmat_pow(A: PolyMatrix, n: int) -> PolyMatrix:
    if n < 0:
        raise ValueError("pmat_pow requires n >= 0")
    return A ** n


def pmat_det(A: PolyMatrix) -> Poly:
    return A.det()


def pmat_trace(A: PolyMatrix) -> Poly:
    return A.trace()


# ---------------------------------------------------------------------------
# Quadratic fields


def _check_discriminant(D: int) -> int:
    if not isinstance(D, int) or D < 2 or math.isqrt(D) ** 2 == D:
        raise ValueError(f"D must be a positive non-square integer, got {D!r}")
    return D


@dataclass(frozen=True)
class QuadNum:
    """``a + b*sqrt(D)`` with rational ``a``, ``b``."""

    a: Fraction
    b: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        _check_discriminant(self.D)

    @classmethod
    def rational(cls, q, D: int) -> QuadNum:
        return cls(as_fraction(q), Fraction(0), D)

    @classmethod
    def root(cls, D: int) -> QuadNum:
        return cls(Fraction(0), Fraction(1), D)

    def _lift(self, other):
        if isinstance(other, QuadNum):
            if other.D != self.D:
                raise FieldMismatch(f"Q(sqrt {self.D}) vs Q(sqrt {other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(Fraction(other), Fraction(0), self.D)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(
            self.a * o.a + self.D * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.D,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadNum:
        return QuadNum(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadNum(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QuadNum:
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadNum(Fraction(1), Fraction(0), self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadNum):
            return (self.a, self.b, self.D) == (other.a, other.b, other.D)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        """Exact sign of the real embedding (positive square root)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        return sa if self.a * self.a > self.D * self.b * self.b else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def embed(self, ctx=None):
        """Real value as an mpmath float; free of cancellation error.

        When ``a`` and ``b*sqrt(D)`` have opposite signs the value is
        evaluated as ``norm / (a - b*sqrt(D))`` whose denominator adds
        magnitudes.
        """
        if ctx is None:
            ctx = hp.context()
        root = ctx.sqrt(self.D)
        if self.a * self.b >= 0:
            return ctx.mpf(self.a.numerator) / self.a.denominator + (
                ctx.mpf(self.b.numerator) / self.b.denominator
            ) * root
        den = ctx.mpf(self.a.numerator) / self.a.denominator - (
            ctx.mpf(self.b.numerator) / self.b.denominator
        ) * root
        n = self.norm()
        return (ctx.mpf(n.numerator) / n.denominator) / den

    def __float__(self):
        return float(self.embed(hp.context(64)))

    def sqrt(self) -> QuadNum:
        """Square root with positive embedding, if it lies in the field."""
        s = self.sign()
        if s < 0:
            raise NegativeConstantTerm(f"square root of negative number {self}")
        if s == 0:
            return self
        if self.b == 0:
            r = rational_sqrt(self.a)
            if r is not None:
                return QuadNum(r, Fraction(0), self.D)
            r = rational_sqrt(self.a / self.D)
            if r is not None:
                return QuadNum(Fraction(0), r, self.D)
            raise NotInField(f"sqrt({self.a}) is not in Q(sqrt {self.D})")
        disc = rational_sqrt(self.norm())
        if disc is not None:
            for x2 in ((self.a + disc) / 2, (self.a - disc) / 2):
                x = rational_sqrt(x2)
                if x:
                    root = QuadNum(x, self.b / (2 * x), self.D)
                    return root if root.sign() > 0 else -root
        raise NotInField(f"sqrt({self}) is not in Q(sqrt {self.D})")

    def __str__(self):
        return f"{rat_str(self.a)} + {rat_str(self.b)}*sqrt({self.D})"

    def to_json(self) -> str:
        return str(self)

    def pretty(self) -> str:
        """Compact form such as ``2+sqrt(5)`` or ``sqrt(5)/5``."""
        out = ""
        if self.a != 0 or self.b == 0:
            out = rat_text(self.a)
        if self.b != 0:
            mag = abs(self.b)
            num, den = mag.numerator, mag.denominator
            surd = f"sqrt({self.D})" if num == 1 else f"{int_str(num)}*sqrt({self.D})"
            if den != 1:
                surd += f"/{int_str(den)}"
            if self.b < 0:
                out += "-" + surd
            else:
                out += ("+" if out else "") + surd
        return out

    @classmethod
    def parse(cls, text: str) -> QuadNum:
        """Inverse of ``str``: ``"p/q + r/s*sqrt(D)"``."""
        head, tail = text.split("+", 1)
        coeff, root = tail.strip().split("*sqrt(")
        return cls(as_fraction(head), as_fraction(coeff), int(root.rstrip(")")))


# ---------------------------------------------------------------------------
# Truncated power series in eps = c - 1 over Q(sqrt D)


class QuadSeries:
    """Power series ``sum_k s_k eps^k`` truncated after order ``K``."""

    __slots__ = ("coeffs", "D", "K")

    def __init__(self, coeffs: Iterable, D: int, K: int):
        if K < 0:
            raise ValueError("order must be nonnegative")
        _check_discriminant(D)
        cs = []
        for c in coeffs:
            if len(cs) > K:
                break
            if isinstance(c, QuadNum):
                if c.D != D:
                    raise FieldMismatch(f"coefficient in Q(sqrt {c.D}), series over Q(sqrt {D})")
                cs.append(c)
            else:
                cs.append(QuadNum(as_fraction(c), Fraction(0), D))
        zero = QuadNum(Fraction(0), Fraction(0), D)
        cs.extend([zero] * (K + 1 - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "K", K)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSeries is immutable")

    @classmethod
    def from_poly(cls, p: Poly, D: int, K: int) -> QuadSeries:
        """Series of a polynomial already written in eps."""
        return cls(p.coeffs[: K + 1], D, K)

    @classmethod
    def constant(cls, x, D: int, K: int) -> QuadSeries:
        return cls([x], D, K)

    def _lift(self, other):
        if isinstance(other, QuadSeries):
            if other.D != self.D:
                raise FieldMismatch(f"Q(sqrt {self.D}) vs Q(sqrt {other.D})")
            return other
        if isinstance(other, (int, Fraction, QuadNum)):
            return QuadSeries([other], self.D, self.K)
        return None

    def __getitem__(self, k):
        return self.coeffs[k]

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        K = min(self.K, o.K)
        return QuadSeries([x + y for x, y in zip(self.coeffs, o.coeffs)], self.D, K)

    __radd__ = __add__

    def __neg__(self):
        return QuadSeries([-x for x in self.coeffs], self.D, self.K)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadNum)):
            return QuadSeries([x * other for x in self.coeffs], self.D, self.K)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        K = min(self.K, o.K)
        a, b = self.coeffs, o.coeffs
        out = []
        for k in range(K + 1):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                acc = acc + a[i] * b[k - i]
            out.append(acc)
        return QuadSeries(out, self.D, K)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return quad_series_div(self, o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return quad_series_div(o, self)

    def __eq__(self, other):
        if not isinstance(other, QuadSeries):
            return NotImplemented
        K = min(self.K, other.K)
        return self.D == other.D and self.coeffs[: K + 1] == other.coeffs[: K + 1]

    def __hash__(self):
        return hash((self.coeffs, self.D, self.K))

    def valuation(self):
        """Index of the first nonzero coefficient, or ``None``."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def truncate(self, K: int) -> QuadSeries:
        return QuadSeries(self.coeffs, self.D, min(K, self.K))

    def __repr__(self):
        return f"QuadSeries({[c.pretty() for c in self.coeffs]}, D={self.D}, K={self.K})"


def quad_series_div(s: QuadSeries, t: QuadSeries) -> QuadSeries:
    if t.D != s.D:
        raise FieldMismatch(f"Q(sqrt {s.D}) vs Q(sqrt {t.D})")
    t0 = t.coeffs[0]
    if t0.is_zero():
        raise NonUnitConstantTerm("divisor has zero constant term")
    inv0 = t0.inverse()
    K = min(s.K, t.K)
    out = []
    for k in range(K + 1):
        acc = s.coeffs[k]
        for i in range(1, k + 1):
            acc = acc - t.coeffs[i] * out[k - i]
        out.append(acc * inv0)
    return QuadSeries(out, s.D, K)


def quad_series_sqrt(s: QuadSeries) -> QuadSeries:
    s0 = s.coeffs[0]
    sign = s0.sign()
    if sign == 0:
        raise NonUnitConstantTerm("square root of a series with zero constant term")
    if sign < 0:
        raise NegativeConstantTerm("square root of a series with negative constant term")
    r0 = s0.sqrt()
    inv = (2 * r0).inverse()
    out = [r0]
    for k in range(1, s.K + 1):
        acc = s.coeffs[k]
        for i in range(1, k):
            acc = acc - out[i] * out[k - i]
        out.append(acc * inv)
    return QuadSeries(out, s.D, s.K)
