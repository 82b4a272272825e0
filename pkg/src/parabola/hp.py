"""High-precision float contexts.

mpmath's module-level ``mp`` context is process-global; everything here works
on private :class:`mpmath.MPContext` instances so concurrent callers never
observe each other's precision settings.
"""

import os

import mpmath

#: Environment variable consulted for the default mantissa width.
PREC_ENV = "PARABOLA_PREC_BITS"
DEFAULT_BITS = 256


def default_bits():
    raw = os.environ.get(PREC_ENV)
    if raw is None:
        return DEFAULT_BITS
    bits = int(raw)
    if bits < 64:
        raise ValueError(f"{PREC_ENV} must be at least 64, got {bits}")
    return bits


def context(bits=None):
    """Return a fresh mpmath context with ``bits`` of mantissa."""
    ctx = mpmath.MPContext()
    ctx.prec = default_bits() if bits is None else int(bits)
    return ctx


def fmt(ctx, x, digits=None):
    """Decimal string for ``x`` with a fixed number of significant digits."""
    if digits is None:
        digits = max(15, int(ctx.prec * 0.30103) - 2)
    return ctx.nstr(x, digits, strip_zeros=False, min_fixed=-4, max_fixed=6)
