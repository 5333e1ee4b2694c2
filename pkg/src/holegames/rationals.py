"""Exact rational scalar arithmetic used everywhere in the engine.

All engine decisions are made over Q (arbitrary-precision rationals) or over
quadratic extensions Q[sqrt(s)] when an angle threshold demands it.  Floating
point appears only inside "guess" helpers whose results are re-validated with
exact predicates before use.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpq as Q  # noqa: N811  (much faster than Fraction)
except ImportError:  # pragma: no cover
    Q = Fraction

QLike = object  # ints, Fraction, mpq and strings all convert via Q()

ZERO = Q(0)
ONE = Q(1)


def to_q(value) -> Q:
    """Coerce ints, fractions, "num/den" strings and mpq values to Q."""
    t = type(value)
    if t is str:
        if "/" in value:
            num, den = value.split("/", 1)
            return Q(int(num), int(den))
        return Q(int(value))
    if t is float:
        raise TypeError("floats are not allowed in exact context: %r" % (value,))
    return Q(value)


def fmt_q(value) -> str:
    """Canonical "num/den" wire form (always includes the denominator)."""
    q = Q(value)
    return "%d/%d" % (q.numerator, q.denominator)


def sign(value) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def dyadic_below(x: float, bits: int = 20) -> Q:
    """A positive dyadic rational strictly below the positive float ``x``.

    Used to turn float guesses for "sufficiently small" constants into exact
    values; callers must re-validate the exact conditions afterwards.
    """
    if not (x > 0.0) or not math.isfinite(x):
        raise ValueError("need a positive finite guess, got %r" % x)
    scaled = int(math.floor(x * (1 << bits)))
    while scaled >= 1 and Q(scaled, 1 << bits) >= Q(Fraction(x)):
        scaled -= 1
    if scaled >= 1:
        return Q(scaled, 1 << bits)
    # x smaller than 2^-bits: fall back to a power of two below x.
    p = 1 << bits
    while Q(1, p) >= Q(Fraction(x)):
        p <<= 1
    return Q(1, p)


def sqrt_below(squared, bits: int = 20) -> Q:
    """A positive rational r with r*r < squared (squared > 0, exact input)."""
    s = to_q(squared)
    if s <= 0:
        raise ValueError("need a positive squared bound")
    guess = math.sqrt(float(Fraction(s.numerator, s.denominator)))
    if guess > 0:
        r = dyadic_below(guess, bits)
        while r * r >= s:
            r /= 2
        return r
    r = Q(1)
    while r * r >= s:
        r /= 2
    return r


class QuadExt:
    """A number a + b*sqrt(s) with a, b rational and s a positive non-square.

    Only what the angle comparisons need: construction, multiplication by
    itself (squaring), exact sign, and comparison against rationals.
    """

    __slots__ = ("a", "b", "s")

    def __init__(self, a, b=0, s=1):
        self.a = to_q(a)
        self.b = to_q(b)
        self.s = to_q(s)
        if self.s <= 0:
            raise ValueError("radicand must be positive")

    def __repr__(self):
        return "QuadExt(%s + %s*sqrt(%s))" % (self.a, self.b, self.s)

    def sign(self) -> int:
        a, b, s = self.a, self.b, self.s
        if b == 0:
            return sign(a)
        if a == 0:
            return sign(b)
        sa, sb = sign(a), sign(b)
        if sa == sb:
            return sa
        # a and b*sqrt(s) have opposite signs: compare a^2 against b^2*s.
        return sa * sign(a * a - b * b * s)

    def squared(self) -> "QuadExt":
        a, b, s = self.a, self.b, self.s
        return QuadExt(a * a + b * b * s, 2 * a * b, s)

    def minus_rational(self, r) -> "QuadExt":
        return QuadExt(self.a - to_q(r), self.b, self.s)

    def cmp_rational(self, r) -> int:
        """Exact sign of (self - r) for rational r."""
        return self.minus_rational(r).sign()

    def to_float(self) -> float:
        return float(Fraction(self.a.numerator, self.a.denominator)) + float(
            Fraction(self.b.numerator, self.b.denominator)
        ) * math.sqrt(float(Fraction(self.s.numerator, self.s.denominator)))


def cmp_ratio_sqrt_vs_quadext(num, den_sq, ext: QuadExt) -> int:
    """Exact sign of (num / sqrt(den_sq) - ext), den_sq > 0 rational.

    The left side is how a cosine of an angle between two rational vectors
    shows up: cos = dot / sqrt(|u|^2 |v|^2).  `ext` is the threshold cosine.
    """
    num = to_q(num)
    den_sq = to_q(den_sq)
    if den_sq <= 0:
        raise ValueError("den_sq must be positive")
    se = ext.sign()
    sn = sign(num)
    if sn != se:
        return 1 if sn > se else -1
    if sn == 0:
        return 0
    # Same nonzero sign: compare squares (num^2/den_sq vs ext^2), oriented.
    ext_sq = ext.squared()  # rational-plus-radical, still in Q[sqrt(s)]
    diff = QuadExt(num * num / den_sq - ext_sq.a, -ext_sq.b, ext_sq.s)
    return sn * diff.sign()
