"""Midpoint-radius ball arithmetic on top of mpmath.

A small self-contained layer for certified evaluation of algebraic
numbers: every operation returns a ball guaranteed to contain the exact
result, with the radius inflated to absorb floating-point rounding of the
midpoint.  Callers control the working precision through ``mp.workprec``;
radii are kept as nonnegative ``mpf`` values so they survive down to
exponents far below double range.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf


def _eps() -> mpf:
    # One-ulp rounding per operation, padded by a few bits.
    return mpf(2) ** (4 - mp.prec)


def _to_mpf_exact(n: int) -> mpf:
    if n == 0:
        return mpf(0)
    with mp.workprec(max(mp.prec, n.bit_length() + 8)):
        return mpf(n)


@dataclass(frozen=True)
class Ball:
    """Real ball [mid - rad, mid + rad]."""

    mid: mpf
    rad: mpf

    @staticmethod
    def from_int(n: int) -> "Ball":
        return Ball(_to_mpf_exact(n), mpf(0))

    @staticmethod
    def from_fraction(q: Fraction) -> "Ball":
        num = _to_mpf_exact(q.numerator)
        den = _to_mpf_exact(q.denominator)
        e = _eps()
        mid = num / den
        return Ball(mid, abs(mid) * e)

    def __add__(self, other: "Ball") -> "Ball":
        e = _eps()
        mid = self.mid + other.mid
        rad = (self.rad + other.rad) * (1 + e) + abs(mid) * e
        return Ball(mid, rad)

    def __sub__(self, other: "Ball") -> "Ball":
        return self + (-other)

    def __neg__(self) -> "Ball":
        return Ball(-self.mid, self.rad)

    def __mul__(self, other: "Ball") -> "Ball":
        e = _eps()
        mid = self.mid * other.mid
        rad = (
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
        ) * (1 + 4 * e) + abs(mid) * e
        return Ball(mid, rad)

    def scale_int(self, n: int) -> "Ball":
        e = _eps()
        m = _to_mpf_exact(n)
        mid = self.mid * m
        return Ball(mid, self.rad * abs(m) * (1 + e) + abs(mid) * e)

    def add_int(self, n: int) -> "Ball":
        e = _eps()
        mid = self.mid + _to_mpf_exact(n)
        return Ball(mid, self.rad * (1 + e) + abs(mid) * e)

    def __truediv__(self, other: "Ball") -> "Ball":
        if other.lower() <= 0 <= other.upper():
            raise ZeroDivisionError("ball division by interval containing 0")
        e = _eps()
        mid = self.mid / other.mid
        denom_low = abs(other.mid) - other.rad
        rad = ((self.rad + abs(mid) * other.rad) / denom_low) * (1 + 4 * e) + abs(mid) * e
        return Ball(mid, rad)

    def abs_ball(self) -> "Ball":
        return Ball(abs(self.mid), self.rad)

    def pow_int(self, k: int) -> "Ball":
        if k < 0:
            raise ValueError("negative exponent")
        result = Ball.from_int(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def upper(self) -> mpf:
        return self.mid + self.rad

    def lower(self) -> mpf:
        return self.mid - self.rad

    def mag(self) -> mpf:
        """Upper bound for |value|."""
        return abs(self.mid) + self.rad

    def mig(self) -> mpf:
        """Lower bound for |value|."""
        low = abs(self.mid) - self.rad
        return low if low > 0 else mpf(0)


@dataclass(frozen=True)
class CBall:
    """Complex ball: disk of radius rad around mid."""

    mid: mpc
    rad: mpf

    @staticmethod
    def from_int(n: int) -> "CBall":
        return CBall(mpc(_to_mpf_exact(n)), mpf(0))

    @staticmethod
    def from_ball(b: Ball) -> "CBall":
        return CBall(mpc(b.mid), b.rad)

    def __add__(self, other: "CBall") -> "CBall":
        e = _eps()
        mid = self.mid + other.mid
        rad = (self.rad + other.rad) * (1 + e) + abs(mid) * e
        return CBall(mid, rad)

    def __neg__(self) -> "CBall":
        return CBall(-self.mid, self.rad)

    def __sub__(self, other: "CBall") -> "CBall":
        return self + (-other)

    def __mul__(self, other: "CBall") -> "CBall":
        e = _eps()
        mid = self.mid * other.mid
        rad = (
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
        ) * (1 + 4 * e) + abs(mid) * e
        return CBall(mid, rad)

    def scale_int(self, n: int) -> "CBall":
        e = _eps()
        m = _to_mpf_exact(n)
        mid = self.mid * m
        return CBall(mid, self.rad * abs(m) * (1 + e) + abs(mid) * e)

    def add_int(self, n: int) -> "CBall":
        e = _eps()
        mid = self.mid + _to_mpf_exact(n)
        return CBall(mid, self.rad * (1 + e) + abs(mid) * e)

    def pow_int(self, k: int) -> "CBall":
        if k < 0:
            raise ValueError("negative exponent")
        result = CBall.from_int(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def abs_ball(self) -> Ball:
        """Real ball containing |value|."""
        e = _eps()
        m = abs(self.mid)
        return Ball(m, self.rad * (1 + e) + m * e)

    def real_ball(self) -> Ball:
        """Real ball containing the value, valid when the value is known real."""
        return Ball(self.mid.real, self.rad)

    def mag(self) -> mpf:
        return abs(self.mid) + self.rad


def ball_horner(coeffs, point):
    """Evaluate sum(coeffs[i] * point**i) as a ball; coeffs are ints.

    ``point`` may be a Ball or CBall; the result has the same type.
    """
    acc = point.from_int(coeffs[-1]) if coeffs else point.from_int(0)
    for c in reversed(coeffs[:-1]):
        acc = (acc * point).add_int(c)
    return acc
