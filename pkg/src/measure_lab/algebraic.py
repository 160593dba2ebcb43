"""Exact arithmetic over Z[beta] and Q(beta) for a Pisot base beta.

Elements are coordinate vectors in the power basis 1, beta, ..., beta^(r-1)
with arbitrary-size integer (BetaInt) or exact rational (QBeta)
coordinates.  Numeric values are only ever produced as certified
enclosures (midpoint plus radius), with automatic precision escalation up
to a configurable cap, so that boundary comparisons can never silently
misclassify.

The fractional part of z*beta^k is computed through the trace identity:
z*beta^k plus the sum of its Galois conjugates is a rational integer, and
the conjugate sum is tiny because all conjugates of a Pisot number have
modulus below one.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, wraps
from math import isqrt
from typing import NamedTuple

from mpmath import mp, mpc, mpf

# mpmath's working precision is process-global state; every public entry
# point that touches it holds this lock so concurrent callers (the scan
# thread pool) cannot race each other's precision escalations.
_MP_LOCK = threading.RLock()

from ._ball import Ball, CBall, ball_horner
from .errors import NotMonic, NotPisot, PrecisionExhausted, Reducible

DEFAULT_PRECISION = 128
_PRECISION_CAP_ENV = "MEASURE_LAB_PRECISION_CAP"


def precision_cap() -> int:
    return int(os.environ.get(_PRECISION_CAP_ENV, "4096"))


def _serialized(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        with _MP_LOCK:
            return fn(*args, **kwargs)

    return wrapper


class FracPart(NamedTuple):
    value: float
    bound: float


@dataclass(frozen=True)
class PisotNumber:
    """A certified Pisot number given by its monic minimal polynomial.

    ``minpoly`` lists integer coefficients constant-term first, so
    x^2 - x - 1 is (-1, -1, 1).  ``root_beta`` encloses the dominant real
    root; ``conjugates`` enclose the remaining roots, all certified to
    have modulus below one.  ``irreducibility_verified`` is False for
    degrees above four, where only square-free and rational-root tests
    ran.
    """

    minpoly: tuple[int, ...]
    precision: int
    root_beta: Ball
    conjugates: tuple[CBall, ...]
    conjugate_is_real: tuple[bool, ...]
    irreducibility_verified: bool

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def beta_float(self) -> float:
        return float(self.root_beta.mid)

    def __repr__(self) -> str:
        return f"PisotNumber(minpoly={self.minpoly}, beta~{self.beta_float:.10f})"


@dataclass(frozen=True)
class BetaInt:
    """Element of Z[beta]: coords[i] is the coefficient of beta^i."""

    coords: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def is_rational_int(self) -> bool:
        return all(c == 0 for c in self.coords[1:])


@dataclass(frozen=True)
class QBeta:
    """Element of Q(beta) with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


# ----------------------------------------------------------------------
# Polynomial helpers (exact, over Z or Q)
# ----------------------------------------------------------------------


def _poly_derivative(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i * coeffs[i] for i in range(1, len(coeffs)))


def _poly_degree(coeffs) -> int:
    d = len(coeffs) - 1
    while d >= 0 and coeffs[d] == 0:
        d -= 1
    return d


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db, da = _poly_degree(b), _poly_degree(a)
    lead = b[db]
    while da >= db and da >= 0:
        f = a[da] / lead
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a[da] = Fraction(0)
        da = _poly_degree(a)
    return a


def _gcd_degree(p: tuple[int, ...], q: tuple[int, ...]) -> int:
    a = [Fraction(c) for c in p]
    b = [Fraction(c) for c in q]
    while _poly_degree(b) >= 0:
        a, b = b, _poly_mod(a, b)
    return _poly_degree(a)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _eval_int_poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _has_integer_root(coeffs: tuple[int, ...]) -> int | None:
    # Monic integer polynomial: any rational root is an integer divisor
    # of the constant term.
    if coeffs[0] == 0:
        return 0
    for d in _divisors(coeffs[0]):
        for root in (d, -d):
            if _eval_int_poly(coeffs, root) == 0:
                return root
    return None


def _quartic_has_quadratic_factor(coeffs: tuple[int, ...]) -> bool:
    # Monic quartic without rational roots is reducible over Q exactly
    # when it splits into two monic integer quadratics (Gauss's lemma).
    c0, c1, c2, c3, _ = coeffs
    for u in _divisors(c0):
        for su in (u, -u):
            if su == 0 or c0 % su != 0:
                continue
            v = c0 // su
            prod_bg = c2 - su - v
            disc = c3 * c3 - 4 * prod_bg
            if disc < 0:
                continue
            root = isqrt(disc)
            if root * root != disc:
                continue
            for b2 in (c3 + root, c3 - root):
                if b2 % 2 != 0:
                    continue
                b = b2 // 2
                g = c3 - b
                if b * v + g * su == c1:
                    return True
    return False


# ----------------------------------------------------------------------
# Certified root isolation
# ----------------------------------------------------------------------


def _mpf_floor_scaled(x: mpf, scale_bits: int, round_up: bool) -> Fraction:
    # Nearest dyadic rational at 2^-scale_bits resolution, rounded inward.
    with mp.workprec(mp.prec + scale_bits + 16):
        y = x * (mpf(2) ** scale_bits)
        n = int(mp.ceil(y)) if round_up else int(mp.floor(y))
    return Fraction(n, 2**scale_bits)


@lru_cache(maxsize=None)
def _root_disks(minpoly: tuple[int, ...], prec: int):
    """Disjoint disks, one per root, or None if this precision is not enough.

    Each entry is (mid: mpc, rad: mpf).  The radius bound n*|p(z)|/|p'(z)|
    always contains a root; disjointness of all n disks then pins exactly
    one root per disk.  Dominant root (largest modulus) first.
    """
    deg = len(minpoly) - 1
    maxbits = max(abs(c).bit_length() for c in minpoly)
    work = max(prec + 64, maxbits + 64)
    if deg == 1:
        with mp.workprec(work):
            return ((mpc(-minpoly[0]), mpf(0)),)
    deriv = _poly_derivative(minpoly)
    with mp.workprec(work):
        try:
            roots = mp.polyroots(
                [mpf(c) for c in reversed(minpoly)],
                maxsteps=300,
                extraprec=prec,
            )
        except Exception:
            return None
        disks = []
        for z in roots:
            zb = CBall(mpc(z), mpf(0))
            pval = ball_horner(minpoly, zb)
            pder = ball_horner(deriv, zb)
            der_low = pder.abs_ball().mig()
            if der_low <= 0:
                return None
            rad = deg * pval.mag() / der_low * (1 + mpf(2) ** -20)
            disks.append((mpc(z), rad))
        for i in range(deg):
            for j in range(i + 1, deg):
                gap = abs(disks[i][0] - disks[j][0])
                if gap * (1 - mpf(2) ** -20) <= disks[i][1] + disks[j][1]:
                    return None
        disks.sort(key=lambda d: (-float(abs(d[0])), float(d[0].real), float(d[0].imag)))
        return tuple(disks)


def _certify_real_root(minpoly: tuple[int, ...], mid: mpc, rad: mpf) -> bool | None:
    """True/False when realness of the disk's unique root is decided, None
    to request more precision."""
    if abs(mid.imag) > rad:
        return False
    scale = mp.prec + 60
    lo = _mpf_floor_scaled(mid.real - rad, scale, round_up=True)
    hi = _mpf_floor_scaled(mid.real + rad, scale, round_up=False)
    if lo > hi:
        return None
    plo = _eval_int_poly([Fraction(c) for c in minpoly], lo)
    phi = _eval_int_poly([Fraction(c) for c in minpoly], hi)
    if plo == 0 or phi == 0:
        return True
    if (plo < 0) != (phi < 0):
        return True
    # No sign change inside the certified interval: a real root could only
    # hide within 2^-scale of the rim, so ask for refinement when the disk
    # still straddles the real axis noticeably.
    if abs(mid.imag) <= rad:
        return None
    return False


def _classified_disks(minpoly: tuple[int, ...], target_prec: int):
    """Certified enclosures with dominant-root classification.

    Returns (beta: Ball, conjugates: tuple[CBall], is_real: tuple[bool]).
    Raises NotPisot when the root-modulus condition is certifiably
    violated, PrecisionExhausted past the cap.
    """
    width_goal = mpf(2) ** -(target_prec // 2)
    prec = max(64, target_prec)
    cap = max(precision_cap(), prec)
    while True:
        disks = _root_disks(minpoly, prec)
        if disks is not None:
            with mp.workprec(prec + 64):
                big = [d for d in disks if abs(d[0]) - d[1] > 1]
                small = [d for d in disks if abs(d[0]) + d[1] < 1]
                if len(big) >= 2:
                    z = big[1][0]
                    raise NotPisot(
                        f"root {complex(z):.6g} has modulus > 1 besides the dominant root"
                    )
                if len(big) + len(small) == len(disks) and len(big) == 0:
                    raise NotPisot("no root with modulus > 1")
                sharp = all(d[1] <= width_goal for d in disks)
                if sharp and len(big) == 1 and len(small) == len(disks) - 1:
                    dom = disks[0]
                    # Exactly one root outside the unit circle: complex roots
                    # pair with their conjugates, so this one is real.
                    if dom[0].real < 0:
                        raise NotPisot(
                            f"dominant root {complex(dom[0]):.6g} is negative"
                        )
                    conj = []
                    is_real = []
                    ok = True
                    for mid, rad in disks[1:]:
                        verdict = _certify_real_root(minpoly, mid, rad)
                        if verdict is None:
                            ok = False
                            break
                        conj.append(CBall(mid, rad))
                        is_real.append(verdict)
                    if ok:
                        beta = Ball(dom[0].real, dom[1])
                        return beta, tuple(conj), tuple(is_real)
        prec *= 2
        if prec > cap:
            raise PrecisionExhausted(
                f"cannot certify root enclosures of {minpoly} within {cap} bits"
            )


@_serialized
def make_pisot(minpoly, precision: int = DEFAULT_PRECISION) -> PisotNumber:
    """Validate a monic integer polynomial and certify its Pisot root.

    Degree <= 4 inputs are checked for irreducibility exactly (rational
    roots plus, for quartics, the integer quadratic-split search); higher
    degrees get square-free and rational-root tests only and carry
    ``irreducibility_verified=False``.
    """
    coeffs = tuple(int(c) for c in minpoly)
    if len(coeffs) < 2:
        raise NotMonic("degree must be at least 1")
    if coeffs[-1] != 1:
        raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
    r = len(coeffs) - 1

    if r == 1:
        root = -coeffs[0]
        if root < 2:
            raise NotPisot(f"root {root} is not a real algebraic integer > 1")
        beta = Ball.from_int(root)
        return PisotNumber(coeffs, precision, beta, (), (), True)

    if _gcd_degree(coeffs, _poly_derivative(coeffs)) > 0:
        raise Reducible("polynomial has a repeated factor")
    root = _has_integer_root(coeffs)
    if root is not None:
        raise Reducible(f"rational root {root} found, degree {r} > 1")
    if r == 4 and _quartic_has_quadratic_factor(coeffs):
        raise Reducible("quartic splits into two integer quadratics")
    verified = r <= 4

    beta, conjugates, is_real = _classified_disks(coeffs, precision)
    return PisotNumber(coeffs, precision, beta, conjugates, is_real, verified)


@_serialized
def refined_enclosures(p: PisotNumber, prec: int):
    """Root enclosures of p.minpoly recomputed at >= prec bits."""
    if p.degree == 1:
        return p.root_beta, ()
    beta, conj, _ = _classified_disks(p.minpoly, prec)
    return beta, conj


# ----------------------------------------------------------------------
# Ring operations in Z[beta]
# ----------------------------------------------------------------------


def bint_from_int(n: int, p: PisotNumber) -> BetaInt:
    return BetaInt((n,) + (0,) * (p.degree - 1))


def bint_add(x: BetaInt, y: BetaInt) -> BetaInt:
    return BetaInt(tuple(a + b for a, b in zip(x.coords, y.coords)))


def bint_sub(x: BetaInt, y: BetaInt) -> BetaInt:
    return BetaInt(tuple(a - b for a, b in zip(x.coords, y.coords)))


def bint_neg(x: BetaInt) -> BetaInt:
    return BetaInt(tuple(-a for a in x.coords))


def _reduce_mod_minpoly(prod: list, minpoly: tuple[int, ...]) -> None:
    r = len(minpoly) - 1
    for i in range(len(prod) - 1, r - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(r):
                prod[i - r + j] -= c * minpoly[j]


def bint_mul(x: BetaInt, y: BetaInt, p: PisotNumber) -> BetaInt:
    r = p.degree
    prod = [0] * (2 * r - 1)
    for i, a in enumerate(x.coords):
        if a:
            for j, b in enumerate(y.coords):
                prod[i + j] += a * b
    _reduce_mod_minpoly(prod, p.minpoly)
    return BetaInt(tuple(prod[:r]))


def bint_mul_beta(x: BetaInt, p: PisotNumber) -> BetaInt:
    prod = [0] + list(x.coords)
    _reduce_mod_minpoly(prod, p.minpoly)
    return BetaInt(tuple(prod[: p.degree]))


def bint_pow_beta(k: int, p: PisotNumber) -> BetaInt:
    """beta^k as an element of Z[beta]."""
    x = bint_from_int(1, p)
    for _ in range(k):
        x = bint_mul_beta(x, p)
    return x


def bint_pow(x: BetaInt, k: int, p: PisotNumber) -> BetaInt:
    result = bint_from_int(1, p)
    base = x
    while k:
        if k & 1:
            result = bint_mul(result, base, p)
        base = bint_mul(base, base, p)
        k >>= 1
    return result


# ----------------------------------------------------------------------
# Embeddings and fractional parts
# ----------------------------------------------------------------------


def _embed_once(coords, q: int, p: PisotNumber, prec: int):
    beta, conj = refined_enclosures(p, prec)
    with mp.workprec(prec + 64):
        if q == 1:
            return ball_horner(coords, beta)
        return ball_horner(coords, conj[q - 2])


@_serialized
def bint_embed(x: BetaInt, q: int, p: PisotNumber):
    """Certified enclosure of x under the q-th embedding (q=1 is beta itself).

    Returns a Ball for q=1 and a CBall otherwise; width is at most
    2^(-precision/2), escalating internally as needed.
    """
    if not 1 <= q <= p.degree:
        raise ValueError(f"embedding index {q} outside 1..{p.degree}")
    target = mpf(2) ** -(p.precision // 2)
    prec = p.precision
    cap = max(precision_cap(), prec)
    while True:
        ball = _embed_once(x.coords, q, p, prec)
        if ball.rad <= target:
            return ball
        prec *= 2
        if prec > cap:
            raise PrecisionExhausted(f"embedding of {x} at index {q}")


@_serialized
def qbeta_embed(x: QBeta, q: int, p: PisotNumber):
    """Certified enclosure of a Q(beta) element; Ball for q=1, CBall else."""
    if not 1 <= q <= p.degree:
        raise ValueError(f"embedding index {q} outside 1..{p.degree}")
    target = mpf(2) ** -(p.precision // 2)
    prec = p.precision
    cap = max(precision_cap(), prec)
    while True:
        beta, conj = refined_enclosures(p, prec)
        with mp.workprec(prec + 64):
            point = beta if q == 1 else conj[q - 2]
            if q == 1:
                acc = Ball.from_fraction(x.coords[-1])
            else:
                acc = CBall.from_ball(Ball.from_fraction(x.coords[-1]))
            for c in reversed(x.coords[:-1]):
                fb = Ball.from_fraction(c)
                step = fb if q == 1 else CBall.from_ball(fb)
                acc = acc * point + step
        if acc.rad <= target:
            return acc
        prec *= 2
        if prec > cap:
            raise PrecisionExhausted(f"embedding of {x} at index {q}")


def _frac_of_real_ball(ball: Ball):
    """Split a real ball into integer part and fractional ball, or None when
    the ball straddles an integer."""
    with mp.workprec(max(mp.prec, 64)):
        n = int(mp.floor(ball.mid))
        lo_gap = ball.mid - n
        hi_gap = (n + 1) - ball.mid
        if lo_gap > ball.rad and hi_gap > ball.rad:
            return float(lo_gap), float(ball.rad * (1 + mpf(2) ** -20)) + 1e-300
    return None


@_serialized
def frac_beta_power(z: BetaInt, k: int, p: PisotNumber, max_err: float = 2.0**-60) -> FracPart:
    """frac(z * beta^k) with a certified error bound.

    Computed through the trace identity (the conjugate sum of z*beta^k
    differs from it by a rational integer), which stays stable for large k
    where direct floating evaluation of beta^k has no fractional precision
    left.  Small k falls back to direct embedding.  Exactly-integer values
    return 0 with bound 0.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    w = z
    for _ in range(k):
        w = bint_mul_beta(w, p)
    if w.is_rational_int:
        return FracPart(0.0, 0.0)

    prec = p.precision
    cap = max(precision_cap(), prec)
    while True:
        if k <= 8:
            ball = _embed_once(w.coords, 1, p, prec)
        else:
            beta, conj = refined_enclosures(p, prec)
            with mp.workprec(prec + 64):
                total = CBall.from_int(0)
                for point in conj:
                    total = total + ball_horner(w.coords, point)
                ball = (-total).real_ball()
        with mp.workprec(prec + 64):
            if ball.rad <= max_err:
                split = _frac_of_real_ball(ball)
                if split is not None:
                    return FracPart(*split)
        prec *= 2
        if prec > cap:
            raise PrecisionExhausted(
                f"frac({z}*beta^{k}) enclosure {float(ball.mid)!r} +- {float(ball.rad)!r} "
                "cannot be separated from an integer"
            )


# ----------------------------------------------------------------------
# Field operations in Q(beta)
# ----------------------------------------------------------------------


def qbeta_from_bint(x: BetaInt) -> QBeta:
    return QBeta(tuple(Fraction(c) for c in x.coords))


def qbeta_from_int(n: int, p: PisotNumber) -> QBeta:
    return QBeta((Fraction(n),) + (Fraction(0),) * (p.degree - 1))


def qbeta_add(x: QBeta, y: QBeta) -> QBeta:
    return QBeta(tuple(a + b for a, b in zip(x.coords, y.coords)))


def qbeta_sub(x: QBeta, y: QBeta) -> QBeta:
    return QBeta(tuple(a - b for a, b in zip(x.coords, y.coords)))


def qbeta_neg(x: QBeta) -> QBeta:
    return QBeta(tuple(-a for a in x.coords))


def qbeta_mul(x: QBeta, y: QBeta, p: PisotNumber) -> QBeta:
    r = p.degree
    prod = [Fraction(0)] * (2 * r - 1)
    for i, a in enumerate(x.coords):
        if a:
            for j, b in enumerate(y.coords):
                prod[i + j] += a * b
    _reduce_mod_minpoly(prod, p.minpoly)
    return QBeta(tuple(prod[:r]))


def qbeta_mul_beta(x: QBeta, p: PisotNumber) -> QBeta:
    prod = [Fraction(0)] + list(x.coords)
    _reduce_mod_minpoly(prod, p.minpoly)
    return QBeta(tuple(prod[: p.degree]))


def qbeta_div(num: QBeta, den: QBeta, p: PisotNumber) -> QBeta:
    """Exact quotient via the r x r linear system of multiplication by den."""
    if den.is_zero:
        raise ZeroDivisionError("division by zero in Q(beta)")
    r = p.degree
    cols = []
    power = den
    for _ in range(r):
        cols.append(list(power.coords))
        power = qbeta_mul_beta(power, p)
    # A[i][j] = coefficient of beta^i in den * beta^j
    a = [[cols[j][i] for j in range(r)] + [num.coords[i]] for i in range(r)]
    for col in range(r):
        pivot = next((row for row in range(col, r) if a[row][col] != 0), None)
        if pivot is None:
            raise Reducible(
                "multiplication matrix is singular; the minimal polynomial "
                "must be reducible"
            )
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for row in range(r):
            if row != col and a[row][col]:
                f = a[row][col]
                a[row] = [v - f * w for v, w in zip(a[row], a[col])]
    return QBeta(tuple(a[i][r] for i in range(r)))
