"""Real root isolation and exact real algebraic numbers.

Isolation uses Descartes'-rule bisection on dyadic intervals after a
Cauchy root bound; rational roots are split off first via the rational
root theorem so bisection never lands on a root.  A Sturm-sequence
implementation lives in the test suite as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from .polynomial import (Polynomial, PolynomialError, poly_gcd,
                         squarefree_decomposition, squarefree_part)


class RealAlgError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    kind: str = "open"  # "open" | "point"

    def __post_init__(self):
        if self.kind not in ("open", "point"):
            raise RealAlgError("bad interval kind %r" % self.kind)
        if self.lo > self.hi:
            raise RealAlgError("interval endpoints out of order")
        if self.kind == "point" and self.lo != self.hi:
            raise RealAlgError("point interval must have equal endpoints")

    @property
    def is_point(self) -> bool:
        return self.kind == "point"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        if self.is_point:
            return "{%s}" % self.lo
        return "(%s, %s)" % (self.lo, self.hi)


@dataclass(frozen=True)
class RealAlgebraicNumber:
    """A real root of a square-free univariate polynomial over Q.

    The isolating interval contains exactly one root of ``defining`` and
    neither endpoint is a root.  ``multiplicity`` records the root's
    multiplicity in the original (pre-square-free) polynomial.
    """

    defining: Polynomial
    interval: Interval
    multiplicity: int = 1

    @property
    def is_rational(self) -> bool:
        return self.interval.is_point

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise RealAlgError("not a known-rational value")
        return self.interval.lo

    @property
    def var(self) -> str:
        v = self.defining.main_var()
        if v is None:
            raise RealAlgError("constant defining polynomial")
        return v

    def approx(self, digits: int = 6) -> float:
        a = refine(self, Fraction(1, 10 ** (digits + 1)))
        mid = (a.interval.lo + a.interval.hi) / 2
        return float(mid)

    def root_index(self) -> int:
        """1-based index of this root among the real roots of ``defining``."""
        roots = isolate_roots(self.defining)
        for k, r in enumerate(roots, start=1):
            if compare(r, self) == 0:
                return k
        raise RealAlgError("number is not a root of its defining polynomial")

    def describe(self) -> str:
        if self.is_rational:
            return str(self.interval.lo)
        return "RootOf(%s, %d) ~ %.6g" % (self.defining, self.root_index(),
                                          self.approx())

    def __str__(self):
        if self.is_rational:
            return str(self.interval.lo)
        return "RootOf(%s, %s)" % (self.defining, self.interval)


AlgOrRat = Union[RealAlgebraicNumber, Fraction, int]


# -- univariate helpers on Fraction coefficient lists -------------------

def _eval_coeffs(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_variations(coeffs: Sequence) -> int:
    signs = [_sign(c) for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _shift1(coeffs: List) -> List:
    # Taylor shift: p(x) -> p(x + 1), in place on a copied list
    c = list(coeffs)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _descartes_test(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Sign-variation bound on the number of roots in the open (lo, hi)."""
    width = hi - lo
    n = len(coeffs) - 1
    # p(lo + width*x), then x -> 1/(x+1) projectivised, then x -> x+1
    shifted = []
    for e, c in enumerate(coeffs):
        shifted.append(c * width ** e)
    # Taylor shift by lo/width in the scaled variable: q(x) = p(lo + width*x)
    t = lo / width if width else Fraction(0)
    q = list(shifted)
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            q[j] += t * q[j + 1]
    q.reverse()
    return _sign_variations(_shift1(q))


def _cauchy_bound(coeffs: Sequence[Fraction]) -> Fraction:
    lead = abs(coeffs[-1])
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else Fraction(0)
    bound = 1 + m / lead
    b = Fraction(1)
    while b < bound:
        b *= 2
    return b


def _divisors(n: int, cap: int = 1 << 20) -> Optional[List[int]]:
    n = abs(n)
    if n == 0:
        return None
    if n > cap * cap:
        return None
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
        if d > cap:
            return None
    return out


def _rational_roots(coeffs: List[Fraction]) -> List[Fraction]:
    """All rational roots, via the rational root theorem (small inputs)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = []
    low = 0
    while ints[low] == 0:
        low += 1
    if low > 0:
        roots.append(Fraction(0))
        ints = ints[low:]
    if len(ints) <= 1:
        return roots
    ps = _divisors(ints[0])
    qs = _divisors(ints[-1])
    if ps is None or qs is None:
        return roots
    seen = set()
    for p in ps:
        for q in qs:
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in seen:
                    continue
                seen.add(cand)
                if _eval_coeffs(coeffs, cand) == 0:
                    roots.append(cand)
    return roots


# -- public operations --------------------------------------------------

def isolate_roots(p: Polynomial) -> List[RealAlgebraicNumber]:
    """Isolate the real roots of a square-free univariate polynomial.

    Returns one entry per distinct real root, sorted ascending, with
    pairwise-disjoint isolating intervals.  Known-rational roots come
    back with point intervals.
    """
    if p.is_zero or p.is_constant:
        raise RealAlgError("cannot isolate roots of a constant")
    var = p.main_var()
    if len(p.variables()) != 1:
        raise RealAlgError("polynomial is not univariate")
    if not poly_gcd(p, p.derivative(var)).is_constant:
        raise RealAlgError("polynomial is not square-free")
    return _isolate_squarefree(p.normalized(), var)


def _isolate_squarefree(p: Polynomial, var: str) -> List[RealAlgebraicNumber]:
    coeffs = p.univariate_coeffs(var)
    rational = sorted(_rational_roots(coeffs))
    work = coeffs
    for r in rational:
        work = _deflate(work, r)
    points: List[Fraction] = list(rational)
    open_iv: List[tuple] = []  # (lo, hi, certifying coefficient list)
    if len(work) > 1:
        bound = _cauchy_bound(work)
        stack = [(-bound, bound)]
        while stack:
            lo, hi = stack.pop()
            v = _descartes_test(work, lo, hi)
            if v == 0:
                continue
            if v == 1:
                open_iv.append((lo, hi, work))
                continue
            mid = (lo + hi) / 2
            if _eval_coeffs(work, mid) == 0:
                # a rational root missed by the (capped) divisor search
                points.append(mid)
                work = _deflate(work, mid)
            stack.append((lo, mid))
            stack.append((mid, hi))
    out = [RealAlgebraicNumber(p, Interval(r, r, "point")) for r in points]
    for lo, hi, wp in open_iv:
        item = _shrink_away_from(lo, hi, wp, points)
        if isinstance(item, Fraction):
            out.append(RealAlgebraicNumber(p, Interval(item, item, "point")))
        else:
            out.append(RealAlgebraicNumber(p, Interval(item[0], item[1])))
    out.sort(key=_root_sort_key)
    return out


def _shrink_away_from(lo, hi, coeffs, points):
    """Bisect an isolating interval of ``coeffs`` until it excludes the
    given rational points; the tracked root is not one of them."""
    s_lo = _sign(_eval_coeffs(coeffs, lo))
    while any(lo < r < hi for r in points):
        mid = (lo + hi) / 2
        v = _eval_coeffs(coeffs, mid)
        if v == 0:
            return mid
        if _sign(v) == s_lo:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def _deflate(coeffs: List[Fraction], root: Fraction) -> List[Fraction]:
    # synthetic division by (x - root); exact for an actual root
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[i] + acc * root
        out[i - 1] = acc
    return out


def _root_sort_key(r: RealAlgebraicNumber):
    if r.is_rational:
        v = r.interval.lo
        return (v, v)
    return (r.interval.lo, r.interval.hi)


def isolate_with_multiplicity(p: Polynomial) -> List[RealAlgebraicNumber]:
    """Distinct real roots of arbitrary non-constant univariate ``p``.

    Multiplicities come from the square-free decomposition; the roots of
    different square-free factors are merged into one ascending list.
    """
    if p.is_zero or p.is_constant:
        raise RealAlgError("cannot isolate roots of a constant")
    var = p.main_var()
    merged: List[RealAlgebraicNumber] = []
    for factor, mult in squarefree_decomposition(p, var):
        for r in _isolate_squarefree(factor, var):
            merged.append(RealAlgebraicNumber(r.defining, r.interval, mult))
    return merge_roots(merged)


def merge_roots(roots: List[RealAlgebraicNumber]) -> List[RealAlgebraicNumber]:
    """Sort roots of possibly different polynomials; detect duplicates."""
    out: List[RealAlgebraicNumber] = []
    for r in roots:
        placed = False
        for i, s in enumerate(out):
            c = compare(r, s)
            if c == 0:
                placed = True
                break
            if c < 0:
                out.insert(i, r)
                placed = True
                break
        if not placed:
            out.append(r)
    return out


def refine(a: RealAlgebraicNumber, width: Fraction) -> RealAlgebraicNumber:
    """Same number, isolating interval narrower than ``width``."""
    if width <= 0:
        raise RealAlgError("width must be positive")
    if a.is_rational or a.interval.width < width:
        return a
    var = a.var
    coeffs = a.defining.univariate_coeffs(var)
    lo, hi = a.interval.lo, a.interval.hi
    s_lo = _sign(_eval_coeffs(coeffs, lo))
    while hi - lo >= width:
        mid = (lo + hi) / 2
        v = _eval_coeffs(coeffs, mid)
        if v == 0:
            return RealAlgebraicNumber(a.defining, Interval(mid, mid, "point"),
                                       a.multiplicity)
        if _sign(v) == s_lo:
            lo = mid
        else:
            hi = mid
    return RealAlgebraicNumber(a.defining, Interval(lo, hi), a.multiplicity)


def _as_number(x: AlgOrRat):
    if isinstance(x, RealAlgebraicNumber):
        if x.is_rational:
            return x.rational_value()
        return x
    return Fraction(x)


def compare(a: AlgOrRat, b: AlgOrRat) -> int:
    """Exact trichotomy: -1, 0, or 1 for a <, =, > b."""
    a = _as_number(a)
    b = _as_number(b)
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return _sign(a - b)
    if isinstance(a, Fraction):
        return -_compare_alg_rat(b, a)
    if isinstance(b, Fraction):
        return _compare_alg_rat(a, b)
    return _compare_alg_alg(a, b)


def _compare_alg_rat(a: RealAlgebraicNumber, t: Fraction) -> int:
    iv = a.interval
    if t <= iv.lo:
        return 1
    if t >= iv.hi:
        return -1
    coeffs = a.defining.univariate_coeffs(a.var)
    vt = _eval_coeffs(coeffs, t)
    if vt == 0:
        return 0
    if _sign(vt) != _sign(_eval_coeffs(coeffs, iv.lo)):
        return -1  # root lies in (lo, t)
    return 1


def _compare_alg_alg(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> int:
    while True:
        ia, ib = a.interval, b.interval
        if ia.hi <= ib.lo:
            return -1
        if ib.hi <= ia.lo:
            return 1
        g = poly_gcd(a.defining, b.defining)
        if not g.is_constant:
            olo, ohi = max(ia.lo, ib.lo), min(ia.hi, ib.hi)
            gc = g.univariate_coeffs(g.main_var())
            if _sign(_eval_coeffs(gc, olo)) != _sign(_eval_coeffs(gc, ohi)):
                return 0
        a = refine(a, ia.width / 2)
        b = refine(b, ib.width / 2)
        if a.is_rational:
            return -_compare_alg_rat(b, a.rational_value()) if not b.is_rational \
                else _sign(a.rational_value() - b.rational_value())
        if b.is_rational:
            return _compare_alg_rat(a, b.rational_value())


def sign_of_poly_at(q: Polynomial, a: RealAlgebraicNumber) -> int:
    """Exact sign of a univariate rational polynomial at ``a``.

    Zero is certified via gcd with the defining polynomial, never from a
    small interval.
    """
    if q.is_zero:
        return 0
    if q.is_constant:
        return _sign(q.constant_value())
    if a.is_rational:
        return _sign(q.evaluate({q.main_var(): a.rational_value()}))
    var = a.var
    if not q.variables() <= {var}:
        raise RealAlgError("polynomial variable mismatch at algebraic point")
    g = poly_gcd(q, a.defining)
    if not g.is_constant:
        gc = g.univariate_coeffs(var)
        lo, hi = a.interval.lo, a.interval.hi
        if _sign(_eval_coeffs(gc, lo)) != _sign(_eval_coeffs(gc, hi)):
            return 0
    qc = q.univariate_coeffs(var)
    cur = a
    while True:
        lo, hi = cur.interval.lo, cur.interval.hi
        s_lo = _sign(_eval_coeffs(qc, lo))
        s_hi = _sign(_eval_coeffs(qc, hi))
        if s_lo == s_hi and s_lo != 0:
            # q has an even number of roots inside; rule them out
            if _descartes_root_free(qc, lo, hi):
                return s_lo
        cur = refine(cur, cur.interval.width / 2)
        if cur.is_rational:
            return _sign(_eval_coeffs(qc, cur.rational_value()))


def _descartes_root_free(coeffs, lo, hi) -> bool:
    return _descartes_test(list(coeffs), lo, hi) == 0


def choose_sample(lo: Optional[Fraction], hi: Optional[Fraction],
                  lo_strict: bool = True, hi_strict: bool = True) -> Fraction:
    """A rational inside the region, dyadic with the smallest power-of-two
    denominator; ties broken by smallest |numerator|, then preferring the
    non-negative value.  ``None`` bounds mean -/+ infinity; the strictness
    flags control whether the endpoints themselves are admitted.
    """
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_strict or hi_strict)):
            raise RealAlgError("empty sample region")
        if lo == hi:
            return lo
    d = 1
    while True:
        k_lo = k_hi = None
        if lo is not None:
            x = lo * d
            k_lo = math.floor(x) + 1 if lo_strict else math.ceil(x)
        if hi is not None:
            x = hi * d
            k_hi = math.ceil(x) - 1 if hi_strict else math.floor(x)
        if k_lo is None and k_hi is None:
            return Fraction(0)
        if k_lo is None:
            return Fraction(min(k_hi, 0) if k_hi >= 0 else k_hi, d)
        if k_hi is None:
            return Fraction(max(k_lo, 0) if k_lo <= 0 else k_lo, d)
        if k_lo <= k_hi:
            if k_lo <= 0 <= k_hi:
                k = 0
            elif k_lo > 0:
                k = k_lo
            else:
                k = k_hi
            return Fraction(k, d)
        d *= 2


def sample_between(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> Fraction:
    """A rational strictly between two distinct roots, a < b."""
    while True:
        ia, ib = a.interval, b.interval
        lo_s, hi_s = ia.is_point, ib.is_point
        if ia.hi < ib.lo or (ia.hi == ib.lo and not lo_s and not hi_s):
            return choose_sample(ia.hi, ib.lo, lo_strict=lo_s, hi_strict=hi_s)
        if lo_s and hi_s:
            raise RealAlgError("sample_between needs a < b")
        a = refine(a, ia.width / 2) if not lo_s else a
        b = refine(b, ib.width / 2) if not hi_s else b


def thom_encoding(p: Polynomial, r: RealAlgebraicNumber) -> tuple:
    """Signs of p', p'', ... at the root r of p."""
    var = p.main_var()
    if sign_of_poly_at(p, r) != 0:
        raise RealAlgError("point is not a root of the polynomial")
    signs = []
    q = p
    for _ in range(p.degree(var)):
        q = q.derivative(var)
        signs.append(sign_of_poly_at(q, r))
    return tuple(signs)
