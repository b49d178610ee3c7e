"""Complexity-bound calculators and the doubly-exponential benchmark
formula generator.

The bounds return the exact integer value of the expression inside the
O(.), on arbitrary-precision integers; they are indicative growth rates,
not timings.  The generator emits, in prenex form, the classic sentence
family whose quantifier-free equivalent encodes a 2^(m-1)-fold function
composition with only 3(m-1) quantifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .formulas import (
    And,
    Atom,
    Formula,
    FormulaError,
    Implies,
    Or,
    Quant,
    parse_formula,
)
from .polynomial import Polynomial, VarOrder


@dataclass(frozen=True)
class BoundParams:
    m: int
    d: int
    l: int
    n: int

    def __post_init__(self):
        for name in ("m", "d", "l", "n"):
            if getattr(self, name) < 1:
                raise ValueError("%s must be a positive integer" % name)


BOUND_NAMES = ("collins-time", "collins-cells", "mccallum-cells",
               "mccallum-cells-refined", "davenport-time")


def bound(params: BoundParams, which: str) -> int:
    """Exact value of the named growth expression."""
    m, d, l, n = params.m, params.d, params.l, params.n
    if which == "collins-time":
        return m ** (2 ** (n + 6)) * (2 * d) ** (2 ** (2 * n + 8)) * l ** 3
    if which == "collins-cells":
        return m ** (2 ** n) * (2 * d) ** (2 * 3 ** n)
    if which == "mccallum-cells":
        return m ** (2 ** n) * (2 * d) ** (n * 2 ** n)
    if which == "mccallum-cells-refined":
        return (2 ** (2 ** (n - 1)) * m * (m + 1) ** (2 ** n - 2)
                * d ** (2 ** n - 1))
    if which == "davenport-time":
        return m ** (2 ** (n + 4)) * (2 * d) ** (2 ** (2 * n + 6)) * l ** 3
    raise ValueError("unknown bound %r" % which)


def dh_order(m: int) -> VarOrder:
    """Variable order for the generated sentence: the free pair first,
    then the quantifier prefix outermost-first."""
    names = ["x%d" % m, "y%d" % m]
    for i in range(m, 1, -1):
        names.append("z%d" % i)
        names.append("x%d" % (i - 1))
        names.append("y%d" % (i - 1))
    return VarOrder(names)


def generate_dh(m: int, base: str = "y1 = x1^2") -> Tuple[Formula, VarOrder]:
    """The m-th member of the family: each of the m-1 wrapping steps
    introduces exists z, forall x', forall y' and doubles the number of
    function compositions encoded by the innermost equation."""
    if m < 1:
        raise FormulaError("m must be at least 1")
    order = dh_order(m)
    inner = parse_formula(base, order)
    if not isinstance(inner, Atom) or inner.rel != "=":
        raise FormulaError("base must be a single equation")
    used = inner.poly.variables()
    if used != {"x1", "y1"}:
        raise FormulaError("base must relate exactly x1 and y1")
    body = inner
    for i in range(2, m + 1):
        xi, yi, zi = "x%d" % i, "y%d" % i, "z%d" % i
        xp, yp = "x%d" % (i - 1), "y%d" % (i - 1)

        def eq(a, b):
            p = Polynomial.var(order, a) - Polynomial.var(order, b)
            return Atom(p.normalized(), "=")

        guard = Or((And((eq(yp, yi), eq(xp, zi))),
                    And((eq(yp, zi), eq(xp, xi)))))
        body = Quant("exists", zi,
                     Quant("forall", xp,
                           Quant("forall", yp, Implies(guard, body))))
    return body, order
