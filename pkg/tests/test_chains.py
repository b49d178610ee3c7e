from fractions import Fraction

import pytest

from cadkit import VarOrder
from cadkit.chains import (
    SamplePoint,
    chain_reduce,
    count_roots_chain,
    isolate_chain,
    merge_chain_roots,
    sign_at,
    sign_at_chain,
    sturm_chain,
)
from cadkit.polynomial import PolynomialError, parse_poly
from cadkit.realalg import isolate_roots

XY = VarOrder(("x", "y"))


def sqrt2_coord():
    """x = sqrt(2) as the single algebraic link of a chain."""
    p = parse_poly("x^2 - 2", XY)
    roots = isolate_chain(p, "x", [])
    return [r for r in roots if not r.is_rational or r.interval.lo > 0][-1]


class TestChainCounting:
    def test_count_over_rational_prefix(self):
        f = parse_poly("y^2 - 4", XY)
        assert count_roots_chain(f, "y", [], None, None) == 2
        assert count_roots_chain(f, "y", [], Fraction(0), None) == 1

    def test_count_over_algebraic_prefix(self):
        x = sqrt2_coord()
        f = parse_poly("y^2 - x", XY)  # y = ±2^(1/4)
        assert count_roots_chain(f, "y", [x], None, None) == 2
        g = parse_poly("y - x", XY)
        assert count_roots_chain(g, "y", [x], None, None) == 1

    def test_sturm_chain_specialises(self):
        x = sqrt2_coord()
        seq = sturm_chain(parse_poly("y^2 - x", XY), "y", [x])
        assert len(seq) >= 2


class TestIsolateChain:
    def test_rational_fast_path_matches_descartes(self):
        f = parse_poly("y^2 - 2", XY)
        chained = isolate_chain(f, "y", [])
        direct = isolate_roots(parse_poly("x^2 - 2", VarOrder(("x",))))
        assert len(chained) == len(direct) == 2
        for c, d in zip(chained, direct):
            assert c.interval.lo <= d.interval.hi
            assert d.interval.lo <= c.interval.hi

    def test_roots_over_algebraic_prefix_ordered(self):
        x = sqrt2_coord()
        f = parse_poly("y^2 - x", XY)
        roots = isolate_chain(f, "y", [x])
        assert len(roots) == 2
        assert roots[0].interval.hi <= roots[1].interval.lo
        # both fourth roots of 2 in magnitude: check against y^4 - 2
        for r in roots:
            q = parse_poly("y^4 - 2", XY)
            assert sign_at_chain(q, [x, r]) == 0

    def test_merge_identifies_shared_roots(self):
        f = parse_poly("y^2 - 2", XY)
        g = parse_poly("y^3 - 2*y", XY)  # roots 0, ±sqrt2
        merged = merge_chain_roots(
            [isolate_chain(f, "y", []), isolate_chain(g, "y", [])], "y", [])
        members = [sorted(ms) for _, ms in merged]
        assert members == [[0, 1], [1], [0, 1]]


class TestSamplePoint:
    def test_rational_sign(self):
        s = SamplePoint(XY, (Fraction(1), Fraction(-2)))
        assert sign_at(parse_poly("x + y", XY), s) == -1
        assert sign_at(parse_poly("x^2 + y^2 - 5", XY), s) == 0

    def test_algebraic_sign(self):
        x = sqrt2_coord()
        s = SamplePoint(XY, (x,))
        assert s.sign_of(parse_poly("x^2 - 2", XY)) == 0
        assert s.sign_of(parse_poly("x - 1", XY)) == 1
        assert s.sign_of(parse_poly("x - 2", XY)) == -1

    def test_uncovered_variable_rejected(self):
        s = SamplePoint(XY, (Fraction(1),))
        with pytest.raises(PolynomialError):
            sign_at(parse_poly("y", XY), s)

    def test_chain_reduce_drops_vanishing_lead(self):
        x = sqrt2_coord()
        # (x^2 - 2) y^2 + y - 1 loses its quadratic term at x = sqrt2
        f = parse_poly("(x^2 - 2)*y^2 + y - 1", XY)
        red = chain_reduce(f, "y", [x])
        assert red.degree("y") == 1
