from __future__ import annotations

from fractions import Fraction as F

import pytest

from efcert.evalcert import (RatInterval, eval_component, eval_exp,
                             interval_abs_lower, strictly_positive)

# 55-digit references (standard published expansions; cross-checked against
# mpmath direct summation in tests/oracles.py)
E_REF = F("2.718281828459045235360287471352662497757247093699959575")
E2_REF = F("7.389056098930650227230427460575007813180315570551847324")
J01_REF = F("0.7651976865579665514497175261026632209092742897553252419")


class TestRatInterval:
    def test_abs_lower_examples(self):
        assert interval_abs_lower(RatInterval(-1, 2)) == 0
        assert interval_abs_lower(RatInterval(F(1, 3), F(1, 2))) == F(1, 3)
        assert interval_abs_lower(RatInterval(-2, -1)) == 1

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            RatInterval(1, 0)

    def test_arithmetic_containment(self):
        a = RatInterval(F(1, 3), F(1, 2))
        b = RatInterval(F(-1), F(2))
        s = a - b
        assert s.lo == F(1, 3) - 2 and s.hi == F(1, 2) + 1
        p = a * b
        assert p.lo <= F(1, 3) * F(-1) and p.hi >= F(1, 2) * 2

    def test_outward_round(self):
        iv = RatInterval(F(1, 3), F(1, 3))
        r = iv.outward_round(8)
        assert r.lo <= F(1, 3) <= r.hi
        assert r.lo.denominator <= 256 and r.hi.denominator <= 256

    def test_strictly_positive(self):
        assert strictly_positive(RatInterval(F(1, 10), 1))
        assert not strictly_positive(RatInterval(0, 1))


class TestEvalExp:
    def test_zero_is_point(self):
        assert eval_exp(0, F(1, 10)) == RatInterval.point(1)

    def test_e_at_width_1e10(self):
        iv = eval_exp(1, F(1, 10 ** 10))
        assert iv.width <= F(1, 10 ** 10)
        assert iv.lo <= E_REF <= iv.hi

    def test_negative_quarter(self):
        # e^(-1/4) = 0.77880078307140486824...
        iv = eval_exp(F(-1, 4), F(1, 10 ** 12))
        assert iv.lo <= F("0.7788007830714048682") <= iv.hi

    def test_width_contract_various(self):
        for r, w in [(F(7, 2), F(1, 10 ** 6)), (F(-13, 3), F(1, 10 ** 30))]:
            iv = eval_exp(r, w)
            assert iv.width <= w


class TestEvalComponent:
    def test_exp_at_one(self, exp_pair):
        iv = eval_component(exp_pair, 0, 1, F(1, 10 ** 10))
        assert iv.lo <= E_REF <= iv.hi
        iv2 = eval_component(exp_pair, 1, 1, F(1, 10 ** 10))
        assert iv2.lo <= E2_REF <= iv2.hi

    def test_j0_at_one(self, j0):
        iv = eval_component(j0, 0, 1, F(1, 10 ** 10))
        assert iv.width <= F(1, 10 ** 10)
        assert iv.lo <= J01_REF <= iv.hi

    def test_at_zero_exact_point(self, j0):
        assert eval_component(j0, 0, 0, F(1, 100)) == RatInterval.point(1)
        assert eval_component(j0, 1, 0, F(1, 100)) == RatInterval.point(0)

    def test_deep_width(self, j0):
        iv = eval_component(j0, 0, 1, F(1, 10 ** 50))
        assert iv.width <= F(1, 10 ** 50)
        assert iv.lo <= J01_REF <= iv.hi

    def test_refinement_never_disjoint(self, j0):
        prev = None
        for k in (5, 10, 20, 40):
            iv = eval_component(j0, 0, F(1, 2), F(1, 10 ** k))
            if prev is not None:
                assert iv.intersects(prev)
            prev = iv

    def test_requires_growth(self):
        from efcert.algebra import RatFunc
        from efcert.efunction import make_system
        from efcert.errors import MissingGrowthCertificate
        sys = make_system(((RatFunc.constant(1),),), ((F(1),),))
        with pytest.raises(MissingGrowthCertificate):
            eval_component(sys, 0, 1, F(1, 100))
