from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from _util import piecewise

from gmk.gvalue import (
    ONE, ZERO, TwinValue, fmt, g_coimpl, g_delta, g_impl, g_join, g_meet, g_neg, inf_of, sup_of,
    twin_apply, value,
)

rationals = st.fractions(min_value=0, max_value=1, max_denominator=24)
twins = st.builds(TwinValue, rationals, rationals)

BINARY = {"->": g_impl, "-<": g_coimpl, "&": g_meet, "|": g_join}
UNARY = {"~": g_neg, "tri": g_delta}


class TestCaseTables:
    def test_implication_drops_to_consequent(self):
        assert g_impl(F(1, 3), F(1, 4)) == F(1, 4)
        assert g_impl(F(1, 4), F(1, 3)) == 1

    def test_delta_and_negation(self):
        assert g_delta(F(1, 4)) == 0 and g_delta(ONE) == 1
        assert g_neg(ZERO) == 1 and g_neg(F(1, 9)) == 0

    def test_coimplication(self):
        assert g_coimpl(ONE, F(2, 3)) == 1
        assert g_coimpl(F(1, 2), F(1, 2)) == 0

    def test_fig3_inner_value(self):
        # ∼△(p→q) with p = 1/3, q = 1/4
        assert g_neg(g_delta(g_impl(F(1, 3), F(1, 4)))) == 1

    def test_lattice(self):
        assert g_meet(F(1, 2), F(1, 3)) == F(1, 3) and g_join(F(1, 2), F(1, 3)) == F(1, 2)


class TestTwin:
    def test_demorgan_swaps(self):
        assert twin_apply("neg", TwinValue(F(1, 3), F(3, 4))) == (F(3, 4), F(1, 3))

    def test_classical_implication(self):
        t = TwinValue(ONE, ZERO)
        assert twin_apply("->", t, t) == t

    def test_double_strong_negation(self):
        x = TwinValue(ONE, F(2, 3))
        assert twin_apply("~", twin_apply("~", x)) == (ONE, ZERO)

    def test_componentwise_tables(self):
        a, b = TwinValue(F(1, 2), F(1, 3)), TwinValue(F(1, 4), F(2, 3))
        assert twin_apply("&", a, b) == (F(1, 4), F(2, 3))
        assert twin_apply("|", a, b) == (F(1, 2), F(1, 3))
        assert twin_apply("->", a, b) == (F(1, 4), F(2, 3))
        assert twin_apply("-<", a, b) == (F(1, 2), F(1, 3))
        assert twin_apply("tri", a) == (ZERO, ONE)

    def test_unknown_connective(self):
        with pytest.raises(ValueError):
            twin_apply("xor", TwinValue(ONE, ZERO), TwinValue(ONE, ZERO))


class TestBounds:
    def test_inf_sup(self):
        assert inf_of([F(1, 2), ONE]) == F(1, 2)
        assert sup_of([g_meet(F(1, 2), ONE)]) == F(1, 2)

    def test_empty_conventions(self):
        assert sup_of([]) == 0 and inf_of([]) == 1


class TestSerialisation:
    def test_value_parsing(self):
        assert value("2/3") == F(2, 3) and value("1") == 1 and value(0) == 0
        assert value("4/8") == F(1, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            value("3/2")
        with pytest.raises(ValueError):
            value("-1/2")

    def test_floats_rejected(self):
        with pytest.raises((TypeError, ValueError)):
            value(0.5)

    def test_fmt(self):
        assert fmt(F(2, 4)) == "1/2" and fmt(ONE) == "1" and fmt(ZERO) == "0"


# -- properties ----------------------------------------------------------------

@given(rationals, rationals)
def test_output_is_argument_or_bound(a, b):
    for op in BINARY.values():
        assert op(a, b) in {a, b, ZERO, ONE}
    for op in UNARY.values():
        assert op(a) in {a, ZERO, ONE}


@given(rationals, rationals, st.lists(st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
                                      min_size=1, max_size=3, unique=True))
def test_operations_commute_with_rescaling(a, b, knots):
    g = piecewise(knots)
    for op in BINARY.values():
        assert g(op(a, b)) == op(g(a), g(b))
    for op in UNARY.values():
        assert g(op(a)) == op(g(a))


@given(rationals, rationals)
def test_residuation(a, b):
    assert g_meet(a, g_impl(a, b)) <= b
    assert a <= g_impl(b, g_meet(a, b))
    # dual residuation for coimplication
    assert g_coimpl(a, b) <= g_join(a, b) and a <= g_join(b, g_coimpl(a, b))


@given(rationals, rationals)
def test_delta_and_coimplication_interdefinable(a, b):
    assert g_delta(a) == g_coimpl(ONE, g_coimpl(ONE, a))
    assert g_coimpl(a, b) == g_meet(a, g_neg(g_delta(g_impl(a, b))))


@given(twins, twins)
def test_twin_negation_is_involutive_and_dualises(a, b):
    assert twin_apply("neg", twin_apply("neg", a)) == a
    assert twin_apply("neg", twin_apply("&", a, b)) == twin_apply("|", twin_apply("neg", a), twin_apply("neg", b))


@given(twins, twins)
def test_twin_coimplication_definable_with_negation(a, b):
    # φ⤙χ and ¬(¬χ→¬φ) agree
    via_neg = twin_apply("neg", twin_apply("->", twin_apply("neg", b), twin_apply("neg", a)))
    assert twin_apply("-<", a, b) == via_neg
    # △φ and ¬∼∼¬φ agree
    nn = twin_apply("~", twin_apply("~", twin_apply("neg", a)))
    assert twin_apply("tri", a) == twin_apply("neg", nn)
