import random

import pytest
from hypothesis import given, strategies as st

from gmk.formula import (
    AND, BOX, COIMP, DIA, IMP, INFO, L_BOXDIA, L_BOXDIA2, L_NEG_BOXDIA, L_NEG_INFO, L_TRI, ONE,
    OVERLINE, PLAIN, SIM, STANDARD, TRI, ZERO, Binary, Const, FormulaSyntaxError, Modal, Unary, Var,
    box, children, coimpl, conj, dia, dias, boxes, impl, language_of, modal_depth, neg, parse,
    print_formula, size, subformulas01, sublanguage, subformulas, to_text, to_unicode, tri, var,
)
from gmk.sampling import random_formula

p, q, s, d = Var("p"), Var("q"), Var("s"), Var("d")


class TestParse:
    def test_fig3_antecedent(self):
        assert parse("~tri(<>p -> <>q)") == Unary(SIM, Unary(TRI, Binary(IMP, dia(p), dia(q))))

    def test_atom(self):
        assert parse("p") == Var("p")

    def test_informational_pair(self):
        want = Binary(AND, Modal(BOX, INFO, PLAIN, None, s), Modal(DIA, INFO, PLAIN, None, d))
        assert parse("[#]s & <#>d") == want

    def test_all_modal_spellings(self):
        cases = {
            "[]p": (BOX, STANDARD, PLAIN, None), "<>p": (DIA, STANDARD, PLAIN, None),
            "[^]p": (BOX, STANDARD, OVERLINE, None), "<^>p": (DIA, STANDARD, OVERLINE, None),
            "[#]p": (BOX, INFO, PLAIN, None), "<#>p": (DIA, INFO, PLAIN, None),
            "[#^]p": (BOX, INFO, OVERLINE, None), "<#^>p": (DIA, INFO, OVERLINE, None),
            "[]1 p": (BOX, STANDARD, PLAIN, 1), "[]2 p": (BOX, STANDARD, PLAIN, 2),
            "<>1 p": (DIA, STANDARD, PLAIN, 1), "<>2 p": (DIA, STANDARD, PLAIN, 2),
        }
        for text, desc in cases.items():
            f = parse(text)
            assert f.descriptor == desc and f.child == p, text

    def test_unicode_aliases(self):
        assert parse("□p → ◇q") == impl(box(p), dia(q))
        assert parse("∼△p ⤙ ¬q") == coimpl(Unary(SIM, tri(p)), neg(q))
        assert parse("■p ∧ ◆q") == conj(Modal(BOX, INFO, PLAIN, None, p), Modal(DIA, INFO, PLAIN, None, q))

    def test_constants(self):
        assert parse("0") == ZERO and parse("1") == ONE and parse("B") == Const("B")

    def test_starred_variable(self):
        f = parse("p_star")
        assert f == Var("p", starred=True) and to_text(f) == "p_star"

    def test_precedence(self):
        assert parse("p & q | r") == Binary("|", conj(p, q), Var("r"))
        assert parse("p -> q -> r") == impl(p, impl(q, Var("r")))
        assert parse("p -< q -< r") == coimpl(coimpl(p, q), Var("r"))
        assert parse("~p & q") == conj(Unary(SIM, p), q)
        assert parse("[]p & q") == conj(box(p), q)

    def test_mixed_arrows_need_parentheses(self):
        with pytest.raises(FormulaSyntaxError):
            parse("p -> q -< r")
        assert parse("p -> (q -< r)") == impl(p, coimpl(q, Var("r")))

    @pytest.mark.parametrize("bad", ["", "p &", "(p", "p q", "p $ q", "[]", "1p"])
    def test_syntax_errors(self, bad):
        with pytest.raises(FormulaSyntaxError):
            parse(bad)

    def test_error_carries_position(self):
        with pytest.raises(FormulaSyntaxError) as e:
            parse("p & & q")
        assert e.value.pos == 4


class TestPrint:
    def test_implication(self):
        assert print_formula(impl(p, p)) == "p -> p"

    def test_overline_box(self):
        assert print_formula(Modal(BOX, STANDARD, OVERLINE, None, p)) == "[^]p"

    def test_coimplication_with_constant(self):
        assert print_formula(coimpl(ONE, p)) == "1 -< p"

    def test_unicode_rendering(self):
        assert to_unicode(parse("<>~tri(p -> q)")) == "◇∼△(p→q)"
        assert to_unicode(parse("[]2 p_star")) == "□₂p*"


class TestStructure:
    def test_subformulas01_atom(self):
        assert subformulas01(p) == {ZERO, ONE, p}

    def test_subformulas01_conjunction(self):
        f = conj(dia(p), q)
        assert subformulas01(f) == {ZERO, ONE, p, q, dia(p), f}

    def test_subformulas01_nested(self):
        f = tri(box(p))
        assert subformulas01(f) == {ZERO, ONE, p, box(p), f}

    def test_languages_and_depth(self):
        assert language_of(neg(box(p))) == L_NEG_BOXDIA and modal_depth(neg(box(p))) == 1
        assert language_of(box(p, 2)) == L_BOXDIA2 and modal_depth(box(p, 2)) == 1
        assert modal_depth(dias(2, box(p))) == 3

    def test_language_tags(self):
        assert language_of(impl(p, tri(q))) == L_TRI
        assert language_of(box(p)) == L_BOXDIA
        assert language_of(Modal(BOX, INFO, PLAIN, None, p)) == L_NEG_INFO
        assert language_of(conj(box(p), Const("B"))) == L_BOXDIA + "+B"
        assert language_of(conj(box(p, 2), Modal(BOX, INFO, PLAIN, None, p))) is None

    def test_size(self):
        assert size(p) == 1
        assert size(parse("~tri(<>p -> <>q)")) == 7

    def test_indexed_modality_must_be_standard_plain(self):
        with pytest.raises(ValueError):
            Modal(BOX, INFO, PLAIN, 1, p)
        with pytest.raises(ValueError):
            Modal(BOX, STANDARD, OVERLINE, 2, p)

    def test_bad_variable_names(self):
        for bad in ("", "1x", "p_star", "neg", "tri"):
            with pytest.raises(ValueError):
                Var(bad)


# -- properties ----------------------------------------------------------------

MODES = ("standard", "info", "bar", "bar-info", "all", "none")


@st.composite
def formulas(draw, modal=None, neg=True, indexed=False):
    seed = draw(st.integers(0, 2**32 - 1))
    depth = draw(st.integers(0, 4))
    mode = modal or draw(st.sampled_from(MODES))
    return random_formula(random.Random(seed), depth, ("p", "q", "r"), neg=neg, modal=mode,
                          indexed=indexed)


def _brute_size(f):
    return 1 + sum(_brute_size(c) for c in children(f))


def _brute_depth(f):
    kids = [_brute_depth(c) for c in children(f)]
    return (1 if isinstance(f, Modal) else 0) + max(kids, default=0)


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse(print_formula(f)) == f


@given(formulas(modal="standard", neg=False, indexed=True))
def test_round_trip_with_indices(f):
    assert parse(print_formula(f)) == f


@given(formulas())
def test_size_and_depth_match_recursion(f):
    assert size(f) == _brute_size(f)
    assert modal_depth(f) == _brute_depth(f)


@given(formulas())
def test_language_monotone_under_subformula(f):
    lang = language_of(f)
    for g in subformulas(f):
        assert sublanguage(language_of(g), lang)


@given(formulas())
def test_subformulas01_closed(f):
    sf = subformulas01(f)
    assert ZERO in sf and ONE in sf and f in sf
    for g in sf:
        assert all(c in sf for c in children(g))


def test_starred_helper():
    assert var("p", True) == Var("p", True) != Var("p")


def test_box_dia_helpers():
    assert boxes(2, p) == box(box(p)) and dias(0, p) == p
    assert parse("[][]p") == boxes(2, p)
    assert Binary(COIMP, p, q) == coimpl(p, q)
