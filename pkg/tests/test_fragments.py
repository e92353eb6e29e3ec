import random
from fractions import Fraction as F

import pytest

from gmk.formula import BOX, DIA, Modal, Var, iter_nodes, modal_depth, parse, to_text
from gmk.fragments import fragment_closure
from gmk.golden import load_model
from gmk.gvalue import ONE, ZERO, TwinValue, twin_apply
from gmk.kripke import TwinModel, WeightedFrame, eval_twin

P = Var("p")
T = TwinValue


def _prop_closure(values):
    """Closure of a set of twin values under the propositional connectives."""
    out = set(values)
    while True:
        new = set(out)
        for a in out:
            new.update(twin_apply(op, a) for op in ("~", "neg", "tri"))
            for b in out:
                new.update(twin_apply(op, a, b) for op in ("&", "|", "->", "-<"))
        if new == out:
            return out
        out = new


# value sets of □χ and ◇ψ at w0 claimed for the one-variable fragments
X = [T(ZERO, ONE), T(F(3, 5), F(3, 4)), T(F(1, 4), F(3, 5)), T(F(3, 4), F(3, 5)), T(F(3, 5), F(1, 4)),
     T(ONE, ZERO)]
Y = [T(ZERO, ONE), T(F(4, 5), F(1, 2)), T(F(1, 2), F(2, 5)), T(F(1, 2), F(4, 5)), T(F(2, 5), F(1, 2)),
     T(ONE, ZERO)]


@pytest.fixture(scope="module")
def fig6():
    return load_model("fig6.json")


@pytest.fixture(scope="module")
def closures(fig6):
    return {shape: fragment_closure(fig6, P, (shape,), max_modal_depth=3) for shape in (BOX, DIA)}


def test_propositional_closure_of_a_point():
    m = TwinModel(WeightedFrame(["t"]), {P: {"t": F(1, 3)}}, {P: {"t": F(2, 3)}})
    vals = fragment_closure(m, P, (), max_modal_depth=0).values_at("t")
    assert vals == _prop_closure({T(F(1, 3), F(2, 3)), T(ZERO, ONE), T(ONE, ZERO)})


def test_closure_contains_the_modal_atoms(fig6, closures):
    assert T(F(3, 5), F(3, 4)) in closures[BOX].values_at("w0")
    assert T(F(4, 5), F(1, 2)) in closures[DIA].values_at("w0")


def test_closure_reaches_a_fixpoint(fig6, closures):
    deeper = fragment_closure(fig6, P, (BOX,), max_modal_depth=None)
    assert set(deeper.vectors) == set(closures[BOX].vectors)


def test_witnesses_replay(fig6, closures):
    rng = random.Random(0)
    for shape, cl in closures.items():
        other = DIA if shape == BOX else BOX
        for vec in rng.sample(sorted(cl.vectors, key=repr), 60):
            f = cl.vectors[vec]
            assert not any(isinstance(g, Modal) and g.shape == other for g in iter_nodes(f))
            assert modal_depth(f) <= 3
            assert tuple(eval_twin(fig6, f, w) for w in cl.worlds) == vec


def test_box_fragment_misses_the_diamond_value(closures):
    assert closures[BOX].witness("w0", T(F(4, 5), F(1, 2))) is None


def test_diamond_fragment_hits_the_box_value(fig6, closures):
    # the ◇-fragment does express □p's value at w0
    f = closures[DIA].witness("w0", T(F(3, 5), F(3, 4)))
    assert f is not None and eval_twin(fig6, f, "w0") == (F(3, 5), F(3, 4))
    g = parse("neg <>(neg p & p) & (<>(neg p -< p) -> <>(neg p & p & (neg p -< p)))")
    assert eval_twin(fig6, g, "w0") == (F(3, 5), F(3, 4))


def test_diamond_fragment_hits_it_without_coimplication(fig6):
    cl = fragment_closure(fig6, P, (DIA,), max_modal_depth=2, binary=("&", "|", "->"))
    f = cl.witness("w0", T(F(3, 5), F(3, 4)))
    assert f is not None and "-<" not in to_text(f)


def test_mixed_leaf_values(fig6):
    # ¬p∧p is ¬p at w1 and w3 but p at w2, so ◇ of it leaves the set Y
    assert eval_twin(fig6, parse("<>(neg p & p)"), "w0") == (F(1, 2), F(3, 5))
    assert T(F(1, 2), F(3, 5)) not in _prop_closure(Y)


def test_box_values_stay_in_x_closure(closures):
    Xc = _prop_closure(X)
    outside = closures[BOX].values_at("w0") - Xc
    assert not outside, sorted(outside)[:4]


def test_diamond_values_stay_in_y_closure(closures):
    Yc = _prop_closure(Y)
    outside = closures[DIA].values_at("w0") - Yc
    assert not outside, sorted(outside)[:4]
