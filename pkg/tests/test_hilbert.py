import itertools
import json
import random
from fractions import Fraction as F
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from gmk.decide import frame_valid
from gmk.formula import Var, box, parse
from gmk.golden import load_model
from gmk.hilbert import (
    CALCULI, DerivationError, check_derivation, instantiate, match, schema_metavars, soundness_probe,
)
from gmk.kripke import SingleModel, WeightedFrame, eval_single
from gmk.sampling import random_formula

p, q = Var("p"), Var("q")
seeds = st.integers(0, 2**32 - 1)


def _fixture(name):
    return json.loads(resources.files("gmk.fixtures").joinpath(name).read_text())


class TestInstantiate:
    def test_conjunction_elimination(self):
        got = instantiate(CALCULI["hg-tri"].schema("A3a"), {"phi": "p", "chi": "<>q"})
        assert got == parse("(p & <>q) -> p")

    def test_fs(self):
        got = instantiate(CALCULI["hkbig-f"].schema("FS1"), {"phi": "p", "chi": "q"})
        assert got == parse("<>(p -> q) -> ([]p -> <>q)")

    def test_delta_excluded_middle(self):
        assert instantiate(CALCULI["hg-tri"].schema("A7"), {"phi": "0"}) == parse("tri 0 | ~tri 0")

    def test_missing_metavariable(self):
        with pytest.raises(DerivationError):
            instantiate(CALCULI["hg-tri"].schema("A1"), {"phi": "p"})

    def test_capture_free(self):
        # substituted formulas mentioning metavariable names are left alone
        got = instantiate(parse("phi -> chi"), {"phi": "chi", "chi": "phi"})
        assert got == parse("chi -> phi")

    def test_index_two_copies(self):
        assert CALCULI["hkbig2-f"].schema("K1.2") == parse("[]2(phi -> chi) -> ([]2 phi -> []2 chi)")


class TestMatch:
    def test_round_trip(self):
        s = CALCULI["hkbig-f"].schema("K1")
        f = instantiate(s, {"phi": "p & q", "chi": "<>p"})
        assert instantiate(s, match(s, f)) == f

    def test_inconsistent_binding(self):
        assert match(parse("phi -> phi"), parse("p -> q")) is None

    def test_shape_mismatch(self):
        assert match(parse("[]phi"), parse("<>p")) is None


class TestDerivations:
    def test_modus_ponens(self):
        assert check_derivation(_fixture("deriv_mp.json")).accepted

    def test_delta_nec_on_hypothesis_is_blocked(self):
        v = check_derivation(_fixture("deriv_trinec_blocked.json"))
        assert not v.accepted and v.step == 2 and "depends on Γ" in v.reason

    def test_nec_on_theorem(self):
        v = check_derivation(_fixture("deriv_nec.json"))
        assert v.accepted and v.formulas[-1] == box(parse("(p & q) -> p"))

    def test_deduction_theorem_pair(self):
        hyp = check_derivation(_fixture("deriv_dt_hyp.json"))
        impl = check_derivation(_fixture("deriv_dt_impl.json"))
        assert hyp.accepted and impl.accepted
        assert hyp.formulas[-1] == parse("q | r")
        assert impl.formulas[-1] == parse("p -> (q | r)")

    def test_nec_missing_from_propositional_calculus(self):
        d = dict(_fixture("deriv_nec.json"), calculus="hg-tri")
        v = check_derivation(d)
        assert not v.accepted and v.step == 2

    def test_wrong_axiom_instance(self):
        v = check_derivation([{"formula": "p -> (p & q)", "by": "axiom:A3a"}], calc="hg-tri")
        assert not v.accepted and v.step == 1

    def test_unknown_axiom(self):
        v = check_derivation([{"formula": "p", "by": "axiom:Cr2"}], calc="hkbig-f")
        assert not v.accepted and "no axiom" in v.reason

    def test_mp_shape(self):
        steps = [{"formula": "p", "by": "hyp"}, {"formula": "q", "by": "hyp"}, {"by": "mp", "from": [1, 2]}]
        v = check_derivation(steps, ["p", "q"], "hg-tri")
        assert not v.accepted and v.step == 3

    def test_forward_reference(self):
        steps = [{"formula": "p", "by": "hyp"}, {"by": "mp", "from": [1, 3]}]
        v = check_derivation(steps, ["p"], "hg-tri")
        assert not v.accepted and v.step == 2

    def test_hypothesis_not_in_gamma(self):
        v = check_derivation([{"formula": "p", "by": "hyp"}], [], "hg-tri")
        assert not v.accepted

    def test_dependency_propagates_through_mp(self):
        steps = [{"formula": "p", "by": "hyp"}, {"by": "axiom:A2a", "subst": {"phi": "p", "chi": "q"}},
                 {"by": "mp", "from": [1, 2]}, {"by": "nec", "from": [3]}]
        v = check_derivation(steps, ["p"], "hkbig-f")
        assert not v.accepted and v.step == 4
        assert v.depends == [True, False, True]

    def test_nec_dia(self):
        steps = [{"by": "axiom:A3a", "subst": {"phi": "p", "chi": "q"}}, {"by": "nec-dia", "from": [1]}]
        v = check_derivation(steps, [], "hkbig-f")
        assert v.accepted and v.formulas[-1] == parse("<>(p & q) -> <>p")

    def test_index_two_nec(self):
        steps = [{"by": "axiom:A3a", "subst": {"phi": "p", "chi": "q"}}, {"by": "nec", "from": [1], "index": 2}]
        assert check_derivation(steps, [], "hkbig2-f").formulas[-1] == parse("[]2((p & q) -> p)")
        assert not check_derivation(steps, [], "hkbig-f").accepted

    def test_index_one_is_unindexed(self):
        steps = [{"formula": "[]1(p -> q) -> ([]1 p -> []1 q)", "by": "axiom:K1"}]
        assert check_derivation(steps, [], "hkbig2-f").accepted

    def test_json_verdict(self):
        d = check_derivation(_fixture("deriv_trinec_blocked.json")).to_json()
        assert d["status"] == "rejected" and d["step"] == 2 and d["depends_on_gamma"] == [True]

    def test_empty(self):
        assert not check_derivation([], [], "hg-tri").accepted


class TestSoundness:
    def test_fuzzy_axioms_hold(self):
        r = soundness_probe("hkbig-f", trials=15, n_models=40, seed=3)
        assert all(v["failures"] == 0 for v in r.values()), {k: v["example"] for k, v in r.items() if v["failures"]}

    def test_crisp_axioms_hold_on_crisp_models(self):
        r = soundness_probe("hkbig-c", trials=15, n_models=40, seed=4)
        assert all(v["failures"] == 0 for v in r.values())

    def test_crisp_axioms_fail_on_fuzzy_models(self):
        r = soundness_probe("hkbig-c", trials=15, n_models=40, seed=5, crisp=False, schemas=["Cr2", "SDD"])
        assert r["Cr2"]["failures"] > 0 and r["SDD"]["failures"] > 0

    def test_propositional_axioms(self):
        r = soundness_probe("hg-tri", trials=30, n_models=30, seed=6)
        assert all(v["failures"] == 0 for v in r.values())

    def test_index_two_calculus(self):
        r = soundness_probe("hkbig2-f", trials=10, n_models=30, seed=7)
        assert all(v["failures"] == 0 for v in r.values())

    def test_cr_on_a_fuzzy_edge(self):
        fr = WeightedFrame("wv", {("w", "v"): F(1, 2)})
        m = SingleModel(fr, {p: {"v": F(1, 2)}})
        assert eval_single(m, parse("tri []p -> []tri p"), "w") == 0

    def test_sdd_on_fig3(self):
        m = load_model("fig3.json")
        assert eval_single(m, parse("~tri(<>p -> <>q) -> <>~tri(p -> q)"), "w0") == F(1, 2)

    def test_sdd_is_valid_on_crisp_frames(self):
        # the ∼△◇ axiom is redundant over crisp frames: checked semantically on fixtures
        fr = WeightedFrame("abc", {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1})
        assert frame_valid(fr, parse("~tri(<>p -> <>q) -> <>~tri(p -> q)")).valid


# -- properties ----------------------------------------------------------------

@pytest.mark.parametrize("name", ["deriv_dt_hyp.json", "deriv_dt_impl.json", "deriv_mp.json"])
def test_acceptance_survives_reordering(name):
    d = _fixture(name)
    steps = d["steps"]
    n = len(steps)
    tried = 0
    for order in itertools.permutations(range(n)):
        where = {old: new for new, old in enumerate(order, 1)}
        if any(where[i - 1] > where[old] for old in order for i in steps[old].get("from", [])):
            continue
        moved = []
        for old in order:
            step = dict(steps[old])
            if "from" in step:
                step["from"] = [where[i - 1] for i in step["from"]]
            moved.append(step)
        tried += 1
        v = check_derivation(dict(d, steps=moved))
        assert v.accepted and set(v.formulas) == set(check_derivation(d).formulas)
    assert tried > 1


@given(seeds)
def test_axiom_instances_match_their_schema(seed):
    rng = random.Random(seed)
    calc = CALCULI["hkbig-c"]
    name = rng.choice(sorted(calc.schemas))
    s = calc.schema(name)
    inst = instantiate(s, {v: random_formula(rng, 2) for v in schema_metavars(s)})
    assert check_derivation([{"formula": inst, "by": f"axiom:{name}"}], [], calc).accepted
