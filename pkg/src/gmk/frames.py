"""Frame properties, their defining formulas, and constructive countermodels.

Each structural check has a formula that defines it on finite frames.  The
witness builders return a concrete model refuting that formula when the
property fails; ``defining_formula_check`` decides the formula with
``frame_valid`` so both sides can be compared.
"""
from __future__ import annotations

from typing import Callable, Dict, Optional, Tuple

from .decide.core import ConsistencyError, frame_valid, strong_valid_direct
from .formula import (
    ONE as C_ONE, Var, box, coimpl, dia, disj, iff, impl, lemmon_scott, neg, parse, sim, tri,
)
from .gvalue import ONE, ZERO, g_meet
from .kripke import (
    SingleModel, TwinModel, WeightedFrame, compose, eval_single, eval_twin, identity,
    is_crisp_relation, power,
)

P = Var("p")

CRISP_PLUS = impl(tri(box(P)), box(tri(P)))
CRISP_MINUS = impl(dia(sim(sim(P))), sim(sim(dia(P))))
MONOREL = iff(box(P), neg(dia(neg(P))))
TAU = parse("~tri <>1 & ~[]0")
FINBRANCH = (sim(sim(box(disj(P, sim(P))))), coimpl(C_ONE, dia(neg(disj(P, sim(P))))))


def _rel(fr: WeightedFrame, which: str):
    if which not in ("plus", "minus"):
        raise ValueError(f"unknown relation {which!r}")
    return fr.relation(which)


def is_crisp(fr: WeightedFrame, which: str = "plus") -> bool:
    return is_crisp_relation(_rel(fr, which))


def _fuzzy_edge(fr, which):
    for (u, v), r in sorted(_rel(fr, which).items(), key=repr):
        if 0 < r < 1:
            return u, v, r
    return None


def crispness_witness(fr: WeightedFrame, which: str = "plus") -> Optional[Tuple[TwinModel, object]]:
    """Twin model refuting the crispness formula for R+ (or R-), or None.

    plus: p = (x, 0) at the target of a fuzzy edge of weight x, (1, 0) elsewhere;
    then e1(△□p) = 1 and e1(□△p) = 0 at the source.
    minus: p = (1, y) at the target of a fuzzy R- edge of weight y, (1, 1)
    elsewhere; then e2(◇∼∼p) = 0 and e2(∼∼◇p) = 1 at the source.
    """
    edge = _fuzzy_edge(fr, which)
    if edge is None:
        return None
    u, v, r = edge
    if which == "plus":
        v1 = {P: {w: (r if w == v else ONE) for w in fr.worlds}}
        v2 = {P: {w: ZERO for w in fr.worlds}}
    else:
        v1 = {P: {w: ONE for w in fr.worlds}}
        v2 = {P: {w: (r if w == v else ONE) for w in fr.worlds}}
    m = TwinModel(fr, v1, v2)
    target = CRISP_PLUS if which == "plus" else CRISP_MINUS
    if eval_twin(m, target, u) == (ONE, ZERO):
        raise ConsistencyError("crispness witness does not refute")
    return m, u


def relations_equal(fr: WeightedFrame) -> bool:
    return fr.is_mono or fr.rel_plus == fr.rel_minus


def monorel_witness(fr: WeightedFrame) -> Optional[Tuple[TwinModel, object]]:
    """Twin model refuting □p ↔ ¬◇¬p when R+ ≠ R-, or None.

    With x = wR+w', y = wR-w' and x ≠ y: p = (min(x,y), 0) at w' and (1, 0)
    elsewhere.  The side with the larger weight drops below 1 on e1.
    """
    if relations_equal(fr):
        return None
    pairs = sorted(set(fr.rel_plus) | set(fr.rel_minus), key=lambda e: (fr.worlds.index(e[0]), fr.worlds.index(e[1])))
    for u, v in pairs:
        x, y = fr.weight(u, v, "plus"), fr.weight(u, v, "minus")
        if x != y:
            break
    low = min(x, y)
    m = TwinModel(fr, {P: {w: (low if w == v else ONE) for w in fr.worlds}}, {P: {w: ZERO for w in fr.worlds}})
    if eval_twin(m, MONOREL, u) == (ONE, ZERO):
        raise ConsistencyError("R+/R- witness does not refute")
    return m, u


# -- Lemmon-Scott ---------------------------------------------------------------

class _Powers:
    """Cached powers R^n of one relation."""

    def __init__(self, fr: WeightedFrame):
        self.fr = fr
        self._cache: Dict[int, dict] = {}

    def __call__(self, n: int) -> dict:
        got = self._cache.get(n)
        if got is None:
            if n == 0:
                got = identity(self.fr.worlds)
            else:
                got = compose(self.fr.rel_plus, self(n - 1), self.fr.worlds)
            self._cache[n] = got
        return got


_POWERS: Dict[WeightedFrame, _Powers] = {}


def _powers(fr):
    got = _POWERS.get(fr)
    if got is None:
        if len(_POWERS) > 256:
            _POWERS.clear()
        got = _POWERS[fr] = _Powers(fr)
    return got


def _mono(fr):
    if not fr.is_mono:
        raise ValueError("Lemmon-Scott checks take a mono-relational frame")


def fls_counterexample(fr: WeightedFrame, x, h: int, i: int, j: int, k: int):
    """First (y, z) breaking the fuzzy Lemmon-Scott condition at x, or None."""
    _mono(fr)
    fr.check_world(x)
    pw = _powers(fr)
    Rh, Ri, Rj, Rk = pw(h), pw(i), pw(j), pw(k)
    for y in fr.worlds:
        a = Rh.get((x, y), ZERO)
        if a == 0:
            continue
        for z in fr.worlds:
            left = g_meet(a, Rj.get((x, z), ZERO))
            if left == 0:
                continue
            right = max((g_meet(Ri.get((y, w), ZERO), Rk.get((z, w), ZERO)) for w in fr.worlds), default=ZERO)
            if left > right:
                return y, z
    return None


def fls_condition(fr: WeightedFrame, x, h: int, i: int, j: int, k: int) -> bool:
    return fls_counterexample(fr, x, h, i, j, k) is None


def fls_refuting_valuation(fr: WeightedFrame, x, y, z, h: int, i: int, j: int, k: int) -> SingleModel:
    """p takes yR^i w on R^i(y) and 0 elsewhere; refutes ◇^h□^i p → □^j◇^k p at x."""
    _mono(fr)
    pw = _powers(fr)
    Rh, Ri, Rj, Rk = pw(h), pw(i), pw(j), pw(k)
    left = g_meet(Rh.get((x, y), ZERO), Rj.get((x, z), ZERO))
    right = max((g_meet(Ri.get((y, w), ZERO), Rk.get((z, w), ZERO)) for w in fr.worlds), default=ZERO)
    if not left > right:
        raise ValueError("the Lemmon-Scott condition holds at (x, y, z); no refutation exists")
    m = SingleModel(fr, {P: {w: Ri.get((y, w), ZERO) for w in fr.worlds}})
    if not eval_single(m, lemmon_scott(h, i, j, k), x) < ONE:
        raise ConsistencyError("Lemmon-Scott valuation does not refute")
    return m


def fls_frame_check(fr: WeightedFrame, x, h: int, i: int, j: int, k: int) -> bool:
    """The structural condition, cross-checked against frame validity."""
    structural = fls_condition(fr, x, h, i, j, k)
    semantic = frame_valid(fr, lemmon_scott(h, i, j, k), x, semantics="single").valid
    if structural != semantic:
        raise ConsistencyError(f"Lemmon-Scott ({h},{i},{j},{k}) at {x}: condition {structural}, validity {semantic}")
    return structural


# -- τ, counterparts, finite branching ---------------------------------------

def tau_seriality_check(fr: WeightedFrame) -> set:
    """Worlds whose outgoing R+ weights have supremum strictly between 0 and 1."""
    out = set()
    for w in fr.worlds:
        s = max((r for _, r in fr.succ_plus[w]), default=ZERO)
        if 0 < s < 1:
            out.add(w)
    return out


def _reflexive(fr):
    return all(fr.weight(w, w) == 1 for w in fr.worlds)


def _serial(fr):
    return all(fr.succ_plus[w] for w in fr.worlds)


def _symmetric(fr):
    return all(fr.weight(v, u) == r for (u, v), r in fr.rel_plus.items())


def _transitive(fr):
    two = power(fr.rel_plus, 2, fr.worlds)
    return all(r <= fr.weight(u, v) for (u, v), r in two.items())


def _crisp(fr):
    return is_crisp_relation(fr.rel_plus)


def confluent(h: int, i: int, j: int, k: int) -> Callable[[WeightedFrame], bool]:
    def pred(fr):
        return all(fls_condition(fr, x, h, i, j, k) for x in fr.worlds)
    pred.__name__ = f"confluent({h},{i},{j},{k})"
    return pred


KLASSES = {
    "reflexive": _reflexive,
    "serial": _serial,
    "symmetric": _symmetric,
    "transitive": _transitive,
    "crisp": _crisp,
    "confluent": confluent(1, 1, 1, 1),
}


def counterpart_membership(fr: WeightedFrame, klass, mode: str = "plusminus") -> bool:
    """Whether ⟨W,R+⟩ (plus), ⟨W,R-⟩ (minus) or both (plusminus) fall in klass."""
    pred = KLASSES[klass] if isinstance(klass, str) else klass
    bi = fr.as_bi()
    plus = WeightedFrame(bi.worlds, bi.rel_plus)
    minus = WeightedFrame(bi.worlds, bi.rel_minus)
    if mode == "plus":
        return pred(plus)
    if mode == "minus":
        return pred(minus)
    if mode == "plusminus":
        return pred(plus) and pred(minus)
    raise ValueError(f"unknown mode {mode!r}")


def finitely_branching_axioms(fr: WeightedFrame) -> bool:
    """Strong validity of ∼∼□(p∨∼p) and 1⤙◇¬(p∨∼p), decided on the direct twin grid."""
    return all(strong_valid_direct(fr, f).valid for f in FINBRANCH)


# -- defining formulas -------------------------------------------------------

def structural_check(fr: WeightedFrame, prop: str):
    if prop == "crisp+":
        return is_crisp(fr, "plus")
    if prop == "crisp-":
        return is_crisp(fr, "minus")
    if prop == "equal":
        return relations_equal(fr)
    if prop == "tau":
        return tau_seriality_check(fr)
    if prop == "finbranch":
        return True
    raise ValueError(f"unknown property {prop!r}")


def defining_formula_check(fr: WeightedFrame, prop: str):
    """The same property read off frame validity of its defining formula."""
    if prop == "crisp+":
        return frame_valid(fr, CRISP_PLUS, semantics="twin").valid
    if prop == "crisp-":
        return frame_valid(fr, CRISP_MINUS, semantics="twin").valid
    if prop == "equal":
        return frame_valid(fr, MONOREL, semantics="twin").valid
    if prop == "tau":
        return {w for w in fr.worlds if frame_valid(fr, TAU, w, semantics="single").valid}
    if prop == "finbranch":
        return finitely_branching_axioms(fr)
    raise ValueError(f"unknown property {prop!r}")
