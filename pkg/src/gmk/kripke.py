"""Weighted frames, models and the evaluators.

Three evaluators live here: ``eval_single`` (one valuation, modalities
□ ◇ and the indexed □₁ ◇₁ □₂ ◇₂), ``eval_twin`` (truth and falsity
supports, all eight modalities) and ``eval_fmodel`` (modal values rounded
onto per-world menus).  The evaluators only compare values with ``<=`` and
``<``, so they also run on the symbolic atoms of the order-type search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence

from .formula import (
    BOX, DIA, INFO, NEG, OVERLINE, PLAIN, STANDARD,
    Binary, Const, Modal, Unary, Var, as_formula, iter_nodes, parse, to_text,
)
from .gvalue import (
    ONE, ZERO, TwinValue, fmt, g_coimpl, g_delta, g_impl, g_join, g_meet,
    g_neg, single_apply, twin_apply, value,
)


class ModelError(ValueError):
    pass


def _clean_rel(rel, worlds):
    out = {}
    ws = set(worlds)
    for (u, v), r in dict(rel).items():
        if u not in ws or v not in ws:
            raise ModelError(f"edge {u}->{v} mentions an unknown world")
        r = value(r)
        if r > 0:
            out[(u, v)] = r
    return out


class WeightedFrame:
    """Finite worlds with one or two [0,1]-weighted relations.

    Relations are dicts (u, v) -> Fraction holding positive weights only;
    missing pairs weigh 0.  ``rel_minus is None`` means mono-relational.
    """

    def __init__(self, worlds: Sequence, rel_plus: Mapping = (), rel_minus: Optional[Mapping] = None):
        self.worlds = tuple(worlds)
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world ids")
        self.rel_plus = _clean_rel(rel_plus, self.worlds)
        self.rel_minus = None if rel_minus is None else _clean_rel(rel_minus, self.worlds)
        self.succ_plus = self._succ(self.rel_plus)
        self.succ_minus = self.succ_plus if self.rel_minus is None else self._succ(self.rel_minus)
        self._key = (self.worlds, tuple(sorted(self.rel_plus.items(), key=repr)),
                     None if self.rel_minus is None else tuple(sorted(self.rel_minus.items(), key=repr)))

    def _succ(self, rel):
        s = {w: [] for w in self.worlds}
        for (u, v), r in rel.items():
            s[u].append((v, r))
        order = {w: i for i, w in enumerate(self.worlds)}
        for w in s:
            s[w].sort(key=lambda e: order[e[0]])
        return s

    @property
    def is_mono(self) -> bool:
        return self.rel_minus is None

    def weight(self, u, v, which="plus") -> Fraction:
        rel = self.rel_plus if which == "plus" or self.rel_minus is None else self.rel_minus
        return rel.get((u, v), ZERO)

    def relation(self, which="plus") -> dict:
        if which == "plus" or self.rel_minus is None:
            return self.rel_plus
        return self.rel_minus

    def weights(self) -> set:
        out = set(self.rel_plus.values())
        if self.rel_minus is not None:
            out |= set(self.rel_minus.values())
        return out

    def as_bi(self) -> "WeightedFrame":
        """Same frame with R- spelled out (R- = R+ when mono)."""
        if self.rel_minus is not None:
            return self
        return WeightedFrame(self.worlds, self.rel_plus, dict(self.rel_plus))

    def check_world(self, w):
        if w not in self.succ_plus:
            raise ModelError(f"unknown world {w!r}")

    def __eq__(self, other):
        return isinstance(other, WeightedFrame) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"WeightedFrame({self.worlds!r}, {self.rel_plus!r}, {self.rel_minus!r})"


def is_crisp_relation(rel: Mapping) -> bool:
    return all(r == 1 for r in rel.values() if r > 0)


@dataclass
class SingleModel:
    frame: WeightedFrame
    val: Dict[Var, Dict[object, Fraction]] = field(default_factory=dict)
    default: Fraction = ZERO

    def get(self, p: Var, w):
        return self.val.get(p, {}).get(w, self.default)


@dataclass
class TwinModel:
    frame: WeightedFrame
    val1: Dict[Var, Dict[object, Fraction]] = field(default_factory=dict)
    val2: Dict[Var, Dict[object, Fraction]] = field(default_factory=dict)
    default: TwinValue = TwinValue(ZERO, ZERO)

    def get(self, p: Var, w) -> TwinValue:
        return TwinValue(self.val1.get(p, {}).get(w, self.default.t),
                         self.val2.get(p, {}).get(w, self.default.f))


@dataclass
class FModel:
    base: SingleModel
    T: Dict[object, Sequence[Fraction]]
    T2: Optional[Dict[object, Sequence[Fraction]]] = None

    def __post_init__(self):
        for menus in (self.T, self.T2):
            if menus is None:
                continue
            for w in self.base.frame.worlds:
                vals = set(menus.get(w, ()))
                if ZERO not in vals or ONE not in vals:
                    raise ModelError(f"T({w}) must contain 0 and 1")
                menus[w] = sorted(vals)


# -- single valuation -------------------------------------------------------

class _SingleEval:
    """Memoized evaluation of one model; ``lookup(p, w)`` supplies atoms."""

    def __init__(self, frame: WeightedFrame, lookup, rounding=None):
        self.frame = frame
        self.lookup = lookup
        self.rounding = rounding
        self.memo = {}

    def ev(self, f, w):
        key = (f, w)
        got = self.memo.get(key)
        if got is not None:
            return got
        out = self._ev(f, w)
        self.memo[key] = out
        return out

    def _ev(self, f, w):
        if isinstance(f, Var):
            return self.lookup(f, w)
        if isinstance(f, Const):
            return ZERO if f.symbol == "0" else ONE
        if isinstance(f, Unary):
            if f.op == NEG:
                raise ModelError("¬ has no single-valuation reading; use eval_twin")
            a = self.ev(f.child, w)
            return g_neg(a) if f.op == "~" else g_delta(a)
        if isinstance(f, Binary):
            return single_apply(f.op, self.ev(f.left, w), self.ev(f.right, w))
        if f.family != STANDARD or f.polarity != PLAIN:
            raise ModelError(f"modality {f.descriptor} needs eval_twin")
        if f.index == 2:
            if self.frame.rel_minus is None:
                raise ModelError("index-2 modality on a mono-relational frame")
            succ = self.frame.succ_minus[w]
        else:
            succ = self.frame.succ_plus[w]
        if f.shape == BOX:
            out = ONE
            for v, r in succ:
                x = self.ev(f.child, v)
                if not r <= x:  # r -> x is x
                    if x < out:
                        out = x
        else:
            out = ZERO
            for v, r in succ:
                x = self.ev(f.child, v)
                y = x if x <= r else r
                if out < y:
                    out = y
        if self.rounding is not None:
            out = self.rounding(f, w, out)
        return out


def _single_lookup(m: SingleModel):
    val, d = m.val, m.default

    def lookup(p, w):
        return val.get(p, {}).get(w, d)
    return lookup


def eval_single(m: SingleModel, f, w):
    f = as_formula(f)
    m.frame.check_world(w)
    return _SingleEval(m.frame, _single_lookup(m)).ev(f, w)


def eval_single_all(m: SingleModel, f) -> dict:
    f = as_formula(f)
    e = _SingleEval(m.frame, _single_lookup(m))
    return {w: e.ev(f, w) for w in m.frame.worlds}


def single_evaluator(m: SingleModel):
    """Evaluator object sharing one memo across many (formula, world) calls."""
    return _SingleEval(m.frame, _single_lookup(m))


# -- F-models ---------------------------------------------------------------

def _round_down(menu, x):
    best = ZERO
    for t in menu:
        if t <= x and best <= t:
            best = t
    return best


def _round_up(menu, x):
    best = ONE
    for t in menu:
        if x <= t and t <= best:
            best = t
    return best


def eval_fmodel(fm: FModel, f, w):
    f = as_formula(f)
    fm.base.frame.check_world(w)

    def rounding(node, u, x):
        menus = fm.T2 if (node.index == 2 and fm.T2 is not None) else fm.T
        menu = menus[u]
        return _round_down(menu, x) if node.shape == BOX else _round_up(menu, x)

    return _SingleEval(fm.base.frame, _single_lookup(fm.base), rounding).ev(f, w)


# -- twin valuation ---------------------------------------------------------

class _TwinEval:
    def __init__(self, frame: WeightedFrame, lookup):
        self.frame = frame
        self.lookup = lookup
        self.memo = {}

    def ev(self, f, w):
        key = (f, w)
        got = self.memo.get(key)
        if got is not None:
            return got
        out = self._ev(f, w)
        self.memo[key] = out
        return out

    def _ev(self, f, w):
        if isinstance(f, Var):
            return self.lookup(f, w)
        if isinstance(f, Const):
            if f.symbol == "0":
                return TwinValue(ZERO, ONE)
            if f.symbol == "1":
                return TwinValue(ONE, ZERO)
            return TwinValue(ONE, ONE)
        if isinstance(f, Unary):
            return twin_apply(f.op, self.ev(f.child, w))
        if isinstance(f, Binary):
            return twin_apply(f.op, self.ev(f.left, w), self.ev(f.right, w))
        # index 1 reads as plain, index 2 as overline
        bar = f.polarity == OVERLINE or f.index == 2
        fr = self.frame
        succ_t = fr.succ_minus[w] if bar else fr.succ_plus[w]
        succ_f = fr.succ_plus[w] if bar else fr.succ_minus[w]
        child = f.child
        if f.shape == BOX:
            t = _inf_impl(self, child, succ_t, 0)
            f2 = _sup_meet(self, child, succ_f, 1) if f.family == STANDARD else _inf_impl(self, child, succ_f, 1)
        else:
            t = _sup_meet(self, child, succ_t, 0)
            f2 = _inf_impl(self, child, succ_f, 1) if f.family == STANDARD else _sup_meet(self, child, succ_f, 1)
        return TwinValue(t, f2)


def _inf_impl(ev, child, succ, comp):
    out = ONE
    for v, r in succ:
        x = ev.ev(child, v)[comp]
        if not r <= x and x < out:
            out = x
    return out


def _sup_meet(ev, child, succ, comp):
    out = ZERO
    for v, r in succ:
        x = ev.ev(child, v)[comp]
        y = x if x <= r else r
        if out < y:
            out = y
    return out


def _twin_lookup(m: TwinModel):
    v1, v2, d = m.val1, m.val2, m.default

    def lookup(p, w):
        return TwinValue(v1.get(p, {}).get(w, d.t), v2.get(p, {}).get(w, d.f))
    return lookup


def eval_twin(m: TwinModel, f, w) -> TwinValue:
    f = as_formula(f)
    m.frame.check_world(w)
    return _TwinEval(m.frame, _twin_lookup(m)).ev(f, w)


def eval_twin_all(m: TwinModel, f) -> dict:
    f = as_formula(f)
    e = _TwinEval(m.frame, _twin_lookup(m))
    return {w: e.ev(f, w) for w in m.frame.worlds}


def twin_evaluator(m: TwinModel):
    return _TwinEval(m.frame, _twin_lookup(m))


# -- relations --------------------------------------------------------------

def compose(R: Mapping, S: Mapping, worlds: Sequence) -> dict:
    """Sup-min composition: u(R;S)v = sup_w min(uRw, wSv)."""
    by_src = {}
    for (w, v), s in S.items():
        by_src.setdefault(w, []).append((v, s))
    out = {}
    for (u, w), r in R.items():
        for v, s in by_src.get(w, ()):
            x = g_meet(r, s)
            if x > out.get((u, v), ZERO):
                out[(u, v)] = x
    return {k: x for k, x in out.items() if x > 0}


def identity(worlds: Sequence) -> dict:
    return {(w, w): ONE for w in worlds}


def power(R: Mapping, n: int, worlds: Sequence) -> dict:
    if n < 0:
        raise ValueError("negative power")
    out = identity(worlds)
    for _ in range(n):
        out = compose(R, out, worlds)
    return out


# -- model transforms -------------------------------------------------------

def conflate(m: TwinModel) -> TwinModel:
    """Swap R+ and R-, and map p = (x, y) to (1-y, 1-x). Crisp frames only."""
    fr = m.frame
    if not is_crisp_relation(fr.rel_plus) or (fr.rel_minus is not None and not is_crisp_relation(fr.rel_minus)):
        raise ModelError("conflation needs a crisp frame")
    new_frame = fr if fr.rel_minus is None else WeightedFrame(fr.worlds, fr.rel_minus, fr.rel_plus)
    keys = set(m.val1) | set(m.val2)
    v1 = {p: {w: ONE - m.get(p, w).f for w in fr.worlds} for p in keys}
    v2 = {p: {w: ONE - m.get(p, w).t for w in fr.worlds} for p in keys}
    d = TwinValue(ONE - m.default.f, ONE - m.default.t)
    return TwinModel(new_frame, v1, v2, d)


def _swap_star(p: Var) -> Var:
    return Var(p.name, not p.starred)


def partial_model(m: TwinModel) -> SingleModel:
    """Single-valuation model over R1 = R+, R2 = R- reading e2 with p and p* swapped."""
    fr = m.frame.as_bi()
    val = {_swap_star(p): dict(ws) for p, ws in m.val2.items()}
    if m.default.f != ZERO:
        for p in list(m.val1) + list(m.val2):
            for q in (p, _swap_star(p)):
                row = val.setdefault(q, {})
                for w in fr.worlds:
                    row.setdefault(w, m.default.f)
    return SingleModel(fr, val, m.default.f)


def star_model(m: TwinModel) -> TwinModel:
    """Twin model where p* carries the values of ¬p: e(p*) = (e2(p), e1(p))."""
    v1, v2 = {}, {}
    for p in set(m.val1) | set(m.val2):
        if p.starred:
            continue
        rows = {w: m.get(p, w) for w in m.frame.worlds}
        v1[p] = {w: x.t for w, x in rows.items()}
        v2[p] = {w: x.f for w, x in rows.items()}
        ps = _swap_star(p)
        v1[ps] = {w: x.f for w, x in rows.items()}
        v2[ps] = {w: x.t for w, x in rows.items()}
    return TwinModel(m.frame, v1, v2, m.default)


def twin_from_single(m: SingleModel) -> TwinModel:
    """KbiG(2) valuation e -> twin model with e1(p) = e(p), e2(p) = e(p*)."""
    v1, v2 = {}, {}
    for p, row in m.val.items():
        if p.starred:
            v2[_swap_star(p)] = dict(row)
        else:
            v1[p] = dict(row)
    return TwinModel(m.frame, v1, v2, TwinValue(m.default, m.default))


# -- entailment -------------------------------------------------------------

def entails_at(m, gamma, chi, w) -> bool:
    """Local entailment at w: inf of Γ below χ (and, for twin models, the
    falsity supports ordered the other way)."""
    gamma = [as_formula(g) for g in gamma]
    chi = as_formula(chi)
    if isinstance(m, TwinModel):
        vals = [eval_twin(m, g, w) for g in gamma]
        c = eval_twin(m, chi, w)
        lo = min((v.t for v in vals), default=ONE)
        hi = max((v.f for v in vals), default=ZERO)
        return lo <= c.t and hi >= c.f
    vals = [eval_single(m, g, w) for g in gamma]
    return min(vals, default=ONE) <= eval_single(m, chi, w)


# -- JSON -------------------------------------------------------------------

def _parse_rel(rows):
    rel = {}
    for row in rows:
        if len(row) == 2:
            u, v, r = row[0], row[1], "1"
        else:
            u, v, r = row
        rel[(u, v)] = value(r)
    return rel


def _parse_val(d):
    out = {}
    for name, row in d.items():
        p = parse(name)
        if not isinstance(p, Var):
            raise ModelError(f"valuation key {name!r} is not a variable")
        out[p] = {w: value(x) for w, x in row.items()}
    return out


def frame_from_json(d: dict) -> WeightedFrame:
    return WeightedFrame(d["worlds"], _parse_rel(d.get("rel_plus", [])),
                         _parse_rel(d["rel_minus"]) if d.get("rel_minus") is not None else None)


def model_from_json(d: dict):
    """SingleModel, TwinModel or FModel depending on the keys present."""
    fr = frame_from_json(d)
    for w in d.get("val1", {}).values():
        for k in w:
            fr.check_world(k)
    if "val2" in d and d["val2"] is not None:
        default = TwinValue(ZERO, ZERO)
        if d.get("default") is not None:
            a, b = d["default"]
            default = TwinValue(value(a), value(b))
        return TwinModel(fr, _parse_val(d.get("val1", {})), _parse_val(d["val2"]), default)
    m = SingleModel(fr, _parse_val(d.get("val1", {})),
                    value(d["default"]) if d.get("default") is not None else ZERO)
    if d.get("T") is not None:
        T = {w: [value(x) for x in xs] for w, xs in d["T"].items()}
        T2 = None
        if d.get("T2") is not None:
            T2 = {w: [value(x) for x in xs] for w, xs in d["T2"].items()}
        return FModel(m, T, T2)
    return m


def _rel_rows(rel, worlds):
    order = {w: i for i, w in enumerate(worlds)}
    return [[u, v, fmt(r)] for (u, v), r in sorted(rel.items(), key=lambda e: (order[e[0][0]], order[e[0][1]]))]


def _val_rows(val, worlds):
    out = {}
    for p in sorted(val, key=lambda q: (q.name, q.starred)):
        out[to_text(p)] = {w: fmt(val[p][w]) for w in worlds if w in val[p]}
    return out


def frame_to_json(fr: WeightedFrame) -> dict:
    d = {"worlds": list(fr.worlds), "rel_plus": _rel_rows(fr.rel_plus, fr.worlds)}
    if fr.rel_minus is not None:
        d["rel_minus"] = _rel_rows(fr.rel_minus, fr.worlds)
    return d


def model_to_json(m) -> dict:
    if isinstance(m, FModel):
        d = model_to_json(m.base)
        d["T"] = {w: [fmt(x) for x in m.T[w]] for w in m.base.frame.worlds}
        if m.T2 is not None:
            d["T2"] = {w: [fmt(x) for x in m.T2[w]] for w in m.base.frame.worlds}
        return d
    d = frame_to_json(m.frame)
    if isinstance(m, TwinModel):
        d["val1"] = _val_rows(m.val1, m.frame.worlds)
        d["val2"] = _val_rows(m.val2, m.frame.worlds)
        if m.default != TwinValue(ZERO, ZERO):
            d["default"] = [fmt(m.default.t), fmt(m.default.f)]
    else:
        d["val1"] = _val_rows(m.val, m.frame.worlds)
        if m.default != ZERO:
            d["default"] = fmt(m.default)
    return d


def trace(m, f) -> dict:
    """Per-subformula, per-world values, keyed by formula text."""
    f = as_formula(f)
    ev = twin_evaluator(m) if isinstance(m, TwinModel) else single_evaluator(m)
    subs = sorted(set(iter_nodes(f)), key=lambda g: (len(to_text(g)), to_text(g)))
    out = {}
    for g in subs:
        row = {}
        for w in m.frame.worlds:
            x = ev.ev(g, w)
            row[w] = [fmt(x.t), fmt(x.f)] if isinstance(x, TwinValue) else fmt(x)
        out[to_text(g)] = row
    return out
