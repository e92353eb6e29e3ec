"""Exact frame validity on a finite pointed frame.

Two engines answer the same question.  The grid engine enumerates every
valuation into an exact rank chain with numpy; it is used when the chain
raised to the number of atoms is small.  Otherwise the lazy order-type
search in ``order.py`` runs.  Either way a refutation is turned into a
concrete rational model and re-checked with the exact evaluator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence

import numpy as np

from ..formula import (
    BOX, INFO, NEG, OVERLINE, Binary, Const, Modal, Unary, Var, as_formula, iter_nodes, to_text,
)
from ..gvalue import ONE, ZERO, TwinValue, fmt
from ..kripke import (
    SingleModel, TwinModel, WeightedFrame, _SingleEval, _TwinEval, eval_single, eval_twin,
    model_to_json, trace, twin_from_single,
)
from ..transform import embedding
from . import grid as G
from .order import Context, search

GRID_LIMIT = 60_000


class ConsistencyError(AssertionError):
    """A witness failed re-evaluation, or two engines disagreed."""


@dataclass
class Witness:
    model: Any
    world: Any
    value: Any
    formula: Any = None

    def to_json(self) -> dict:
        d = model_to_json(self.model)
        d["world"] = self.world
        if isinstance(self.value, TwinValue):
            d["value"] = [fmt(self.value.t), fmt(self.value.f)]
        else:
            d["value"] = fmt(self.value)
        if self.formula is not None:
            d["formula"] = to_text(self.formula)
            d["trace"] = trace(self.model, self.formula)
        return d


@dataclass
class Verdict:
    status: str  # valid | refuted | exhausted-bounds (sat: satisfiable | unsatisfiable | exhausted-bounds)
    witness: Optional[Witness] = None
    info: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def to_json(self) -> dict:
        d = {"status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        d.update(self.info)
        return d


def needs_twin(f) -> bool:
    """True when f can only be read with twin valuations."""
    for g in iter_nodes(f):
        if isinstance(g, Unary) and g.op == NEG:
            return True
        if isinstance(g, Const) and g.symbol == "B":
            return True
        if isinstance(g, Modal) and (g.family == INFO or g.polarity == OVERLINE):
            return True
    return False


def relevant_atoms(frame: WeightedFrame, f, roots: Sequence, twin=False) -> list:
    """(variable, world) pairs whose value can reach f at one of the roots."""
    seen = set()
    found = set()
    stack = [(f, w) for w in roots]
    while stack:
        g, w = stack.pop()
        if (g, w) in seen:
            continue
        seen.add((g, w))
        if isinstance(g, Var):
            found.add((g, w))
        elif isinstance(g, Modal):
            if twin:
                succ = {v for v, _ in frame.succ_plus[w]} | {v for v, _ in frame.succ_minus[w]}
            elif g.index == 2:
                succ = {v for v, _ in frame.succ_minus[w]}
            else:
                succ = {v for v, _ in frame.succ_plus[w]}
            stack.extend((g.child, v) for v in succ)
        elif isinstance(g, (Unary, Binary)):
            stack.extend((c, w) for c in ((g.left, g.right) if isinstance(g, Binary) else (g.child,)))
    order = {w: i for i, w in enumerate(frame.worlds)}
    return sorted(found, key=lambda a: (a[0].name, a[0].starred, order[a[1]]))


def anchors_of(frame: WeightedFrame) -> List[Fraction]:
    return sorted({ZERO, ONE} | frame.weights())


def _grid_size(k, n):
    c = k + (k - 1) * n
    return c ** n if n else 1


# -- single valuation --------------------------------------------------------

def _refute_single_grid(frame, f, roots, atoms, anchors):
    n = len(atoms)
    chain = G.make_chain(anchors, n)
    rank_of = {x: i for i, x in enumerate(chain)}
    top = len(chain) - 1
    cols = G.valuation_arrays(n, len(chain))
    rm = G.RankModel(frame, rank_of, top, {a: cols[t] for t, a in enumerate(atoms)})
    ev = G.SingleGrid(rm)
    for w in roots:
        vals = np.broadcast_to(ev.ev(f, w), (len(chain) ** n,))
        bad = np.flatnonzero(vals < top)
        if bad.size:
            i = int(bad[0])
            return w, [chain[int(c[i])] for c in cols]
    return None


def _refute_single_lazy(frame, f, roots, atoms, anchors):
    ctx = Context(anchors, len(atoms))
    slot = {a: ctx.atoms[t] for t, a in enumerate(atoms)}

    def lookup(p, w):
        return slot.get((p, w), ZERO)

    _register(ctx, frame)
    for w in roots:
        ctx.state = Context(anchors, len(atoms)).state

        def run(memo, w=w):
            ev = _SingleEval(frame, lookup)
            ev.memo = memo
            return ev.ev(f, w) < ONE

        st = search(ctx, run)
        if st is not None:
            ctx.state = st
            return w, ctx.realize()
    return None


def _register(ctx, frame):
    vals = [ONE, ZERO]
    for w in frame.worlds:
        vals.extend(r for _, r in frame.succ_plus[w])
        vals.extend(r for _, r in frame.succ_minus[w])
    ctx.register(vals)


def _model_from(frame, atoms, values, twin=False):
    if twin:
        v1, v2 = {}, {}
        for (p, w, comp), x in zip(atoms, values):
            (v1 if comp == 0 else v2).setdefault(p, {})[w] = x
        return TwinModel(frame, v1, v2)
    val = {}
    for (p, w), x in zip(atoms, values):
        val.setdefault(p, {})[w] = x
    return SingleModel(frame, val)


def refute_single(frame: WeightedFrame, f, roots: Sequence, engine: str = "auto"):
    """First (world, SingleModel) refuting f at one of the roots, or None."""
    atoms = relevant_atoms(frame, f, roots)
    anchors = anchors_of(frame)
    if engine == "auto":
        engine = "grid" if _grid_size(len(anchors), len(atoms)) <= GRID_LIMIT else "lazy"
    run = _refute_single_grid if engine == "grid" else _refute_single_lazy
    got = run(frame, f, roots, atoms, anchors)
    if got is None:
        return None
    w, values = got
    m = _model_from(frame, atoms, values)
    v = eval_single(m, f, w)
    if not v < ONE:
        raise ConsistencyError(f"witness for {to_text(f)} evaluates to {v}")
    return w, m, v


# -- twin valuations (direct, used as an oracle) -------------------------------

def _refute_twin_grid(frame, f, roots, atoms, anchors):
    n = len(atoms)
    chain = G.make_chain(anchors, n)
    rank_of = {x: i for i, x in enumerate(chain)}
    top = len(chain) - 1
    cols = G.valuation_arrays(n, len(chain))
    rm = G.RankModel(frame, rank_of, top, {a: cols[t] for t, a in enumerate(atoms)})
    ev = G.TwinGrid(rm)
    total = len(chain) ** n
    for w in roots:
        t, fl = ev.ev(f, w)
        bad = np.broadcast_to(t, (total,)) < top
        bad = bad | (np.broadcast_to(fl, (total,)) > 0)
        idx = np.flatnonzero(bad)
        if idx.size:
            i = int(idx[0])
            return w, [chain[int(c[i])] for c in cols]
    return None


def _refute_twin_lazy(frame, f, roots, atoms, anchors):
    ctx = Context(anchors, len(atoms))
    slot = {a: ctx.atoms[t] for t, a in enumerate(atoms)}

    def lookup(p, w):
        return TwinValue(slot.get((p, w, 0), ZERO), slot.get((p, w, 1), ZERO))

    _register(ctx, frame)
    for w in roots:
        ctx.state = Context(anchors, len(atoms)).state

        def run(memo, w=w):
            ev = _TwinEval(frame, lookup)
            ev.memo = memo
            t, fl = ev.ev(f, w)
            return t < ONE or ZERO < fl

        st = search(ctx, run)
        if st is not None:
            ctx.state = st
            return w, ctx.realize()
    return None


def refute_twin_direct(frame: WeightedFrame, f, roots: Sequence, engine: str = "auto"):
    """Strong-validity refutation by searching twin valuations directly."""
    base = relevant_atoms(frame, f, roots, twin=True)
    atoms = [(p, w, c) for p, w in base for c in (0, 1)]
    anchors = anchors_of(frame)
    if engine == "auto":
        engine = "grid" if _grid_size(len(anchors), len(atoms)) <= GRID_LIMIT else "lazy"
    run = _refute_twin_grid if engine == "grid" else _refute_twin_lazy
    got = run(frame, f, roots, atoms, anchors)
    if got is None:
        return None
    w, values = got
    m = _model_from(frame, atoms, values, twin=True)
    v = eval_twin(m, f, w)
    if v == (ONE, ZERO):
        raise ConsistencyError(f"twin witness for {to_text(f)} is not a refutation")
    return w, m, v


def strong_valid_direct(frame: WeightedFrame, f, w=None, engine="auto") -> Verdict:
    f = as_formula(f)
    roots = frame.worlds if w is None else (w,)
    got = refute_twin_direct(frame, f, roots, engine)
    if got is None:
        return Verdict("valid")
    rw, m, v = got
    return Verdict("refuted", Witness(m, rw, v, f))


# -- public entry --------------------------------------------------------------

def frame_valid(frame: WeightedFrame, f, w=None, semantics: str = "auto", engine: str = "auto") -> Verdict:
    """Exact validity of f on the frame at w (or at every world).

    ``semantics`` is "single" (value 1 required), "twin" (strong validity,
    value (1,0) required) or "auto", which picks twin exactly when f uses
    ¬, B, overline or informational modalities.  Twin formulas are decided
    through the embedding φ*∧∼φ∂ on the frame with R- spelled out.
    """
    f = as_formula(f)
    roots = frame.worlds if w is None else (w,)
    for r in roots:
        frame.check_world(r)
    if semantics == "auto":
        semantics = "twin" if needs_twin(f) else "single"
    if semantics == "single":
        got = refute_single(frame, f, roots, engine)
        if got is None:
            return Verdict("valid")
        rw, m, v = got
        return Verdict("refuted", Witness(m, rw, v, f))
    if semantics != "twin":
        raise ValueError(f"unknown semantics {semantics!r}")
    bi = frame.as_bi()
    target = embedding(f)
    got = refute_single(bi, target, roots, engine)
    if got is None:
        return Verdict("valid", info={"via": "embedding"})
    rw, m, _ = got
    tm = twin_from_single(m)
    tm = TwinModel(frame, tm.val1, tm.val2, tm.default)
    v = eval_twin(tm, f, rw)
    if v == (ONE, ZERO):
        raise ConsistencyError(f"embedding witness does not refute {to_text(f)}")
    return Verdict("refuted", Witness(tm, rw, v, f), {"via": "embedding"})


def frame_valid_many(frame: WeightedFrame, formulas: Sequence, w) -> List[bool]:
    """Single-valuation validity of several formulas at w on one shared grid.

    Subformula arrays are shared across the batch, which is what makes
    sweeps over formula families cheap.  Only for small atom counts.
    """
    formulas = [as_formula(f) for f in formulas]
    found = set()
    for f in formulas:
        found.update(relevant_atoms(frame, f, (w,)))
    order = {x: i for i, x in enumerate(frame.worlds)}
    atoms = sorted(found, key=lambda a: (a[0].name, a[0].starred, order[a[1]]))
    anchors = anchors_of(frame)
    n = len(atoms)
    if _grid_size(len(anchors), n) > 4 * GRID_LIMIT:
        return [frame_valid(frame, f, w, semantics="single").valid for f in formulas]
    chain = G.make_chain(anchors, n)
    rank_of = {x: i for i, x in enumerate(chain)}
    top = len(chain) - 1
    cols = G.valuation_arrays(n, len(chain))
    rm = G.RankModel(frame, rank_of, top, {a: cols[t] for t, a in enumerate(atoms)})
    ev = G.SingleGrid(rm)
    out = []
    for f in formulas:
        v = ev.ev(f, w)
        out.append(bool(np.all(np.asarray(v) >= top)))
    return out
