"""Vectorized evaluation over a whole grid of valuations.

Values are integer ranks in an exact finite chain: the anchors (0, 1, the
frame weights) with ``m`` fresh values inserted in every gap.  Because the
Gödel operations are order-determined, evaluating on ranks is the same as
evaluating on the underlying rationals.  One numpy array per
(subformula, world) holds the value under every valuation at once.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np

from ..formula import BOX, NEG, OVERLINE, STANDARD, Binary, Const, Modal, Unary, Var


def make_chain(anchors: Sequence[Fraction], fresh: int) -> List[Fraction]:
    """Anchors plus ``fresh`` evenly spaced values strictly inside each gap."""
    anchors = sorted(set(anchors))
    chain = [anchors[0]]
    for lo, hi in zip(anchors, anchors[1:]):
        for t in range(1, fresh + 1):
            chain.append(lo + (hi - lo) * Fraction(t, fresh + 1))
        chain.append(hi)
    return chain


class RankModel:
    """Frame with weights replaced by ranks plus per-atom rank arrays."""

    def __init__(self, frame, rank_of: Dict[Fraction, int], top: int, atom_arrays):
        self.frame = frame
        self.top = top
        self.atom_arrays = atom_arrays  # (var, world[, comp]) -> array
        self.succ_plus = {w: [(v, rank_of[r]) for v, r in frame.succ_plus[w]] for w in frame.worlds}
        self.succ_minus = {w: [(v, rank_of[r]) for v, r in frame.succ_minus[w]] for w in frame.worlds}


def valuation_arrays(n_atoms: int, chain_len: int, dtype=np.int16):
    """Column t enumerates atom t's rank; atom 0 varies slowest."""
    total = chain_len ** n_atoms
    idx = np.arange(total, dtype=np.int64)
    cols = []
    for t in range(n_atoms):
        stride = chain_len ** (n_atoms - 1 - t)
        cols.append(((idx // stride) % chain_len).astype(dtype))
    return cols


class SingleGrid:
    """Memoized rank evaluation for single-valuation formulas."""

    def __init__(self, rm: RankModel):
        self.rm = rm
        self.memo = {}

    def ev(self, f, w):
        key = (f, w)
        got = self.memo.get(key)
        if got is None:
            got = self._ev(f, w)
            self.memo[key] = got
        return got

    def _ev(self, f, w):
        top = self.rm.top
        if isinstance(f, Var):
            arr = self.rm.atom_arrays.get((f, w))
            return 0 if arr is None else arr
        if isinstance(f, Const):
            return 0 if f.symbol == "0" else top
        if isinstance(f, Unary):
            if f.op == NEG:
                raise ValueError("¬ in a single-valuation formula")
            a = self.ev(f.child, w)
            if f.op == "~":
                return np.where(a == 0, top, 0) if isinstance(a, np.ndarray) else (top if a == 0 else 0)
            return np.where(a == top, top, 0) if isinstance(a, np.ndarray) else (top if a == top else 0)
        if isinstance(f, Binary):
            a, b = self.ev(f.left, w), self.ev(f.right, w)
            return _binary(f.op, a, b, top)
        if f.family != STANDARD or f.polarity == OVERLINE:
            raise ValueError("modality needs the twin evaluator")
        succ = self.rm.succ_minus[w] if f.index == 2 else self.rm.succ_plus[w]
        return _modal(f.shape == BOX, [(r, self.ev(f.child, v)) for v, r in succ], top)


def _binary(op, a, b, top):
    if op == "&":
        return np.minimum(a, b)
    if op == "|":
        return np.maximum(a, b)
    if op == "->":
        return np.where(a <= b, top, b)
    return np.where(a <= b, 0, a)


def _modal(is_box, contribs, top):
    if is_box:
        out = top
        for r, x in contribs:
            out = np.minimum(out, np.where(x >= r, top, x))
    else:
        out = 0
        for r, x in contribs:
            out = np.maximum(out, np.minimum(x, r))
    return out


def _inf_impl(contribs, top):
    return _modal(True, contribs, top)


def _sup_meet(contribs, top):
    return _modal(False, contribs, top)


class TwinGrid:
    """Rank evaluation with truth and falsity supports."""

    def __init__(self, rm: RankModel):
        self.rm = rm
        self.memo = {}

    def ev(self, f, w):
        key = (f, w)
        got = self.memo.get(key)
        if got is None:
            got = self._ev(f, w)
            self.memo[key] = got
        return got

    def _ev(self, f, w):
        top = self.rm.top
        if isinstance(f, Var):
            a = self.rm.atom_arrays.get((f, w, 0))
            b = self.rm.atom_arrays.get((f, w, 1))
            return (0 if a is None else a, 0 if b is None else b)
        if isinstance(f, Const):
            return {"0": (0, top), "1": (top, 0), "B": (top, top)}[f.symbol]
        if isinstance(f, Unary):
            t, fl = self.ev(f.child, w)
            if f.op == NEG:
                return (fl, t)
            if f.op == "~":
                return (np.where(np.equal(t, 0), top, 0), np.where(np.equal(fl, top), 0, top))
            return (np.where(np.equal(t, top), top, 0), np.where(np.equal(fl, 0), 0, top))
        if isinstance(f, Binary):
            (at, af), (bt, bf) = self.ev(f.left, w), self.ev(f.right, w)
            if f.op == "&":
                return (np.minimum(at, bt), np.maximum(af, bf))
            if f.op == "|":
                return (np.maximum(at, bt), np.minimum(af, bf))
            if f.op == "->":
                return (np.where(at <= bt, top, bt), np.where(np.less_equal(bf, af), 0, bf))
            return (np.where(at <= bt, 0, at), np.where(np.less_equal(bf, af), top, af))
        bar = f.polarity == OVERLINE or f.index == 2
        succ_t = self.rm.succ_minus[w] if bar else self.rm.succ_plus[w]
        succ_f = self.rm.succ_plus[w] if bar else self.rm.succ_minus[w]
        ct = [(r, self.ev(f.child, v)[0]) for v, r in succ_t]
        cf = [(r, self.ev(f.child, v)[1]) for v, r in succ_f]
        if f.shape == BOX:
            t = _inf_impl(ct, top)
            fl = _sup_meet(cf, top) if f.family == STANDARD else _inf_impl(cf, top)
        else:
            t = _sup_meet(ct, top)
            fl = _inf_impl(cf, top) if f.family == STANDARD else _sup_meet(cf, top)
        return (t, fl)
