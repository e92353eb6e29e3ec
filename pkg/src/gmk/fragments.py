"""Exhaustive value closure of one-variable fragments over a fixed twin model.

A formula denotes a vector of twin values, one per world.  Starting from the
variable and the constants, the closure applies every propositional
connective until no new vector appears, then the allowed modalities, and
repeats up to a modal-depth cap.  Each reached vector keeps a formula that
produces it, so a hit can be replayed through ``eval_twin``.

Component values are interned: the Gödel connectives and the modal
aggregations only ever return 0, 1, a weight or an input value, so the
finite set of those is closed and every operation becomes a table lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .formula import (
    AND, BOX, COIMP, DIA, IMP, NEG, ONE as C_ONE, OR, PLAIN, SIM, STANDARD, TRI, ZERO as C_ZERO,
    Binary, Modal, Unary, Var,
)
from .gvalue import ONE, ZERO, TwinValue, twin_apply
from .kripke import TwinModel, eval_twin

UNARY = (SIM, NEG, TRI)
BINARY = (AND, OR, IMP, COIMP)
_OPNAME = {SIM: "~", NEG: "neg", TRI: "tri", AND: "&", OR: "|", IMP: "->", COIMP: "-<"}


@dataclass
class Closure:
    worlds: Tuple
    vectors: Dict[Tuple[TwinValue, ...], object]

    def values_at(self, w) -> set:
        i = self.worlds.index(w)
        return {v[i] for v in self.vectors}

    def witness(self, w, target: TwinValue):
        """A formula of the fragment with value ``target`` at w, or None."""
        i = self.worlds.index(w)
        for v, f in self.vectors.items():
            if v[i] == target:
                return f
        return None


class _Table:
    def __init__(self, comps: Iterable[Fraction], binary: Sequence[str]):
        self.comps = sorted(set(comps) | {ZERO, ONE})
        n = len(self.comps)
        self.n = n
        self.twins = [TwinValue(a, b) for a in self.comps for b in self.comps]
        self.index = {t: k for k, t in enumerate(self.twins)}
        self.un = {op: np.array([self._idx(twin_apply(_OPNAME[op], t)) for t in self.twins], dtype=np.int32)
                   for op in UNARY}
        self.bin = {op: np.array([[self._idx(twin_apply(_OPNAME[op], a, b)) for b in self.twins] for a in self.twins],
                                 dtype=np.int32)
                    for op in binary}

    def _idx(self, t):
        try:
            return self.index[t]
        except KeyError:
            raise AssertionError(f"value {t} escapes the interned set") from None


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    code = np.zeros(rows.shape[:-1], dtype=np.int64)
    for j in range(rows.shape[-1]):
        code = code * base + rows[..., j]
    return code


class _Store:
    """Vectors reached so far, deduplicated by integer code."""

    def __init__(self, width: int, base: int):
        self.base = base
        self.rows = np.zeros((0, width), dtype=np.int32)
        self.formulas: list = []
        self.codes: set = set()

    def add(self, rows: np.ndarray, formula_of) -> np.ndarray:
        """Add unseen rows; returns the newly added rows."""
        codes = _encode(rows, self.base)
        _, first = np.unique(codes, return_index=True)
        keep = [k for k in sorted(first) if int(codes[k]) not in self.codes]
        for k in keep:
            self.codes.add(int(codes[k]))
            self.formulas.append(formula_of(k))
        new = rows[keep] if keep else np.zeros((0, rows.shape[1]), dtype=np.int32)
        self.rows = np.concatenate([self.rows, new])
        return new


def _close(store: _Store, frontier_start: int, tab: _Table) -> None:
    """Propositional closure; rows from ``frontier_start`` on are new."""
    lo = frontier_start
    while lo < len(store.rows):
        hi = len(store.rows)
        front = store.rows[lo:hi]
        for op in UNARY:
            base = lo
            store.add(tab.un[op][front], lambda k, op=op, base=base: Unary(op, store.formulas[base + k]))
        allrows = store.rows[:hi]
        for op, t in tab.bin.items():
            left = t[front[:, None, :], allrows[None, :, :]].reshape(-1, front.shape[1])
            right = t[allrows[None, :, :], front[:, None, :]].reshape(-1, front.shape[1])
            m = len(allrows)

            def fl(k, op=op, lo=lo, m=m):
                return Binary(op, store.formulas[lo + k // m], store.formulas[k % m])

            def fr(k, op=op, lo=lo, m=m):
                return Binary(op, store.formulas[k % m], store.formulas[lo + k // m])

            store.add(left, fl)
            store.add(right, fr)
        lo = hi


def fragment_closure(m: TwinModel, var: Var, shapes: Sequence[str], max_modal_depth: Optional[int] = 2,
                     constants: bool = True, binary: Sequence[str] = BINARY) -> Closure:
    """All value vectors of one-variable formulas using the standard modalities in ``shapes``.

    ``shapes`` is a subset of ("box", "diamond").  With ``max_modal_depth``
    None the closure runs to its fixpoint.  ``binary`` narrows the binary
    connectives, e.g. to drop ⤙ where it is definable.
    """
    worlds = tuple(m.frame.worlds)
    bi = m.frame.as_bi()
    comps = {m.get(var, w).t for w in worlds} | {m.get(var, w).f for w in worlds}
    comps |= set(bi.rel_plus.values()) | set(bi.rel_minus.values())
    tab = _Table(comps, binary)
    store = _Store(len(worlds), len(tab.twins))

    seeds = [(var, [m.get(var, w) for w in worlds])]
    if constants:
        seeds += [(C_ZERO, [TwinValue(ZERO, ONE)] * len(worlds)), (C_ONE, [TwinValue(ONE, ZERO)] * len(worlds))]
    for f, vec in seeds:
        store.add(np.array([[tab.index[x] for x in vec]], dtype=np.int32), lambda k, f=f: f)
    _close(store, 0, tab)

    q = Var("q")
    done = 0
    depth = 0
    while max_modal_depth is None or depth < max_modal_depth:
        start = len(store.rows)
        level = range(done, start)
        done = start
        for shape in shapes:
            for r in level:
                vec = [tab.twins[k] for k in store.rows[r]]
                mm = TwinModel(m.frame, {q: {w: x.t for w, x in zip(worlds, vec)}},
                               {q: {w: x.f for w, x in zip(worlds, vec)}})
                g = Modal(shape, STANDARD, PLAIN, None, q)
                out = [tab.index[eval_twin(mm, g, w)] for w in worlds]
                store.add(np.array([out], dtype=np.int32),
                          lambda k, shape=shape, r=r: Modal(shape, STANDARD, PLAIN, None, store.formulas[r]))
        if len(store.rows) == start:
            break
        _close(store, start, tab)
        depth += 1
    vectors = {tuple(tab.twins[k] for k in row): f for row, f in zip(store.rows, store.formulas)}
    return Closure(worlds, vectors)


__all__ = ["Closure", "fragment_closure", "BOX", "DIA"]
