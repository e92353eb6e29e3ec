"""Bounded countermodel search over small tree frames, satisfiability, and
the transfer checks."""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..formula import (
    INFO, NEG, STANDARD, Modal, Unary, as_formula, iter_nodes, modal_depth, sim, size, tri,
)
from ..gvalue import ONE, ZERO
from ..kripke import SingleModel, TwinModel, WeightedFrame, eval_single, eval_twin, twin_from_single
from ..transform import embedding, partial
from .core import Verdict, Witness, frame_valid, refute_single


@dataclass(frozen=True)
class LogicSpec:
    name: str
    twin: bool
    bi: bool
    crisp: bool


LOGICS = {
    "kbig-f": LogicSpec("kbig-f", False, False, False),
    "kbig-c": LogicSpec("kbig-c", False, False, True),
    "kbig2": LogicSpec("kbig2", False, True, False),
    "kbig2-f": LogicSpec("kbig2-f", False, True, False),
    "kbig2-c": LogicSpec("kbig2-c", False, True, True),
    "kg2-f": LogicSpec("kg2-f", True, False, False),
    "kg2-c": LogicSpec("kg2-c", True, False, True),
    "kg2pm-f": LogicSpec("kg2pm-f", True, True, False),
    "kg2pm-c": LogicSpec("kg2pm-c", True, True, True),
    "g2box-f": LogicSpec("g2box-f", True, False, False),
    "g2box-c": LogicSpec("g2box-c", True, False, True),
    "g2boxpm-f": LogicSpec("g2boxpm-f", True, True, False),
    "g2boxpm-c": LogicSpec("g2boxpm-c", True, True, True),
}

DEFAULT_MAX_WORLDS = 3


@dataclass
class SearchBounds:
    max_worlds: int = DEFAULT_MAX_WORLDS
    value_grid_size: Optional[int] = None  # default |f| + 2
    max_depth: Optional[int] = None  # default modal depth of f

    def resolved(self, f) -> "SearchBounds":
        return SearchBounds(
            self.max_worlds,
            self.value_grid_size if self.value_grid_size is not None else size(f) + 2,
            self.max_depth if self.max_depth is not None else modal_depth(f),
        )


def check_language(f, logic: LogicSpec):
    for g in iter_nodes(f):
        if isinstance(g, Unary) and g.op == NEG and not logic.twin:
            raise ValueError(f"{logic.name} has no ¬")
        if isinstance(g, Modal):
            if g.index == 2 and not (logic.bi and not logic.twin):
                raise ValueError(f"{logic.name} has no index-2 modalities")
            if logic.twin and g.index is not None:
                raise ValueError("indexed modalities belong to the single-valuation logics")
            if not logic.twin and (g.family == INFO or g.polarity != "plain"):
                raise ValueError(f"{logic.name} only has □ and ◇")
            if logic.name.startswith("kg2") and g.family == INFO:
                raise ValueError(f"{logic.name} has no ■ ◆")
            if logic.name.startswith("g2box") and g.family == STANDARD:
                raise ValueError(f"{logic.name} has no □ ◇")


# -- frame enumeration ------------------------------------------------------

def tree_shapes(n: int, depth: int) -> list:
    """Parent vectors of non-isomorphic rooted trees with n nodes and height <= depth."""
    if n == 1:
        return [()]
    out, seen = [], set()
    for parents in itertools.product(*[range(i) for i in range(1, n)]):
        d = [0] * n
        for i, p in enumerate(parents, 1):
            d[i] = d[p] + 1
        if max(d) > depth:
            continue
        key = _shape_key(parents, n, None)
        if key not in seen:
            seen.add(key)
            out.append(parents)
    return out


def _shape_key(parents, n, labels):
    kids = {i: [] for i in range(n)}
    for i, p in enumerate(parents, 1):
        kids[p].append(i)

    def key(v):
        return tuple(sorted((((labels[c - 1] if labels else None), key(c)) for c in kids[v]), key=repr))
    return key(0)


def _weak_orders(k: int, m: int) -> Iterator[tuple]:
    """Surjections of k positions onto 1..m, in lexicographic order."""
    for combo in itertools.product(range(1, m + 1), repeat=k):
        if len(set(combo)) == m:
            yield combo


TOP_L, ZERO_L = "T", "0"


def edge_labelings(n_edges: int, bi: bool, crisp: bool, m: int) -> Iterator[tuple]:
    """Weight labels per edge, using exactly m distinct values strictly inside (0,1).

    Labels are TOP_L, ZERO_L or an int rank; bi-relational edges get a pair
    (plus, minus) that is not (0, 0).
    """
    slots = 2 * n_edges if bi else n_edges
    if crisp:
        if m:
            return
        if not bi:
            yield tuple(TOP_L for _ in range(n_edges))
            return
        pairs = [(TOP_L, ZERO_L), (ZERO_L, TOP_L), (TOP_L, TOP_L)]
        yield from itertools.product(pairs, repeat=n_edges)
        return
    ends = (TOP_L,) if not bi else (ZERO_L, TOP_L)
    for interior in range(slots + 1):
        if (m == 0) != (interior == 0) or interior < m:
            continue
        for pos in itertools.combinations(range(slots), interior):
            for ranks in _weak_orders(interior, m):
                rest = [i for i in range(slots) if i not in pos]
                for fill in itertools.product(ends, repeat=len(rest)):
                    lab = [None] * slots
                    for i, r in zip(pos, ranks):
                        lab[i] = r
                    for i, e in zip(rest, fill):
                        lab[i] = e
                    if bi:
                        pairs = tuple((lab[2 * e], lab[2 * e + 1]) for e in range(n_edges))
                        if any(a == ZERO_L and b == ZERO_L for a, b in pairs):
                            continue
                        yield pairs
                    else:
                        yield tuple(lab)


def _label_value(lab, m):
    if lab == TOP_L:
        return ONE
    if lab == ZERO_L:
        return ZERO
    return Fraction(lab, m + 1)


def build_frame(parents, labels, bi: bool, m: int) -> WeightedFrame:
    n = len(parents) + 1
    worlds = [f"w{i}" for i in range(n)]
    plus, minus = {}, {}
    for i, p in enumerate(parents, 1):
        lab = labels[i - 1]
        if bi:
            plus[(worlds[p], worlds[i])] = _label_value(lab[0], m)
            minus[(worlds[p], worlds[i])] = _label_value(lab[1], m)
        else:
            plus[(worlds[p], worlds[i])] = _label_value(lab, m)
    return WeightedFrame(worlds, plus, minus if bi else None)


def candidate_frames(logic: LogicSpec, b: SearchBounds) -> Iterator[WeightedFrame]:
    """Tree frames in search order: world count, then number of distinct
    fuzzy weights, then shape and labels lexicographically."""
    max_m = 0 if logic.crisp else max(0, b.value_grid_size - 2)
    for n in range(1, b.max_worlds + 1):
        shapes = tree_shapes(n, b.max_depth)
        for m in range(0, max_m + 1):
            if m > 0 and m > (2 if logic.bi else 1) * (n - 1):
                break
            seen = set()
            for parents in shapes:
                for labels in edge_labelings(n - 1, logic.bi, logic.crisp, m):
                    key = (parents and _shape_key(parents, n, labels), m)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield build_frame(parents, labels, logic.bi, m)


def _complete(f, b: SearchBounds) -> bool:
    # without modalities a single world decides everything
    return b.max_depth >= modal_depth(f) and modal_depth(f) == 0


def max_workers() -> int:
    """Worker cap from GMK_MAX_WORKERS (default 1: no subprocesses)."""
    try:
        return max(1, int(os.environ.get("GMK_MAX_WORKERS", "1")))
    except ValueError:
        return 1


def _refute_on(args):
    twin, fr, f = args
    if twin:
        v = frame_valid(fr, f, "w0", semantics="twin")
        return v if v.refuted else None
    got = refute_single(fr, f, ("w0",))
    if got is None:
        return None
    w, m, val = got
    return Verdict("refuted", Witness(m, w, val, f))


def _first_refutation(frames, twin, f, workers):
    """(index, verdict) of the first refuted frame in enumeration order.

    With several workers frames are checked in batches; the earliest
    refutation of a batch wins, so the result does not depend on timing.
    """
    if workers <= 1:
        n = 0
        for n, fr in enumerate(frames, 1):
            v = _refute_on((twin, fr, f))
            if v is not None:
                return n, v
        return n, None
    batch = 8 * workers
    n = 0
    with ProcessPoolExecutor(max_workers=workers) as ex:
        while True:
            chunk = list(itertools.islice(frames, batch))
            if not chunk:
                return n, None
            for v in ex.map(_refute_on, [(twin, fr, f) for fr in chunk]):
                n += 1
                if v is not None:
                    return n, v


def valid_bounded(f, logic: str = "kbig-f", b: Optional[SearchBounds] = None,
                  workers: Optional[int] = None) -> Verdict:
    """Search tree frames within bounds for a countermodel at the root."""
    f = as_formula(f)
    spec = LOGICS[logic]
    check_language(f, spec)
    b = (b or SearchBounds()).resolved(f)
    workers = max_workers() if workers is None else workers
    checked, v = _first_refutation(candidate_frames(spec, b), spec.twin, f, workers)
    if v is not None:
        v.info.update(logic=logic, frames_checked=checked)
        return v
    status = "valid" if _complete(f, b) else "exhausted-bounds"
    return Verdict(status, info={"logic": logic, "frames_checked": checked,
                                 "bounds": {"max_worlds": b.max_worlds, "grid": b.value_grid_size,
                                            "depth": b.max_depth}})


def sat_bounded(f, logic: str = "kbig-f", b: Optional[SearchBounds] = None) -> Verdict:
    """Look for a model and world where f takes the top value.

    Single-valuation logics: f = 1 exactly when ∼△f is refuted.  Twin
    logics: f = (1,0) exactly when the embedding of f equals 1, so the
    same reduction runs on the embedding.
    """
    f = as_formula(f)
    spec = LOGICS[logic]
    check_language(f, spec)
    b = (b or SearchBounds()).resolved(f)
    if spec.twin:
        target = sim(tri(embedding(f)))
        inner = SearchBounds(b.max_worlds, b.value_grid_size, b.max_depth)
        sspec = LogicSpec(spec.name, False, spec.bi, spec.crisp)
    else:
        target = sim(tri(f))
        inner = b
        sspec = spec
    checked = 0
    for fr in candidate_frames(sspec, inner):
        checked += 1
        search_fr = fr.as_bi() if spec.twin else fr
        got = refute_single(search_fr, target, ("w0",))
        if got is None:
            continue
        w, m, _ = got
        if spec.twin:
            tm = twin_from_single(m)
            model = TwinModel(fr, tm.val1, tm.val2, tm.default)
            val = eval_twin(model, f, w)
            if val != (ONE, ZERO):
                raise AssertionError("sat witness does not give (1,0)")
        else:
            model = m
            val = eval_single(m, f, w)
            if val != ONE:
                raise AssertionError("sat witness does not give 1")
        return Verdict("satisfiable", Witness(model, w, val, f), {"logic": logic, "frames_checked": checked})
    status = "unsatisfiable" if _complete(f, b) else "exhausted-bounds"
    return Verdict(status, info={"logic": logic, "frames_checked": checked})


# -- transfer ----------------------------------------------------------------

def check_transfer(fr: WeightedFrame, w, f) -> bool:
    """If f is valid at w (single valuation), so is ∼f∂."""
    f = as_formula(f)
    if not frame_valid(fr, f, w, semantics="single").valid:
        return True
    dual = sim(partial(f, mono=fr.is_mono))
    return frame_valid(fr, dual, w, semantics="single").valid


def mixed_frames(frR: WeightedFrame, frS: WeightedFrame):
    if set(frR.worlds) != set(frS.worlds):
        raise ValueError("frames must share their worlds")
    if not (frR.is_mono and frS.is_mono):
        raise ValueError("bi-transfer takes two mono-relational frames")
    rs = WeightedFrame(frR.worlds, frR.rel_plus, frS.rel_plus)
    sr = WeightedFrame(frR.worlds, frS.rel_plus, frR.rel_plus)
    return rs, sr


def check_bitransfer(frR: WeightedFrame, frS: WeightedFrame, w, f) -> bool:
    """Valid on both mono frames iff strongly valid on both mixed frames."""
    f = as_formula(f)
    rs, sr = mixed_frames(frR, frS)
    left = (frame_valid(frR, f, w, semantics="single").valid
            and frame_valid(frS, f, w, semantics="single").valid)
    right = (frame_valid(rs, f, w, semantics="twin").valid
             and frame_valid(sr, f, w, semantics="twin").valid)
    return left == right
