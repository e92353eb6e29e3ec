"""Random-rational refutation sampling, independent of the search engines.

It can only ever confirm a refutation; finding nothing proves nothing.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from ..formula import as_formula
from ..gvalue import ONE, ZERO
from ..kripke import SingleModel, TwinModel, WeightedFrame, eval_single, eval_twin
from .core import anchors_of, needs_twin, relevant_atoms


def _draw(rng, anchors, max_den):
    # anchors are where the case splits of the Gödel operations sit
    if rng.random() < 0.3:
        return rng.choice(anchors)
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, d), d)


def sample_refutation(frame: WeightedFrame, f, w=None, samples: int = 10_000, seed: int = 0,
                      twin: Optional[bool] = None, max_den: int = 12):
    """First sampled (world, model, value) refuting f, or None."""
    f = as_formula(f)
    rng = random.Random(seed)
    twin = needs_twin(f) if twin is None else twin
    roots = frame.worlds if w is None else (w,)
    atoms = relevant_atoms(frame, f, roots, twin=twin)
    anchors = anchors_of(frame)
    for _ in range(samples):
        if twin:
            v1, v2 = {}, {}
            for p, u in atoms:
                v1.setdefault(p, {})[u] = _draw(rng, anchors, max_den)
                v2.setdefault(p, {})[u] = _draw(rng, anchors, max_den)
            m = TwinModel(frame, v1, v2)
            for r in roots:
                x = eval_twin(m, f, r)
                if x != (ONE, ZERO):
                    return r, m, x
        else:
            val = {}
            for p, u in atoms:
                val.setdefault(p, {})[u] = _draw(rng, anchors, max_den)
            m = SingleModel(frame, val)
            for r in roots:
                x = eval_single(m, f, r)
                if x < ONE:
                    return r, m, x
    return None
