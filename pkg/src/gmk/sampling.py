"""Seeded random formulas, frames and models for probes and oracle checks."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .formula import (
    AND, BOX, COIMP, DIA, IMP, INFO, NEG, ONE, OR, OVERLINE, PLAIN, SIM, STANDARD, TRI, ZERO,
    Binary, Modal, Unary, Var,
)
from .gvalue import TwinValue
from .kripke import SingleModel, TwinModel, WeightedFrame


def random_rational(rng: random.Random, max_den: int = 6) -> Fraction:
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, d), d)


def random_formula(rng: random.Random, depth: int, variables: Sequence[str] = ("p", "q"),
                   neg: bool = False, modal: str = "standard", indexed: bool = False,
                   constants: bool = True):
    """Random formula of height <= depth.

    ``modal`` is "none", "standard" (□ ◇), "info" (■ ◆), "bar" (all four
    standard forms), "bar-info" or "all".  ``indexed`` adds □₂ ◇₂.
    """
    if depth <= 0 or rng.random() < 0.25:
        if constants and rng.random() < 0.15:
            return rng.choice((ZERO, ONE))
        return Var(rng.choice(list(variables)))
    kinds = ["un", "bin", "bin"]
    if modal != "none":
        kinds.append("mod")
    kind = rng.choice(kinds)
    sub = lambda: random_formula(rng, depth - 1, variables, neg, modal, indexed, constants)  # noqa: E731
    if kind == "un":
        ops = [SIM, TRI] + ([NEG] if neg else [])
        return Unary(rng.choice(ops), sub())
    if kind == "bin":
        return Binary(rng.choice((AND, OR, IMP, COIMP)), sub(), sub())
    shape = rng.choice((BOX, DIA))
    if modal == "standard":
        fam, pol = STANDARD, PLAIN
    elif modal == "info":
        fam, pol = INFO, PLAIN
    elif modal == "bar":
        fam, pol = STANDARD, rng.choice((PLAIN, OVERLINE))
    elif modal == "bar-info":
        fam, pol = INFO, rng.choice((PLAIN, OVERLINE))
    else:
        fam, pol = rng.choice((STANDARD, INFO)), rng.choice((PLAIN, OVERLINE))
    if indexed and fam == STANDARD and pol == PLAIN:
        return Modal(shape, STANDARD, PLAIN, rng.choice((None, 2)), sub())
    return Modal(shape, fam, pol, None, sub())


def random_relation(rng, worlds, max_den=6, crisp=False, density=0.5):
    rel = {}
    for u in worlds:
        for v in worlds:
            if rng.random() < density:
                rel[(u, v)] = Fraction(1) if crisp else random_rational(rng, max_den)
    return rel


def random_frame(rng: random.Random, max_worlds: int = 4, max_den: int = 6, crisp: bool = False,
                 bi: bool = False, n_worlds: Optional[int] = None) -> WeightedFrame:
    n = n_worlds if n_worlds is not None else rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    plus = random_relation(rng, worlds, max_den, crisp)
    minus = random_relation(rng, worlds, max_den, crisp) if bi else None
    return WeightedFrame(worlds, plus, minus)


def _names(variables):
    out = []
    for v in variables:
        out.append(v if isinstance(v, Var) else Var(v))
    return out


def random_single_model(rng, frame: WeightedFrame, variables=("p", "q"), max_den: int = 6) -> SingleModel:
    val = {p: {w: random_rational(rng, max_den) for w in frame.worlds} for p in _names(variables)}
    return SingleModel(frame, val)


def random_twin_model(rng, frame: WeightedFrame, variables=("p", "q"), max_den: int = 6) -> TwinModel:
    names = _names(variables)
    v1 = {p: {w: random_rational(rng, max_den) for w in frame.worlds} for p in names}
    v2 = {p: {w: random_rational(rng, max_den) for w in frame.worlds} for p in names}
    return TwinModel(frame, v1, v2, TwinValue(Fraction(0), Fraction(0)))
