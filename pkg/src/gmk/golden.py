"""Bundled fixture models, derivations and the golden-value table."""
from __future__ import annotations

import json
from importlib import resources

from .formula import parse
from .gvalue import TwinValue, fmt, value
from .kripke import FModel, TwinModel, eval_fmodel, eval_single, eval_twin, model_from_json


def load_json(name: str):
    return json.loads(resources.files("gmk").joinpath("fixtures", name).read_text())


def load_model(name: str):
    return model_from_json(load_json(name))


def evaluate(m, f, w):
    if isinstance(m, TwinModel):
        return eval_twin(m, f, w)
    if isinstance(m, FModel):
        return eval_fmodel(m, f, w)
    return eval_single(m, f, w)


def _expected(x):
    if isinstance(x, list):
        return TwinValue(value(x[0]), value(x[1]))
    return value(x)


def _show(x):
    if isinstance(x, TwinValue):
        return f"({fmt(x.t)}, {fmt(x.f)})"
    return fmt(x)


def run_goldens() -> list:
    """One row per golden entry: name, formula, world, expected, got, ok."""
    rows = []
    for row in load_json("goldens.json"):
        m = load_model(row["model"])
        got = evaluate(m, parse(row["formula"]), row["world"])
        want = _expected(row["expected"])
        rows.append({
            "name": row["name"], "formula": row["formula"], "world": row["world"],
            "expected": _show(want), "got": _show(got), "ok": got == want,
            **({"note": row["note"]} if "note" in row else {}),
        })
    return rows
