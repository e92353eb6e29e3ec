"""Hilbert calculi: schema library, derivation checking, soundness probe.

Schemas are formulas whose variables ``phi``, ``chi`` and ``psi`` are
metavariables.  Matching is a single simultaneous walk of schema and
candidate; a metavariable binds on its first occurrence and must meet an
identical formula on every later one.  The checker verifies derivations,
it never searches for them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from .formula import (
    BOX, DIA, IMP, STANDARD, Binary, Const, Modal, Unary, Var, as_formula, box, dia, impl,
    iter_nodes, parse, to_text, tri,
)
from .gvalue import ONE
from .kripke import single_evaluator
from .sampling import random_formula, random_frame, random_single_model

METAVARS = ("phi", "chi", "psi")

_PROPOSITIONAL = {
    "A1": "(phi -> chi) -> ((chi -> psi) -> (phi -> psi))",
    "A2a": "phi -> (phi | chi)",
    "A2b": "chi -> (phi | chi)",
    "A2c": "(phi -> psi) -> ((chi -> psi) -> ((phi | chi) -> psi))",
    "A3a": "(phi & chi) -> phi",
    "A3b": "(phi & chi) -> chi",
    "A3c": "(phi -> chi) -> ((phi -> psi) -> (phi -> (chi & psi)))",
    "A4a": "(phi -> (chi -> psi)) -> ((phi & chi) -> psi)",
    "A4b": "((phi & chi) -> psi) -> (phi -> (chi -> psi))",
    "A5": "~phi -> (phi -> chi)",
    "A6": "(phi -> chi) | (chi -> phi)",
    "A7": "tri phi | ~tri phi",
    "A8a": "tri (phi -> chi) -> (tri phi -> tri chi)",
    "A8b": "tri (phi | chi) -> (tri phi | tri chi)",
    "A9a": "tri phi -> phi",
    "A9b": "tri phi -> tri tri phi",
    # the constants and ⤙ are primitive here, so they get defining axioms
    "TOP": "1",
    "BOT": "0 -> phi",
    "CO1": "(phi -< chi) -> (phi & ~tri (phi -> chi))",
    "CO2": "(phi & ~tri (phi -> chi)) -> (phi -< chi)",
}

_MODAL_F = {
    "Z": "~<>0",
    "K1": "[](phi -> chi) -> ([]phi -> []chi)",
    "K2": "<>(phi | chi) -> (<>phi | <>chi)",
    "FS1": "<>(phi -> chi) -> ([]phi -> <>chi)",
    "FS2": "(<>phi -> []chi) -> [](phi -> chi)",
}

_MODAL_C = {
    "SDD": "~tri (<>phi -> <>chi) -> <>~tri (phi -> chi)",
    "Cr1": "[](phi | chi) -> ([]phi | <>chi)",
    "Cr2": "tri []phi -> []tri phi",
}

RULES = ("mp", "tri-nec", "nec", "nec-dia")


class DerivationError(ValueError):
    pass


def _reindex(f, index):
    """Put every modality of a schema on relation ``index``."""
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _reindex(f.child, index))
    if isinstance(f, Binary):
        return Binary(f.op, _reindex(f.left, index), _reindex(f.right, index))
    return Modal(f.shape, f.family, f.polarity, index, _reindex(f.child, index))


def _plain_index(f):
    """Index 1 and no index are the same relation."""
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _plain_index(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, _plain_index(f.left), _plain_index(f.right))
    return Modal(f.shape, f.family, f.polarity, None if f.index == 1 else f.index, _plain_index(f.child))


@dataclass
class Calculus:
    name: str
    schemas: Dict[str, object]
    rules: tuple
    frames: Optional[str] = None  # fuzzy | crisp | None (propositional)
    indices: tuple = (None,)

    def schema(self, name: str):
        try:
            return self.schemas[name]
        except KeyError:
            raise DerivationError(f"{self.name} has no axiom {name!r}") from None


def _parsed(table):
    return {k: parse(v) for k, v in table.items()}


def _build():
    prop = _parsed(_PROPOSITIONAL)
    mf = _parsed(_MODAL_F)
    mc = _parsed(_MODAL_C)
    two = dict(prop)
    for k, v in mf.items():
        two[k] = v
        two[k + ".2"] = _reindex(v, 2)
    return {
        "hg-tri": Calculus("hg-tri", prop, ("mp", "tri-nec")),
        "hkbig-f": Calculus("hkbig-f", {**prop, **mf}, RULES, "fuzzy"),
        "hkbig-c": Calculus("hkbig-c", {**prop, **mf, **mc}, RULES, "crisp"),
        "hkbig2-f": Calculus("hkbig2-f", two, RULES, "fuzzy-bi", (None, 2)),
    }


CALCULI = _build()


def calculus(name) -> Calculus:
    if isinstance(name, Calculus):
        return name
    try:
        return CALCULI[name]
    except KeyError:
        raise DerivationError(f"unknown calculus {name!r}") from None


# -- schemas -----------------------------------------------------------------

def schema_metavars(schema) -> set:
    return {g.name for g in iter_nodes(schema) if isinstance(g, Var) and g.name in METAVARS}


def instantiate(schema, subst: Mapping[str, object]):
    """Replace each metavariable by its formula."""
    schema = as_formula(schema)
    subst = {k: as_formula(v) for k, v in subst.items()}
    missing = schema_metavars(schema) - set(subst)
    if missing:
        raise DerivationError(f"no substitution for {', '.join(sorted(missing))}")
    return _inst(schema, subst)


def _inst(f, subst):
    if isinstance(f, Var):
        return subst[f.name] if (f.name in METAVARS and not f.starred) else f
    if isinstance(f, Const):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _inst(f.child, subst))
    if isinstance(f, Binary):
        return Binary(f.op, _inst(f.left, subst), _inst(f.right, subst))
    return f.with_child(_inst(f.child, subst))


def match(schema, f) -> Optional[dict]:
    """Substitution making the schema equal to f, or None."""
    binding: dict = {}
    stack = [(as_formula(schema), as_formula(f))]
    while stack:
        s, g = stack.pop()
        if isinstance(s, Var) and s.name in METAVARS and not s.starred:
            got = binding.get(s.name)
            if got is None:
                binding[s.name] = g
            elif got != g:
                return None
            continue
        if type(s) is not type(g):
            return None
        if isinstance(s, (Var, Const)):
            if s != g:
                return None
        elif isinstance(s, Unary):
            if s.op != g.op:
                return None
            stack.append((s.child, g.child))
        elif isinstance(s, Binary):
            if s.op != g.op:
                return None
            stack.append((s.left, g.left))
            stack.append((s.right, g.right))
        else:
            if s.descriptor != g.descriptor:
                return None
            stack.append((s.child, g.child))
    return binding


# -- derivations -----------------------------------------------------------------

@dataclass
class ProofVerdict:
    accepted: bool
    step: Optional[int] = None  # 1-based step that failed
    reason: str = ""
    formulas: List[object] = field(default_factory=list)
    depends: List[bool] = field(default_factory=list)

    def to_json(self) -> dict:
        d = {"status": "accepted" if self.accepted else "rejected",
             "formulas": [to_text(f) for f in self.formulas],
             "depends_on_gamma": list(self.depends)}
        if not self.accepted:
            d["step"] = self.step
            d["reason"] = self.reason
        return d


def _premise(idx, n_done, pos):
    if not isinstance(idx, int) or not 1 <= idx <= n_done:
        raise DerivationError(f"step {pos} cites {idx!r}, which is not an earlier step")
    return idx - 1


def _justify(step, pos, calc, gamma, formulas, depends, norm):
    by = step.get("by")
    given = as_formula(step["formula"]) if step.get("formula") is not None else None
    n = len(formulas)
    if by in ("hyp", "hypothesis", "gamma"):
        if given is None:
            raise DerivationError("hypothesis step needs a formula")
        if norm(given) not in gamma:
            raise DerivationError(f"{to_text(given)} is not in Γ")
        return given, True
    if isinstance(by, str) and by.startswith("axiom:"):
        schema = calc.schema(by[len("axiom:"):])
        if step.get("subst") is not None:
            inst = instantiate(schema, step["subst"])
            if given is not None and norm(inst) != norm(given):
                raise DerivationError(f"substitution gives {to_text(inst)}, not {to_text(given)}")
            return inst, False
        if given is None:
            raise DerivationError("axiom step needs a formula or a substitution")
        if match(norm(schema), norm(given)) is None:
            raise DerivationError(f"{to_text(given)} is not an instance of {by[6:]}")
        return given, False
    if by not in calc.rules:
        raise DerivationError(f"rule {by!r} is not available in {calc.name}")
    src = step.get("from")
    if not isinstance(src, (list, tuple)):
        src = [src]
    prem = [_premise(i, n, pos) for i in src]
    dep = any(depends[i] for i in prem)
    if by == "mp":
        if len(prem) != 2:
            raise DerivationError("mp takes two premises")
        a, b = (norm(formulas[i]) for i in prem)
        if isinstance(b, Binary) and b.op == IMP and b.left == a:
            out = b.right
        elif isinstance(a, Binary) and a.op == IMP and a.left == b:
            out = a.right
        else:
            raise DerivationError("mp premises do not have the shapes φ and φ→χ")
    else:
        if len(prem) != 1:
            raise DerivationError(f"{by} takes one premise")
        if dep:
            raise DerivationError(f"{by} applied to a step that depends on Γ")
        a = norm(formulas[prem[0]])
        index = step.get("index")
        if index is not None and index not in calc.indices and not (index == 1 and None in calc.indices):
            raise DerivationError(f"{calc.name} has no modality index {index}")
        index = None if index in (None, 1) else index
        if by == "tri-nec":
            out = tri(a)
        elif by == "nec":
            out = box(a, index)
        else:
            if not (isinstance(a, Binary) and a.op == IMP):
                raise DerivationError("nec-dia needs a premise of the form φ→χ")
            out = impl(dia(a.left, index), dia(a.right, index))
    if given is not None and norm(given) != norm(out):
        raise DerivationError(f"rule gives {to_text(out)}, not {to_text(given)}")
    return (given if given is not None else out), dep


def check_derivation(d, gamma: Sequence = (), calc=None) -> ProofVerdict:
    """Check a derivation given as a dict (the JSON format) or a list of steps.

    Steps are dicts with ``by`` in {hyp, axiom:NAME, mp, nec, nec-dia,
    tri-nec}, optional ``formula``, ``subst`` and 1-based ``from`` indices.
    Rule results may omit the formula; it is then computed.
    """
    if isinstance(d, dict):
        steps = d["steps"]
        gamma = list(gamma) or d.get("gamma", [])
        calc = calc or d.get("calculus", "hkbig-f")
    else:
        steps = d
    calc = calculus(calc or "hkbig-f")
    norm = _plain_index if 2 in calc.indices else (lambda f: f)
    gamma_set = {norm(as_formula(g)) for g in gamma}
    formulas: list = []
    depends: list = []
    for pos, step in enumerate(steps, 1):
        try:
            f, dep = _justify(step, pos, calc, gamma_set, formulas, depends, norm)
        except DerivationError as e:
            return ProofVerdict(False, pos, str(e), formulas, depends)
        formulas.append(f)
        depends.append(dep)
    if not formulas:
        return ProofVerdict(False, 0, "empty derivation")
    return ProofVerdict(True, None, "", formulas, depends)


# -- soundness probe ---------------------------------------------------------

def _model_pool(rng, calc, n_models, max_worlds, max_den, crisp):
    kind = calc.frames if crisp is None else ("crisp" if crisp else "fuzzy")
    pool = []
    for _ in range(n_models):
        if kind is None:
            fr = random_frame(rng, 1, max_den)
        else:
            fr = random_frame(rng, max_worlds, max_den, crisp=(kind == "crisp"), bi=(calc.frames == "fuzzy-bi"))
        pool.append(single_evaluator(random_single_model(rng, fr, ("p", "q"), max_den)))
    return pool


def soundness_probe(calc, trials: int = 100, n_models: int = 200, seed: int = 0,
                    depth: int = 2, max_worlds: int = 4, max_den: int = 6,
                    crisp: Optional[bool] = None, schemas: Optional[Sequence[str]] = None) -> dict:
    """Instantiate each schema ``trials`` times and evaluate on ``n_models``
    random models of the calculus's frame class.

    Returns {schema: {"instances", "failures", "example"}} where a failure is
    a (instance, model, world) with value below 1.
    """
    calc = calculus(calc)
    rng = random.Random(seed)
    pool = _model_pool(rng, calc, n_models, max_worlds, max_den, crisp)
    modal = "none" if calc.frames is None else "standard"
    report = {}
    for name in (schemas or sorted(calc.schemas)):
        schema = calc.schema(name)
        mv = sorted(schema_metavars(schema))
        fails, example = 0, None
        for _ in range(trials if mv else 1):
            sub = {v: random_formula(rng, depth, ("p", "q"), modal=modal, indexed=2 in calc.indices) for v in mv}
            inst = instantiate(schema, sub)
            for ev in pool:
                for w in ev.frame.worlds:
                    x = ev.ev(inst, w)
                    if x < ONE:
                        fails += 1
                        if example is None:
                            example = {"instance": to_text(inst), "world": w, "value": str(x)}
        report[name] = {"instances": trials if mv else 1, "failures": fails, "example": example}
    return report
