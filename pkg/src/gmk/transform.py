"""Syntactic translations: ¬-NNF, star / unstar, the ∂ dual, the modality
family swaps, the bang translation and the embedding pair."""
from __future__ import annotations

from .formula import (
    AND, BOX, COIMP, DIA, IMP, INFO, NEG, ONE, OR, OVERLINE, PLAIN, SIM, STANDARD, TRI, ZERO,
    Binary, Const, Modal, Unary, Var, as_formula, box, coimpl, conj, dia, disj, impl,
    iter_nodes, neg, sim, to_text, tri,
)


class TranslationError(ValueError):
    pass


_NEG_MODAL = {
    # (shape, family, polarity) -> negated-dual descriptor
    (BOX, STANDARD, PLAIN): (DIA, STANDARD, OVERLINE),
    (DIA, STANDARD, PLAIN): (BOX, STANDARD, OVERLINE),
    (BOX, STANDARD, OVERLINE): (DIA, STANDARD, PLAIN),
    (DIA, STANDARD, OVERLINE): (BOX, STANDARD, PLAIN),
    (BOX, INFO, PLAIN): (BOX, INFO, OVERLINE),
    (DIA, INFO, PLAIN): (DIA, INFO, OVERLINE),
    (BOX, INFO, OVERLINE): (BOX, INFO, PLAIN),
    (DIA, INFO, OVERLINE): (DIA, INFO, PLAIN),
}


def to_nnf(f):
    """Push ¬ down to the variables."""
    return _nnf(as_formula(f), False)


def _nnf(f, negated):
    if isinstance(f, Var):
        return neg(f) if negated else f
    if isinstance(f, Const):
        if not negated or f.symbol == "B":
            return f
        return ONE if f.symbol == "0" else ZERO
    if isinstance(f, Unary):
        if f.op == NEG:
            return _nnf(f.child, not negated)
        inner = _nnf(f.child, negated)
        if not negated:
            return Unary(f.op, inner)
        if f.op == SIM:
            return coimpl(ONE, inner)
        return sim(sim(inner))
    if isinstance(f, Binary):
        l, r = _nnf(f.left, negated), _nnf(f.right, negated)
        if not negated:
            return Binary(f.op, l, r)
        if f.op == AND:
            return disj(l, r)
        if f.op == OR:
            return conj(l, r)
        if f.op == IMP:
            return coimpl(r, l)
        return impl(r, l)
    inner = _nnf(f.child, negated)
    if not negated:
        return f.with_child(inner)
    if f.index is not None:
        # □₁ ↔ ◇₂ and so on: the index flips with the shape
        shape = DIA if f.shape == BOX else BOX
        return Modal(shape, STANDARD, PLAIN, 3 - f.index, inner)
    shape, fam, pol = _NEG_MODAL[(f.shape, f.family, f.polarity)]
    return Modal(shape, fam, pol, None, inner)


def is_nnf(f) -> bool:
    for g in iter_nodes(as_formula(f)):
        if isinstance(g, Unary) and g.op == NEG and not isinstance(g.child, Var):
            return False
    return True


def star(f):
    """Replace each literal ¬p by the fresh variable p*."""
    f = as_formula(f)
    if not is_nnf(f):
        raise TranslationError("star expects a ¬-NNF formula")
    if any(isinstance(g, Var) and g.starred for g in iter_nodes(f)):
        raise TranslationError("input already uses starred variables")
    return _star(f)


def _star(f):
    if isinstance(f, Unary) and f.op == NEG:
        return Var(f.child.name, True)
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _star(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, _star(f.left), _star(f.right))
    return f.with_child(_star(f.child))


def unstar(f):
    f = as_formula(f)
    if isinstance(f, Var):
        return neg(Var(f.name)) if f.starred else f
    if isinstance(f, Const):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, unstar(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, unstar(f.left), unstar(f.right))
    return f.with_child(unstar(f.child))


def _partial_modal(f, child, mono):
    # plain / index-1 modalities turn into index-2 ones and back
    bar = f.polarity == OVERLINE or f.index == 2
    if f.family == STANDARD:
        shape = DIA if f.shape == BOX else BOX
    else:
        shape = f.shape
    if mono:
        return Modal(shape, STANDARD, PLAIN, None, child)
    return Modal(shape, STANDARD, PLAIN, 1 if bar else 2, child)


def partial(f, mono: bool = False):
    """The ∂ dual of a ¬-free formula (a formula of the two-relation language).

    With ``mono=True`` the output uses unindexed modalities only.
    """
    f = as_formula(f)
    if any(isinstance(g, Unary) and g.op == NEG for g in iter_nodes(f)):
        raise TranslationError("∂ is defined on ¬-free formulas; apply to_nnf and star first")
    return _partial(f, mono)


def _partial(f, mono):
    if isinstance(f, Var):
        return Var(f.name, not f.starred)
    if isinstance(f, Const):
        return ZERO if f.symbol == "1" else ONE
    if isinstance(f, Unary):
        inner = _partial(f.child, mono)
        if f.op == SIM:
            return coimpl(ONE, inner)
        return sim(sim(inner))
    if isinstance(f, Binary):
        l, r = _partial(f.left, mono), _partial(f.right, mono)
        if f.op == AND:
            return disj(l, r)
        if f.op == OR:
            return conj(l, r)
        if f.op == IMP:
            return coimpl(r, l)
        return impl(r, l)
    return _partial_modal(f, _partial(f.child, mono), mono)


def normalize_indices(f):
    """Read □₁ as □ and □₂ as □̄ (the identification used by the twin evaluator)."""
    f = as_formula(f)
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, normalize_indices(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, normalize_indices(f.left), normalize_indices(f.right))
    inner = normalize_indices(f.child)
    if f.index is None:
        return f.with_child(inner)
    return Modal(f.shape, STANDARD, OVERLINE if f.index == 2 else PLAIN, None, inner)


def _swap_family(f, src, dst):
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _swap_family(f.child, src, dst))
    if isinstance(f, Binary):
        return Binary(f.op, _swap_family(f.left, src, dst), _swap_family(f.right, src, dst))
    if f.family != src or f.index is not None:
        raise TranslationError(f"unexpected modality {f.descriptor}")
    return Modal(f.shape, dst, f.polarity, None, _swap_family(f.child, src, dst))


def circ(f):
    """■ ◆ (and their overline forms) become □ ◇. Input must be ¬-free."""
    f = as_formula(f)
    if any(isinstance(g, Unary) and g.op == NEG for g in iter_nodes(f)):
        raise TranslationError("circ expects a ¬-free formula")
    return _swap_family(f, INFO, STANDARD)


def plus_bullet(f):
    """□ ◇ (and their overline forms) become ■ ◆."""
    return _swap_family(as_formula(f), STANDARD, INFO)


def _bang(f):
    if isinstance(f, Var):
        if f.starred:
            raise TranslationError("bang fragment has no starred variables")
        return conj(tri(f), neg(sim(tri(f))))
    if isinstance(f, Const):
        if f.symbol != "0":
            raise TranslationError("bang fragment has only the constant 0")
        return f
    if isinstance(f, Binary):
        if f.op not in (AND, OR, IMP):
            raise TranslationError(f"bang fragment has no {f.op}")
        return Binary(f.op, _bang(f.left), _bang(f.right))
    if isinstance(f, Modal) and f.descriptor == (BOX, STANDARD, PLAIN, None):
        return tri(box(_bang(f.child)))
    raise TranslationError(f"bang fragment has no {to_text(f)}")


def bang(f):
    """Translation of {0, ∧, ∨, →, □} formulas into two-valued twin formulas."""
    return _bang(as_formula(f))


def to_kbig2(f):
    """Truth-support reading of a ¬-free twin formula in the two-relation language:
    informational modalities become standard ones, overline ones get index 2."""
    f = as_formula(f)
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        if f.op == NEG:
            raise TranslationError("¬ left in formula")
        return Unary(f.op, to_kbig2(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, to_kbig2(f.left), to_kbig2(f.right))
    inner = to_kbig2(f.child)
    if f.index is not None:
        return f.with_child(inner)
    return Modal(f.shape, STANDARD, PLAIN, 2 if f.polarity == OVERLINE else None, inner)


def embedding_pair(f, mono: bool = False):
    """(φ*, ∼φ∂) with the first component written in the two-relation language.

    ``φ*∧∼φ∂`` is valid on a pointed frame exactly when φ is strongly valid there.
    For formulas with ■ ◆ the first component is (φ*)°.
    """
    f = as_formula(f)
    fs = star(to_nnf(f))
    first = to_kbig2(fs)
    if mono:
        first = _drop_indices(first)
    return first, sim(partial(fs, mono=mono))


def _drop_indices(f):
    if isinstance(f, (Var, Const)):
        return f
    if isinstance(f, Unary):
        return Unary(f.op, _drop_indices(f.child))
    if isinstance(f, Binary):
        return Binary(f.op, _drop_indices(f.left), _drop_indices(f.right))
    return Modal(f.shape, f.family, f.polarity, None, _drop_indices(f.child))


def embedding(f, mono: bool = False):
    a, b = embedding_pair(f, mono)
    return conj(a, b)
