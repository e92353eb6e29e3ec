"""Bi-Gödel operations on [0,1] and on twin values.

Values are ``fractions.Fraction``.  Every operation below decides its case
with ``<=`` / ``<`` only and returns one of its arguments or a bound.  The
symbolic order-type engine in ``gmk.decide`` relies on that: it passes
atom objects that answer comparisons lazily.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

ZERO = Fraction(0)
ONE = Fraction(1)


def value(x) -> Fraction:
    """Parse "num/den", ints, or Fractions into a checked Value."""
    if isinstance(x, str):
        q = Fraction(x.strip())
    elif isinstance(x, float):
        raise TypeError("floats are not accepted, use 'num/den' strings")
    else:
        q = Fraction(x)
    if q < 0 or q > 1:
        raise ValueError(f"value {q} outside [0,1]")
    return q


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def g_impl(a, b):
    return ONE if a <= b else b


def g_coimpl(a, b):
    return ZERO if a <= b else a


def g_neg(a):
    return ONE if a <= ZERO else ZERO


def g_delta(a):
    return ONE if ONE <= a else ZERO


def g_meet(a, b):
    return a if a <= b else b


def g_join(a, b):
    return b if a <= b else a


def inf_of(xs: Iterable):
    out = ONE
    for x in xs:
        if x < out:
            out = x
    return out


def sup_of(xs: Iterable):
    out = ZERO
    for x in xs:
        if out < x:
            out = x
    return out


class TwinValue(NamedTuple):
    t: Fraction  # support of truth
    f: Fraction  # support of falsity

    def __str__(self):
        return f"({fmt(self.t)}, {fmt(self.f)})"


TRUE = TwinValue(ONE, ZERO)
FALSE = TwinValue(ZERO, ONE)
BOTH = TwinValue(ONE, ONE)
NEITHER = TwinValue(ZERO, ZERO)


def twin_apply(connective: str, *args: TwinValue) -> TwinValue:
    """Propositional connectives on twin values.

    ``connective`` uses the formula op names: "neg", "~", "tri", "&", "|",
    "->", "-<".
    """
    if connective == "neg":
        (a,) = args
        return TwinValue(a.f, a.t)
    if connective == "~":
        (a,) = args
        return TwinValue(g_neg(a.t), g_coimpl(ONE, a.f))
    if connective == "tri":
        (a,) = args
        return TwinValue(g_delta(a.t), g_neg(g_neg(a.f)))
    a, b = args
    if connective == "&":
        return TwinValue(g_meet(a.t, b.t), g_join(a.f, b.f))
    if connective == "|":
        return TwinValue(g_join(a.t, b.t), g_meet(a.f, b.f))
    if connective == "->":
        return TwinValue(g_impl(a.t, b.t), g_coimpl(b.f, a.f))
    if connective == "-<":
        return TwinValue(g_coimpl(a.t, b.t), g_impl(b.f, a.f))
    raise ValueError(f"unknown connective {connective!r}")


def single_apply(connective: str, *args):
    if connective == "~":
        return g_neg(args[0])
    if connective == "tri":
        return g_delta(args[0])
    a, b = args
    if connective == "&":
        return g_meet(a, b)
    if connective == "|":
        return g_join(a, b)
    if connective == "->":
        return g_impl(a, b)
    if connective == "-<":
        return g_coimpl(a, b)
    raise ValueError(f"connective {connective!r} has no single-valuation reading")
