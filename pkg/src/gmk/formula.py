"""Formula trees, the concrete syntax, and structural queries.

Nodes are frozen dataclasses, so formulas can be dict keys and set members.
The hash is computed once at construction because formulas get hashed a
lot during evaluation and translation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

BOX, DIA = "box", "diamond"
STANDARD, INFO = "standard", "informational"
PLAIN, OVERLINE = "plain", "overline"

# unary op names
SIM, NEG, TRI = "~", "neg", "tri"
# binary op names
AND, OR, IMP, COIMP = "&", "|", "->", "-<"

STAR_SUFFIX = "_star"


class FormulaSyntaxError(ValueError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} at position {pos}"
        super().__init__(msg)


@dataclass(frozen=True)
class Var:
    name: str
    starred: bool = False
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not _is_ident(self.name) or self.name.endswith(STAR_SUFFIX) or self.name in _KEYWORDS:
            raise ValueError(f"bad variable name {self.name!r}")
        object.__setattr__(self, "_h", hash(("v", self.name, self.starred)))

    def __hash__(self):
        return self._h

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const:
    symbol: str  # '0', '1' or 'B'
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.symbol not in ("0", "1", "B"):
            raise ValueError(f"unknown constant {self.symbol!r}")
        object.__setattr__(self, "_h", hash(("c", self.symbol)))

    def __hash__(self):
        return self._h

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.op not in (SIM, NEG, TRI):
            raise ValueError(f"unknown unary connective {self.op!r}")
        object.__setattr__(self, "_h", hash(("u", self.op, self.child._h)))

    def __hash__(self):
        return self._h

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.op not in (AND, OR, IMP, COIMP):
            raise ValueError(f"unknown binary connective {self.op!r}")
        object.__setattr__(self, "_h", hash(("b", self.op, self.left._h, self.right._h)))

    def __hash__(self):
        return self._h

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Modal:
    shape: str
    family: str
    polarity: str
    index: Optional[int]
    child: "Formula"
    _h: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.shape not in (BOX, DIA) or self.family not in (STANDARD, INFO):
            raise ValueError("bad modality descriptor")
        if self.polarity not in (PLAIN, OVERLINE) or self.index not in (None, 1, 2):
            raise ValueError("bad modality descriptor")
        if self.index is not None and (self.family != STANDARD or self.polarity != PLAIN):
            raise ValueError("indexed modalities are standard and plain")
        object.__setattr__(
            self, "_h",
            hash(("m", self.shape, self.family, self.polarity, self.index, self.child._h)))

    def __hash__(self):
        return self._h

    def __str__(self):
        return to_text(self)

    @property
    def descriptor(self):
        return (self.shape, self.family, self.polarity, self.index)

    def with_child(self, child):
        return Modal(self.shape, self.family, self.polarity, self.index, child)


Formula = Union[Var, Const, Unary, Binary, Modal]

ZERO = Const("0")
ONE = Const("1")
BOTH = Const("B")


# -- small constructors ------------------------------------------------------

def var(name: str, starred: bool = False) -> Var:
    return Var(name, starred)


def sim(f):
    return Unary(SIM, f)


def neg(f):
    return Unary(NEG, f)


def tri(f):
    return Unary(TRI, f)


def conj(a, b):
    return Binary(AND, a, b)


def disj(a, b):
    return Binary(OR, a, b)


def impl(a, b):
    return Binary(IMP, a, b)


def coimpl(a, b):
    return Binary(COIMP, a, b)


def iff(a, b):
    return conj(impl(a, b), impl(b, a))


def box(f, index=None):
    return Modal(BOX, STANDARD, PLAIN, index, f)


def dia(f, index=None):
    return Modal(DIA, STANDARD, PLAIN, index, f)


def box_bar(f):
    return Modal(BOX, STANDARD, OVERLINE, None, f)


def dia_bar(f):
    return Modal(DIA, STANDARD, OVERLINE, None, f)


def ibox(f, overline=False):
    return Modal(BOX, INFO, OVERLINE if overline else PLAIN, None, f)


def idia(f, overline=False):
    return Modal(DIA, INFO, OVERLINE if overline else PLAIN, None, f)


def boxes(n: int, f):
    for _ in range(n):
        f = box(f)
    return f


def dias(n: int, f):
    for _ in range(n):
        f = dia(f)
    return f


def lemmon_scott(h: int, i: int, j: int, k: int, p=None):
    """◇^h □^i p -> □^j ◇^k p"""
    p = p if p is not None else Var("p")
    return impl(dias(h, boxes(i, p)), boxes(j, dias(k, p)))


def children(f) -> tuple:
    if isinstance(f, (Var, Const)):
        return ()
    if isinstance(f, Binary):
        return (f.left, f.right)
    return (f.child,)


def iter_nodes(f) -> Iterator:
    """Pre-order walk (with repeats for shared subtrees)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def variables(f) -> set:
    return {g for g in iter_nodes(f) if isinstance(g, Var)}


def subformulas(f) -> set:
    return set(iter_nodes(f))


def subformulas01(f) -> set:
    """Subformulas together with the constants 0 and 1."""
    s = subformulas(f)
    s.add(ZERO)
    s.add(ONE)
    return s


def size(f) -> int:
    return sum(1 for _ in iter_nodes(f))


def modal_depth(f) -> int:
    if isinstance(f, (Var, Const)):
        return 0
    if isinstance(f, Modal):
        return 1 + modal_depth(f.child)
    return max(modal_depth(c) for c in children(f))


def has_neg(f) -> bool:
    return any(isinstance(g, Unary) and g.op == NEG for g in iter_nodes(f))


def modalities(f) -> set:
    return {g.descriptor for g in iter_nodes(f) if isinstance(g, Modal)}


# -- languages ---------------------------------------------------------------

L_TRI = "L△"
L_G2 = "L¬△"  # propositional G² (with ¬, no modalities)
L_BOXDIA = "L△□◇"
L_BOXDIA2 = "L△□◇(2)"
L_NEG_BOXDIA = "L¬△□◇"
L_NEG_INFO = "L¬△■◆"
L_BAR_BOXDIA = "L̄¬△□◇"
L_BAR_INFO = "L̄¬△■◆"

_LANG_PARENTS = {
    L_TRI: (L_BOXDIA, L_G2),
    L_BOXDIA: (L_BOXDIA2, L_NEG_BOXDIA),
    L_G2: (L_NEG_BOXDIA, L_NEG_INFO),
    L_NEG_BOXDIA: (L_BAR_BOXDIA,),
    L_NEG_INFO: (L_BAR_INFO,),
    L_BOXDIA2: (),
    L_BAR_BOXDIA: (),
    L_BAR_INFO: (),
}


def _base_le(a, b):
    if a == b:
        return True
    return any(_base_le(p, b) for p in _LANG_PARENTS[a])


def sublanguage(a: Optional[str], b: Optional[str]) -> bool:
    """Inclusion order on language tags; None (no single language) is top."""
    if b is None:
        return True
    if a is None:
        return False
    a_b, b_b = a.endswith("+B"), b.endswith("+B")
    if a_b and not b_b:
        return False
    return _base_le(a.removesuffix("+B"), b.removesuffix("+B"))


def language_of(f) -> Optional[str]:
    """Least language tag containing f, or None when the formula mixes
    features no single language has (say ■ together with □₂)."""
    neg_ = b_ = std = info = bar = idx = False
    for g in iter_nodes(f):
        if isinstance(g, Const):
            b_ = b_ or g.symbol == "B"
        elif isinstance(g, Unary):
            neg_ = neg_ or g.op == NEG
        elif isinstance(g, Modal):
            if g.family == INFO:
                info = True
            else:
                std = True
            bar = bar or g.polarity == OVERLINE
            idx = idx or g.index is not None
    if idx:
        if neg_ or info or bar:
            return None
        tag = L_BOXDIA2
    elif std and info:
        return None
    elif info:
        tag = L_BAR_INFO if bar else L_NEG_INFO
    elif std:
        if bar:
            tag = L_BAR_BOXDIA
        elif neg_:
            tag = L_NEG_BOXDIA
        else:
            tag = L_BOXDIA
    else:
        tag = L_G2 if neg_ else L_TRI
    return tag + "+B" if b_ else tag


# -- printing ----------------------------------------------------------------

_MODAL_TEXT = {
    (BOX, STANDARD, PLAIN): "[]",
    (DIA, STANDARD, PLAIN): "<>",
    (BOX, STANDARD, OVERLINE): "[^]",
    (DIA, STANDARD, OVERLINE): "<^>",
    (BOX, INFO, PLAIN): "[#]",
    (DIA, INFO, PLAIN): "<#>",
    (BOX, INFO, OVERLINE): "[#^]",
    (DIA, INFO, OVERLINE): "<#^>",
}
_TEXT_MODAL = {v: k for k, v in _MODAL_TEXT.items()}

_LEVEL = {AND: 3, OR: 2, IMP: 1, COIMP: 1}


def _level(f):
    return _LEVEL[f.op] if isinstance(f, Binary) else 4


def to_text(f) -> str:
    if isinstance(f, Var):
        return f.name + (STAR_SUFFIX if f.starred else "")
    if isinstance(f, Const):
        return f.symbol
    if isinstance(f, Unary):
        inner = to_text(f.child)
        if isinstance(f.child, Binary):
            inner = "(" + inner + ")"
            return ("~" if f.op == SIM else f.op) + inner
        if f.op == SIM:
            return "~" + inner
        return f.op + " " + inner
    if isinstance(f, Modal):
        head = _MODAL_TEXT[(f.shape, f.family, f.polarity)]
        inner = to_text(f.child)
        if isinstance(f.child, Binary):
            inner = "(" + inner + ")"
        if f.index is not None:
            return f"{head}{f.index} {inner}"
        return head + inner
    op = f.op
    lv = _LEVEL[op]
    left, right = to_text(f.left), to_text(f.right)
    if op in (AND, OR):
        lp = _level(f.left) < lv
        rp = _level(f.right) <= lv
    elif op == IMP:
        lp = _level(f.left) <= lv
        rp = _level(f.right) < lv or (isinstance(f.right, Binary) and f.right.op == COIMP)
    else:
        lp = _level(f.left) < lv or (isinstance(f.left, Binary) and f.left.op == IMP)
        rp = _level(f.right) <= lv
    if lp:
        left = "(" + left + ")"
    if rp:
        right = "(" + right + ")"
    return f"{left} {op} {right}"


def to_unicode(f) -> str:
    """Human-facing rendering with the usual symbols. Not parsed back
    character-for-character, but every symbol it uses is accepted on input."""
    if isinstance(f, Var):
        return f.name + ("*" if f.starred else "")
    if isinstance(f, Const):
        return f.symbol
    if isinstance(f, Unary):
        sym = {SIM: "∼", NEG: "¬", TRI: "△"}[f.op]
        return sym + to_unicode(f.child)
    if isinstance(f, Modal):
        sym = {BOX: "□", DIA: "◇"}[f.shape] if f.family == STANDARD else {BOX: "■", DIA: "◆"}[f.shape]
        if f.polarity == OVERLINE:
            sym += "̄"
        if f.index:
            sym += "₁" if f.index == 1 else "₂"
        return sym + to_unicode(f.child)
    # binary nodes carry their own parentheses
    sym = {AND: "∧", OR: "∨", IMP: "→", COIMP: "⤙"}[f.op]
    return "(" + to_unicode(f.left) + sym + to_unicode(f.right) + ")"


# -- parsing -----------------------------------------------------------------

_KEYWORDS = {"neg", "tri", "B"}


def _is_ident(s):
    return bool(s) and s[0].isascii() and s[0].isalpha() and all(
        c.isascii() and (c.isalnum() or c == "_") for c in s)


_UNI_UNARY = {"~": SIM, "∼": SIM, "¬": NEG, "△": TRI}
_UNI_BINARY = {"&": AND, "∧": AND, "|": OR, "∨": OR, "→": IMP, "⤙": COIMP}
_UNI_MODAL = {"□": (BOX, STANDARD), "◇": (DIA, STANDARD), "■": (BOX, INFO), "◆": (DIA, INFO)}
_MACRON = "̄"
_FORMULA_START = set("([<~¬∼△□◇■◆01")


def _starts_formula(ch):
    return ch in _FORMULA_START or (ch.isascii() and ch.isalpha())


def tokenize(text: str) -> list:
    """Token list of (kind, value, pos). kinds: var, const, un, bin, modal, lp, rp."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            toks.append(("lp", None, i)); i += 1; continue
        if c == ")":
            toks.append(("rp", None, i)); i += 1; continue
        if text.startswith("->", i):
            toks.append(("bin", IMP, i)); i += 2; continue
        if text.startswith("-<", i):
            toks.append(("bin", COIMP, i)); i += 2; continue
        if c in _UNI_BINARY:
            toks.append(("bin", _UNI_BINARY[c], i)); i += 1; continue
        if c in _UNI_UNARY:
            toks.append(("un", _UNI_UNARY[c], i)); i += 1; continue
        if c in "[<":
            for txt in sorted(_TEXT_MODAL, key=len, reverse=True):
                if text.startswith(txt, i):
                    shape, fam, pol = _TEXT_MODAL[txt]
                    j = i + len(txt)
                    idx = None
                    if fam == STANDARD and pol == PLAIN and j < n and text[j] in "12":
                        k = j + 1
                        while k < n and text[k].isspace():
                            k += 1
                        if k < n and _starts_formula(text[k]):
                            idx = int(text[j])
                            j += 1
                    toks.append(("modal", (shape, fam, pol, idx), i))
                    i = j
                    break
            else:
                raise FormulaSyntaxError(f"unknown token {text[i:i + 3]!r}", i)
            continue
        if c in _UNI_MODAL:
            shape, fam = _UNI_MODAL[c]
            j = i + 1
            pol = PLAIN
            if j < n and text[j] == _MACRON:
                pol = OVERLINE
                j += 1
            idx = None
            if j < n and text[j] in "₁₂":
                if pol == OVERLINE or fam != STANDARD:
                    raise FormulaSyntaxError("index on a non-standard modality", j)
                idx = 1 if text[j] == "₁" else 2
                j += 1
            toks.append(("modal", (shape, fam, pol, idx), i))
            i = j
            continue
        if c in "01":
            toks.append(("const", c, i)); i += 1; continue
        if c.isascii() and c.isalpha():
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            starred = False
            if j < n and text[j] == "*":
                starred = True
                j += 1
            if word in ("neg", "tri"):
                if starred:
                    raise FormulaSyntaxError("cannot star a keyword", i)
                toks.append(("un", word, i))
            elif word == "B":
                toks.append(("const", "B", i))
            else:
                if word.endswith(STAR_SUFFIX):
                    if starred:
                        raise FormulaSyntaxError("doubly starred variable", i)
                    word, starred = word[: -len(STAR_SUFFIX)], True
                if not _is_ident(word) or word in _KEYWORDS:
                    raise FormulaSyntaxError(f"bad variable name {word!r}", i)
                toks.append(("var", (word, starred), i))
            i = j
            continue
        raise FormulaSyntaxError(f"unknown token {c!r}", i)
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        if t is None:
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        self.i += 1
        return t

    def formula(self):
        first = self.disjunction()
        t = self.peek()
        if t is None or t[0] != "bin" or t[1] not in (IMP, COIMP):
            return first
        op = t[1]
        items = [first]
        while True:
            t = self.peek()
            if t is None or t[0] != "bin" or t[1] not in (IMP, COIMP):
                break
            if t[1] != op:
                raise FormulaSyntaxError("mixing -> and -< needs parentheses", t[2])
            self.take()
            items.append(self.disjunction())
        if op == IMP:
            out = items[-1]
            for g in reversed(items[:-1]):
                out = Binary(IMP, g, out)
        else:
            out = items[0]
            for g in items[1:]:
                out = Binary(COIMP, out, g)
        return out

    def disjunction(self):
        out = self.conjunction()
        while (t := self.peek()) is not None and t[0] == "bin" and t[1] == OR:
            self.take()
            out = Binary(OR, out, self.conjunction())
        return out

    def conjunction(self):
        out = self.unary()
        while (t := self.peek()) is not None and t[0] == "bin" and t[1] == AND:
            self.take()
            out = Binary(AND, out, self.unary())
        return out

    def unary(self):
        kind, val, pos = self.take()
        if kind == "un":
            return Unary(val, self.unary())
        if kind == "modal":
            shape, fam, pol, idx = val
            return Modal(shape, fam, pol, idx, self.unary())
        if kind == "var":
            return Var(val[0], val[1])
        if kind == "const":
            return Const(val)
        if kind == "lp":
            inner = self.formula()
            t = self.take()
            if t[0] != "rp":
                raise FormulaSyntaxError("expected ')'", t[2])
            return inner
        raise FormulaSyntaxError("unexpected token", pos)


def parse(text: str):
    p = _Parser(text)
    if not p.toks:
        raise FormulaSyntaxError("empty formula", 0)
    out = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError("trailing input", p.peek()[2])
    return out


def as_formula(x):
    return parse(x) if isinstance(x, str) else x


print_formula = to_text
