"""Lazy order-type search.

Gödel-style evaluation only ever compares values, so whether a valuation
refutes a formula depends only on how the atom values sit relative to each
other and to the anchors (0, 1 and the frame weights).  We evaluate with
symbolic atoms; the first comparison the current partial order cannot
answer raises ``Undecided`` and the search branches on <, = and >.
Each branch re-runs the evaluation from scratch, which keeps the
evaluator code shared with the exact one.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence


class Undecided(Exception):
    def __init__(self, i, j):
        self.i, self.j = i, j


class OrderState:
    """Transitively closed partial knowledge about a total preorder.

    Four bitsets per node: ``up[i]`` holds j with i <= j, ``sup[i]`` those
    with i < j, and ``down`` / ``sdown`` the converse.
    """

    __slots__ = ("up", "sup", "down", "sdown")

    def __init__(self, n=0, anchors: Sequence[Fraction] = ()):
        if n == 0 and not anchors:
            return
        k = len(anchors)
        total = k + n
        self.up = [1 << i for i in range(total)]
        self.down = [1 << i for i in range(total)]
        self.sup = [0] * total
        self.sdown = [0] * total
        # anchors are strictly increasing
        for a in range(k):
            above = ((1 << k) - 1) & ~((1 << (a + 1)) - 1)
            below = (1 << a) - 1
            self.sup[a] = above
            self.up[a] |= above
            self.sdown[a] = below
            self.down[a] |= below
        for x in range(k, total):
            self.add(0, x, False)
            self.add(x, k - 1, False)

    def copy(self):
        s = OrderState()
        s.up = self.up[:]
        s.sup = self.sup[:]
        s.down = self.down[:]
        s.sdown = self.sdown[:]
        return s

    def le_known(self, i, j):
        return (self.up[i] >> j) & 1

    def lt_known(self, i, j):
        return (self.sup[i] >> j) & 1

    def add(self, i, j, strict):
        """Record i <= j (or i < j) and close transitively."""
        Di, SDi = self.down[i], self.sdown[i]
        Uj, SUj = self.up[j], self.sup[j]
        a_bits = Di
        while a_bits:
            low = a_bits & -a_bits
            a = low.bit_length() - 1
            a_bits ^= low
            self.up[a] |= Uj
            self.sup[a] |= Uj if (strict or (SDi >> a) & 1) else SUj
        b_bits = Uj
        while b_bits:
            low = b_bits & -b_bits
            b = low.bit_length() - 1
            b_bits ^= low
            self.down[b] |= Di
            self.sdown[b] |= Di if (strict or (SUj >> b) & 1) else SDi

    def options(self, i, j):
        """Consistent refinements for an undecided pair: '<', '=', '>'."""
        out = []
        if not self.le_known(j, i):
            out.append("<")
        if not self.lt_known(i, j) and not self.lt_known(j, i):
            out.append("=")
        if not self.le_known(i, j):
            out.append(">")
        return out

    def refine(self, i, j, how):
        s = self.copy()
        if how == "<":
            s.add(i, j, True)
        elif how == ">":
            s.add(j, i, True)
        else:
            s.add(i, j, False)
            s.add(j, i, False)
        return s


class Context:
    """Holds the current order state and the anchor lookup for atoms."""

    def __init__(self, anchors: Sequence[Fraction], n_atoms: int):
        self.anchors = list(anchors)
        self.anchor_index = {a: i for i, a in enumerate(self.anchors)}
        self.by_id = {id(a): i for i, a in enumerate(self.anchors)}
        self.k = len(self.anchors)
        self.n = n_atoms
        self.state = OrderState(n_atoms, self.anchors)
        self.atoms = [Atom(self, self.k + t) for t in range(n_atoms)]

    def register(self, values):
        """Pre-register value objects (frame weights, constants) by identity."""
        for x in values:
            self.by_id[id(x)] = self.anchor_index[x]

    def node(self, x):
        if type(x) is Atom:
            return x.idx
        got = self.by_id.get(id(x))
        if got is not None:
            return got
        try:
            return self.anchor_index[x]
        except KeyError:
            raise ValueError(f"value {x} is not an anchor") from None

    def le(self, i, j):
        s = self.state
        if (s.up[i] >> j) & 1:
            return True
        if (s.sup[j] >> i) & 1:
            return False
        raise Undecided(i, j)

    def lt(self, i, j):
        s = self.state
        if (s.sup[i] >> j) & 1:
            return True
        if (s.up[j] >> i) & 1:
            return False
        raise Undecided(i, j)

    def realize(self) -> List[Fraction]:
        """Concrete values for the atoms consistent with everything recorded."""
        s = self.state
        total = self.k + self.n
        # order nodes by how many nodes are known strictly below them
        key = []
        for x in range(total):
            below = s.down[x] & ~s.up[x]
            key.append(bin(below).count("1"))
        classes = {}
        for x in range(total):
            eq = s.down[x] & s.up[x]
            rep = (eq & -eq).bit_length() - 1
            classes.setdefault(rep, []).append(x)
        reps = sorted(classes, key=lambda r: (key[r], r))
        values = [None] * total
        # anchors fixed; atom classes spread evenly between neighbouring anchors
        pending = []
        last = Fraction(0)
        for r in reps:
            members = classes[r]
            anchor = next((m for m in members if m < self.k), None)
            if anchor is None:
                pending.append(members)
                continue
            hi = self.anchors[anchor]
            for t, grp in enumerate(pending, 1):
                v = last + (hi - last) * t / (len(pending) + 1)
                for m in grp:
                    values[m] = v
            pending = []
            last = hi
            for m in members:
                values[m] = hi
        if pending:
            raise AssertionError("atoms above the top anchor")
        return values[self.k:]


class Atom:
    """Symbolic value; comparisons consult the context's order state."""

    __slots__ = ("ctx", "idx")

    def __init__(self, ctx, idx):
        self.ctx = ctx
        self.idx = idx

    def __le__(self, other):
        return self.ctx.le(self.idx, self.ctx.node(other))

    def __lt__(self, other):
        return self.ctx.lt(self.idx, self.ctx.node(other))

    def __ge__(self, other):
        return self.ctx.le(self.ctx.node(other), self.idx)

    def __gt__(self, other):
        return self.ctx.lt(self.ctx.node(other), self.idx)

    def __eq__(self, other):
        raise TypeError("symbolic atoms only support ordering comparisons")

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Atom({self.idx})"


def search(ctx: Context, run: Callable[[dict], bool], limit: Optional[int] = None):
    """Depth-first search over order refinements.

    ``run(memo)`` evaluates under ``ctx.state`` and returns True when the
    current (possibly partial) order refutes the target.  Values stored in
    ``memo`` were computed from facts that every refinement keeps, so a
    branch starts from its parent's memo.  Returns the refuting state or
    None.  Branch order is <, =, > so results are deterministic.
    """
    stack = [(ctx.state, {})]
    steps = 0
    while stack:
        state, memo = stack.pop()
        ctx.state = state
        steps += 1
        if limit is not None and steps > limit:
            raise RuntimeError("order search step limit exceeded")
        try:
            if run(memo):
                return state
        except Undecided as u:
            opts = state.options(u.i, u.j)
            last = len(opts) - 1
            for n, how in enumerate(reversed(opts)):
                stack.append((state.refine(u.i, u.j, how), memo if n == last else dict(memo)))
    return None
