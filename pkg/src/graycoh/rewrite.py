"""Rewriting on 1-cells of the free (braided) Gray monoid.

Every rewrite step is a basic structural 2-cell oriented so that a
termination measure strictly drops. Normal forms decide whether two
parallel 1-cells are connected by a 2-cell (and that 2-cell is unique).
"""
from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Optional

from .freecat import (
    BRAIDED,
    PLAIN,
    BoundaryError,
    Crossing,
    OneCell,
    basic_cells_on,
)


class Kind(enum.IntEnum):
    INTERCHANGE = 0
    UNIT_ELIM = 1
    OVERBRAID = 2
    UNDERBRAID = 3
    PSEUDONAT = 4
    TWIST = 5

    def __str__(self) -> str:
        return _KIND_NAMES[self]


_KIND_NAMES = {
    Kind.INTERCHANGE: "Interchange",
    Kind.UNIT_ELIM: "UnitElim",
    Kind.OVERBRAID: "Overbraid",
    Kind.UNDERBRAID: "Underbraid",
    Kind.PSEUDONAT: "Pseudonat",
    Kind.TWIST: "Twist",
}

FORWARD, INVERSE = "forward", "inverse"


class NotARedex(ValueError):
    pass


class Redex(NamedTuple):
    index: int
    kind: Kind
    split: int = 0

    def __str__(self) -> str:
        if self.kind == Kind.UNDERBRAID:
            return f"{self.kind}({self.split})@{self.index}"
        return f"{self.kind}@{self.index}"


@dataclass(frozen=True)
class RewriteStep:
    """One basic 2-cell.

    A forward step rewrites ``before`` to ``after`` by ``redex``; an inverse
    step is the formal inverse of the forward step ``after`` => ``before``,
    so ``redex`` always names a redex of the forward source.
    """

    redex: Redex
    direction: str
    before: OneCell
    after: OneCell

    def inverse(self) -> RewriteStep:
        flipped = INVERSE if self.direction == FORWARD else FORWARD
        return RewriteStep(self.redex, flipped, self.after, self.before)

    def __str__(self) -> str:
        sign = "" if self.direction == FORWARD else "^-1"
        return f"{self.redex}{sign}"


@dataclass(frozen=True)
class RewritePath:
    source: OneCell
    steps: tuple = ()

    @property
    def target(self) -> OneCell:
        return self.steps[-1].after if self.steps else self.source

    def __len__(self) -> int:
        return len(self.steps)

    def inverse(self) -> RewritePath:
        return RewritePath(self.target, tuple(s.inverse() for s in reversed(self.steps)))

    def then(self, other: RewritePath) -> RewritePath:
        if other.source != self.target:
            raise BoundaryError("paths do not chain")
        return RewritePath(self.source, self.steps + other.steps)

    def is_chained(self) -> bool:
        current = self.source
        for s in self.steps:
            if s.before != current:
                return False
            current = s.after
        return True


# ---------------------------------------------------------------------------
# redexes


def _is_above(upper, lower) -> bool:
    """The output of ``upper`` ends at or before the input footprint of ``lower``."""
    return len(lower.prefix) >= len(upper.prefix) + len(upper.produced)


def _is_below(lower, upper) -> bool:
    """The output of ``lower`` starts at or after the end of the input footprint of ``upper``."""
    return len(lower.prefix) >= len(upper.prefix) + len(upper.consumed)


def _interchanges(a, b, mode: str) -> bool:
    """Whether the adjacent disjoint cells a, b should be swapped.

    Cells of the same sort go lower-first. In braided mode a crossing is
    always moved ahead of a disjoint multiarrow, whichever side it is on.
    """
    if mode == BRAIDED and isinstance(a, Crossing) != isinstance(b, Crossing):
        return isinstance(b, Crossing) and (_is_above(a, b) or _is_below(a, b))
    return _is_above(a, b)


def _pseudonat_side(c, x: Crossing) -> Optional[str]:
    if isinstance(c, Crossing) and c.trivial:
        return None
    start, stop = len(c.prefix), len(c.prefix) + len(c.produced)
    u0 = len(x.prefix)
    v0 = u0 + len(x.left)
    v1 = v0 + len(x.right)
    if u0 <= start and stop <= v0 and x.right:
        return "left"
    if v0 <= start and stop <= v1 and x.left:
        return "right"
    return None


def _is_overbraid(a, b) -> bool:
    return (
        isinstance(a, Crossing)
        and isinstance(b, Crossing)
        and bool(a.left)
        and bool(b.left)
        and bool(a.right)
        and len(a.right) == len(b.right)
        and len(a.prefix) == len(b.prefix) + len(b.left)
    )


def _twist_blocks(a, b):
    """Blocks (A, B, C) when a = x[B|C] after X.A and b = x[A.C|B] after X."""
    if not (isinstance(a, Crossing) and isinstance(b, Crossing) and a.left and a.right):
        return None
    k = len(b.left) - len(a.right)
    if k >= 1 and b.left[k:] == a.right and b.right == a.left and len(a.prefix) == len(b.prefix) + k:
        return b.left[:k], a.left, a.right
    return None


def _twist_tail(a, b, c) -> Optional[str]:
    """Which braid identity the crossings a, b, c start, if any.

    With strands A B C: "short" is x[B|C]; x[A C|B]; x[A|C] (after B), which
    equals x[A B|C]; x[C A|B]. "long" ends in x[B A|C] instead and equals
    x[A B|C]; x[C A|B]; x[B|C]. Both are composites of basic cells that the
    basic rules cannot join on their own.
    """
    blocks = _twist_blocks(a, b)
    if blocks is None or not isinstance(c, Crossing):
        return None
    A, B, C = blocks
    if c.prefix == b.prefix + B and c.left == A and c.right == C:
        return "short"
    if c.prefix == b.prefix and c.left == B + A and c.right == C:
        return "long"
    return None


def find_redexes(f: OneCell, mode: str = PLAIN, derived: bool = True) -> list[Redex]:
    """All redexes of ``f`` in enumeration order. ``derived=False`` omits Twist.

    This is the hot loop of every batch check, so the adjacency tests of the
    helper predicates above are inlined on precomputed wire positions.
    """
    cells = f.cells
    n = len(cells)
    braided = mode == BRAIDED
    found = []
    crossing = [type(c) is Crossing for c in cells]
    starts = [len(c.prefix) for c in cells]
    ins, outs = [], []
    for c, x in zip(cells, crossing):
        if x:
            k = len(c.left) + len(c.right)
            ins.append(k)
            outs.append(k)
        else:
            ins.append(len(c.inputs))
            outs.append(1)
    for i in range(n):
        a = cells[i]
        ax = crossing[i]
        if i + 1 < n:
            j = i + 1
            b = cells[j]
            bx = crossing[j]
            pa, pb = starts[i], starts[j]
            above = pb >= pa + outs[i]
            if braided and ax != bx:
                swap = bx and (above or pa >= pb + ins[j])
            else:
                swap = above
            if swap:
                found.append(Redex(i, Kind.INTERCHANGE))
            if not braided:
                continue
            if ax and not (a.left and a.right):
                found.append(Redex(i, Kind.UNIT_ELIM))
            if ax and bx and a.left and a.right and b.left and len(a.right) == len(b.right) \
                    and pa == pb + len(b.left):
                found.append(Redex(i, Kind.OVERBRAID))
            if ax and a.left:
                for s in range(1, len(a.right)):
                    found.append(Redex(i, Kind.UNDERBRAID, s))
            if bx and not (ax and not (a.left and a.right)):
                stop = pa + outs[i]
                v0 = pb + len(b.left)
                if (pb <= pa and stop <= v0 and b.right) or (v0 <= pa and stop <= v0 + len(b.right) and b.left):
                    found.append(Redex(i, Kind.PSEUDONAT))
            if derived and ax and bx and i + 2 < n and crossing[i + 2] and _twist_tail(a, b, cells[i + 2]):
                found.append(Redex(i, Kind.TWIST))
        elif braided and ax:
            if not (a.left and a.right):
                found.append(Redex(i, Kind.UNIT_ELIM))
            if a.left:
                for s in range(1, len(a.right)):
                    found.append(Redex(i, Kind.UNDERBRAID, s))
    return found


def is_redex(f: OneCell, r: Redex, mode: str = PLAIN) -> bool:
    """Whether ``r`` is a redex of ``f``, looking only at the cells it covers."""
    cells, i = f.cells, r.index
    width = 3 if r.kind == Kind.TWIST else 1 if r.kind in (Kind.UNIT_ELIM, Kind.UNDERBRAID) else 2
    if i < 0 or i + width > len(cells):
        return False
    if r.kind == Kind.INTERCHANGE:
        return r.split == 0 and _interchanges(cells[i], cells[i + 1], mode)
    if mode != BRAIDED:
        return False
    a = cells[i]
    if r.kind == Kind.UNIT_ELIM:
        return r.split == 0 and isinstance(a, Crossing) and a.trivial
    if r.kind == Kind.UNDERBRAID:
        return isinstance(a, Crossing) and bool(a.left) and 1 <= r.split < len(a.right)
    if r.split != 0:
        return False
    b = cells[i + 1]
    if r.kind == Kind.OVERBRAID:
        return _is_overbraid(a, b)
    if r.kind == Kind.PSEUDONAT:
        return isinstance(b, Crossing) and _pseudonat_side(a, b) is not None
    return _twist_tail(a, b, cells[i + 2]) is not None


def _interchange(a, b) -> tuple:
    pa, out = len(a.prefix), len(a.produced)
    between = b.prefix[pa + out:]
    lower = b.reframed(a.prefix + a.consumed + between, b.suffix)
    upper = a.reframed(a.prefix, between + b.produced + b.suffix)
    return lower, upper


def swap_disjoint(a, b) -> tuple:
    """Reorder two horizontally disjoint adjacent cells."""
    if _is_above(a, b):
        return _interchange(a, b)
    pb = len(b.prefix)
    rest = a.prefix[pb + len(b.consumed):]
    upper = b.reframed(b.prefix, rest + a.consumed + a.suffix)
    lower = a.reframed(b.prefix + b.produced + rest, a.suffix)
    return upper, lower


def _pseudonat(c, x: Crossing) -> tuple:
    side = _pseudonat_side(c, x)
    start = len(c.prefix)
    if side == "left":
        d = start - len(x.prefix)
        u1, u2 = x.left[:d], x.left[d + len(c.produced):]
        crossing = Crossing(x.prefix, u1 + c.consumed + u2, x.right, x.suffix)
        moved = c.reframed(x.prefix + x.right + u1, u2 + x.suffix)
    else:
        d = start - len(x.prefix) - len(x.left)
        v1, v2 = x.right[:d], x.right[d + len(c.produced):]
        crossing = Crossing(x.prefix, x.left, v1 + c.consumed + v2, x.suffix)
        moved = c.reframed(x.prefix + v1, v2 + x.left + x.suffix)
    return crossing, moved


def apply(f: OneCell, r: Redex, mode: str = BRAIDED) -> tuple[OneCell, RewriteStep]:
    """Apply the forward rule at ``r``; ``mode`` only restricts which redexes exist."""
    if not is_redex(f, r, mode):
        raise NotARedex(f"{r} is not a redex of {f}")
    g = _rewrite(f, r)
    return g, RewriteStep(r, FORWARD, f, g)


def _rewrite(f: OneCell, r: Redex) -> OneCell:
    i = r.index
    cells = f.cells
    if r.kind == Kind.INTERCHANGE:
        g = f.replace(i, i + 2, swap_disjoint(cells[i], cells[i + 1]))
    elif r.kind == Kind.UNIT_ELIM:
        g = f.replace(i, i + 1, ())
    elif r.kind == Kind.OVERBRAID:
        a, b = cells[i], cells[i + 1]
        g = f.replace(i, i + 2, (Crossing(b.prefix, b.left + a.left, a.right, a.suffix),))
    elif r.kind == Kind.UNDERBRAID:
        x = cells[i]
        head, tail = x.right[:r.split], x.right[r.split:]
        g = f.replace(i, i + 1, (
            Crossing(x.prefix, x.left, head, tail + x.suffix),
            Crossing(x.prefix + head, x.left, tail, x.suffix),
        ))
    elif r.kind == Kind.TWIST:
        a, b, c = cells[i:i + 3]
        A, B, C = _twist_blocks(a, b)
        X, Y = b.prefix, b.suffix
        new = (Crossing(X, A + B, C, Y), Crossing(X, C + A, B, Y))
        if _twist_tail(a, b, c) == "long":
            new += (Crossing(X, B, C, A + Y),)
        g = f.replace(i, i + 3, new)
    else:
        g = f.replace(i, i + 2, _pseudonat(cells[i], cells[i + 1]))
    return g


def reducts(f: OneCell, mode: str, derived: bool = True) -> list[tuple[Redex, OneCell]]:
    return [(r, _rewrite(f, r)) for r in find_redexes(f, mode, derived)]


# ---------------------------------------------------------------------------
# normalisation and decision

Strategy = Callable[[list], Redex]


def first_redex(redexes: list) -> Redex:
    return redexes[0]


def last_redex(redexes: list) -> Redex:
    return redexes[-1]


def random_strategy(seed: int) -> Strategy:
    rng = random.Random(seed)
    return lambda redexes: rng.choice(redexes)


def normalize(f: OneCell, mode: str = PLAIN, strategy: Strategy = first_redex) -> tuple[OneCell, RewritePath]:
    steps = []
    current = f
    while True:
        redexes = find_redexes(current, mode)
        if not redexes:
            return current, RewritePath(f, tuple(steps))
        r = strategy(redexes)
        nxt = _rewrite(current, r)
        steps.append(RewriteStep(r, FORWARD, current, nxt))
        current = nxt


def normal_form(f: OneCell, mode: str = PLAIN) -> OneCell:
    return normalize(f, mode)[0]


def is_normal(f: OneCell, mode: str = PLAIN) -> bool:
    return not find_redexes(f, mode)


def decide_equal(f: OneCell, g: OneCell, mode: str = PLAIN) -> Optional[RewritePath]:
    """The unique structural 2-cell f => g as a zig-zag path, or None."""
    if (f.source, f.target) != (g.source, g.target):
        raise BoundaryError(f"boundaries differ: {f.source}->{f.target} vs {g.source}->{g.target}")
    nf, to_nf = normalize(f, mode)
    ng, from_g = normalize(g, mode)
    if nf != ng:
        return None
    return to_nf.then(from_g.inverse())


# ---------------------------------------------------------------------------
# enumeration


def extend_terms(mg, f: OneCell, mode: str) -> Iterator[OneCell]:
    for c in basic_cells_on(mg, f.target, mode):
        yield OneCell(f.source, f.cells + (c,))


def enumerate_terms(mg, mode: str, max_cells: int, sources: Iterable[tuple]) -> Iterator[OneCell]:
    """All 1-cells with at most ``max_cells`` basic cells over the given sources."""
    for src in sources:
        layer = [OneCell(tuple(src))]
        yield from layer
        for _ in range(max_cells):
            layer = [g for f in layer for g in extend_terms(mg, f, mode)]
            yield from layer


def object_sequences(objects: Iterable[str], max_len: int, up_to_renaming: bool = False) -> list[tuple]:
    """Object sequences of length <= max_len, optionally one per renaming class."""
    import itertools

    objs = sorted(objects)
    out = []
    for n in range(max_len + 1):
        for seq in itertools.product(objs, repeat=n):
            if up_to_renaming:
                # canonical iff objects are introduced in sorted order
                seen: list[str] = []
                for o in seq:
                    if o not in seen:
                        seen.append(o)
                if seen != objs[:len(seen)]:
                    continue
            out.append(seq)
    return out


# ---------------------------------------------------------------------------
# critical pairs


class Peak(NamedTuple):
    term: OneCell
    left: Redex
    right: Redex
    left_join: int
    right_join: int
    joined: bool


@dataclass
class CriticalPairReport:
    mode: str
    max_cells: int
    terms: int = 0
    peaks: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [p for p in self.peaks if not p.joined]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"mode: {self.mode}",
            f"max cells: {self.max_cells}",
            f"terms: {self.terms}",
            f"peaks: {len(self.peaks)}",
            f"failures: {len(self.failures)}",
        ]
        if self.peaks:
            longest = max(max(p.left_join, p.right_join) for p in self.peaks)
            lines.append(f"longest join: {longest}")
        for p in self.failures:
            lines.append(f"FAIL {p.term} : {p.left} vs {p.right}")
        return "\n".join(lines)


class NormalFormCache:
    """Memoised normal forms under one strategy, for batch checks.

    A term met again (directly or inside another term's reduction) reuses
    its earlier result, so each call still follows a maximal reduction
    sequence chosen by ``strategy``.
    """

    def __init__(self, mode: str, strategy: Strategy = first_redex, redexes: Optional[dict] = None) -> None:
        self.mode = mode
        self.strategy = strategy
        self.memo: dict = {}
        # redex lists may be shared between caches for different strategies
        self.redexes = {} if redexes is None else redexes

    def redexes_of(self, f: OneCell) -> list:
        found = self.redexes.get(f)
        if found is None:
            found = self.redexes[f] = find_redexes(f, self.mode)
        return found

    def __call__(self, f: OneCell) -> tuple[OneCell, int]:
        """Normal form of ``f`` and the length of the path to it."""
        trail = []
        current = f
        while current not in self.memo:
            redexes = self.redexes_of(current)
            if not redexes:
                self.memo[current] = (current, 0)
                break
            trail.append(current)
            current = _rewrite(current, self.strategy(redexes))
        nf, dist = self.memo[current]
        for t in reversed(trail):
            dist += 1
            self.memo[t] = (nf, dist)
        return self.memo[f]


def critical_pairs(mg, mode: str, max_cells: int, max_wires: int = 3,
                   terms: Optional[Iterable[OneCell]] = None,
                   cache: Optional[NormalFormCache] = None) -> CriticalPairReport:
    """Check that every peak in every small term is joinable.

    Terms default to every term with at most ``max_cells`` cells whose
    source has at most ``max_wires`` wires, one per object renaming.
    """
    report = CriticalPairReport(mode, max_cells)
    nf = cache or NormalFormCache(mode)
    if terms is None:
        terms = enumerate_terms(mg, mode, max_cells, object_sequences(mg.objects, max_wires, up_to_renaming=True))
    for f in terms:
        report.terms += 1
        redexes = nf.redexes_of(f)
        if len(redexes) < 2:
            continue
        results = [(r, nf(_rewrite(f, r))) for r in redexes]
        for a in range(len(results)):
            for b in range(a + 1, len(results)):
                (r1, (n1, d1)), (r2, (n2, d2)) = results[a], results[b]
                report.peaks.append(Peak(f, r1, r2, d1, d2, n1 == n2))
    return report


def strategy_disagreements(terms: Iterable[OneCell], caches: list) -> list[OneCell]:
    """Terms on which the given normal-form caches (one per strategy) disagree."""
    return [f for f in terms if len({c(f)[0] for c in caches}) > 1]


# ---------------------------------------------------------------------------
# brute-force oracle over the undirected rewrite graph


class BoundExceeded(ValueError):
    pass


def _inverse_candidates(f: OneCell, mode: str, bound: int) -> Iterator[tuple[OneCell, Redex]]:
    """Pairs (h, r) where rewriting h at r might give ``f`` (a superset, filtered later)."""
    cells = f.cells
    n = len(cells)
    stages = f.stages()
    # swap any adjacent horizontally disjoint pair
    for i in range(n - 1):
        a, b = cells[i], cells[i + 1]
        if _is_above(a, b) or _is_below(a, b):
            yield f.replace(i, i + 2, swap_disjoint(a, b)), Redex(i, Kind.INTERCHANGE)
    if mode != BRAIDED:
        return
    for i, c in enumerate(cells):
        if not isinstance(c, Crossing):
            continue
        # split a crossing's left block (undo an overbraid)
        if n + 1 <= bound and c.right:
            for s in range(1, len(c.left)):
                a, b = c.left[:s], c.left[s:]
                yield f.replace(i, i + 1, (
                    Crossing(c.prefix + a, b, c.right, c.suffix),
                    Crossing(c.prefix, a, c.right, b + c.suffix),
                )), Redex(i, Kind.OVERBRAID)
        # merge two crossings sharing a left block (undo an underbraid)
        if i + 1 < n and isinstance(cells[i + 1], Crossing):
            d = cells[i + 1]
            if (c.left and c.right and d.right and d.left == c.left
                    and d.prefix == c.prefix + c.right):
                merged = Crossing(c.prefix, c.left, c.right + d.right, d.suffix)
                yield f.replace(i, i + 2, (merged,)), Redex(i, Kind.UNDERBRAID, len(c.right))
        # pull a cell back through the crossing (undo pseudonaturality)
        if i + 1 < n:
            e = cells[i + 1]
            start, stop = len(e.prefix), len(e.prefix) + len(e.consumed)
            x0 = len(c.prefix)
            r1 = x0 + len(c.right)
            l1 = r1 + len(c.left)
            # e inside the image of the left block
            if r1 <= start and stop <= l1:
                d = start - r1
                u = c.left[:d] + e.produced + c.left[d + len(e.consumed):]
                before = e.reframed(c.prefix + c.left[:d], c.left[d + len(e.consumed):] + c.right + c.suffix)
                yield f.replace(i, i + 2, (before, Crossing(c.prefix, u, c.right, c.suffix))), Redex(i, Kind.PSEUDONAT)
            if x0 <= start and stop <= r1:
                d = start - x0
                v = c.right[:d] + e.produced + c.right[d + len(e.consumed):]
                before = e.reframed(c.prefix + c.left + c.right[:d], c.right[d + len(e.consumed):] + c.suffix)
                yield f.replace(i, i + 2, (before, Crossing(c.prefix, c.left, v, c.suffix))), Redex(i, Kind.PSEUDONAT)
    # insert a trivial crossing anywhere (undo a unit elimination)
    if n + 1 <= bound:
        for i, wires in enumerate(stages):
            w = len(wires)
            for p in range(w):
                for q in range(p + 1, w + 1):
                    block = wires[p:q]
                    for left, right in ((block, ()), ((), block)):
                        t = Crossing(wires[:p], left, right, wires[q:])
                        yield f.replace(i, i, (t,)), Redex(i, Kind.UNIT_ELIM)


def undirected_neighbours(f: OneCell, mode: str, bound: int) -> set:
    """One basic step away from ``f`` in either direction, within the cell bound."""
    out = set()
    for _, g in reducts(f, mode, derived=False):
        if len(g) <= bound:
            out.add(g)
    for h, r in _inverse_candidates(f, mode, bound):
        if len(h) > bound:
            continue
        if is_redex(h, r, mode) and _rewrite(h, r) == f:
            out.add(h)
    return out


def oracle_component(f: OneCell, mode: str, bound: int) -> set:
    """Every term with at most ``bound`` cells reachable from ``f`` by steps in either direction."""
    if len(f) > bound:
        raise BoundExceeded(f"term has {len(f)} cells, bound is {bound}")
    seen = {f}
    queue = deque([f])
    while queue:
        t = queue.popleft()
        for u in undirected_neighbours(t, mode, bound):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def oracle_connected(f: OneCell, g: OneCell, mode: str, bound: int) -> bool:
    if len(f) > bound or len(g) > bound:
        raise BoundExceeded(f"terms have {len(f)} and {len(g)} cells, bound is {bound}")
    if (f.source, f.target) != (g.source, g.target):
        raise BoundaryError("oracle needs parallel terms")
    if f == g:
        return True
    seen = {f}
    queue = deque([f])
    while queue:
        t = queue.popleft()
        for u in undirected_neighbours(t, mode, bound):
            if u == g:
                return True
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return False
