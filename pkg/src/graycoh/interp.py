"""Interpretation of component expressions in the free Gray monoid on a theory.

A 1-cell expression becomes a 1-cell: variables are identities and an
application is the tensor of its arguments followed by the generator.
A 2-cell expression becomes a path whose steps are interchanges and
whiskered generator 2-cells. Substituting into an application does not
commute with interpretation on the nose; the mismatch is repaired by
``norm_path``, a path built only from interchanges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .freecat import BoundaryError, Multiarrow, OneCell, compose, identity, tensor_all, whisker
from .rewrite import FORWARD, INVERSE, Kind, Redex, RewriteStep, _interchange, _rewrite, find_redexes
from .signature import Theory
from .syntax import App2, Comp, Gen, Id, Var, format_term, vars1
from .components import shift1, subst1


@dataclass(frozen=True)
class FreeModel:
    theory: Theory
    objects: dict
    arrows: dict
    cells: dict  # name -> (interpreted lhs, interpreted rhs)
    memo: dict = field(default_factory=dict, compare=False, repr=False)


def free_model(T: Theory) -> FreeModel:
    objects = {o: (o,) for o in T.objects}
    arrows = {n: Multiarrow((), n, tuple(ins), out, ()) for n, (ins, out) in T.arrows.items()}
    model = FreeModel(T, objects, arrows, {})
    for name, c in T.cells.items():
        model.cells[name] = (interp_expr1(model, c.context, c.lhs), interp_expr1(model, c.context, c.rhs))
    return model


def interp_expr1(M: FreeModel, ctx, e) -> OneCell:
    key = (tuple(ctx), e)
    found = M.memo.get(key)
    if found is not None:
        return found
    if isinstance(e, Var):
        f = identity(M.objects[ctx[e.index][1]])
    else:
        inner = tensor_all(interp_expr1(M, ctx, a) for a in e.args)
        f = OneCell(inner.source, inner.cells + (M.arrows[e.name],))
    M.memo[key] = f
    return f


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class GenStep:
    """A generator 2-cell whiskered into a larger 1-cell.

    ``index`` is where the generator's source block starts in ``before``;
    the cells before it are the interpreted components.
    """

    cell: str
    args: tuple
    prefix: tuple
    suffix: tuple
    index: int
    direction: str
    before: OneCell
    after: OneCell

    def inverse(self) -> GenStep:
        flipped = INVERSE if self.direction == FORWARD else FORWARD
        return GenStep(self.cell, self.args, self.prefix, self.suffix, self.index, flipped, self.after, self.before)

    def embedded(self, before: OneCell, after: OneCell, offset: int, pre: tuple, suf: tuple) -> GenStep:
        return GenStep(self.cell, self.args, pre + self.prefix, self.suffix + suf, self.index + offset,
                       self.direction, before, after)

    def __str__(self) -> str:
        sign = "" if self.direction == FORWARD else "^-1"
        return f"{self.cell}{sign}@{self.index}"


Step = Union[RewriteStep, GenStep]


def _embed_rewrite(s: RewriteStep, before: OneCell, after: OneCell, offset: int) -> RewriteStep:
    r = s.redex
    return RewriteStep(Redex(r.index + offset, r.kind, r.split), s.direction, before, after)


@dataclass(frozen=True)
class InterpPath:
    source: OneCell
    steps: tuple = ()

    @property
    def target(self) -> OneCell:
        return self.steps[-1].after if self.steps else self.source

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, other: InterpPath) -> InterpPath:
        if other.source != self.target:
            raise BoundaryError(f"paths do not chain: {self.target} vs {other.source}")
        return InterpPath(self.source, self.steps + other.steps)

    def inverse(self) -> InterpPath:
        return InterpPath(self.target, tuple(s.inverse() for s in reversed(self.steps)))

    @property
    def structural(self) -> bool:
        return all(isinstance(s, RewriteStep) for s in self.steps)

    def generator_steps(self) -> list[GenStep]:
        return [s for s in self.steps if isinstance(s, GenStep)]

    def is_chained(self) -> bool:
        current = self.source
        for s in self.steps:
            if s.before != current:
                return False
            current = s.after
        return True

    def lines(self) -> list[str]:
        out = [f"source: {format_term(self.source)}"]
        for s in self.steps:
            out.append(f"  {s}  =>  {format_term(s.after)}")
        out.append(f"target: {format_term(self.target)}")
        return out


def swap_adjacent(f: OneCell, i: int) -> tuple[OneCell, RewriteStep]:
    """Exchange the horizontally disjoint cells i and i+1 by one interchange."""
    a, b = f.cells[i], f.cells[i + 1]
    if len(b.prefix) >= len(a.prefix) + len(a.produced):
        g = f.replace(i, i + 2, _interchange(a, b))
        return g, RewriteStep(Redex(i, Kind.INTERCHANGE), FORWARD, f, g)
    pb = len(b.prefix)
    if len(a.prefix) < pb + len(b.consumed):
        raise ValueError(f"cells {i} and {i + 1} overlap")
    rest = a.prefix[pb + len(b.consumed):]
    upper = b.reframed(b.prefix, rest + a.consumed + a.suffix)
    lower = a.reframed(b.prefix + b.produced + rest, a.suffix)
    g = f.replace(i, i + 2, (upper, lower))
    r = Redex(i, Kind.INTERCHANGE)
    assert r in find_redexes(g) and _rewrite(g, r) == f
    return g, RewriteStep(r, INVERSE, f, g)


def embed(path: InterpPath, whole: OneCell, start: int, pre: tuple, suf: tuple) -> InterpPath:
    """Run ``path`` on the block of ``whole`` that starts at ``start`` and is ``path.source`` whiskered."""
    current = whole
    steps = []
    for s in path.steps:
        old = whisker(pre, s.before, suf).cells
        new = whisker(pre, s.after, suf).cells
        if current.cells[start:start + len(old)] != old:
            raise BoundaryError("embedded path does not match its surroundings")
        nxt = current.replace(start, start + len(old), new)
        if isinstance(s, GenStep):
            steps.append(s.embedded(current, nxt, start, pre, suf))
        else:
            steps.append(_embed_rewrite(s, current, nxt, start))
        current = nxt
    return InterpPath(whole, tuple(steps))


def reorder(f: OneCell, tags: list) -> InterpPath:
    """Sort the cells of ``f`` by their tags using adjacent interchanges.

    Cells are moved into place one at a time, leftmost target position
    first; every swapped pair must be horizontally disjoint.
    """
    tags = list(tags)
    current = f
    steps = []
    for p, want in enumerate(sorted(tags)):
        q = tags.index(want)
        while q > p:
            current, step = swap_adjacent(current, q - 1)
            steps.append(step)
            tags[q - 1], tags[q] = tags[q], tags[q - 1]
            q -= 1
    return InterpPath(f, tuple(steps))


def _object(M: FreeModel, ctx, e) -> str:
    if isinstance(e, Var):
        return ctx[e.index][1]
    return M.theory.arrows[e.name][1]


def _runs(outer) -> list[tuple[int, int]]:
    """The variable run [start, stop) used by each argument of an application."""
    runs, start = [], 0
    for a in outer.args:
        n = len(vars1(a))
        runs.append((start, start + n))
        start += n
    return runs


def substituted_source(M: FreeModel, ctx, outer, inners: Sequence) -> OneCell:
    """Tensor of the interpreted inners followed by the interpreted outer."""
    octx = tuple(("", _object(M, ctx, g)) for g in inners)
    return compose(tensor_all(interp_expr1(M, ctx, g) for g in inners), interp_expr1(M, octx, outer))


def norm_path(M: FreeModel, ctx, outer, inners: Sequence) -> InterpPath:
    """Interchanges from (tensor of inners) then (outer) to outer[inners].

    ``outer`` uses its own variables 0..n-1, variable i standing for
    ``inners[i]``; the inners are expressions over ``ctx`` using
    consecutive runs that concatenate in order.
    """
    start = substituted_source(M, ctx, outer, inners)
    path = InterpPath(start)
    if isinstance(outer, Var):
        return path
    octx = tuple(("", _object(M, ctx, g)) for g in inners)
    runs = _runs(outer)
    owner = [j for j, (a, b) in enumerate(runs) for _ in range(a, b)]
    # Tag each cell (argument, phase, inner, position); phase 0 holds the
    # components feeding an argument, phase 1 the argument's own cells.
    tags = []
    for i, g in enumerate(inners):
        tags.extend((owner[i], 0, i, k) for k in range(len(interp_expr1(M, ctx, g))))
    for j, arg in enumerate(outer.args):
        tags.extend((j, 1, 0, k) for k in range(len(interp_expr1(M, octx, arg))))
    tags.append((len(runs), 0, 0, 0))
    path = reorder(start, tags)
    offset = 0
    for j, (arg, (a, b)) in enumerate(zip(outer.args, runs)):
        pre = tuple(_object(M, octx, x) for x in outer.args[:j])
        suf = tuple(ctx[v][1] for g in inners[b:] for v in vars1(g))
        sub = norm_path(M, ctx, shift1(arg, -a), inners[a:b])
        path = path.then(embed(sub, path.target, offset, pre, suf))
        offset += len(sub.target)
    return path


def interp_expr2(M: FreeModel, ctx, e) -> InterpPath:
    """The path interpreting a checked 2-cell expression."""
    if isinstance(e, Id):
        return InterpPath(interp_expr1(M, ctx, e.expr))
    if isinstance(e, Comp):
        path = interp_expr2(M, ctx, e.parts[-1])
        for part in reversed(e.parts[:-1]):
            path = path.then(interp_expr2(M, ctx, part))
        return path
    if isinstance(e, App2):
        parts = [interp_expr2(M, ctx, a) for a in e.args]
        inner = tensor_all(p.source for p in parts)
        path = InterpPath(OneCell(inner.source, inner.cells + (M.arrows[e.name],)))
        offset = 0
        for j, p in enumerate(parts):
            pre = tuple(x for q in parts[:j] for x in q.target.target)
            suf = tuple(x for q in parts[j + 1:] for x in q.source.source)
            path = path.then(embed(p, path.target, offset, pre, suf))
            offset += len(p.target)
        return path
    if isinstance(e, Gen):
        cell = M.theory.cells[e.cell]
        to_lhs = norm_path(M, ctx, cell.lhs, e.args)
        to_rhs = norm_path(M, ctx, cell.rhs, e.args)
        width = len(tensor_all(interp_expr1(M, ctx, g) for g in e.args))
        step = GenStep(e.cell, tuple(e.args), (), (), width, FORWARD, to_lhs.source, to_rhs.source)
        return to_lhs.inverse().then(InterpPath(step.before, (step,))).then(to_rhs)
    raise TypeError(f"not a 2-cell expression: {e!r}")


def check_parallel(p: InterpPath, q: InterpPath) -> bool:
    return p.source == q.source and p.target == q.target


@dataclass(frozen=True)
class DoubleNorm:
    """The two composites around the square relating nested substitutions."""

    via_outer: InterpPath
    via_inner: InterpPath

    @property
    def parallel(self) -> bool:
        return check_parallel(self.via_outer, self.via_inner)


def double_norm(M: FreeModel, ctx, outer, middles: Sequence, inners: Sequence) -> DoubleNorm:
    """Both ways from inners, then middles, then outer, to the fully substituted outer.

    ``outer`` has one variable per middle. The middles share a context
    with one variable per inner, each middle using a consecutive run;
    the inners are over ``ctx`` in the same way.
    """
    mctx = tuple(("", _object(M, ctx, g)) for g in inners)
    inner_part = tensor_all(interp_expr1(M, ctx, g) for g in inners)
    source = compose(inner_part, substituted_source(M, mctx, outer, middles))
    # substitute the middles into the outer first
    via_outer = embed(norm_path(M, mctx, outer, middles), source, len(inner_part), (), ())
    via_outer = via_outer.then(norm_path(M, ctx, subst1(outer, middles), inners))
    # push each run of inners through its middle first
    runs = []
    start = 0
    for b in middles:
        runs.append((start, start + len(vars1(b))))
        start += len(vars1(b))
    tags = []
    for i, g in enumerate(inners):
        owner = next(j for j, (lo, hi) in enumerate(runs) if lo <= i < hi)
        tags.extend((owner, 0, i, k) for k in range(len(interp_expr1(M, ctx, g))))
    for j, b in enumerate(middles):
        tags.extend((j, 1, 0, k) for k in range(len(interp_expr1(M, mctx, b))))
    tags.extend((len(middles), 0, 0, k) for k in range(len(source) - len(tags)))
    via_inner = reorder(source, tags)
    offset = 0
    pushed = []
    for j, (b, (lo, hi)) in enumerate(zip(middles, runs)):
        local = shift1(b, -lo)
        pre = tuple(_object(M, mctx, x) for x in middles[:j])
        suf = tuple(ctx[v][1] for g in inners[hi:] for v in vars1(g))
        sub = norm_path(M, ctx, local, inners[lo:hi])
        via_inner = via_inner.then(embed(sub, via_inner.target, offset, pre, suf))
        offset += len(sub.target)
        pushed.append(subst1(local, inners[lo:hi]))
    via_inner = via_inner.then(norm_path(M, ctx, outer, pushed))
    return DoubleNorm(via_outer, via_inner)
