"""The free (braided) Gray monoid on a multigraph.

Objects are tuples of object names, 1-cells are composable sequences of
basic cells. A basic cell is either a whiskered multiarrow or a whiskered
positive crossing; each one carries its full prefix and suffix so that its
source and target can be read off without consulting anything else.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from operator import itemgetter
from typing import TYPE_CHECKING, Iterator, NamedTuple, Union

if TYPE_CHECKING:
    from .signature import Multigraph

ObjSeq = tuple  # tuple[str, ...]

PLAIN = "plain"
BRAIDED = "braided"
MODES = (PLAIN, BRAIDED)


class BoundaryError(ValueError):
    """Two 1-cells do not have the boundaries an operation needs."""


# Cells and terms are tuples underneath so that hashing and equality, which
# dominate the rewriting searches, run in C.


class Multiarrow(NamedTuple):
    prefix: tuple
    arrow: str
    inputs: tuple
    output: str
    suffix: tuple

    @property
    def source(self) -> tuple:
        return self.prefix + self.inputs + self.suffix

    @property
    def target(self) -> tuple:
        return self.prefix + (self.output,) + self.suffix

    @property
    def consumed(self) -> tuple:
        return self.inputs

    @property
    def produced(self) -> tuple:
        return (self.output,)

    def reframed(self, prefix: tuple, suffix: tuple) -> Multiarrow:
        return Multiarrow(prefix, self.arrow, self.inputs, self.output, suffix)


class Crossing(NamedTuple):
    """The positive crossing of ``left`` over ``right``: left+right -> right+left."""

    prefix: tuple
    left: tuple
    right: tuple
    suffix: tuple

    @property
    def source(self) -> tuple:
        return self.prefix + self.left + self.right + self.suffix

    @property
    def target(self) -> tuple:
        return self.prefix + self.right + self.left + self.suffix

    @property
    def consumed(self) -> tuple:
        return self.left + self.right

    @property
    def produced(self) -> tuple:
        return self.right + self.left

    @property
    def trivial(self) -> bool:
        return not self.left or not self.right

    def reframed(self, prefix: tuple, suffix: tuple) -> Crossing:
        return Crossing(prefix, self.left, self.right, suffix)


BasicCell = Union[Multiarrow, Crossing]


class OneCell(tuple):
    """A composable sequence of basic cells starting at ``source``.

    Iteration and ``len`` range over the cells.
    """

    def __new__(cls, source, cells=()) -> OneCell:
        return tuple.__new__(cls, (tuple(source), tuple(cells)))

    def __getnewargs__(self):
        return tuple.__getitem__(self, 0), tuple.__getitem__(self, 1)

    source = property(itemgetter(0))
    cells = property(itemgetter(1))

    # never equal to a bare tuple with the same items
    def __eq__(self, other) -> bool:
        return isinstance(other, OneCell) and tuple.__eq__(self, other)

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    __hash__ = tuple.__hash__

    def __repr__(self) -> str:
        return f"OneCell(source={self.source!r}, cells={self.cells!r})"

    @property
    def target(self) -> tuple:
        return self.cells[-1].target if self.cells else self.source

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[BasicCell]:
        return iter(self.cells)

    def stages(self) -> list[tuple]:
        """Wire sequences before the first cell, between cells, and after the last."""
        return [self.source] + [c.target for c in self.cells]

    def replace(self, start: int, stop: int, new_cells) -> OneCell:
        return OneCell(self.source, self.cells[:start] + tuple(new_cells) + self.cells[stop:])

    def arrow_multiset(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for c in self.cells:
            if isinstance(c, Multiarrow):
                counts[c.arrow] = counts.get(c.arrow, 0) + 1
        return counts

    def crossing_count(self) -> int:
        return sum(1 for c in self.cells if isinstance(c, Crossing))

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


def identity(objects) -> OneCell:
    return OneCell(tuple(objects), ())


def cell(c: BasicCell) -> OneCell:
    return OneCell(c.source, (c,))


def boundary(f: OneCell) -> tuple[tuple, tuple]:
    return f.source, f.target


def compose(f: OneCell, g: OneCell) -> OneCell:
    """``f`` then ``g`` (diagrammatic order)."""
    if f.target != g.source:
        raise BoundaryError(f"cannot compose: target {f.target} is not source {g.source}")
    return OneCell(f.source, f.cells + g.cells)


def whisker(pre, f: OneCell, suf) -> OneCell:
    pre, suf = tuple(pre), tuple(suf)
    if not pre and not suf:
        return f
    return OneCell(pre + f.source + suf, tuple(c.reframed(pre + c.prefix, c.suffix + suf) for c in f.cells))


def tensor(f: OneCell, g: OneCell) -> OneCell:
    """All of ``f`` first (beside the source of ``g``), then all of ``g``."""
    return compose(whisker((), f, g.source), whisker(f.target, g, ()))


def tensor_all(fs) -> OneCell:
    result = identity(())
    for f in fs:
        result = tensor(result, f)
    return result


def validate(mg: Multigraph, f: OneCell, mode: str = PLAIN) -> list[str]:
    """Diagnostics for ``f``; an empty list means ``f`` is a valid 1-cell."""
    if mode not in MODES:
        return [f"unknown mode {mode!r}"]
    problems = []
    for obj in f.source:
        if obj not in mg.objects:
            problems.append(f"unknown object {obj} in source")
    current = f.source
    for i, c in enumerate(f.cells):
        if c.source != current:
            problems.append(f"cell {i}: source {c.source} does not match wires {current}")
        if isinstance(c, Multiarrow):
            sig = mg.arrows.get(c.arrow)
            if sig is None:
                problems.append(f"cell {i}: unknown arrow {c.arrow}")
            elif (tuple(sig[0]), sig[1]) != (c.inputs, c.output):
                problems.append(f"cell {i}: arrow {c.arrow} has signature {sig}, not {(c.inputs, c.output)}")
        elif isinstance(c, Crossing):
            if mode == PLAIN:
                problems.append(f"cell {i}: crossing in plain mode")
            if not c.left and not c.right:
                problems.append(f"cell {i}: empty crossing")
        else:
            problems.append(f"cell {i}: not a basic cell")
        current = c.target
    return problems


@dataclass(frozen=True)
class WireTrace:
    """Per stage, per wire: (width, weight)."""

    stages: tuple = field(default_factory=tuple)

    @property
    def final(self) -> tuple:
        return self.stages[-1]


def step_stats(c: BasicCell, stats: tuple) -> tuple:
    p = len(c.prefix)
    n_in = len(c.consumed)
    before, block, after = stats[:p], stats[p:p + n_in], stats[p + n_in:]
    if isinstance(c, Multiarrow):
        out = ((1 + sum(w for w, _ in block), 1 + sum(t for _, t in block)),)
    else:
        grown = [(w, t + w) for w, t in block]
        k = len(c.left)
        out = tuple(grown[k:] + grown[:k])
    return before + out + after


def wire_stats(f: OneCell) -> WireTrace:
    stats = tuple((1, 0) for _ in f.source)
    stages = [stats]
    for c in f.cells:
        stats = step_stats(c, stats)
        stages.append(stats)
    return WireTrace(tuple(stages))


def basic_cells_on(mg: Multigraph, wires: tuple, mode: str = PLAIN) -> Iterator[BasicCell]:
    """Every basic cell whose source is exactly ``wires``."""
    n = len(wires)
    for name in sorted(mg.arrows):
        inputs, output = mg.arrows[name]
        inputs = tuple(inputs)
        k = len(inputs)
        for p in range(n - k + 1):
            if wires[p:p + k] == inputs:
                yield Multiarrow(wires[:p], name, inputs, output, wires[p + k:])
    if mode == BRAIDED:
        for p in range(n + 1):
            for l in range(n - p + 1):
                for r in range(n - p - l + 1):
                    if l == 0 and r == 0:
                        continue
                    yield Crossing(wires[:p], wires[p:p + l], wires[p + l:p + l + r], wires[p + l + r:])
