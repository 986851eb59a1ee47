"""Termination measures for the interchange and braided rewriting systems."""
from __future__ import annotations

from dataclasses import dataclass

from .freecat import BRAIDED, PLAIN, Crossing, OneCell, wire_stats

LESS, EQUAL, GREATER = "less", "equal", "greater"


@dataclass(frozen=True, order=False)
class Measure:
    """A natural number (plain) or a vector of naturals compared lexicographically (braided).

    The braided components are overbraid width, crossing weight, the number
    of (multiarrow, crossing) pairs with the multiarrow earlier, prefix
    weight and the number of trivial crossings.
    """

    mode: str
    values: tuple

    @property
    def overbraid(self) -> int:
        return self.values[0]

    @property
    def crossing(self) -> int:
        return self.values[1]

    @property
    def inversions(self) -> int:
        return self.values[2]

    @property
    def prefix(self) -> int:
        return self.values[3] if self.mode == BRAIDED else self.values[0]

    @property
    def trivial(self) -> int:
        return self.values[4]

    def __str__(self) -> str:
        if self.mode == PLAIN:
            return str(self.values[0])
        return "(" + ", ".join(map(str, self.values)) + ")"


def prefix_weight(f: OneCell) -> int:
    """Sum over the cells of the weight of the wires above each cell at its stage."""
    stages = wire_stats(f).stages
    return sum(sum(t for _, t in stages[i][:len(c.prefix)]) for i, c in enumerate(f.cells))


def overbraid_width(c: Crossing, stats: tuple) -> int:
    p = len(c.prefix) + len(c.left)
    width = sum(w for w, _ in stats[p:p + len(c.right)])
    return max(0, 2 * width - 1)


def crossing_weight(c: Crossing, stats: tuple) -> int:
    p = len(c.prefix)
    block = stats[p:p + len(c.left) + len(c.right)]
    return sum(w for w, _ in block) * sum(t for _, t in block)


def braided_measure(f: OneCell) -> Measure:
    stages = wire_stats(f).stages
    over = cross = inv = pre = trivial = 0
    arrows_so_far = 0
    for i, c in enumerate(f.cells):
        stats = stages[i]
        pre += sum(t for _, t in stats[:len(c.prefix)])
        if isinstance(c, Crossing):
            over += overbraid_width(c, stats)
            cross += crossing_weight(c, stats)
            inv += arrows_so_far
            trivial += c.trivial
        else:
            arrows_so_far += 1
    return Measure(BRAIDED, (over, cross, inv, pre, trivial))


def measure(f: OneCell, mode: str) -> Measure:
    if mode == PLAIN:
        return Measure(PLAIN, (prefix_weight(f),))
    if mode == BRAIDED:
        return braided_measure(f)
    raise ValueError(f"unknown mode {mode!r}")


def compare(a: Measure, b: Measure) -> str:
    if a.mode != b.mode:
        raise ValueError(f"cannot compare a {a.mode} measure with a {b.mode} one")
    if a.values < b.values:
        return LESS
    if a.values > b.values:
        return GREATER
    return EQUAL
