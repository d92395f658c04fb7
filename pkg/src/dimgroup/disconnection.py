"""Points of the doubled interval and the lifted map acting on them.

Every interior orbit point ``x`` is split into ``x-`` and ``x+`` with
``x- < x+``; the endpoints 0 and 1 are not doubled.  Only these doubled orbit
points are ever represented.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import BlocksNotPartition, NotInsideBranch
from .field import ONE, ZERO, FieldElement, Number, as_element
from .maps import PwmMap


class Side(enum.IntEnum):
    MINUS = -1
    PLUS = 1

    def flip(self) -> Side:
        return Side(-self)

    def __str__(self) -> str:
        return "-" if self is Side.MINUS else "+"


@dataclass(frozen=True)
class XPoint:
    """A point ``coordinate`` with side tag; 0 is forced to ``+`` and 1 to ``-``."""

    coordinate: FieldElement
    side: Side

    def __post_init__(self) -> None:
        c = as_element(self.coordinate)
        object.__setattr__(self, "coordinate", c)
        if c == ZERO:
            object.__setattr__(self, "side", Side.PLUS)
        elif c == ONE:
            object.__setattr__(self, "side", Side.MINUS)
        else:
            object.__setattr__(self, "side", Side(self.side))

    def _key(self) -> tuple[FieldElement, int]:
        return (self.coordinate, int(self.side))

    def __lt__(self, other: XPoint) -> bool:
        return self._key() < other._key()

    def __le__(self, other: XPoint) -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: XPoint) -> bool:
        return self._key() > other._key()

    def __ge__(self, other: XPoint) -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        return f"{self.coordinate}{self.side}"


def minus(x: Number) -> XPoint:
    return XPoint(as_element(x), Side.MINUS)


def plus(x: Number) -> XPoint:
    return XPoint(as_element(x), Side.PLUS)


@dataclass(frozen=True)
class ClopenInterval:
    """The order interval ``[lo+, hi-]``; equal endpoints give the empty set."""

    lo: FieldElement
    hi: FieldElement

    def __post_init__(self) -> None:
        lo, hi = as_element(self.lo), as_element(self.hi)
        if hi < lo:
            lo, hi = hi, lo
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def empty(self) -> bool:
        return self.lo == self.hi

    def contains(self, p: XPoint) -> bool:
        if self.empty:
            return False
        return plus(self.lo) <= p <= minus(self.hi)

    def __contains__(self, p: XPoint) -> bool:
        return self.contains(p)

    def __str__(self) -> str:
        return f"I({self.lo}, {self.hi})"


def branch_of(m: PwmMap, p: XPoint) -> int:
    """Branch block containing ``p``: ``a-`` belongs to the left branch, ``a+`` to the right."""
    return m.branch_containing(p.coordinate, right=p.side is Side.PLUS)


def sigma_apply(m: PwmMap, p: XPoint) -> XPoint:
    i = branch_of(m, p)
    b = m.branches[i]
    side = p.side if b.increasing else p.side.flip()
    return XPoint(b(p.coordinate), side)


def sigma_orbit(m: PwmMap, p: XPoint, n: int) -> list[XPoint]:
    """``[p, sigma(p), ..., sigma^(n-1)(p)]``."""
    out = [p]
    for _ in range(n - 1):
        out.append(sigma_apply(m, out[-1]))
    return out


def interval_image(m: PwmMap, i: int, iv: ClopenInterval) -> ClopenInterval:
    lo, hi = m.branch_domain(i)
    if not (lo <= iv.lo and iv.hi <= hi):
        raise NotInsideBranch(f"{iv} is not inside branch {i} domain [{lo}, {hi}]", "inside_branch")
    b = m.branches[i]
    return ClopenInterval(b(iv.lo), b(iv.hi))


def branch_blocks(m: PwmMap) -> list[ClopenInterval]:
    return [ClopenInterval(*m.branch_domain(i)) for i in range(m.n_branches)]


def check_blocks(blocks: Sequence[ClopenInterval]) -> None:
    """Blocks must be nonempty and tile ``[0+, 1-]`` in order."""
    ordered = sorted(blocks, key=lambda iv: iv.lo)
    reach = ZERO
    for iv in ordered:
        if iv.empty or iv.lo != reach:
            raise BlocksNotPartition("blocks do not tile the space without overlap", "blocks")
        reach = iv.hi
    if reach != ONE:
        raise BlocksNotPartition("blocks do not cover the space", "blocks")


def itinerary(m: PwmMap, blocks: Sequence[ClopenInterval], p: XPoint, n: int) -> list[int]:
    """Indices of the blocks visited by ``p, sigma(p), ...`` (``n`` symbols)."""
    check_blocks(blocks)
    word = []
    q = p
    for k in range(n):
        for j, blk in enumerate(blocks):
            if blk.contains(q):
                word.append(j)
                break
        if k + 1 < n:
            q = sigma_apply(m, q)
    return word
