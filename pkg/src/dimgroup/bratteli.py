"""Leveled diagram of interval partitions whose connecting maps compute K0.

Level n has one vertex per interval between adjacent points of
``C_n = (T^1 C u ... u T^2n C) n R_n``, where ``R_n`` is the n-th image of
[0, 1]; each vertex carries the number of n-fold preimages of its interior
points.  Level 0 is the single interval [0, 1].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .disconnection import ClopenInterval, Side, XPoint
from .errors import BoundExceeded, ConsistencyFailure
from .field import ONE, ZERO, FieldElement
from .linalg import charpoly
from .maps import PwmMap
from .orbits import IntervalUnion, eventual_range, forward_orbit

DEFAULT_LEVELS = 8
DEFAULT_MAX_VERTICES = 5_000
# levels up to this depth are cross-checked against a direct preimage count
RECOUNT_DEPTH = 10


@dataclass(frozen=True)
class Vertex:
    lo: FieldElement
    hi: FieldElement
    k: int

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "k": self.k}


@dataclass(frozen=True)
class Edge:
    """``mult`` edges from vertex ``source`` of the previous level to ``target``."""

    source: int
    target: int
    mult: int

    def to_json(self) -> dict:
        return {"from": self.source, "to": self.target, "mult": self.mult}


@dataclass(frozen=True)
class Level:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()


@dataclass(frozen=True)
class BratteliDiagram:
    levels: tuple[Level, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def multiplicities(self, n: int) -> tuple[int, ...]:
        return tuple(v.k for v in self.levels[n].vertices)

    def to_json(self) -> dict:
        return {
            "levels": [
                {
                    "vertices": [v.to_json() for v in lvl.vertices],
                    "edges": [e.to_json() for e in lvl.edges],
                }
                for lvl in self.levels
            ]
        }


@dataclass(frozen=True)
class K0Sequence:
    """Ranks per level and connecting matrices ``M_n`` (rows: level n, columns: level n+1)."""

    ranks: tuple[int, ...]
    matrices: tuple[tuple[tuple[int, ...], ...], ...]


def _ranges(m: PwmMap, n: int) -> list[IntervalUnion]:
    er = eventual_range(m, n)
    out = list(er.ranges)
    while len(out) <= n:
        out.append(out[-1])
    return out


def c_n_sets(m: PwmMap, levels: int) -> list[frozenset[FieldElement]]:
    report = forward_orbit(m, m.partition, 2 * levels)
    ranges = _ranges(m, levels)
    out = [frozenset({ZERO, ONE})]
    acc: set[FieldElement] = set()
    for n in range(1, levels + 1):
        acc |= report.image(2 * n - 1) | report.image(2 * n)
        out.append(frozenset(x for x in acc if ranges[n].contains_point(x)))
    return out


def preimage_count(m: PwmMap, p: XPoint, n: int) -> int:
    """Number of points q with ``sigma^n(q) == p``."""
    layer = {p: 1}
    for _ in range(n):
        nxt: dict[XPoint, int] = {}
        for q, c in layer.items():
            for i, b in enumerate(m.branches):
                lo, hi = m.branch_image(i)
                if ClopenInterval(lo, hi).contains(q):
                    side = q.side if b.increasing else q.side.flip()
                    r = XPoint(b.inverse(q.coordinate), side)
                    nxt[r] = nxt.get(r, 0) + c
        layer = nxt
    return sum(layer.values())


def _vertices(points: frozenset[FieldElement], rng: IntervalUnion) -> list[tuple[FieldElement, FieldElement]]:
    pts = sorted(points)
    return [(u, v) for u, v in zip(pts, pts[1:]) if rng.contains_interval(u, v)]


def build_diagram(m: PwmMap, levels: int = DEFAULT_LEVELS, max_vertices: int = DEFAULT_MAX_VERTICES) -> BratteliDiagram:
    cs = c_n_sets(m, levels)
    ranges = _ranges(m, levels)
    built = [Level((Vertex(ZERO, ONE, 1),))]
    prev = [(ZERO, ONE)]
    prev_k = [1]
    total = 1
    for n in range(1, levels + 1):
        spans = _vertices(cs[n], ranges[n])
        total += len(spans)
        if total > max_vertices:
            raise BoundExceeded(f"diagram exceeds {max_vertices} vertices at level {n}", max_vertices)
        mult: dict[tuple[int, int], int] = {}
        for zi, (z0, z1) in enumerate(spans):
            for i, b in enumerate(m.branches):
                lo, hi = m.branch_image(i)
                if not (lo <= z0 and z1 <= hi):
                    continue
                y0, y1 = sorted((b.inverse(z0), b.inverse(z1)))
                host = next((yi for yi, (u, v) in enumerate(prev) if u <= y0 and y1 <= v), None)
                if host is not None:
                    mult[(host, zi)] = mult.get((host, zi), 0) + 1
                elif ranges[n - 1].intersect(y0, y1).intervals:
                    raise ConsistencyFailure(
                        f"preimage [{y0}, {y1}] of a level-{n} vertex straddles level-{n - 1} vertices"
                    )
        ks = []
        for zi, (z0, z1) in enumerate(spans):
            k = sum(prev_k[yi] * c for (yi, t), c in mult.items() if t == zi)
            if n > RECOUNT_DEPTH:
                ks.append(k)
                continue
            direct = preimage_count(m, XPoint((z0 + z1) / 2, Side.PLUS), n)
            if k != direct:
                raise ConsistencyFailure(f"multiplicity {k} disagrees with preimage count {direct}")
            ks.append(k)
        edges = tuple(Edge(y, z, c) for (y, z), c in sorted(mult.items()))
        built.append(Level(tuple(Vertex(u, v, k) for (u, v), k in zip(spans, ks)), edges))
        prev, prev_k = spans, ks
    return BratteliDiagram(tuple(built))


def k0_sequence(d: BratteliDiagram) -> K0Sequence:
    ranks = tuple(len(lvl.vertices) for lvl in d.levels)
    mats = []
    for n in range(1, len(d.levels)):
        rows = [[0] * ranks[n] for _ in range(ranks[n - 1])]
        for e in d.levels[n].edges:
            rows[e.source][e.target] += e.mult
        mats.append(tuple(tuple(r) for r in rows))
    return K0Sequence(ranks, tuple(mats))


def stabilized_matrix(d: BratteliDiagram) -> tuple[tuple[int, ...], ...] | None:
    """The connecting matrix once the last two levels repeat the same vertices and matrix."""
    seq = k0_sequence(d)
    if len(seq.matrices) < 2:
        return None
    last, before = seq.matrices[-1], seq.matrices[-2]
    same = [(v.lo, v.hi) for v in d.levels[-1].vertices] == [(v.lo, v.hi) for v in d.levels[-2].vertices]
    same_prev = [(v.lo, v.hi) for v in d.levels[-2].vertices] == [(v.lo, v.hi) for v in d.levels[-3].vertices]
    if last == before and same and same_prev:
        return last
    return None


def stabilized_charpoly(d: BratteliDiagram):
    mat = stabilized_matrix(d)
    return None if mat is None else charpoly(mat)


def export(d: BratteliDiagram, fmt: str = "json") -> str:
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps(d.to_json(), indent=2) + "\n"
    if fmt != "dot":
        raise ValueError(f"unknown format {fmt!r}")
    out = ["digraph bratteli {", "  rankdir=TB;"]
    for n, lvl in enumerate(d.levels):
        names = []
        for j, v in enumerate(lvl.vertices):
            name = f"L{n}_{j}"
            names.append(name)
            out.append(f'  {name} [label="[{v.lo}, {v.hi}]\\nk={v.k}"];')
        out.append("  { rank=same; " + " ".join(f"{x};" for x in names) + " }")
    for n, lvl in enumerate(d.levels):
        for e in lvl.edges:
            out.append(f'  L{n - 1}_{e.source} -> L{n}_{e.target} [label="{e.mult}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def multiplicities_from_matrices(seq: K0Sequence) -> list[tuple[int, ...]]:
    """Dimension vectors obtained by pushing (1) through the connecting matrices."""
    vec = (1,) * seq.ranks[0]
    out = [vec]
    for mat in seq.matrices:
        vec = tuple(sum(vec[i] * mat[i][j] for i in range(len(vec))) for j in range(len(mat[0]) if mat else 0))
        out.append(vec)
    return out


def as_lists(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(r) for r in mat]
