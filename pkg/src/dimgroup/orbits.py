"""Forward orbits of finite point sets, Markov partitions, disjoint-orbit checks
and the eventual range of a map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotEventuallySurjective, RangeNotSingleInterval, ValidationFailed
from .field import ONE, ZERO, FieldElement, Number, as_element
from .maps import Branch, PwmMap, tau_hat

DEFAULT_STEPS = 10_000
DEFAULT_MAX_POINTS = 100_000


def max_points_default() -> int:
    raw = os.environ.get("DIMGROUP_MAX_POINTS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_MAX_POINTS


# -- interval unions --------------------------------------------------------


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, disjoint, merged closed intervals of positive length."""

    intervals: tuple[tuple[FieldElement, FieldElement], ...] = ()

    @classmethod
    def of(cls, spans: Iterable[tuple[Number, Number]]) -> IntervalUnion:
        cleaned = []
        for lo, hi in spans:
            lo, hi = as_element(lo), as_element(hi)
            if hi < lo:
                lo, hi = hi, lo
            if lo != hi:
                cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[list[FieldElement]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))

    @classmethod
    def unit(cls) -> IntervalUnion:
        return cls(((ZERO, ONE),))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def intersect(self, lo: FieldElement, hi: FieldElement) -> IntervalUnion:
        return IntervalUnion.of((max(a, lo), min(b, hi)) for a, b in self.intervals if a < hi and b > lo)

    def contains_point(self, x: FieldElement) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    def contains_interval(self, lo: FieldElement, hi: FieldElement) -> bool:
        return any(a <= lo and hi <= b for a, b in self.intervals)

    def issubset(self, other: IntervalUnion) -> bool:
        return all(other.contains_interval(a, b) for a, b in self.intervals)

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(f"[{a}, {b}]" for a, b in self.intervals)

    def to_json(self) -> list[list[str]]:
        return [[str(a), str(b)] for a, b in self.intervals]


def image_of_union(m: PwmMap, r: IntervalUnion) -> IntervalUnion:
    spans = []
    for i, b in enumerate(m.branches):
        a0, a1 = m.branch_domain(i)
        for lo, hi in r.intersect(a0, a1):
            spans.append((b(lo), b(hi)))
    return IntervalUnion.of(spans)


# -- forward orbits ---------------------------------------------------------


@dataclass(frozen=True)
class EventuallyPeriodic:
    """Layer ``preperiod + period`` of the set-valued orbit equals layer ``preperiod``."""

    preperiod: int
    period: int

    def __str__(self) -> str:
        return f"eventually periodic (preperiod {self.preperiod}, period {self.period})"


@dataclass(frozen=True)
class OpenAtBound:
    bound: int

    def __str__(self) -> str:
        return f"open at bound {self.bound}"


SeedStatus = EventuallyPeriodic | OpenAtBound


@dataclass(frozen=True)
class OrbitReport:
    """Forward orbit of a seed set under the set-valued map of one-sided limits.

    ``layers[seed][k]`` is the k-th image of ``{seed}``.  ``exhausted`` is True
    when every seed's orbit was enumerated completely, so ``points`` is closed
    under the map.
    """

    points: frozenset[FieldElement]
    status: dict[FieldElement, SeedStatus]
    layers: dict[FieldElement, tuple[frozenset[FieldElement], ...]]
    exhausted: bool
    bound: int

    def layer(self, seed: FieldElement, k: int) -> frozenset[FieldElement]:
        seq = self.layers[seed]
        st = self.status[seed]
        if k < len(seq):
            return seq[k]
        if isinstance(st, EventuallyPeriodic):
            return seq[st.preperiod + (k - st.preperiod) % st.period]
        raise IndexError(f"layer {k} of seed {seed} beyond bound {self.bound}")

    def image(self, k: int) -> frozenset[FieldElement]:
        out: set[FieldElement] = set()
        for s in self.layers:
            out |= self.layer(s, k)
        return frozenset(out)

    def tail(self, k: int) -> frozenset[FieldElement]:
        """Union of all images from step ``k`` on (requires an exhausted report)."""
        out: set[FieldElement] = set()
        for s, seq in self.layers.items():
            st = self.status[s]
            if not isinstance(st, EventuallyPeriodic):
                raise ValueError("tail of an open orbit is unknown")
            start = min(k, st.preperiod)
            for layer in seq[start : st.preperiod + st.period]:
                out |= layer
        return frozenset(out)

    @property
    def max_preperiod(self) -> int:
        return max(
            (st.preperiod for st in self.status.values() if isinstance(st, EventuallyPeriodic)),
            default=0,
        )


def _seed_layers(
    step, seed: FieldElement, bound: int, cap: int
) -> tuple[tuple[frozenset[FieldElement], ...], SeedStatus]:
    layer = frozenset([seed])
    layers = [layer]
    seen = {layer: 0}
    total: set[FieldElement] = set(layer)
    for k in range(1, bound + 1):
        layer = step(layer)
        if layer in seen:
            pre = seen[layer]
            return tuple(layers), EventuallyPeriodic(pre, k - pre)
        seen[layer] = k
        layers.append(layer)
        total |= layer
        if len(total) > cap:
            return tuple(layers), OpenAtBound(k)
    return tuple(layers), OpenAtBound(bound)


def forward_orbit(
    m: PwmMap,
    seeds: Iterable[Number],
    bound: int = DEFAULT_STEPS,
    max_points: int | None = None,
    threads: int = 1,
) -> OrbitReport:
    seeds = sorted({as_element(s) for s in seeds})
    cap = max_points if max_points is not None else max_points_default()
    memo: dict[FieldElement, frozenset[FieldElement]] = {}

    def step(layer: frozenset[FieldElement]) -> frozenset[FieldElement]:
        out: set[FieldElement] = set()
        for x in layer:
            img = memo.get(x)
            if img is None:
                img = tau_hat(m, x)
                memo[x] = img
            out |= img
        return frozenset(out)

    if threads > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _seed_layers(step, s, bound, cap), seeds))
    else:
        results = [_seed_layers(step, s, bound, cap) for s in seeds]
    layers = {s: r[0] for s, r in zip(seeds, results)}
    status = {s: r[1] for s, r in zip(seeds, results)}
    points: set[FieldElement] = set()
    for seq in layers.values():
        for layer in seq:
            points |= layer
    exhausted = all(isinstance(st, EventuallyPeriodic) for st in status.values())
    return OrbitReport(frozenset(points), status, layers, exhausted, bound)


def tau_orbit(m: PwmMap, x: Number, n: int, *, right: bool = False) -> list[FieldElement]:
    """``[x, T(x), ..., T^n(x)]`` using the left (or right) branch at partition points."""
    out = [as_element(x)]
    for _ in range(n):
        out.append(m(out[-1], right=right))
    return out


# -- Markov partitions ------------------------------------------------------


@dataclass(frozen=True)
class MarkovPartition:
    """Endpoints ``b_0 < ... < b_q``; ``depth`` is a k with the k-th image of C inside them."""

    endpoints: tuple[FieldElement, ...]
    depth: int = 0

    @property
    def size(self) -> int:
        return len(self.endpoints) - 1

    def intervals(self) -> list[tuple[FieldElement, FieldElement]]:
        e = self.endpoints
        return [(e[j], e[j + 1]) for j in range(len(e) - 1)]

    def to_json(self) -> dict:
        return {"endpoints": [str(b) for b in self.endpoints], "depth": self.depth}


@dataclass(frozen=True)
class NotDetected:
    bound: int
    reason: str = "forward orbit of the partition not finite within the bound"

    def __str__(self) -> str:
        return f"not detected (bound {self.bound})"


def _pieces(m: PwmMap, u: FieldElement, v: FieldElement) -> list[tuple[int, FieldElement, FieldElement]]:
    out = []
    for i in range(m.n_branches):
        a0, a1 = m.branch_domain(i)
        if a0 < v and a1 > u:
            out.append((i, max(a0, u), min(a1, v)))
    return out


def markov_images(m: PwmMap, endpoints: Sequence[FieldElement]) -> list[list[int]] | None:
    """For each partition interval, the indices of the intervals its image covers.

    Returns None when the map is not monotone on some interval or an image
    closure is not a union of partition intervals.
    """
    ends = tuple(endpoints)
    index = {b: j for j, b in enumerate(ends)}
    out = []
    for j in range(len(ends) - 1):
        u, v = ends[j], ends[j + 1]
        pieces = _pieces(m, u, v)
        inc = {m.branches[i].increasing for i, _, _ in pieces}
        if len(inc) != 1:
            return None
        increasing = inc.pop()
        for (i, _, x), (k, _, _) in zip(pieces, pieces[1:]):
            left, right = m.branches[i](x), m.branches[k](x)
            if (left > right) if increasing else (left < right):
                return None
        img = IntervalUnion.of((m.branches[i](lo), m.branches[i](hi)) for i, lo, hi in pieces)
        covered = []
        for lo, hi in img:
            if lo not in index or hi not in index:
                return None
            covered.extend(range(index[lo], index[hi]))
        out.append(sorted(covered))
    return out


@lru_cache(maxsize=512)
def detect_markov(m: PwmMap, bound: int = DEFAULT_STEPS) -> MarkovPartition | NotDetected:
    """Coarsest Markov partition made of {0, 1} and a tail of the forward orbit of C."""
    report = forward_orbit(m, m.partition, bound)
    if not report.exhausted:
        return NotDetected(bound)
    for k in range(report.max_preperiod, -1, -1):
        cand = tuple(sorted(report.tail(k) | {ZERO, ONE}))
        if markov_images(m, cand) is not None:
            ends = set(cand)
            depth = next(j for j in range(k + 1) if report.image(j) <= ends)
            return MarkovPartition(cand, depth)
    raise ValidationFailed("finite partition orbit but images do not align with it")


def is_markov_partition(m: PwmMap, mp: MarkovPartition) -> bool:
    if markov_images(m, mp.endpoints) is None:
        return False
    report = forward_orbit(m, m.partition, mp.depth + 1)
    return set(report.image(mp.depth)) <= set(mp.endpoints)


# -- disjoint orbits --------------------------------------------------------


@dataclass(frozen=True)
class ConsistentUpTo:
    bound: int

    def __str__(self) -> str:
        return f"consistent up to {self.bound}"


@dataclass(frozen=True)
class Refuted:
    """``T^m(first) == T^n(second)``, or a two-valued point hit (``kind == "two_valued"``)."""

    first: FieldElement
    m: int
    second: FieldElement
    n: int
    kind: str = "collision"

    def __str__(self) -> str:
        if self.kind == "two_valued":
            return f"refuted: T^{self.m}({self.first}) hits a jump point"
        return f"refuted: T^{self.m}({self.first}) = T^{self.n}({self.second})"


def idoc_check(
    m: PwmMap, points: Iterable[Number], bound: int, convention: str = "auto"
) -> ConsistentUpTo | Refuted:
    """Check that the orbits of ``points`` are infinite and pairwise disjoint up to ``bound``.

    ``convention`` selects the value at jump points: ``"strict"`` reports a
    witness when an orbit meets one, ``"right"`` uses the right-continuous
    branch (interval exchanges), ``"auto"`` picks ``"right"`` for generalized
    interval exchanges and ``"strict"`` otherwise.
    """
    if convention == "auto":
        convention = "right" if m.is_generalized_interval_exchange else "strict"
    if convention not in ("strict", "right"):
        raise ValueError(f"unknown convention {convention!r}")
    pts = sorted({as_element(p) for p in points})
    current = {b: b for b in pts}
    seen: dict[FieldElement, tuple[FieldElement, int]] = {}
    for step in range(bound + 1):
        for b in pts:
            x = current[b]
            hit = seen.get(x)
            if hit is not None:
                return Refuted(hit[0], hit[1], b, step)
            seen[x] = (b, step)
        if step == bound:
            break
        for b in pts:
            x = current[b]
            if convention == "right":
                current[b] = m(x, right=True)
            else:
                vals = tau_hat(m, x)
                if len(vals) > 1:
                    return Refuted(b, step, b, step, kind="two_valued")
                current[b] = next(iter(vals))
    return ConsistentUpTo(bound)


# -- eventual range ---------------------------------------------------------


@dataclass(frozen=True)
class EventualRange:
    """``ranges[k]`` is the k-th image of [0, 1]; ``stabilized_at`` the first N with R_{N+1} = R_N."""

    ranges: tuple[IntervalUnion, ...]
    stabilized_at: int | None
    bound: int

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at is not None

    @property
    def final(self) -> IntervalUnion:
        return self.ranges[-1]


@lru_cache(maxsize=512)
def eventual_range(m: PwmMap, bound: int = DEFAULT_STEPS) -> EventualRange:
    ranges = [IntervalUnion.unit()]
    for k in range(bound):
        nxt = image_of_union(m, ranges[-1])
        ranges.append(nxt)
        if nxt == ranges[-2]:
            return EventualRange(tuple(ranges), k, bound)
    return EventualRange(tuple(ranges), None, bound)


@dataclass(frozen=True)
class Restriction:
    """The map restricted to its eventual range ``J`` and rescaled to [0, 1]."""

    map: PwmMap
    interval: tuple[FieldElement, FieldElement]
    level: int
    points: tuple[FieldElement, ...] = field(default=())

    @property
    def is_identity(self) -> bool:
        return self.interval == (ZERO, ONE)

    def rescale(self, x: Number) -> FieldElement:
        lo, hi = self.interval
        return (as_element(x) - lo) / (hi - lo)


def restrict_to_eventual_range(m: PwmMap, bound: int = DEFAULT_STEPS) -> Restriction:
    er = eventual_range(m, bound)
    if not er.stabilized:
        raise NotEventuallySurjective(f"image sequence did not stabilize within {bound} steps")
    n = er.stabilized_at
    final = er.final
    if len(final) != 1:
        raise RangeNotSingleInterval(f"eventual range {final} has {len(final)} components")
    lo, hi = final.intervals[0]
    if (lo, hi) == (ZERO, ONE):
        return Restriction(m, (lo, hi), n, m.partition)
    report = forward_orbit(m, m.partition, n)
    pts = {a for a in m.partition if lo <= a <= hi} | set(report.image(n)) | {lo, hi}
    pts = sorted(p for p in pts if lo <= p <= hi)
    length = hi - lo
    branches = []
    for u, v in zip(pts, pts[1:]):
        b = m.branches[_pieces(m, u, v)[0][0]]
        branches.append(Branch(b.slope, (b.slope * lo + b.intercept - lo) / length))
    scaled = PwmMap([(p - lo) / length for p in pts], branches, name=f"{m.name or 'map'} restricted")
    return Restriction(scaled, (lo, hi), n, tuple(pts))
