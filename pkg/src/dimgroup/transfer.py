"""Integer step functions on the doubled interval and the transfer operator."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .disconnection import Side, XPoint
from .errors import NotEventuallySurjective
from .field import ONE, ZERO, FieldElement, Number, as_element
from .maps import PwmMap
from .orbits import DEFAULT_STEPS, MarkovPartition, detect_markov, eventual_range
from .verdict import TriState


@dataclass(frozen=True)
class StepFunction:
    """Integer-valued function, constant on the gaps between cut points.

    With cuts ``b_1 < ... < b_m`` in (0, 1) the gaps are ``[0+, b_1-]``,
    ``[b_1+, b_2-]``, ..., ``[b_m+, 1-]`` and ``values[k]`` is the value on gap k.
    Adjacent gaps always carry different values.
    """

    cuts: tuple[FieldElement, ...] = ()
    values: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        cuts = tuple(as_element(c) for c in self.cuts)
        vals = tuple(int(v) for v in self.values)
        if len(vals) != len(cuts) + 1:
            raise ValueError("need exactly one value per gap")
        if any(not ZERO < c < ONE for c in cuts):
            raise ValueError("cut points must lie strictly inside (0, 1)")
        if any(cuts[k] >= cuts[k + 1] for k in range(len(cuts) - 1)):
            raise ValueError("cut points must be strictly increasing")
        keep_c, keep_v = [], [vals[0]]
        for c, v in zip(cuts, vals[1:]):
            if v != keep_v[-1]:
                keep_c.append(c)
                keep_v.append(v)
        object.__setattr__(self, "cuts", tuple(keep_c))
        object.__setattr__(self, "values", tuple(keep_v))

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, c: int) -> StepFunction:
        return cls((), (c,))

    @classmethod
    def indicator(cls, a: Number, b: Number, coefficient: int = 1) -> StepFunction:
        """``coefficient`` times the characteristic function of ``I(a, b)``."""
        return cls.from_pieces([(a, b, coefficient)])

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[Number, Number, int]]) -> StepFunction:
        """Sum of ``coef * chi_I(lo, hi)`` over the given triples."""
        delta: dict[FieldElement, int] = defaultdict(int)
        base = 0
        for lo, hi, coef in pieces:
            lo, hi = as_element(lo), as_element(hi)
            if hi < lo:
                lo, hi = hi, lo
            if lo == hi or coef == 0:
                continue
            if lo < ZERO or hi > ONE:
                raise ValueError(f"interval [{lo}, {hi}] leaves [0, 1]")
            if lo == ZERO:
                base += coef
            else:
                delta[lo] += coef
            if hi != ONE:
                delta[hi] -= coef
        return cls._sweep(base, delta)

    @classmethod
    def _sweep(cls, base: int, delta: dict[FieldElement, int]) -> StepFunction:
        cuts, vals = [], [base]
        for x in sorted(x for x, d in delta.items() if d):
            cuts.append(x)
            vals.append(vals[-1] + delta[x])
        return cls(tuple(cuts), tuple(vals))

    # -- structure ------------------------------------------------------

    def gaps(self) -> Iterator[tuple[FieldElement, FieldElement, int]]:
        pts = (ZERO,) + self.cuts + (ONE,)
        for k, v in enumerate(self.values):
            yield pts[k], pts[k + 1], v

    def pieces(self) -> list[tuple[FieldElement, FieldElement, int]]:
        """Nonzero gaps, as ``(lo, hi, value)``."""
        return [g for g in self.gaps() if g[2] != 0]

    def __call__(self, p: XPoint) -> int:
        k = sum(1 for c in self.cuts if c < p.coordinate)
        if p.side is Side.PLUS and p.coordinate in self.cuts:
            k += 1
        return self.values[k]

    def is_zero(self) -> bool:
        return self.values == (0,)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_nonpositive(self) -> bool:
        return all(v <= 0 for v in self.values)

    def support(self) -> list[tuple[FieldElement, FieldElement]]:
        """Maximal intervals ``I(lo, hi)`` on which the function is nonzero."""
        out: list[list[FieldElement]] = []
        for lo, hi, v in self.gaps():
            if v == 0:
                continue
            if out and out[-1][1] == lo:
                out[-1][1] = hi
            else:
                out.append([lo, hi])
        return [(lo, hi) for lo, hi in out]

    def refine(self, points: Iterable[FieldElement]) -> list[tuple[FieldElement, FieldElement, int]]:
        """Gaps split further at ``points`` (including zero-valued gaps)."""
        extra = sorted({p for p in points if ZERO < p < ONE} | set(self.cuts))
        bounds = [ZERO] + extra + [ONE]
        out = []
        for lo, hi in zip(bounds, bounds[1:]):
            out.append((lo, hi, self(XPoint(lo, Side.PLUS))))
        return out

    # -- arithmetic -----------------------------------------------------

    def _combine(self, other: StepFunction, sign: int) -> StepFunction:
        delta: dict[FieldElement, int] = defaultdict(int)
        for f, s in ((self, 1), (other, sign)):
            for k, c in enumerate(f.cuts):
                delta[c] += s * (f.values[k + 1] - f.values[k])
        return StepFunction._sweep(self.values[0] + sign * other.values[0], delta)

    def __add__(self, other: StepFunction) -> StepFunction:
        return self._combine(other, 1)

    def __sub__(self, other: StepFunction) -> StepFunction:
        return self._combine(other, -1)

    def __neg__(self) -> StepFunction:
        return StepFunction(self.cuts, tuple(-v for v in self.values))

    def __mul__(self, k: int) -> StepFunction:
        return StepFunction(self.cuts, tuple(k * v for v in self.values))

    __rmul__ = __mul__

    def le(self, other: StepFunction) -> bool:
        """Pointwise ``self <= other``."""
        return (other - self).is_nonnegative()

    def __str__(self) -> str:
        ps = self.pieces()
        if not ps:
            return "0"
        return " + ".join(f"{v}*I({lo}, {hi})" if v != 1 else f"I({lo}, {hi})" for lo, hi, v in ps)

    def to_json(self) -> dict:
        return {"cuts": [str(c) for c in self.cuts], "values": list(self.values)}


def discontinuity_set(f: StepFunction) -> frozenset[FieldElement]:
    """Jump points of ``f`` viewed as a function on the real line (zero outside [0, 1])."""
    out = set(f.cuts)
    if f.values[0] != 0:
        out.add(ZERO)
    if f.values[-1] != 0:
        out.add(ONE)
    return frozenset(out)


# -- the operator -----------------------------------------------------------


def transfer_apply(m: PwmMap, f: StepFunction) -> StepFunction:
    """Sum over preimages: each piece inside a branch is pushed to its image interval."""
    pieces = []
    for lo, hi, v in f.refine(m.partition):
        if v == 0:
            continue
        i = m.branch_containing(lo, right=True)
        b = m.branches[i]
        pieces.append((b(lo), b(hi), v))
    return StepFunction.from_pieces(pieces)


def transfer_power(m: PwmMap, f: StepFunction, n: int) -> StepFunction:
    for _ in range(n):
        f = transfer_apply(m, f)
    return f


def markov_coefficients(mp: MarkovPartition, f: StepFunction) -> tuple[int, ...] | None:
    """Values of ``f`` on the Markov intervals, or None if ``f`` is not constant on each."""
    ends = set(mp.endpoints)
    if any(c not in ends for c in f.cuts):
        return None
    return tuple(f(XPoint(lo, Side.PLUS)) for lo, _ in mp.intervals())


def markov_function(mp: MarkovPartition, v: Sequence[int]) -> StepFunction:
    """The function taking value ``v[i]`` on the i-th Markov interval."""
    return StepFunction.from_pieces((lo, hi, int(c)) for (lo, hi), c in zip(mp.intervals(), v))


def _module_decision(
    m: PwmMap, mp: MarkovPartition, h: StepFunction, level: int, bound: int, order: bool
) -> TriState | None:
    from .dimension import ga_element, ga_positive, ga_presentation, ga_is_zero
    from .markov import incidence_matrix

    v = markov_coefficients(mp, h)
    if v is None:
        return None
    pres = ga_presentation(incidence_matrix(m, mp))
    x = ga_element(pres, v, 0)
    if order:
        r = ga_positive(pres, x, bound)
        if r.is_unknown:
            return TriState.unknown(r.reason, bound)
        return TriState(r.value, "decided in the Markov module", bound, level + (r.level or 0))
    zero, steps = ga_is_zero(pres, x)
    return TriState(zero, "decided in the Markov module", bound, level + steps if zero else None)


def _bounded_compare(m: PwmMap, h: StepFunction, bound: int, order: bool) -> TriState:
    mp = detect_markov(m, bound)
    markov = isinstance(mp, MarkovPartition)
    for k in range(bound + 1):
        if order and h.is_nonnegative():
            return TriState.true(f"nonnegative after {k} steps", k, bound)
        if not order and h.is_zero():
            return TriState.true(f"equal after {k} steps", k, bound)
        one_signed = h.is_nonpositive() if order else (h.is_nonnegative() or h.is_nonpositive())
        if one_signed and not h.is_zero():
            return TriState.false("an iterate is one-signed and nonzero", k, bound)
        if markov:
            r = _module_decision(m, mp, h, k, bound, order)
            if r is not None:
                return r
        if k < bound:
            h = transfer_apply(m, h)
    return TriState.unknown("not decided within the step bound", bound)


def equivalent(m: PwmMap, f: StepFunction, g: StepFunction, bound: int = DEFAULT_STEPS) -> TriState:
    """Do ``f`` and ``g`` agree after finitely many applications of the operator?"""
    return _bounded_compare(m, f - g, bound, order=False)


def leq(m: PwmMap, f: StepFunction, g: StepFunction, bound: int = DEFAULT_STEPS) -> TriState:
    """Is ``L^k f <= L^k g`` pointwise for some k?"""
    return _bounded_compare(m, g - f, bound, order=True)


def generator_intervals(m: PwmMap, bound: int = DEFAULT_STEPS) -> list[tuple[FieldElement, FieldElement]]:
    """Module generators: gaps of the partition plus the minimum image point, and jump intervals."""
    if not eventual_range(m, bound).stabilized:
        raise NotEventuallySurjective(f"image sequence did not stabilize within {bound} steps")
    images = set()
    for a in m.partition:
        images |= m.tau_hat(a)
    low = min(images)
    pts = sorted(set(m.partition) | {low})
    out: list[tuple[FieldElement, FieldElement]] = list(zip(pts, pts[1:]))
    for _, left, right in m.jumps():
        span = (min(left, right), max(left, right))
        if span not in out:
            out.append(span)
    return out


def generators(m: PwmMap, bound: int = DEFAULT_STEPS) -> list[StepFunction]:
    return [StepFunction.indicator(lo, hi) for lo, hi in generator_intervals(m, bound)]
