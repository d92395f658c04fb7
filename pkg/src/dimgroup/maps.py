"""Piecewise affine monotone maps of the unit interval."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    InvalidLengths,
    InvalidSlope,
    OutOfBranchDomain,
    OutOfDomain,
    ValidationError,
)
from .field import ONE, ZERO, FieldDescriptor, FieldElement, Number, as_element, sqrt

MultiValue = frozenset  # set of one or two FieldElements


@dataclass(frozen=True)
class Branch:
    """The affine function ``x -> slope*x + intercept``."""

    slope: FieldElement
    intercept: FieldElement

    def __call__(self, x: Number) -> FieldElement:
        return self.slope * x + self.intercept

    def inverse(self, y: Number) -> FieldElement:
        return (as_element(y) - self.intercept) / self.slope

    @property
    def increasing(self) -> bool:
        return self.slope > 0


@dataclass(frozen=True)
class MapFamily:
    """Records which named constructor built a map, with its parameters."""

    name: str
    params: tuple = ()


class PwmMap:
    """A piecewise monotone map with affine branches on ``[0, 1]``.

    ``branches[i]`` is defined on ``[partition[i], partition[i + 1]]``.  Branch
    indices are zero-based throughout the package.  Instances are immutable.
    """

    __slots__ = ("partition", "branches", "family", "name", "field", "__weakref__")

    partition: tuple[FieldElement, ...]
    branches: tuple[Branch, ...]
    family: MapFamily | None
    name: str | None
    field: FieldDescriptor

    def __init__(
        self,
        partition: Iterable[Number],
        branches: Iterable[Branch | tuple[Number, Number]],
        family: MapFamily | None = None,
        name: str | None = None,
    ) -> None:
        pts = tuple(as_element(p) for p in partition)
        brs = tuple(
            b if isinstance(b, Branch) else Branch(as_element(b[0]), as_element(b[1])) for b in branches
        )
        object.__setattr__(self, "partition", pts)
        object.__setattr__(self, "branches", brs)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "field", _validate(pts, brs))

    def __setattr__(self, name, value):
        raise AttributeError("PwmMap is immutable")

    # identity is structural so maps can key caches
    def _key(self) -> tuple:
        return (self.partition, self.branches)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PwmMap):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        label = self.name or (self.family.name if self.family else "map")
        return f"PwmMap<{label}, {len(self.branches)} branches>"

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def interior_points(self) -> tuple[FieldElement, ...]:
        return self.partition[1:-1]

    def branch_domain(self, i: int) -> tuple[FieldElement, FieldElement]:
        return self.partition[i], self.partition[i + 1]

    def branch_image(self, i: int) -> tuple[FieldElement, FieldElement]:
        lo, hi = self.branch_domain(i)
        u, v = self.branches[i](lo), self.branches[i](hi)
        return (u, v) if u <= v else (v, u)

    def branches_at(self, x: FieldElement) -> list[int]:
        """Indices of the closed branch domains containing ``x``."""
        out = []
        for i in range(self.n_branches):
            lo, hi = self.partition[i], self.partition[i + 1]
            if lo <= x <= hi:
                out.append(i)
            elif x < lo:
                break
        return out

    def branch_containing(self, x: Number, *, right: bool = False) -> int:
        """Branch whose domain contains ``x``; at partition points pick left or right."""
        x = as_element(x)
        idx = self.branches_at(x)
        if not idx:
            raise OutOfDomain(f"{x} is outside [0, 1]", "domain")
        return idx[-1] if right else idx[0]

    # -- evaluation -----------------------------------------------------

    def __call__(self, x: Number, *, right: bool = False) -> FieldElement:
        x = as_element(x)
        return self.branches[self.branch_containing(x, right=right)](x)

    def tau_hat(self, x: Number) -> frozenset[FieldElement]:
        return tau_hat(self, x)

    # -- structural properties ------------------------------------------

    def jumps(self) -> list[tuple[int, FieldElement, FieldElement]]:
        """Interior partition points where the one-sided limits differ."""
        out = []
        for i, a in enumerate(self.interior_points):
            left, right = self.branches[i](a), self.branches[i + 1](a)
            if left != right:
                out.append((i + 1, left, right))
        return out

    @property
    def is_continuous(self) -> bool:
        return not self.jumps()

    @property
    def non_maximal_points(self) -> tuple[FieldElement, ...]:
        """Interior partition points where both sides are the same affine function."""
        return tuple(
            a
            for i, a in enumerate(self.interior_points)
            if self.branches[i] == self.branches[i + 1]
        )

    @property
    def is_maximal(self) -> bool:
        return not self.non_maximal_points

    @property
    def is_surjective(self) -> bool:
        spans = sorted(self.branch_image(i) for i in range(self.n_branches))
        reach = ZERO
        if spans[0][0] != ZERO:
            return False
        for lo, hi in spans:
            if lo > reach:
                return False
            reach = max(reach, hi)
        return reach == ONE

    @property
    def is_generalized_interval_exchange(self) -> bool:
        """All branches increasing and the branch images tile ``[0, 1]``."""
        if any(not b.increasing for b in self.branches):
            return False
        spans = sorted(self.branch_image(i) for i in range(self.n_branches))
        reach = ZERO
        for lo, hi in spans:
            if lo != reach:
                return False
            reach = hi
        return reach == ONE

    @property
    def is_interval_exchange(self) -> bool:
        return self.is_generalized_interval_exchange and all(b.slope == ONE for b in self.branches)

    @property
    def is_unimodal(self) -> bool:
        return self.n_branches == 2 and self.is_continuous and (
            self.branches[0].increasing != self.branches[1].increasing
        )

    @property
    def is_piecewise_linear_constant_slope(self) -> bool:
        return len({abs(b.slope) for b in self.branches}) == 1


def _validate(pts: tuple[FieldElement, ...], brs: tuple[Branch, ...]) -> FieldDescriptor:
    if len(pts) < 2:
        raise ValidationError("a partition needs at least the points 0 and 1", "partition")
    if pts[0] != ZERO or pts[-1] != ONE:
        raise ValidationError("the partition must start at 0 and end at 1", "partition")
    if any(pts[k] >= pts[k + 1] for k in range(len(pts) - 1)):
        raise ValidationError("partition points must be strictly increasing", "partition")
    if len(brs) != len(pts) - 1:
        raise ValidationError(
            f"{len(pts) - 1} partition intervals but {len(brs)} branches", "branch_count"
        )
    fld = FieldDescriptor(1)
    for x in list(pts) + [c for b in brs for c in (b.slope, b.intercept)]:
        fld = fld.join(x.field)
    for i, b in enumerate(brs):
        if b.slope == ZERO:
            raise InvalidSlope(f"branch {i} has zero slope", "strict_monotonicity")
        for x in (pts[i], pts[i + 1]):
            y = b(x)
            if y < ZERO or y > ONE:
                raise ValidationError(
                    f"branch {i} maps {x} to {y}, outside [0, 1]", "range_containment"
                )
    return fld


# -- free-function API ------------------------------------------------------


def branch_eval(m: PwmMap, i: int, x: Number) -> FieldElement:
    x = as_element(x)
    lo, hi = m.branch_domain(i)
    if not lo <= x <= hi:
        raise OutOfBranchDomain(f"{x} is outside branch {i} domain [{lo}, {hi}]", "branch_domain")
    return m.branches[i](x)


def tau_hat(m: PwmMap, x: Number) -> frozenset[FieldElement]:
    """The set of one-sided limits of the map at ``x``."""
    x = as_element(x)
    idx = m.branches_at(x)
    if not idx:
        raise OutOfDomain(f"{x} is outside [0, 1]", "domain")
    return frozenset(m.branches[i](x) for i in idx)


def tau_hat_preimage(m: PwmMap, y: Number) -> frozenset[FieldElement]:
    y = as_element(y)
    out = set()
    for i, b in enumerate(m.branches):
        lo, hi = m.branch_image(i)
        if lo <= y <= hi:
            x = b.inverse(y)
            a0, a1 = m.branch_domain(i)
            if a0 <= x <= a1:
                out.add(x)
    return frozenset(out)


def tau_hat_set(m: PwmMap, xs: Iterable[FieldElement]) -> frozenset[FieldElement]:
    out: set[FieldElement] = set()
    for x in xs:
        out |= tau_hat(m, x)
    return frozenset(out)


# -- constructors -----------------------------------------------------------


def _check_slope(s: FieldElement) -> None:
    if not (ONE < s <= 2):
        raise InvalidSlope(f"tent slope must satisfy 1 < s <= 2, got {s}", "tent_slope")


def make_tent(s: Number) -> PwmMap:
    """Symmetric tent ``s*x`` on ``[0, 1/2]`` and ``s - s*x`` on ``[1/2, 1]``."""
    s = as_element(s)
    _check_slope(s)
    half = FieldElement(Fraction(1, 2))
    return PwmMap(
        [ZERO, half, ONE],
        [Branch(s, ZERO), Branch(-s, s)],
        family=MapFamily("tent", (s,)),
        name=f"tent({s})",
    )


def make_restricted_tent(s: Number) -> PwmMap:
    """The surjective tent with peak at ``c = 1 - 1/s`` and ``T(c) = 1``."""
    s = as_element(s)
    _check_slope(s)
    c = ONE - ONE / s
    return PwmMap(
        [ZERO, c, ONE],
        [Branch(s, 2 - s), Branch(-s, s)],
        family=MapFamily("restricted_tent", (s,)),
        name=f"restricted_tent({s})",
    )


def make_interval_exchange(lengths: Sequence[Number], permutation: Sequence[int]) -> PwmMap:
    """Slope-one exchange; ``permutation[i]`` is the position of interval ``i``'s image."""
    lens = [as_element(x) for x in lengths]
    if not lens or any(x <= ZERO for x in lens) or sum(lens, ZERO) != ONE:
        raise InvalidLengths("lengths must be positive and sum to 1", "lengths")
    perm = list(permutation)
    if sorted(perm) != list(range(len(lens))):
        raise InvalidLengths(f"{perm} is not a permutation of 0..{len(lens) - 1}", "permutation")
    starts = [ZERO]
    for x in lens:
        starts.append(starts[-1] + x)
    order = sorted(range(len(lens)), key=lambda i: perm[i])
    image_start = {}
    pos = ZERO
    for i in order:
        image_start[i] = pos
        pos = pos + lens[i]
    branches = [Branch(ONE, image_start[i] - starts[i]) for i in range(len(lens))]
    return PwmMap(
        starts,
        branches,
        family=MapFamily("interval_exchange", (tuple(lens), tuple(perm))),
        name="interval_exchange",
    )


def make_from_nodes(xs: Sequence[Number], ys: Sequence[Number], name: str | None = None) -> PwmMap:
    """Continuous piecewise affine map interpolating ``(xs[k], ys[k])``."""
    px = [as_element(x) for x in xs]
    py = [as_element(y) for y in ys]
    if len(px) != len(py):
        raise ValidationError("node lists differ in length", "nodes")
    branches = []
    for k in range(len(px) - 1):
        dx = px[k + 1] - px[k]
        if dx <= ZERO:
            raise ValidationError("node abscissae must increase", "partition")
        s = (py[k + 1] - py[k]) / dx
        branches.append(Branch(s, py[k] - s * px[k]))
    return PwmMap(px, branches, name=name)


def golden_mean() -> FieldElement:
    """``g = (sqrt(5) - 1) / 2``."""
    return (sqrt(5) - 1) / 2
