"""Concrete presentations of the dimension group of a map.

For a Markov map with incidence matrix ``A`` the dimension group is the
stationary limit ``Z^n -A-> Z^n -A-> ...``.  Elements are pairs ``[w, k]``
(``w`` at stage ``k``); computations use the eventual range ``V_A``, the
intersection of the row spaces of the powers of ``A``, on which ``A`` acts
invertibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import BoundExceeded
from .field import FieldElement
from .linalg import Matrix, Vector, coordinates, determinant, identity, mat_mul, rank, rref, to_matrix, vec_mat
from .maps import PwmMap
from .markov import (
    IncidenceMatrix,
    _rows,
    condition_L,
    eventual_vertices,
    graph_classify,
    has_tent_certificate,
    incidence_matrix,
    submatrix,
)
from .orbits import (
    DEFAULT_STEPS,
    ConsistentUpTo,
    MarkovPartition,
    detect_markov,
    idoc_check,
    tau_orbit,
)
from .transfer import StepFunction, markov_coefficients, transfer_apply
from .verdict import TriState


@dataclass(frozen=True)
class GroupPresentation:
    """The eventual range of ``A`` with the (invertible) action of ``A`` on it."""

    matrix: tuple[tuple[int, ...], ...]
    basis: Matrix
    pivots: tuple[int, ...]
    action: Matrix
    stabilized_at: int

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order_unit(self) -> GAElement:
        return GAElement(tuple(Fraction(1) for _ in range(self.n)), 0)

    @property
    def rational_matrix(self) -> Matrix:
        return to_matrix(self.matrix)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "stabilized_at": self.stabilized_at,
            "basis": [[str(x) for x in r] for r in self.basis],
            "action": [[str(x) for x in r] for r in self.action],
        }


@dataclass(frozen=True)
class GAElement:
    """The class ``[w, level]``: ``w`` placed at stage ``level`` of the limit."""

    v: Vector
    level: int = 0
    certificate: int | None = field(default=0, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "v", tuple(Fraction(x) for x in self.v))
        if self.level < 0:
            raise ValueError("level must be nonnegative")


def ga_presentation(a: Sequence[Sequence[int]] | IncidenceMatrix) -> GroupPresentation:
    rows = _rows(a)
    n = len(rows)
    am = to_matrix(rows)
    power = to_matrix([[int(i == j) for j in range(n)] for i in range(n)])
    prev_rank = n
    k = 0
    while True:
        nxt = tuple(vec_mat(r, am) for r in power)
        r = rank(nxt)
        if r == prev_rank:
            break
        power, prev_rank, k = nxt, r, k + 1
    basis, pivots = rref(power)
    action = []
    for b in basis:
        c = coordinates(basis, pivots, vec_mat(b, am))
        if c is None:  # pragma: no cover - V_A is invariant by construction
            raise AssertionError("eventual range not invariant")
        action.append(c)
    return GroupPresentation(rows, basis, pivots, tuple(action), k)


def ga_element(p: GroupPresentation, v: Sequence[int | Fraction], level: int = 0, bound: int = 64) -> GAElement:
    """Build ``[v, level]`` and record the least m with ``v A^m`` integral (None past ``bound``)."""
    vec = tuple(Fraction(x) for x in v)
    am = p.rational_matrix
    cert = None
    w = vec
    for m in range(bound + 1):
        if all(x.denominator == 1 for x in w):
            cert = m
            break
        w = vec_mat(w, am)
    return GAElement(vec, level, cert)


def _push(p: GroupPresentation, v: Vector, k: int) -> Vector:
    am = p.rational_matrix
    for _ in range(k):
        v = vec_mat(v, am)
    return v


def _push_int(rows: tuple[tuple[int, ...], ...], v: tuple[int, ...], k: int) -> tuple[int, ...]:
    n = len(rows)
    for _ in range(k):
        v = tuple(sum(v[i] * rows[i][j] for i in range(n) if v[i]) for j in range(n))
    return v


def ga_equal(p: GroupPresentation, x: GAElement, y: GAElement) -> bool:
    """``[v, k] == [w, l]`` iff ``v A^(l+n) == w A^(k+n)``; n steps kill any kernel component."""
    scale = math.lcm(*(c.denominator for c in x.v + y.v))
    u = tuple(c.numerator * (scale // c.denominator) for c in x.v)
    w = tuple(c.numerator * (scale // c.denominator) for c in y.v)
    return _push_int(p.matrix, u, y.level + p.n) == _push_int(p.matrix, w, x.level + p.n)


def ga_add(p: GroupPresentation, x: GAElement, y: GAElement) -> GAElement:
    lvl = max(x.level, y.level)
    u = _push(p, x.v, lvl - x.level)
    w = _push(p, y.v, lvl - y.level)
    return GAElement(tuple(a + b for a, b in zip(u, w)), lvl)


def ga_neg(x: GAElement) -> GAElement:
    return GAElement(tuple(-a for a in x.v), x.level)


def ga_shift(p: GroupPresentation, x: GAElement) -> GAElement:
    """The induced automorphism: ``[v, k] -> [v A, k]``."""
    return GAElement(vec_mat(x.v, p.rational_matrix), x.level)


def ga_is_zero(p: GroupPresentation, x: GAElement) -> tuple[bool, int]:
    """Whether ``x`` is zero, with the least j such that ``v A^j == 0`` when it is."""
    w = x.v
    am = p.rational_matrix
    for j in range(p.n + 1):
        if not any(w):
            return True, j
        w = vec_mat(w, am)
    return False, p.n


def ga_coordinates(p: GroupPresentation, x: GAElement) -> Vector:
    """The vector of ``V_A`` representing ``x`` under the stage-zero identification."""
    if p.rank == 0:
        return tuple(Fraction(0) for _ in range(p.n))
    u = _push(p, x.v, p.n)
    c = coordinates(p.basis, p.pivots, u)
    return vec_mat(vec_mat(c, _inverse_power(p.action, p.n + x.level)), p.basis)


@lru_cache(maxsize=256)
def _inverse_power(a: Matrix, k: int) -> Matrix:
    if k == 0:
        return identity(len(a))
    return mat_mul(_inverse_power(a, k - 1), _inverse(a))


@lru_cache(maxsize=256)
def _inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    red, _ = rref(aug)
    return tuple(tuple(r[n:]) for r in red)


def ga_positive(p: GroupPresentation, x: GAElement, bound: int = DEFAULT_STEPS) -> TriState:
    """Is some ``v A^m`` (m <= bound) entrywise nonnegative?"""
    am = p.rational_matrix
    w = x.v
    seen: set[Vector] = set()
    for m in range(bound + 1):
        if all(c >= 0 for c in w):
            return TriState.true("iterate is nonnegative", m, bound)
        if all(c <= 0 for c in w):
            zero, j = ga_is_zero(p, GAElement(w, 0))
            if zero:
                return TriState.true("element is zero", m + j, bound)
            return TriState.false("iterate is nonpositive and nonzero", m, bound)
        scale = max(abs(c) for c in w)
        direction = tuple(c / scale for c in w)
        if direction in seen:
            return TriState.false("sign pattern cycles without becoming nonnegative", m, bound)
        seen.add(direction)
        w = vec_mat(w, am)
    return TriState.unknown("signs still mixed at the bound", bound)


# -- maps ---------------------------------------------------------------------


def markov_module_vector(
    m: PwmMap, mp: MarkovPartition, f: StepFunction, bound: int = DEFAULT_STEPS
) -> tuple[tuple[int, ...], int]:
    """Least n with ``L^n f`` constant on every Markov interval, and its values there."""
    g = f
    for n in range(bound + 1):
        v = markov_coefficients(mp, g)
        if v is not None:
            return v, n
        if n < bound:
            g = transfer_apply(m, g)
    raise BoundExceeded(f"function not absorbed into the Markov module within {bound} steps", bound)


def essential_vertices(a: Sequence[Sequence[int]] | IncidenceMatrix) -> list[int]:
    """Vertices on paths that are arbitrarily long both backwards and forwards."""
    rows = _rows(a)
    back = set(eventual_vertices(rows))
    transposed = tuple(tuple(rows[j][i] for j in range(len(rows))) for i in range(len(rows)))
    fwd = set(eventual_vertices(transposed))
    return sorted(back & fwd)


def matrix_is_simple(a: Sequence[Sequence[int]] | IncidenceMatrix) -> bool:
    """Simplicity of the stationary limit: the essential part of ``A`` is primitive."""
    keep = essential_vertices(a)
    if not keep:
        return False
    return graph_classify(submatrix(a, keep)).primitive


def is_simple(m: PwmMap, bound: int = DEFAULT_STEPS) -> TriState:
    mp = detect_markov(m, bound)
    if isinstance(mp, MarkovPartition):
        a = incidence_matrix(m, mp)
        ok = matrix_is_simple(a)
        why = "essential part of the incidence matrix is " + ("primitive" if ok else "not primitive")
        return TriState(ok, why)
    if has_tent_certificate(m):
        return TriState.true("topologically exact tent map")
    return TriState.unknown("no Markov partition found and no exactness certificate", bound)


# -- classification ---------------------------------------------------------


@dataclass(frozen=True)
class ModuleClassification:
    tag: str
    rank: int | None = None
    conditional: bool = False
    bound: int | None = None
    certificate: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    presentation: GroupPresentation | None = None

    def summary(self) -> str:
        if self.tag == "MarkovTriple" and self.presentation is not None:
            act = self.presentation.action
            if len(act) == 1:
                action = f"×{act[0][0]}"
            else:
                action = "[" + "; ".join(" ".join(str(c) for c in r) for r in act) + "]"
            return f"MarkovTriple, rank {self.rank}, action {action}"
        text = self.tag if self.rank is None or self.tag == "Cyclic" else f"{self.tag}({self.rank})"
        if "group" in self.payload:
            text += f", {self.payload['group']}"
        if self.conditional:
            text += f", conditional({self.bound})"
        return text

    def to_json(self) -> dict:
        out: dict = {"tag": self.tag, "conditional": self.conditional}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.bound is not None:
            out["bound"] = self.bound
        out["certificate"] = dict(self.certificate)
        out["payload"] = dict(self.payload)
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_json()
        return out


def _orbit_repeats(m: PwmMap, x: FieldElement, bound: int) -> bool:
    seen = set()
    for y in tau_orbit(m, x, bound):
        if y in seen:
            return True
        seen.add(y)
    return False


def _cyclic_free_endpoint(m: PwmMap, bound: int) -> FieldElement | None:
    """An endpoint a with the other partition images inside C and no orbit repeat to ``bound``."""
    cset = set(m.partition)
    for a in (m.partition[0], m.partition[-1]):
        others = set()
        for x in m.partition:
            if x != a:
                others |= m.tau_hat(x)
        if others <= cset and not _orbit_repeats(m, a, bound):
            return a
    return None


def _interval_list(pts: Sequence[FieldElement]) -> list[str]:
    return [f"I({u}, {v})" for u, v in zip(pts, pts[1:])]


def classify_module(m: PwmMap, bound: int = DEFAULT_STEPS) -> ModuleClassification:
    mp = detect_markov(m, bound)
    if isinstance(mp, MarkovPartition):
        a = incidence_matrix(m, mp)
        pres = ga_presentation(a)
        cert = {
            "markov_partition": [str(b) for b in mp.endpoints],
            "incidence_matrix": a.row_strings(),
            "condition_L": condition_L(a),
        }
        return ModuleClassification("MarkovTriple", pres.rank, False, None, cert, {}, pres)

    cert: dict = {"markov": f"not detected within {bound} steps"}
    surjective = m.is_surjective
    maximal = m.is_maximal
    continuous = m.is_continuous
    two_monotone = (
        m.n_branches == 2 and continuous and m.branches[0].increasing != m.branches[1].increasing
    )

    if two_monotone and surjective and maximal:
        cert.update(unimodal=True, surjective=True)
        payload = {"generator": "I(0, 1)"}
        a = _cyclic_free_endpoint(m, bound)
        if a is not None:
            cert["free_endpoint"] = str(a)
            cert["endpoint_orbit"] = f"no repeat within {bound} steps"
            payload.update(group="Z[t, 1/t]", action="multiplication by t")
            return ModuleClassification("Cyclic", 1, True, bound, cert, payload)
        return ModuleClassification("Cyclic", 1, False, None, cert, payload)

    interior = list(m.interior_points)
    if continuous and surjective and maximal and interior:
        ends = {m.partition[0], m.partition[-1]}
        end_images = m.tau_hat(m.partition[0]) | m.tau_hat(m.partition[-1])
        if not (end_images & ends):
            check = idoc_check(m, interior, bound, "strict")
            if isinstance(check, ConsistentUpTo):
                q = len(interior) + 1
                cert.update(
                    continuous=True,
                    surjective=True,
                    endpoint_images_interior=True,
                    idoc=f"consistent up to {bound}",
                )
                payload = {
                    "group": f"Z[t, 1/t]^{q - 1}",
                    "basis": _interval_list(m.partition[:-1]),
                }
                return ModuleClassification("FreeRank", q - 1, True, bound, cert, payload)
            cert["idoc"] = str(check)

    if m.is_generalized_interval_exchange and maximal and interior:
        check = idoc_check(m, interior, bound, "right")
        if isinstance(check, ConsistentUpTo):
            n = m.n_branches
            cert.update(interval_exchange=True, idoc=f"consistent up to {bound}")
            payload = {"group": f"Z[t, 1/t]^{n - 1} + Z", "action": "t on the first summand, trivial on Z"}
            return ModuleClassification("ExchangeForm", n - 1, True, bound, cert, payload)
        cert["idoc"] = str(check)

    return ModuleClassification("Unknown", None, False, bound, cert, {})


def action_is_invertible(p: GroupPresentation) -> bool:
    return p.rank == 0 or determinant(p.action) != 0

