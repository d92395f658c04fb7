"""Incidence matrices of Markov maps and the graph-theoretic verdicts they support."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .field import ONE, ZERO, FieldElement
from .maps import PwmMap
from .orbits import DEFAULT_STEPS, MarkovPartition, NotDetected, _pieces, detect_markov, markov_images
from .verdict import TriState

Rows = Sequence[Sequence[int]]


@dataclass(frozen=True)
class IncidenceMatrix:
    """Zero-one matrix; ``rows[i][j] == 1`` iff interval i's image covers interval j."""

    rows: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[FieldElement, FieldElement], ...] = ()

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def row_strings(self) -> list[str]:
        return ["".join(str(x) for x in r) for r in self.rows]


def _rows(a: Rows | IncidenceMatrix) -> tuple[tuple[int, ...], ...]:
    if isinstance(a, IncidenceMatrix):
        return a.rows
    return tuple(tuple(int(x) for x in r) for r in a)


def incidence_matrix(m: PwmMap, mp: MarkovPartition) -> IncidenceMatrix:
    images = markov_images(m, mp.endpoints)
    if images is None:
        raise ValueError("the given points do not form a Markov partition for this map")
    q = mp.size
    rows = tuple(tuple(int(j in set(cov)) for j in range(q)) for cov in images)
    return IncidenceMatrix(rows, tuple(mp.intervals()))


# -- graph algorithms -------------------------------------------------------


def _successors(rows: tuple[tuple[int, ...], ...]) -> list[list[int]]:
    return [[j for j, x in enumerate(r) if x] for r in rows]


def strongly_connected_components(a: Rows | IncidenceMatrix) -> list[list[int]]:
    """Tarjan's algorithm, iterative."""
    succ = _successors(_rows(a))
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(succ[v])):
                w = succ[v][k]
                if index[w] == -1:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def condition_L(a: Rows | IncidenceMatrix) -> bool:
    """Every loop has an exit: no cycle runs only through vertices of out-degree one."""
    succ = _successors(_rows(a))
    n = len(succ)
    for start in range(n):
        v = start
        for _ in range(n):
            if len(succ[v]) != 1:
                break
            v = succ[v][0]
            if v == start:
                return False
    return True


def period(a: Rows | IncidenceMatrix) -> int:
    """Gcd of cycle lengths of a strongly connected graph (0 if it has no edges)."""
    succ = _successors(_rows(a))
    if not succ:
        return 0
    level = {0: 0}
    queue = deque([0])
    g = 0
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = gcd(g, level[u] + 1 - level[v])
    return abs(g)


@dataclass(frozen=True)
class GraphClass:
    irreducible: bool
    primitive: bool
    permutation: bool
    period: int

    def to_json(self) -> dict:
        return {
            "irreducible": self.irreducible,
            "primitive": self.primitive,
            "permutation": self.permutation,
            "period": self.period,
        }


def graph_classify(a: Rows | IncidenceMatrix) -> GraphClass:
    rows = _rows(a)
    n = len(rows)
    comps = strongly_connected_components(rows)
    has_edge = any(any(r) for r in rows)
    irreducible = n > 0 and len(comps) == 1 and has_edge
    per = period(rows) if irreducible else 0
    permutation = all(sum(r) == 1 for r in rows) and all(
        sum(rows[i][j] for i in range(n)) == 1 for j in range(n)
    )
    return GraphClass(irreducible, irreducible and per == 1, permutation, per)


def eventual_vertices(a: Rows | IncidenceMatrix) -> list[int]:
    """Vertices reachable by arbitrarily long paths ending there (the eventual range support)."""
    rows = _rows(a)
    succ = _successors(rows)
    current = set(range(len(rows)))
    while True:
        nxt = {w for v in current for w in succ[v]}
        if nxt == current:
            return sorted(current)
        current = nxt


def submatrix(a: Rows | IncidenceMatrix, keep: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    rows = _rows(a)
    return tuple(tuple(rows[i][j] for j in keep) for i in keep)


def to_dot(a: Rows | IncidenceMatrix, name: str = "markov") -> str:
    rows = _rows(a)
    labels = a.labels if isinstance(a, IncidenceMatrix) and a.labels else ()
    out = [f"digraph {name} {{"]
    for i in range(len(rows)):
        text = f"E{i + 1}" + (f" [{labels[i][0]}, {labels[i][1]}]" if labels else "")
        out.append(f'  v{i} [label="{text}"];')
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x:
                out.append(f"  v{i} -> v{j};")
    out.append("}")
    return "\n".join(out) + "\n"


# -- dynamics ---------------------------------------------------------------


def tent_slope(m: PwmMap) -> tuple[str, FieldElement] | None:
    """Recognise the symmetric tent ``(s, 0), (-s, s)`` or the restricted tent ``(s, 2-s), (-s, s)``."""
    if m.n_branches != 2:
        return None
    left, right = m.branches
    s = left.slope
    if s <= ONE or right.slope != -s or right.intercept != s:
        return None
    if left.intercept == ZERO and m.partition[1] == Fraction(1, 2):
        return "tent", s
    if left.intercept == 2 - s and m.partition[1] == ONE - ONE / s:
        return "restricted_tent", s
    return None


def has_tent_certificate(m: PwmMap) -> bool:
    """Tents known to be topologically exact: restricted tents with slope in (sqrt 2, 2], the full tent."""
    found = tent_slope(m)
    if found is None:
        return False
    kind, s = found
    if kind == "restricted_tent":
        return s * s > 2
    return s == 2


def constant_slope_on_intervals(m: PwmMap, mp: MarkovPartition) -> bool:
    for u, v in mp.intervals():
        if len({m.branches[i].slope for i, _, _ in _pieces(m, u, v)}) != 1:
            return False
    return True


@dataclass(frozen=True)
class DynamicsVerdict:
    exact: TriState
    transitive: TriState
    conjugate_to_sft: TriState
    homtervals: TriState
    markov: MarkovPartition | NotDetected
    matrix: IncidenceMatrix | None = None
    graph: GraphClass | None = None

    def to_json(self) -> dict:
        return {
            "exact": self.exact.to_json(),
            "transitive": self.transitive.to_json(),
            "conjugate_to_sft": self.conjugate_to_sft.to_json(),
            "homtervals": self.homtervals.to_json(),
        }


def dynamics_verdict(m: PwmMap, bound: int = DEFAULT_STEPS) -> DynamicsVerdict:
    mp = detect_markov(m, bound)
    if isinstance(mp, MarkovPartition):
        a = incidence_matrix(m, mp)
        gc = graph_classify(a)
        if not constant_slope_on_intervals(m, mp):
            why = "Markov, but the slope varies inside a Markov interval"
            unk = TriState.unknown(why, bound)
            return DynamicsVerdict(unk, unk, unk, unk, mp, a, gc)
        lcond = condition_L(a)
        exact = TriState(gc.primitive, "incidence matrix primitive" if gc.primitive else "incidence matrix not primitive")
        trans_val = gc.irreducible and not gc.permutation
        transitive = TriState(
            trans_val,
            "irreducible, not a permutation"
            if trans_val
            else ("permutation matrix" if gc.permutation else "incidence matrix reducible"),
        )
        sft = TriState(lcond, "every loop has an exit" if lcond else "a loop without exit")
        homt = TriState(not lcond, "a loop without exit" if not lcond else "every loop has an exit")
        return DynamicsVerdict(exact, transitive, sft, homt, mp, a, gc)
    expanding = min(abs(b.slope) for b in m.branches) > ONE
    homt = (
        TriState.false("all slopes exceed 1 in absolute value")
        if expanding
        else TriState.unknown("no Markov partition found", bound)
    )
    sft = TriState.unknown("no Markov partition found", bound)
    if has_tent_certificate(m):
        why = "tent map with slope in (sqrt(2), 2]"
        return DynamicsVerdict(TriState.true(why), TriState.true(why), sft, homt, mp)
    unk = TriState.unknown("no Markov partition found and no exactness certificate", bound)
    return DynamicsVerdict(unk, unk, sft, homt, mp)
