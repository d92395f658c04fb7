"""Acceptance criteria, one check per criterion, each timed against a 5 s budget.

Every check prints a single ``PASS``/``FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` for the summary alone.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dimgroup.bratteli import build_diagram, k0_sequence, stabilized_matrix  # noqa: E402
from dimgroup.dimension import (  # noqa: E402
    GAElement,
    classify_module,
    ga_equal,
    ga_positive,
    ga_presentation,
    is_simple,
)
from dimgroup.disconnection import Side, XPoint, sigma_apply  # noqa: E402
from dimgroup.examples import EXAMPLES, example, preset  # noqa: E402
from dimgroup.linalg import charpoly, format_matrix, mat_mul  # noqa: E402
from dimgroup.markov import condition_L, dynamics_verdict, incidence_matrix  # noqa: E402
from dimgroup.orbits import (  # noqa: E402
    ConsistentUpTo,
    IntervalUnion,
    MarkovPartition,
    NotDetected,
    detect_markov,
    eventual_range,
    idoc_check,
    tau_orbit,
)
from dimgroup.transfer import (  # noqa: E402
    StepFunction,
    generator_intervals,
    markov_function,
    transfer_apply,
    transfer_power,
)
from mapgen import random_maps  # noqa: E402
from oracles import (  # noqa: E402
    ORACLE_DEPTH,
    oracle_equal,
    oracle_positive,
    powers,
    preimage_sum,
    zero_one_matrices,
)

BUDGET = 5.0


def _markov_rows(name):
    m = example(name)
    return incidence_matrix(m, detect_markov(m, 200)).rows


def criterion_1():
    assert _markov_rows("full_tent") == ((1, 1), (1, 1))
    assert _markov_rows("three_fold") == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    assert _markov_rows("restricted_tent_sqrt2") == ((0, 0, 1), (0, 0, 1), (1, 1, 0))
    return "incidence matrices match"


def criterion_2():
    p = ga_presentation(((1, 1), (1, 1)))
    assert p.rank == 1 and p.action == ((2,),)
    q = ga_presentation(((0, 0, 1), (0, 0, 1), (1, 1, 0)))
    assert q.rank == 2
    assert mat_mul(q.action, q.action) == ((2, 0), (0, 2))
    assert q.action[0][0] + q.action[1][1] == 0
    return f"rank 1 action [2]; rank 2 action {format_matrix(q.action)}"


def criterion_3():
    m = example("tent_3_2")
    orbit = tau_orbit(m, F(1, 3), 30)
    for n in range(3, 31):
        x = orbit[n]
        assert x.is_rational and x.a.denominator == 2 ** (n - 2), (n, x)
        assert x.a.numerator % 2 == 1
    assert len(set(orbit[3:31])) == 28
    assert isinstance(detect_markov(m, 50), NotDetected)
    return "a_n odd and distinct for 3 <= n <= 30; no Markov partition"


def criterion_4():
    assert set(generator_intervals(example("jump_map"))) == {(0, F(1, 3)), (F(1, 3), 1), (F(2, 3), 1)}
    assert len(generator_intervals(example("jump_map"))) == 3
    assert set(generator_intervals(example("full_tent"))) == {(0, F(1, 2)), (F(1, 2), 1)}
    return "generator sets match"


def criterion_5():
    tent = example("full_tent")
    one = StepFunction.constant(1)
    assert transfer_apply(tent, StepFunction.indicator(F(1, 2), 1)) == one
    assert transfer_apply(tent, one) == 2 * one
    rng = random.Random(5)
    names = [n for n in sorted(EXAMPLES) if isinstance(detect_markov(example(n), 200), MarkovPartition)]
    for name in names:
        m = example(name)
        mp = detect_markov(m, 200)
        a = incidence_matrix(m, mp).rows
        k = len(a)
        for _ in range(100):
            v = [rng.randint(-9, 9) for _ in range(k)]
            va = [sum(v[i] * a[i][j] for i in range(k)) for j in range(k)]
            assert transfer_apply(m, markov_function(mp, v)) == markov_function(mp, va), name
    return f"identities hold; intertwining checked on {len(names)} Markov maps"


def criterion_6():
    assert dynamics_verdict(example("three_fold"), 200).exact.is_true
    v = dynamics_verdict(example("restricted_tent_sqrt2"), 200)
    assert v.transitive.is_true and v.exact.is_false
    assert dynamics_verdict(example("permutation"), 200).transitive.is_false
    assert condition_L(((0, 1), (1, 0))) is False
    assert condition_L(((0, 1, 1), (1, 0, 1), (1, 1, 0))) is True
    return "verdicts match"


def criterion_7():
    verdicts = [
        is_simple(example("full_tent"), 50),
        is_simple(example("restricted_tent_sqrt2"), 50),
        is_simple(example("tent_3_2"), 50),
    ]
    assert [v.value for v in verdicts] == [True, False, True]
    return "simple / not simple / simple"


def criterion_8():
    d = build_diagram(example("full_tent"), 6)
    for n in range(7):
        assert d.multiplicities(n) == (2**n,)
    assert all(mat == ((2,),) for mat in k0_sequence(d).matrices)
    t = example("restricted_tent_sqrt2")
    orbit = tau_orbit(t, t.partition[1], 3)
    c1, c2, c3 = orbit[1], orbit[2], orbit[3]
    level3 = build_diagram(t, 3).levels[3].vertices
    assert [(v.lo, v.hi, v.k) for v in level3] == [(c2, c3, 2), (c3, c1, 4)]
    stab = stabilized_matrix(build_diagram(t, 6))
    act = ga_presentation(_markov_rows("restricted_tent_sqrt2")).action
    assert stab is not None and charpoly(stab) == charpoly(act) == (1, 0, -2)
    assert mat_mul(act, act) == ((2, 0), (0, 2))
    return "full tent k = 2^n; level-3 multiplicities 2, 4; charpoly t^2 - 2"


def criterion_9():
    a = classify_module(example("tent_3_2"), 50)
    assert (a.tag, a.conditional, a.bound) == ("Cyclic", True, 50)
    assert a.summary() == "Cyclic, Z[t, 1/t], conditional(50)"
    g = example("golden_exchange")
    b = classify_module(g, 200)
    assert (b.tag, b.rank, b.conditional, b.bound) == ("ExchangeForm", 1, True, 200)
    assert idoc_check(g, g.interior_points, 200) == ConsistentUpTo(200)
    mm = example("multimodal")
    assert mm.is_continuous and mm.is_surjective and mm.is_maximal
    assert all(mm(x) not in (0, 1) for x in (0, 1))
    assert idoc_check(mm, mm.interior_points, 100, convention="strict") == ConsistentUpTo(100)
    c = classify_module(mm, 100)
    assert (c.tag, c.rank, c.conditional) == ("FreeRank", mm.n_branches - 1, True)
    return f"{a.summary()} | {b.summary()} | {c.summary()}"


def _step(rng, nonneg):
    cuts = sorted({F(rng.randint(1, 47), 48) for _ in range(rng.randint(0, 3))})
    lo = 0 if nonneg else -3
    return StepFunction(tuple(cuts), tuple(rng.randint(lo, 3) for _ in range(len(cuts) + 1)))


def _map_properties(m, rng):
    for _ in range(3):
        f = _step(rng, nonneg=True)
        g = transfer_apply(m, f)
        assert g.is_nonnegative()
        spans = []
        for lo, hi, v in f.refine(m.partition):
            if v:
                b = m.branches[m.branch_containing(lo, right=True)]
                spans.append(sorted((b(lo), b(hi))))
        assert IntervalUnion.of(spans) == IntervalUnion.of(g.support())
        assert StepFunction(g.cuts, g.values) == g and StepFunction.from_pieces(g.pieces()) == g
    f = _step(rng, nonneg=False)
    probes = sorted(set(m.partition) | set(f.cuts) | {F(1, 7), F(5, 8)})
    for n in (1, 2, 3):
        h = transfer_power(m, f, n)
        for x in probes:
            for side in (Side.MINUS, Side.PLUS):
                p = XPoint(x, side)
                assert h(p) == preimage_sum(m, f, p, n)
    for x in list(m.partition) + [F(1, 5), F(2, 7), F(9, 11)]:
        for side in (Side.MINUS, Side.PLUS):
            p = XPoint(x, side)
            i = m.branch_containing(p.coordinate, right=p.side is Side.PLUS)
            q = sigma_apply(m, p)
            assert q.coordinate == m.branches[i](p.coordinate)
            if 0 < x < 1 and x not in m.partition:
                assert q.coordinate == m(x)
                expect = side if m.branches[i].increasing else side.flip()
                assert q == XPoint(q.coordinate, expect)
    er = eventual_range(m, 30)
    assert all(b.issubset(a) for a, b in zip(er.ranges, er.ranges[1:]))


def _ga_oracle(rng):
    checked = 0
    for n in (2, 3):
        for a in zero_one_matrices(n):
            p = ga_presentation(a)
            pw = powers(a)
            samples = [(tuple(rng.randint(-2, 2) for _ in range(n)), rng.randint(0, 2)) for _ in range(5)]
            samples.append(((1,) * n, 0))
            elems = [GAElement(v, k) for v, k in samples]
            for (x, ex), (y, ey) in itertools.product(zip(samples, elems), repeat=2):
                assert ga_equal(p, ex, ey) == oracle_equal(pw, x, y), (a, x, y)
            for v, _ in samples:
                verdict = ga_positive(p, GAElement(v), ORACLE_DEPTH)
                assert verdict.is_true == oracle_positive(pw, v), (a, v)
            checked += 1
    return checked


def criterion_10():
    rng = random.Random(10)
    maps = [example(n) for n in sorted(EXAMPLES)]
    maps += [preset("tent:2"), preset("tent:3/2"), preset("restricted_tent:sqrt2"), preset("interval_exchange")]
    maps += random_maps(50, seed=2024)
    for m in maps:
        _map_properties(m, rng)
    checked = _ga_oracle(rng)
    return f"{len(maps)} maps; {checked} zero-one matrices against the brute-force oracle"


CRITERIA = [
    (1, "incidence matrices", criterion_1),
    (2, "dimension-group presentations", criterion_2),
    (3, "non-Markov certificate", criterion_3),
    (4, "generators", criterion_4),
    (5, "transfer identities", criterion_5),
    (6, "dynamics verdicts", criterion_6),
    (7, "simplicity", criterion_7),
    (8, "Bratteli / K0", criterion_8),
    (9, "classification", criterion_9),
    (10, "property suites", criterion_10),
]


def evaluate(check):
    start = time.perf_counter()
    try:
        detail = check()
        ok = True
    except AssertionError as exc:
        detail, ok = f"assertion failed: {exc}", False
    elapsed = time.perf_counter() - start
    if ok and elapsed >= BUDGET:
        ok, detail = False, f"{detail}; over the {BUDGET:.0f} s budget"
    return ok, elapsed, detail


def line(num, title, ok, elapsed, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {num:>2} {title} ({elapsed:.2f} s): {detail}"


@pytest.mark.parametrize("num, title, check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, check, capsys):
    ok, elapsed, detail = evaluate(check)
    with capsys.disabled():
        print("\n" + line(num, title, ok, elapsed, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for num, title, check in CRITERIA:
        ok, elapsed, detail = evaluate(check)
        failures += not ok
        print(line(num, title, ok, elapsed, detail))
    sys.exit(1 if failures else 0)
