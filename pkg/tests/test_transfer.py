from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimgroup.disconnection import Side, XPoint, minus, plus
from dimgroup.errors import NotEventuallySurjective
from dimgroup.examples import example
from dimgroup.field import sqrt
from dimgroup.maps import PwmMap
from dimgroup.markov import incidence_matrix
from dimgroup.orbits import IntervalUnion, detect_markov
from dimgroup.transfer import (
    StepFunction,
    discontinuity_set,
    equivalent,
    generator_intervals,
    generators,
    leq,
    markov_coefficients,
    markov_function,
    transfer_apply,
    transfer_power,
)
from mapgen import pw_maps
from oracles import preimage_sum

ONE = StepFunction.constant(1)
MARKOV_MAPS = ["full_tent", "three_fold", "restricted_tent_sqrt2", "jump_map", "permutation", "shrinking_range"]


def chi(a, b, c=1):
    return StepFunction.indicator(a, b, c)


def test_step_function_canonical_form():
    f = StepFunction((F(1, 4), F(1, 2), F(3, 4)), (1, 1, 2, 2))
    assert f.cuts == (F(1, 2),) and f.values == (1, 2)
    assert chi(0, F(1, 2)) + chi(F(1, 2), 1) == ONE
    assert (chi(0, 1) - ONE).is_zero()
    with pytest.raises(ValueError):
        StepFunction((F(1, 2),), (1,))


def test_step_function_evaluation_on_doubled_points():
    f = chi(F(1, 3), F(2, 3))
    assert f(minus(F(1, 3))) == 0 and f(plus(F(1, 3))) == 1
    assert f(minus(F(2, 3))) == 1 and f(plus(F(2, 3))) == 0
    assert f.support() == [(F(1, 3), F(2, 3))]
    assert discontinuity_set(f) == {F(1, 3), F(2, 3)}
    assert discontinuity_set(ONE) == {0, 1}


def test_full_tent_identities(full_tent):
    assert transfer_apply(full_tent, chi(F(1, 2), 1)) == ONE
    assert transfer_apply(full_tent, ONE) == 2 * ONE
    assert transfer_power(full_tent, chi(0, F(1, 4)), 2) == ONE


def test_sqrt2_tent_pushes_pieces(tent_sqrt2):
    c, p = 1 - sqrt(2) / 2, 2 - sqrt(2)
    assert transfer_apply(tent_sqrt2, chi(0, c)) == chi(p, 1)
    assert transfer_apply(tent_sqrt2, chi(c, p)) == chi(p, 1)
    assert equivalent(tent_sqrt2, chi(0, c), chi(c, p), 10).is_true


@pytest.mark.parametrize("name", MARKOV_MAPS)
def test_psi_intertwines_with_matrix(name):
    m = example(name)
    mp = detect_markov(m, 200)
    a = incidence_matrix(m, mp).rows
    n = len(a)
    rng = random.Random(name)
    for _ in range(100):
        v = [rng.randint(-9, 9) for _ in range(n)]
        va = [sum(v[i] * a[i][j] for i in range(n)) for j in range(n)]
        assert transfer_apply(m, markov_function(mp, v)) == markov_function(mp, va)
        assert markov_coefficients(mp, markov_function(mp, v)) == tuple(v)


def test_equivalence_and_order_on_full_tent(full_tent):
    r = equivalent(full_tent, chi(0, F(1, 2)), chi(F(1, 2), 1), 10)
    assert r.is_true and r.level == 1
    assert leq(full_tent, 2 * ONE, ONE, 10).is_false
    assert leq(full_tent, ONE, 2 * ONE, 10).is_true
    assert equivalent(full_tent, 2 * ONE, ONE, 10).is_false
    assert equivalent(full_tent, ONE, 2 * ONE, 10).is_false


def test_equivalence_with_mixed_signs(full_tent):
    f = chi(0, F(1, 4)) - chi(F(3, 4), 1)
    assert equivalent(full_tent, f, StepFunction.constant(0), 10).is_true


def test_comparison_on_non_markov_map(tent_3_2):
    r = equivalent(tent_3_2, chi(0, F(1, 3)), chi(F(1, 3), 1), 12)
    assert not r.is_true


def test_generators_of_jump_map():
    gens = generator_intervals(example("jump_map"))
    assert set(gens) == {(0, F(1, 3)), (F(1, 3), 1), (F(2, 3), 1)}
    assert len(gens) == 3


def test_generators_of_full_tent(full_tent):
    assert set(generator_intervals(full_tent)) == {(0, F(1, 2)), (F(1, 2), 1)}
    assert generators(full_tent) == [chi(0, F(1, 2)), chi(F(1, 2), 1)]


def test_generators_need_eventual_surjectivity():
    with pytest.raises(NotEventuallySurjective):
        generator_intervals(PwmMap([0, 1], [(F(1, 2), 0)]), 20)


def _random_step(data, nonneg=False):
    cuts = sorted(set(data.draw(st.lists(st.fractions(F(1, 50), F(49, 50), max_denominator=50), max_size=4))))
    lo = 0 if nonneg else -3
    vals = data.draw(st.lists(st.integers(lo, 3), min_size=len(cuts) + 1, max_size=len(cuts) + 1))
    return StepFunction(tuple(cuts), tuple(vals))


def _probe_points(m, f, g):
    pts = set(m.partition) | set(f.cuts) | set(g.cuts) | {F(1, 7), F(3, 11), F(5, 8)}
    return [XPoint(x, s) for x in pts for s in (Side.MINUS, Side.PLUS)]


@settings(max_examples=60, deadline=None)
@given(pw_maps(), st.data())
def test_positivity(m, data):
    f = _random_step(data, nonneg=True)
    assert transfer_apply(m, f).is_nonnegative()


@settings(max_examples=60, deadline=None)
@given(pw_maps(), st.data())
def test_linearity(m, data):
    f, g = _random_step(data), _random_step(data)
    assert transfer_apply(m, f + g) == transfer_apply(m, f) + transfer_apply(m, g)
    assert transfer_apply(m, 3 * f) == 3 * transfer_apply(m, f)


@settings(max_examples=60, deadline=None)
@given(pw_maps(), st.data())
def test_support_law(m, data):
    f = _random_step(data, nonneg=True)
    spans = []
    for lo, hi, v in f.refine(m.partition):
        if v:
            b = m.branches[m.branch_containing(lo, right=True)]
            spans.append(sorted((b(lo), b(hi))))
    assert IntervalUnion.of(spans) == IntervalUnion.of(transfer_apply(m, f).support())


@settings(max_examples=40, deadline=None)
@given(pw_maps(max_branches=3), st.data(), st.integers(1, 3))
def test_semigroup_law_by_preimage_counting(m, data, n):
    f = _random_step(data)
    g = transfer_power(m, f, n)
    for p in _probe_points(m, f, g):
        assert g(p) == preimage_sum(m, f, p, n)


@settings(max_examples=60, deadline=None)
@given(pw_maps(), st.data())
def test_injective_piece_is_transported(m, data):
    i = data.draw(st.integers(0, m.n_branches - 1))
    lo, hi = m.branch_domain(i)
    s, t = sorted(data.draw(st.lists(st.fractions(0, 1, max_denominator=20), min_size=2, max_size=2)))
    a, b = lo + (hi - lo) * s, lo + (hi - lo) * t
    br = m.branches[i]
    assert transfer_apply(m, chi(a, b)) == chi(br(a), br(b))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_canonical_form_is_idempotent(data):
    f = _random_step(data)
    again = StepFunction(f.cuts, f.values)
    assert again == f and StepFunction.from_pieces(f.pieces()) == f
    assert all(f.values[k] != f.values[k + 1] for k in range(len(f.cuts)))


@settings(max_examples=40, deadline=None)
@given(pw_maps())
def test_generator_structure(m):
    try:
        gens = generator_intervals(m, 60)
    except NotEventuallySurjective:
        return
    jumps = {tuple(sorted((l, r))) for _, l, r in m.jumps()}
    assert jumps <= set(gens)
    gaps = [g for g in gens if g not in jumps or g in set(zip(sorted(set(m.partition)), sorted(set(m.partition))[1:]))]
    covered = StepFunction.from_pieces([(lo, hi, 1) for lo, hi in gaps])
    assert covered.is_nonnegative() and IntervalUnion.of(covered.support()) == IntervalUnion.unit()
