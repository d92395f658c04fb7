from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dimgroup.dimension import (
    GAElement,
    action_is_invertible,
    classify_module,
    ga_add,
    ga_coordinates,
    ga_element,
    ga_equal,
    ga_is_zero,
    ga_neg,
    ga_positive,
    ga_presentation,
    ga_shift,
    is_simple,
    markov_module_vector,
    matrix_is_simple,
)
from dimgroup.examples import example
from dimgroup.linalg import mat_mul
from dimgroup.maps import tau_hat_preimage
from dimgroup.markov import incidence_matrix
from dimgroup.orbits import detect_markov
from dimgroup.transfer import StepFunction, equivalent, transfer_apply
from oracles import ORACLE_DEPTH, oracle_equal, oracle_positive, powers, zero_one_matrices



def push(v, a, k):
    n = len(v)
    for _ in range(k):
        v = tuple(sum(v[i] * a[i][j] for i in range(n)) for j in range(n))
    return v


def test_full_tent_presentation():
    p = ga_presentation(((1, 1), (1, 1)))
    assert p.rank == 1 and p.action == ((2,),)


def test_sqrt2_tent_presentation():
    p = ga_presentation(((0, 0, 1), (0, 0, 1), (1, 1, 0)))
    assert p.rank == 2
    sq = mat_mul(p.action, p.action)
    assert sq == ((2, 0), (0, 2))
    assert p.action[0][0] + p.action[1][1] == 0


def test_nilpotent_part_is_discarded():
    p = ga_presentation(((0, 1, 0), (0, 0, 1), (0, 0, 1)))
    assert p.rank == 1 and p.stabilized_at == 2
    assert action_is_invertible(p)


def test_ga_element_integrality_certificate():
    p = ga_presentation(((1, 1), (1, 1)))
    assert ga_element(p, (F(1, 2), F(1, 2))).certificate == 1
    assert ga_element(p, (F(1, 3), 0), bound=5).certificate is None


def test_ga_is_zero_reports_level():
    p = ga_presentation(((1, 1), (1, 1)))
    assert ga_is_zero(p, GAElement((1, -1))) == (True, 1)
    assert ga_is_zero(p, GAElement((1, 0)))[0] is False


@pytest.mark.parametrize("n", [2, 3])
def test_action_spectrum_matches_nonzero_eigenvalues(n):
    t = sympy.Symbol("t")
    for a in zero_one_matrices(n):
        p = ga_presentation(a)
        full = sympy.Matrix(a).charpoly(t).as_expr()
        act = sympy.Matrix(p.action).charpoly(t).as_expr() if p.rank else sympy.Integer(1)
        assert sympy.expand(act * t ** (n - p.rank) - full) == 0, a


@pytest.mark.parametrize("n", [2, 3])
def test_brute_force_oracle_agreement(n):
    rng = random.Random(n)
    for a in zero_one_matrices(n):
        p = ga_presentation(a)
        pw = powers(a)
        samples = [(tuple(rng.randint(-2, 2) for _ in range(n)), rng.randint(0, 2)) for _ in range(6)]
        samples.append(((1,) * n, 0))
        samples.append(((0,) * n, 1))
        elems = [GAElement(v, k) for v, k in samples]
        coords = [ga_coordinates(p, e) for e in elems]
        for (x, ex, cx), (y, ey, cy) in itertools.product(zip(samples, elems, coords), repeat=2):
            expected = oracle_equal(pw, x, y)
            assert ga_equal(p, ex, ey) == expected, (a, x, y)
            assert (cx == cy) == expected, (a, x, y)
        for v, _ in samples:
            verdict = ga_positive(p, GAElement(v), ORACLE_DEPTH)
            expected = oracle_positive(pw, v)
            if expected:
                assert verdict.is_true, (a, v)
            else:
                assert not verdict.is_true, (a, v)
            if verdict.is_true and verdict.level is not None and verdict.level <= ORACLE_DEPTH:
                assert expected


@pytest.mark.parametrize("n", [2, 3])
def test_positive_cone_is_antisymmetric(n):
    rng = random.Random(100 + n)
    for a in zero_one_matrices(n):
        p = ga_presentation(a)
        for _ in range(4):
            x = GAElement(tuple(rng.randint(-2, 2) for _ in range(n)))
            if ga_positive(p, x, 40).is_true and ga_positive(p, ga_neg(x), 40).is_true:
                assert ga_is_zero(p, x)[0], (a, x)


matrices3 = st.sampled_from(zero_one_matrices(3))
vectors3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=150)
@given(matrices3, vectors3, vectors3, vectors3, st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_equality_is_an_equivalence_compatible_with_addition(a, u, v, w, i, j, k):
    p = ga_presentation(a)
    x, y, z = GAElement(u, i), GAElement(v, j), GAElement(w, k)
    assert ga_equal(p, x, x)
    assert ga_equal(p, x, y) == ga_equal(p, y, x)
    if ga_equal(p, x, y) and ga_equal(p, y, z):
        assert ga_equal(p, x, z)
    assert ga_equal(p, ga_add(p, x, y), ga_add(p, y, x))
    assert ga_is_zero(p, ga_add(p, x, ga_neg(x)))[0]
    assert ga_equal(p, GAElement(u, i), GAElement(push(u, a, 1), i + 1))
    assert ga_equal(p, ga_shift(p, ga_add(p, x, y)), ga_add(p, ga_shift(p, x), ga_shift(p, y)))


@pytest.mark.parametrize("name", ["full_tent", "three_fold", "restricted_tent_sqrt2", "jump_map"])
def test_module_map_is_a_homomorphism(name):
    m = example(name)
    mp = detect_markov(m, 100)
    p = ga_presentation(incidence_matrix(m, mp))
    rng = random.Random(name)

    orbit = set(mp.endpoints)
    for _ in range(3):
        orbit |= {y for x in orbit for y in tau_hat_preimage(m, x)}
    inner = sorted(x for x in orbit if 0 < x < 1)

    def rand_fn():
        cuts = sorted(set(rng.sample(inner, min(3, len(inner)))))
        return StepFunction(tuple(cuts), tuple(rng.randint(-2, 2) for _ in range(len(cuts) + 1)))

    def phi(f):
        v, k = markov_module_vector(m, mp, f, 60)
        return GAElement(v, k)

    for _ in range(15):
        f, g = rand_fn(), rand_fn()
        assert ga_equal(p, phi(f + g), ga_add(p, phi(f), phi(g)))
        assert ga_equal(p, phi(transfer_apply(m, f)), ga_shift(p, phi(f)))
        assert ga_equal(p, phi(f), phi(g)) == equivalent(m, f, g, 60).is_true


def test_simplicity():
    assert is_simple(example("full_tent"), 100).is_true
    assert is_simple(example("restricted_tent_sqrt2"), 100).is_false
    assert is_simple(example("tent_3_2"), 50).is_true
    assert is_simple(example("jump_map"), 100).is_false
    assert is_simple(example("golden_exchange"), 50).is_unknown


def test_matrix_simplicity_uses_essential_part():
    assert matrix_is_simple(((1, 1), (0, 1))) is False
    assert matrix_is_simple(((0, 1, 0), (0, 1, 1), (0, 1, 1)))
    assert matrix_is_simple(((0, 1), (1, 0))) is False


@pytest.mark.parametrize(
    "name, bound, summary",
    [
        ("full_tent", 100, "MarkovTriple, rank 1, action ×2"),
        ("restricted_tent_sqrt2", 100, "MarkovTriple, rank 2, action [0 2; 1 0]"),
        ("tent_3_2", 50, "Cyclic, Z[t, 1/t], conditional(50)"),
        ("golden_exchange", 200, "ExchangeForm(1), Z[t, 1/t]^1 + Z, conditional(200)"),
        ("multimodal", 100, "FreeRank(2), Z[t, 1/t]^2, conditional(100)"),
    ],
)
def test_classification(name, bound, summary):
    assert classify_module(example(name), bound).summary() == summary


def test_classification_unknown():
    from dimgroup.maps import PwmMap

    m = PwmMap([0, F(1, 2), 1], [(F(3, 2), 0), (-F(3, 2), F(3, 2))])
    c = classify_module(m, 30)
    assert c.tag == "Unknown"
