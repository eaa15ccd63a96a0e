import itertools
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fptheory.errors import DegenerateSet, DomainError, InsufficientData, InvalidDecomposition, MissingData
from fptheory.fincat import (
    CategoryData,
    Flavor,
    SigmaDecomposition,
    adjacency_of,
    enumerate_brick_sets,
    enumerate_object_sets,
    fpdim,
    fpdim_n,
    fpg_estimate,
    fpv_estimate,
    growth_window,
    is_atomic_set,
    is_brick_set,
    is_triangular_set,
    lower_fpg_estimate,
    maximal_object_sets,
    ratio_spectral_radius,
    realized_sizes,
    sigma_decomposition_bound,
    verify_sigma_decomposition,
)

from oracles import has_cycle, naive_sets, perron_root_interval


def random_data(rng, k_max=7, powers=(1,), negative=False):
    k = rng.randint(1, k_max)
    hom = [[0] * k for _ in range(k)]
    for i in range(k):
        hom[i][i] = 1 if rng.random() < 0.85 else 2
        for j in range(k):
            if i != j and rng.random() < 0.3:
                hom[i][j] = rng.randint(1, 2)
    sigma = {n: [[rng.choice([0, 0, 1, 2]) for _ in range(k)] for _ in range(k)] for n in powers}
    if negative:
        sigma[-1] = [[rng.choice([0, 0, 0, 1]) for _ in range(k)] for _ in range(k)]
        sigma[0] = hom
    return CategoryData(tuple(f"X{i}" for i in range(k)), hom, sigma)


data_seeds = st.integers(0, 10**6)


def test_validation():
    with pytest.raises(DomainError):
        CategoryData((), [])
    with pytest.raises(DomainError):
        CategoryData(("a", "a"), [[1, 0], [0, 1]])
    with pytest.raises(DomainError):
        CategoryData(("a",), [[-1]])
    with pytest.raises(DomainError):
        CategoryData(("a",), [[1]], {1: [[1]], 3: [[1]]})
    with pytest.raises(DomainError):
        CategoryData(("a",), [[1]], {0: [[2]]}, sigma0_identity=True)
    d = CategoryData(("a",), [[Fraction(1)]], {1: [[0]]})
    assert d.hom == ((1,),)


def test_json_round_trip():
    d = random_data(random.Random(3), powers=(1, 2))
    again = CategoryData.from_json(d.to_json())
    assert again == d
    assert json.loads(d.to_json())["sigma"].keys() == {"1", "2"}
    with pytest.raises(DomainError):
        CategoryData.from_json("{")
    with pytest.raises(DomainError):
        CategoryData.from_json('{"objects": ["a"]}')


def test_sigma_matrix_lookup():
    d = CategoryData(("a",), [[1]], {1: [[3]]}, sigma0_identity=True)
    assert d.sigma_matrix(0) == ((1,),)
    assert d.powers() == [0, 1]
    with pytest.raises(MissingData):
        d.sigma_matrix(2)
    with pytest.raises(MissingData):
        fpdim(d, power=2)


@settings(max_examples=60, deadline=None)
@given(data_seeds)
def test_brick_enumeration_matches_naive(seed):
    d = random_data(random.Random(seed))
    got = [s.indices for s in enumerate_brick_sets(d)]
    assert got == naive_sets(d.hom)
    assert all(is_brick_set(d, s) for s in got)


@settings(max_examples=30, deadline=None)
@given(data_seeds)
def test_atomic_enumeration_matches_naive(seed):
    d = random_data(random.Random(seed), negative=True)
    neg = d.sigma[-1]
    got = [s.indices for s in enumerate_object_sets(d, Flavor.ATOMIC)]
    assert got == naive_sets(d.hom, lambda c: all(neg[i][i] == 0 for i in c))
    assert all(is_atomic_set(d, s) for s in got)


@settings(max_examples=40, deadline=None)
@given(data_seeds)
def test_triangular_enumeration_matches_naive(seed):
    d = random_data(random.Random(seed), k_max=6)
    k = d.size

    def triangular(combo):
        if any(d.hom[i][i] != 1 for i in combo):
            return False
        edges = [(a, b) for a in range(len(combo)) for b in range(len(combo)) if a != b and d.hom[combo[a]][combo[b]]]
        return not has_cycle(len(combo), edges)

    expected = sorted(c for size in range(1, k + 1) for c in itertools.combinations(range(k), size) if triangular(c))
    got = [s.indices for s in enumerate_object_sets(d, Flavor.TRIANGULAR_BRICK)]
    assert got == expected
    assert all(is_triangular_set(d, s) for s in got)


@settings(max_examples=30, deadline=None)
@given(data_seeds)
def test_parallel_enumeration_is_identical(seed):
    d = random_data(random.Random(seed))
    seq = list(enumerate_brick_sets(d))
    assert list(enumerate_brick_sets(d, workers=2)) == seq


def test_max_size_and_within():
    d = CategoryData(tuple("abcd"), [[int(i == j) for j in range(4)] for i in range(4)], {1: [[0] * 4] * 4})
    assert len(list(enumerate_brick_sets(d))) == 15
    assert all(len(s) <= 2 for s in enumerate_brick_sets(d, max_size=2))
    assert [s.indices for s in enumerate_brick_sets(d, within=[1, 3])] == [(1,), (1, 3), (3,)]
    assert realized_sizes(d) == [1, 2, 3, 4]


@settings(max_examples=40, deadline=None)
@given(data_seeds)
def test_maximal_sets_are_exactly_the_maximal_brick_sets(seed):
    d = random_data(random.Random(seed))
    all_sets = [frozenset(s) for s in naive_sets(d.hom)]
    expected = sorted(tuple(sorted(s)) for s in all_sets if not any(s < t for t in all_sets))
    assert [s.indices for s in maximal_object_sets(d)] == expected


@settings(max_examples=40, deadline=None)
@given(data_seeds)
def test_fpdim_equals_max_over_all_brick_sets(seed):
    d = random_data(random.Random(seed), k_max=6)
    b = fpdim(d)
    best = Fraction(0)
    for s in naive_sets(d.hom):
        rows = [[d.sigma[1][i][j] for j in s] for i in s]
        lo, hi = perron_root_interval(rows)
        best = max(best, lo)
    assert b.lo <= best + Fraction(1, 10**9) and best <= b.hi + Fraction(1, 10**9)


@settings(max_examples=30, deadline=None)
@given(data_seeds)
def test_fpdim_n_dominated_by_fpdim(seed):
    d = random_data(random.Random(seed), k_max=6)
    top = fpdim(d)
    for m in range(1, d.size + 1):
        assert fpdim_n(d, m).lo <= top.hi


def test_fpdim_n_without_sets_is_zero():
    d = CategoryData(("a", "b"), [[1, 1], [0, 1]], {1: [[5, 5], [5, 5]]})
    assert fpdim_n(d, 2).hi == 0
    assert fpdim_n(d, 1).lo == 5


def test_adjacency_orientation():
    d = CategoryData(("a", "b"), [[1, 0], [0, 1]], {1: [[0, 3], [0, 0]]})
    assert adjacency_of(d, (0, 1)).rows == ((0, 3), (0, 0))
    assert adjacency_of(d, (1, 0)).rows == ((0, 0), (3, 0))
    with pytest.raises(DomainError):
        adjacency_of(d, ())


def test_ratio_agrees_on_brick_sets():
    d = random_data(random.Random(11), k_max=6)
    for s in naive_sets(d.hom):
        r = ratio_spectral_radius(d, s)
        direct = fpdim_n(d, len(s), within=s)
        assert r.lo <= direct.hi and direct.lo <= r.hi


def test_ratio_on_non_brick_set():
    d = CategoryData(("a", "b"), [[2, 0], [0, 2]], {1: [[4, 0], [0, 2]]})
    r = ratio_spectral_radius(d, (0, 1))
    assert r.lo == r.hi == 2
    zero = CategoryData(("a",), [[0]], {1: [[1]]})
    with pytest.raises(DegenerateSet):
        ratio_spectral_radius(zero, (0,))


# -- growth estimates --------------------------------------------------------------------------


def _power_data(values):
    return CategoryData(("E",), [[1]], {n: [[v]] for n, v in enumerate(values, start=1)})


def test_growth_window():
    assert growth_window(_power_data([1] * 8)) == (4, 8)
    assert growth_window(_power_data([1] * 4)) == (2, 4)
    with pytest.raises(InsufficientData):
        growth_window(_power_data([1] * 3))


def test_polynomial_growth():
    d = _power_data([n**2 for n in range(1, 11)])
    g = fpg_estimate(d)
    assert math.isclose(g.value, 2.0, rel_tol=1e-9)
    assert g.trend == "constant"
    assert math.isclose(lower_fpg_estimate(d).value, 2.0, rel_tol=1e-9)


def test_exponential_growth_volume():
    d = _power_data([3**n for n in range(1, 11)])
    assert math.isclose(fpv_estimate(d).value, 3.0, rel_tol=1e-9)
    assert fpg_estimate(d).trend == "nondecreasing"


def test_vanishing_powers_give_minus_infinity():
    d = _power_data([0] * 6)
    assert fpg_estimate(d).value == -math.inf
    assert fpv_estimate(d).value == 0


# -- sigma decompositions ---------------------------------------------------------------------


def test_sigma_decomposition_rules():
    hom = [[int(i == j) for j in range(3)] for i in range(3)]
    S = [[1, 0, 0], [5, 2, 0], [1, 1, 0]]
    d = CategoryData(("a", "b", "c"), hom, {1: S})
    assert verify_sigma_decomposition(d, [(0,), (1,), (2,)])
    assert not verify_sigma_decomposition(d, [(2,), (1,), (0,)])
    with pytest.raises(InvalidDecomposition):
        verify_sigma_decomposition(d, [(0, 1), (1,)])
    b = sigma_decomposition_bound(d, SigmaDecomposition(((0,), (1,), (2,))), 3)
    assert b.lo == b.hi == 2
    assert fpdim_n(d, 3).hi <= b.hi
    with pytest.raises(InvalidDecomposition):
        sigma_decomposition_bound(d, [(2,), (1,), (0,)], 2)
    bad = CategoryData(("a",), [[2]], {1: [[0]]})
    with pytest.raises(InvalidDecomposition):
        verify_sigma_decomposition(bad, [(0,)])


@settings(max_examples=40, deadline=None)
@given(data_seeds)
def test_sigma_decomposition_bound_dominates(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 6)
    blocks, order = [], list(range(k))
    rng.shuffle(order)
    cut = sorted(rng.sample(range(1, k), rng.randint(0, k - 2))) if k > 2 else []
    prev = 0
    for c in cut + [k]:
        blocks.append(tuple(order[prev:c]))
        prev = c
    label = {x: b for b, blk in enumerate(blocks) for x in blk}
    hom = [[int(i == j) for j in range(k)] for i in range(k)]
    S = [[0 if label[i] < label[j] else rng.choice([0, 1, 2]) for j in range(k)] for i in range(k)]
    d = CategoryData(tuple(f"X{i}" for i in range(k)), hom, {1: S})
    assert verify_sigma_decomposition(d, blocks)
    n = rng.randint(1, k)
    assert fpdim_n(d, n).lo <= sigma_decomposition_bound(d, blocks, n).hi
