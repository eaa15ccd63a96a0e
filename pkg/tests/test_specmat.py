import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fptheory.errors import ConvergenceError, DomainError, InfinityNotAllowed, MatrixSyntaxError
from fptheory.specmat import (
    INF,
    ExtMatrix,
    SpectralBounds,
    as_ext,
    extended_spectral_radius,
    format_ext,
    infinite_entries_on_cycles,
    is_subpermutation,
    parse_matrix,
    scc_decompose,
    spectral_radius,
)

from oracles import (
    float_spectral_radius,
    perron_root_interval,
    random_infinite_instance,
    reachability,
    substitution_diverges,
)

matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n), min_size=n, max_size=n)
)


# -- parsing and values ----------------------------------------------------------


def test_as_ext_accepts_common_spellings():
    assert as_ext("3") == 3
    assert as_ext("2/7") == Fraction(2, 7)
    assert as_ext("inf") == INF
    assert as_ext(0.5) == Fraction(1, 2)
    assert as_ext(Fraction(4, 6)) == Fraction(2, 3)


@pytest.mark.parametrize("bad", ["-1", "-inf", "x", "1/", "nan"])
def test_as_ext_rejects(bad):
    with pytest.raises((DomainError, MatrixSyntaxError)):
        as_ext(bad)


def test_format_ext_round_trip():
    for v in (Fraction(0), Fraction(3), Fraction(5, 12), INF):
        assert as_ext(format_ext(v)) == v


def test_parse_matrix_with_comments_and_infinity():
    A = parse_matrix("# header\n0 inf  # edge\n\n1/2 0\n")
    assert A.rows == ((0, INF), (Fraction(1, 2), 0))


def test_parse_matrix_reports_line():
    with pytest.raises(MatrixSyntaxError, match="line 2"):
        parse_matrix("1 0\n0 q\n")
    with pytest.raises(MatrixSyntaxError, match="not square"):
        parse_matrix("1 0\n0\n")
    with pytest.raises(MatrixSyntaxError):
        parse_matrix("# only comments\n")


def test_ext_matrix_is_hashable_and_immutable():
    A = ExtMatrix([[1, 2], [3, 4]])
    assert hash(A) == hash(ExtMatrix([[1, 2], [3, 4]]))
    assert A.transpose()[0, 1] == 3
    assert A.submatrix([1]) == ExtMatrix([[4]])
    with pytest.raises(DomainError):
        ExtMatrix([[1, 2]])


def test_bounds_validation():
    with pytest.raises(DomainError):
        SpectralBounds(Fraction(2), Fraction(1))
    b = SpectralBounds.infinite()
    assert b.is_infinite and b.is_exact and b.as_dict() == {"lo": "inf", "hi": "inf"}


# -- graph structure --------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_scc_matches_reachability(rows):
    A = ExtMatrix(rows)
    n = A.n
    comps = scc_decompose(A.support())
    assert sorted(v for c in comps for v in c) == list(range(n))
    R = reachability(n, [(i, j) for i in range(n) for j in range(n) if rows[i][j]])
    same = {}
    for k, c in enumerate(comps):
        for v in c:
            same[v] = k
    for i in range(n):
        for j in range(n):
            mutual = i == j or (R[i][j] and R[j][i])
            assert (same[i] == same[j]) == mutual
    # reverse topological order: edges never point to a later component
    for i in range(n):
        for j in range(n):
            if rows[i][j] and same[i] != same[j]:
                assert same[j] < same[i]


def test_scc_deep_chain_is_iterative():
    n = 3000
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 1
    rows[n - 1][0] = 1
    assert len(scc_decompose(ExtMatrix(rows).support())) == 1


def test_subpermutation():
    assert is_subpermutation(ExtMatrix([[0, 1], [0, 0]]))
    assert not is_subpermutation(ExtMatrix([[1, 1], [0, 0]]))
    assert not is_subpermutation(ExtMatrix([[0, 2], [0, 0]]))
    assert not is_subpermutation(ExtMatrix([[1, 0], [1, 0]]))


# -- spectral radius ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "rows, exact",
    [
        ([[0]], 0),
        ([[3]], 3),
        ([[1, 1], [1, 1]], 2),
        ([[0, 1, 0], [0, 0, 1], [1, 0, 0]], 1),
        ([[0, 1], [0, 0]], 0),
        ([[2, 0], [5, 1]], 2),
    ],
)
def test_exact_cases(rows, exact):
    b = spectral_radius(ExtMatrix(rows))
    assert b.lo == b.hi == exact


def test_golden_ratio_certified():
    b = spectral_radius(ExtMatrix([[1, 1], [1, 0]]))
    phi = (1 + math.sqrt(5)) / 2
    assert b.lo <= Fraction(phi) + Fraction(1, 10**12)
    assert b.hi >= Fraction(phi) - Fraction(1, 10**12)
    assert b.width <= Fraction(1, 10**9)
    lo, hi = perron_root_interval([[1, 1], [1, 0]])
    assert b.lo <= hi and lo <= b.hi


def test_sqrt_two_with_coarse_tolerance():
    b = spectral_radius(ExtMatrix([[0, 1], [2, 0]]), tol=Fraction(1, 100))
    assert b.width <= Fraction(1, 100)
    assert b.contains(Fraction(math.sqrt(2)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_bounds_contain_characteristic_root(rows):
    b = spectral_radius(ExtMatrix(rows))
    lo, hi = perron_root_interval(rows)
    assert b.width <= Fraction(1, 10**9)
    assert b.lo <= hi and lo <= b.hi


@settings(max_examples=40, deadline=None)
@given(matrices, st.data())
def test_monotone_in_entries(rows, data):
    n = len(rows)
    i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
    bigger = [r[:] for r in rows]
    bigger[i][j] += data.draw(st.integers(1, 3))
    assert spectral_radius(ExtMatrix(rows)).lo <= spectral_radius(ExtMatrix(bigger)).hi


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_transpose_invariant(rows):
    a = spectral_radius(ExtMatrix(rows))
    b = spectral_radius(ExtMatrix(rows).transpose())
    assert a.lo <= b.hi and b.lo <= a.hi


def test_rational_entries():
    b = spectral_radius(ExtMatrix([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 2)]]))
    assert b.lo == b.hi == Fraction(5, 6)


def test_large_entries_certify():
    rows = [[10**6, 1, 0], [0, 3, 10**5], [7, 0, 1]]
    b = spectral_radius(ExtMatrix(rows))
    assert b.width <= Fraction(1, 10**9)
    assert b.contains(Fraction(float_spectral_radius(rows))) or abs(b.midpoint() - float_spectral_radius(rows)) < 1e-6


def test_budget_exhaustion_raises():
    with pytest.raises(ConvergenceError):
        spectral_radius(ExtMatrix([[1, 1], [1, 0]]), tol=Fraction(1, 10**200), max_iter=10)


def test_infinite_entries_rejected_by_finite_routine():
    with pytest.raises(InfinityNotAllowed):
        spectral_radius(ExtMatrix([[0, INF], [0, 0]]))


# -- extended radius ---------------------------------------------------------------------------


def test_extended_examples():
    assert extended_spectral_radius(ExtMatrix([[INF]])).is_infinite
    assert extended_spectral_radius(ExtMatrix([[0, INF], [0, 0]])) == SpectralBounds.exact(0)
    assert extended_spectral_radius(ExtMatrix([[0, INF], [1, 0]])).is_infinite
    b = extended_spectral_radius(ExtMatrix([[2, INF], [0, 1]]))
    assert b.lo == b.hi == 2
    assert infinite_entries_on_cycles(ExtMatrix([[0, INF], [1, 0]])) == [(0, 1)]


@pytest.mark.parametrize("seed", range(50))
def test_extended_agrees_with_substitution(seed):
    rows = random_infinite_instance(random.Random(seed))
    b = extended_spectral_radius(ExtMatrix(rows))
    diverges, rho_big = substitution_diverges(rows)
    assert b.is_infinite == diverges
    if not diverges:
        assert abs(b.midpoint() - rho_big) < 1e-6
