import itertools
import random
from fractions import Fraction

import pytest

from fptheory.errors import DomainError, QuiverSyntaxError
from fptheory.quiver import (
    DynkinType,
    Quiver,
    WeightClass,
    adjacency_matrix,
    classify_weights,
    coxeter_number,
    cyclic_quiver,
    dynkin_quiver,
    fpdim_quiver,
    jordan_quiver,
    kronecker_quiver,
    loop_quiver,
    normalize_weights,
    parse_quiver,
)

from oracles import coxeter_order, has_cycle, perron_root_interval

ALL_DYNKIN = [DynkinType("A", n) for n in range(1, 9)] + [DynkinType("D", n) for n in range(4, 9)] + [
    DynkinType("E", n) for n in (6, 7, 8)
]


def test_parse_round_trip():
    text = "# a quiver\nvertices: a b\nvertices: c\narrows: a->b b->c\narrows: b->c\n"
    Q = parse_quiver(text)
    assert Q.vertices == ("a", "b", "c")
    assert Q.arrows == (("a", "b"), ("b", "c"), ("b", "c"))
    assert parse_quiver(Q.to_text()) == Q
    assert adjacency_matrix(Q).rows == ((0, 1, 0), (0, 0, 2), (0, 0, 0))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("vertices: a\nedges: a->a\n", 2, 1),
        ("vertices: a\narrows: a->b\n", 2, 9),
        ("vertices: a a\n", 1, 13),
        ("vertices: a\narrows: a-a\n", 2, 9),
        ("vertices a\n", 1, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(QuiverSyntaxError) as info:
        parse_quiver(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}: ")


def test_constructor_validation():
    with pytest.raises(DomainError):
        Quiver(("a", "a"))
    with pytest.raises(DomainError):
        Quiver(("a",), (("a", "b"),))


def test_empty_quiver_has_zero_fpdim():
    assert fpdim_quiver(parse_quiver("# nothing\n")).hi == 0


def test_standard_values():
    assert fpdim_quiver(jordan_quiver()) == fpdim_quiver(loop_quiver(1))
    b = fpdim_quiver(jordan_quiver())
    assert b.lo == b.hi == 1
    b = fpdim_quiver(loop_quiver(2))
    assert b.lo == b.hi == 2
    for r in range(1, 9):
        b = fpdim_quiver(cyclic_quiver(r))
        assert b.lo == b.hi == 1
    for n in range(1, 5):
        b = fpdim_quiver(kronecker_quiver(n))
        assert b.lo == b.hi == 0


def test_dynkin_parse_and_validation():
    assert DynkinType.parse("e_8") == DynkinType("E", 8)
    assert str(DynkinType.parse("D5")) == "D5"
    for bad in ("A0", "D3", "E5", "E9", "F4"):
        with pytest.raises(DomainError):
            DynkinType.parse(bad)


@pytest.mark.parametrize("t", ALL_DYNKIN, ids=str)
def test_coxeter_number_matches_coxeter_element_order(t):
    assert coxeter_number(t) == coxeter_order(t.n, t.edges())


@pytest.mark.parametrize("t", ALL_DYNKIN, ids=str)
def test_dynkin_graph_is_a_tree(t):
    edges = t.edges()
    assert len(edges) == t.n - 1
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == v and y not in seen:
                    seen.add(y)
                    stack.append(y)
    assert seen == set(range(t.n))


@pytest.mark.parametrize("t", ALL_DYNKIN, ids=str)
def test_every_ade_orientation_has_fpdim_zero(t):
    n_edges = len(t.edges())
    flags = itertools.product([False, True], repeat=n_edges) if n_edges <= 7 else (
        tuple(random.Random(k).random() < 0.5 for _ in range(n_edges)) for k in range(64)
    )
    for orientation in flags:
        b = fpdim_quiver(dynkin_quiver(t, orientation))
        assert b.lo == b.hi == 0


def _random_quiver(rng, n_max=5, arrows_max=8):
    n = rng.randint(1, n_max)
    names = [f"v{k}" for k in range(n)]
    arrows = [(rng.choice(names), rng.choice(names)) for _ in range(rng.randint(0, arrows_max))]
    return Quiver(tuple(names), tuple(arrows))


@pytest.mark.parametrize("seed", range(40))
def test_fpdim_zero_iff_acyclic(seed):
    Q = _random_quiver(random.Random(seed))
    pos = {v: k for k, v in enumerate(Q.vertices)}
    cyclic = has_cycle(Q.n_vertices, [(pos[s], pos[t]) for s, t in Q.arrows])
    b = fpdim_quiver(Q)
    assert (b.hi == 0) == (not cyclic)
    assert b.lo >= 1 or b.hi == 0  # integer matrices: rho is 0 or at least 1


@pytest.mark.parametrize("seed", range(40))
def test_fpdim_against_characteristic_polynomial(seed):
    Q = _random_quiver(random.Random(1000 + seed))
    b = fpdim_quiver(Q)
    lo, hi = perron_root_interval(adjacency_matrix(Q).rows)
    assert b.lo <= hi and lo <= b.hi


@pytest.mark.parametrize("seed", range(100))
def test_subquiver_monotonicity(seed):
    rng = random.Random(5000 + seed)
    Q = _random_quiver(rng)
    keep = [v for v in Q.vertices if rng.random() < 0.6] or [Q.vertices[0]]
    sub = Q.full_subquiver(keep)
    assert fpdim_quiver(sub).lo <= fpdim_quiver(Q).hi
    extra = Q.with_arrow(rng.choice(Q.vertices), rng.choice(Q.vertices))
    assert fpdim_quiver(Q).lo <= fpdim_quiver(extra).hi


def test_relabel_keeps_fpdim():
    Q = parse_quiver("vertices: a b c\narrows: a->b b->c c->a a->a\n")
    assert fpdim_quiver(Q.relabel(["c", "a", "b"])) == fpdim_quiver(Q)


# -- weights --------------------------------------------------------------------------------

DOMESTIC = [(), (3,), (2, 5), (2, 2, 7), (2, 3, 3), (2, 3, 4), (2, 3, 5)]
TUBULAR = [(2, 3, 6), (3, 3, 3), (2, 4, 4), (2, 2, 2, 2)]
WILD = [(2, 3, 7), (2, 4, 5), (3, 3, 4), (2, 2, 2, 3), (2, 2, 2, 2, 2), (5, 5, 5), (2, 5, 5), (3, 4, 4), (2, 3, 8), (4, 4, 4)]


@pytest.mark.parametrize("w", DOMESTIC[1:] + [(1, 1)])
def test_domestic(w):
    assert classify_weights(w) is WeightClass.DOMESTIC


@pytest.mark.parametrize("w", TUBULAR)
def test_tubular(w):
    assert classify_weights(w) is WeightClass.TUBULAR


@pytest.mark.parametrize("w", WILD)
def test_wild(w):
    assert classify_weights(w) is WeightClass.WILD


def _euler_characteristic(p):
    return 2 - sum(Fraction(q - 1, q) for q in p)


@pytest.mark.parametrize("w", DOMESTIC[1:] + TUBULAR + WILD)
def test_classification_matches_euler_characteristic_sign(w):
    chi = _euler_characteristic(w)
    expected = WeightClass.DOMESTIC if chi > 0 else WeightClass.TUBULAR if chi == 0 else WeightClass.WILD
    assert classify_weights(w) is expected


def test_weights_are_normalized():
    assert normalize_weights((6, 1, 2, 3)) == (2, 3, 6)
    assert classify_weights((6, 1, 3, 2)) is WeightClass.TUBULAR
    with pytest.raises(DomainError):
        normalize_weights(())
    with pytest.raises(DomainError):
        normalize_weights((0, 2))
