"""
Tests for the concept order, covering relation, meet/join, iceberg and DOT
"""

import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest

from fca.context import FormalContext
from fca.errors import ContextMismatchError, LatticeError, SupportRangeError
from fca.generate import random_context
from fca.lattice import (
    DotOptions,
    as_percent,
    build_lattice,
    build_suborder,
    export_dot,
    iceberg,
    join,
    meet,
    order_leq,
)
from fca.mining import Concept, enumerate_concepts


@pytest.fixture
def k1_lattice(k1):
    return build_lattice(k1, enumerate_concepts(k1))


def test_order_on_k1(k1):
    top, left, right, bottom = enumerate_concepts(k1)
    assert order_leq(left, top)
    assert not order_leq(top, left)
    assert not order_leq(left, right)
    assert not order_leq(right, left)
    assert order_leq(bottom, bottom)


def test_order_rejects_inconsistent_pair(k1):
    top = enumerate_concepts(k1)[0]
    bogus = Concept(top.extent, k1.attributes("a", "b"))
    with pytest.raises(ContextMismatchError):
        order_leq(top, bogus)


def test_k1_covers(k1_lattice):
    assert k1_lattice.covers == ((1, 0), (2, 0), (3, 1), (3, 2))
    assert k1_lattice.top_index == 0
    assert k1_lattice.bottom_index == 3
    assert k1_lattice.parents(3) == [1, 2]
    assert k1_lattice.children(0) == [1, 2]
    assert k1_lattice.upset(3) == {0, 1, 2}
    assert k1_lattice.downset(0) == {1, 2, 3}
    assert k1_lattice.leq(3, 0)
    assert not k1_lattice.leq(1, 2)


def test_chain_covers():
    ctx = FormalContext.from_rows(["o1", "o2", "o3"], ["a", "b", "c"], [0b001, 0b011, 0b111])
    lattice = build_lattice(ctx, enumerate_concepts(ctx))
    assert [c.intent_names for c in lattice.concepts] == [["a"], ["a", "b"], ["a", "b", "c"]]
    assert lattice.covers == ((1, 0), (2, 1))


def test_single_concept_lattice():
    ctx = FormalContext.from_rows(["x"], ["a"], [1])
    lattice = build_lattice(ctx, enumerate_concepts(ctx))
    assert len(lattice) == 1
    assert lattice.covers == ()
    assert lattice.top_index == lattice.bottom_index == 0


def test_incomplete_set_rejected(k1):
    concepts = enumerate_concepts(k1)
    with pytest.raises(LatticeError):
        build_lattice(k1, concepts[:3])
    with pytest.raises(LatticeError):
        build_lattice(k1, concepts + [concepts[0]])


def test_non_concept_rejected(k1):
    concepts = enumerate_concepts(k1)
    fake = Concept(k1.objects("o1"), k1.attributes("a"), context=k1)
    with pytest.raises(LatticeError):
        build_lattice(k1, concepts[:3] + [fake])


def test_meet_and_join_on_k1(k1):
    top, left, right, bottom = enumerate_concepts(k1)
    assert meet(k1, [left, right]) == bottom
    assert meet(k1, [top, left]) == left
    assert join(k1, [left, right]) == top
    assert join(k1, [left, top]) == top
    with pytest.raises(LatticeError):
        meet(k1, [])
    with pytest.raises(LatticeError):
        join(k1, [])


def test_iceberg_on_k1(k1):
    concepts = enumerate_concepts(k1)
    assert [c.intent_names for c in iceberg(concepts, 50)] == [["b"]]
    assert [c.intent_names for c in iceberg(concepts, 33)] == [["b"], ["a", "b"], ["b", "c"]]
    assert len(iceberg(concepts, 0)) == 4
    assert len(iceberg(concepts, 100)) == 1


def test_iceberg_threshold_is_exact(k1):
    concepts = enumerate_concepts(k1)
    assert len(iceberg(concepts, Fraction(100, 3))) == 3
    assert len(iceberg(concepts, 33.34)) == 1


@pytest.mark.parametrize("value", [-1, 100.5, "abc"])
def test_support_range(value):
    with pytest.raises(SupportRangeError):
        as_percent(value)


def test_dot_k1(k1_lattice):
    dot = export_dot(k1_lattice)
    assert dot == (
        'digraph "lattice" {\n'
        "  rankdir=BT;\n"
        "  node [shape=box];\n"
        '  0 [label="b\\n100.0%"];\n'
        '  1 [label="a, b\\n33.3%"];\n'
        '  2 [label="b, c\\n33.3%"];\n'
        '  3 [label="a, b, c\\n0.0%"];\n'
        "  1 -> 0;\n"
        "  2 -> 0;\n"
        "  3 -> 1;\n"
        "  3 -> 2;\n"
        "}\n"
    )
    assert export_dot(k1_lattice) == dot


def test_dot_options(k1_lattice):
    dot = export_dot(k1_lattice, DotOptions(show_support=False, show_extent_size=True, graph_name="k1"))
    assert dot.startswith('digraph "k1" {')
    assert '1 [label="a, b\\n|A|=1"];' in dot
    assert "%" not in dot


def test_dot_escapes_quotes():
    ctx = FormalContext.from_rows(["x"], ['say "hi"'], [1])
    dot = export_dot(build_lattice(ctx, enumerate_concepts(ctx)))
    assert 'say \\"hi\\"' in dot


def test_suborder_of_iceberg(k1):
    concepts = enumerate_concepts(k1)
    order = build_suborder(k1, iceberg(concepts, 33))
    assert order.covers == ((1, 0), (2, 0))
    assert order.top_index == 0
    assert order.bottom_index is None


def test_suborder_rejects_foreign_concepts(k1):
    other = random_context(3, 3, 0.5, seed=4)
    with pytest.raises(ContextMismatchError):
        build_suborder(other, enumerate_concepts(k1))


@pytest.mark.parametrize("seed", range(20))
def test_lattice_laws(seed):
    rng = random.Random(seed)
    ctx = random_context(rng.randint(1, 10), rng.randint(1, 7), rng.uniform(0.2, 0.8), seed=seed)
    concepts = enumerate_concepts(ctx, threads=1)
    members = set(concepts)
    lattice = build_lattice(ctx, concepts)

    for a, b in itertools.product(concepts, repeat=2):
        m = meet(ctx, [a, b])
        j = join(ctx, [a, b])
        assert m in members and j in members
        assert m == meet(ctx, [b, a]) and j == join(ctx, [b, a])
        assert join(ctx, [a, m]) == a
        assert meet(ctx, [a, j]) == a
        if order_leq(a, b):
            assert a.support_percent <= b.support_percent

    # covers = transitive reduction of the order, checked against networkx
    graph = lattice.to_digraph()
    assert nx.is_directed_acyclic_graph(graph)
    closure = nx.transitive_closure_dag(graph)
    for i, a in enumerate(lattice.concepts):
        for k, b in enumerate(lattice.concepts):
            if i != k:
                assert closure.has_edge(i, k) == order_leq(a, b)
    assert set(nx.transitive_reduction(graph).edges()) == set(lattice.covers)

    # canonical order is a linear extension with the top first
    assert lattice.top_index == 0
    assert all(child > parent for child, parent in lattice.covers)

    # iceberg is upward closed
    threshold = rng.choice([0, 20, 50, 80])
    kept = set(iceberg(concepts, threshold))
    for c in kept:
        for other in concepts:
            if order_leq(c, other):
                assert other in kept


@pytest.mark.parametrize("seed", range(10))
def test_meet_and_join_are_associative(seed):
    rng = random.Random(seed)
    ctx = random_context(rng.randint(1, 10), rng.randint(1, 8), rng.uniform(0.2, 0.8), seed=seed)
    concepts = enumerate_concepts(ctx, threads=1)
    for _ in range(200):
        a, b, c = (rng.choice(concepts) for _ in range(3))
        assert meet(ctx, [meet(ctx, [a, b]), c]) == meet(ctx, [a, meet(ctx, [b, c])])
        assert join(ctx, [join(ctx, [a, b]), c]) == join(ctx, [a, join(ctx, [b, c])])
        assert meet(ctx, [a, b, c]) == meet(ctx, [meet(ctx, [a, b]), c])
        assert join(ctx, [a, b, c]) == join(ctx, [join(ctx, [a, b]), c])
