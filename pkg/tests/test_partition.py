import pytest
from hypothesis import given, strategies as st

from labelflow import (
    DomainGap,
    Partition,
    UniverseMismatch,
    composite_domain,
    composite_partition,
    directed_intersection_count,
    fibers,
    meet,
)
from labelflow.partition import partition_from_map
from conftest import (
    abstract_nodes,
    all_partitions,
    chain_graph,
    eq12_dataset,
    graph_of,
)


def from_lists(universe, classes):
    return Partition(universe, classes)


class TestPartitionInvariants:
    def test_overlapping_classes_rejected(self):
        a, b = abstract_nodes(2)
        with pytest.raises(UniverseMismatch):
            from_lists([a, b], [[a, b], [b]])

    def test_uncovered_universe_rejected(self):
        a, b = abstract_nodes(2)
        with pytest.raises(UniverseMismatch):
            from_lists([a, b], [[a]])

    def test_empty_class_rejected(self):
        a, = abstract_nodes(1)
        with pytest.raises(UniverseMismatch):
            from_lists([a], [[a], []])

    def test_canonical_order(self):
        a, b, c = abstract_nodes(3)
        p = from_lists([c, a, b], [[c], [b, a]])
        q = from_lists([a, b, c], [[a, b], [c]])
        assert p == q
        assert p.classes == ((a, b), (c,))

    def test_class_lookup(self):
        a, b, c = abstract_nodes(3)
        p = from_lists([a, b, c], [[a, b], [c]])
        assert p.class_of(a) == (a, b)
        assert p.same_class(a, b)
        assert not p.same_class(a, c)


class TestFibers:
    def test_injective_label_gives_singletons(self):
        graph, leaves, level1, _, _ = chain_graph([0, 1, 2], [0, 0, 0])
        p = fibers(graph, "f", leaves)
        assert p.class_count == len(leaves)

    def test_constant_label_gives_one_class(self):
        graph, leaves, _, _, _ = chain_graph([0, 0, 0, 0], [0])
        p = fibers(graph, "f", leaves)
        assert p.class_count == 1

    def test_default_universe_is_domain(self):
        graph, leaves, _, _, _ = chain_graph([0, 1, 0], [0, 0])
        assert fibers(graph, "f") == fibers(graph, "f", leaves)

    def test_node_outside_domain(self):
        graph, leaves, level1, _, _ = chain_graph([0, 1], [0, 0])
        with pytest.raises(DomainGap) as err:
            fibers(graph, "f", leaves + [level1[0]])
        assert level1[0] in err.value.nodes


class TestComposite:
    def test_single_step_equals_fibers(self):
        graph, leaves, _, _, _ = chain_graph([0, 1, 1], [0, 1])
        assert composite_partition(graph, ["f"], leaves) == \
            fibers(graph, "f", leaves)

    def test_two_level_chain_collapses(self):
        g = graph_of(eq12_dataset())
        leaves = sorted(n for n in g.nodes
                        if g.target("class", n) is not None
                        and g.target("class", g.target("class", n)) is not None)
        assert len(leaves) == 3
        one = composite_partition(g, ["class", "class"], leaves)
        assert one.class_count == 1
        first = composite_partition(g, ["class"], leaves)
        assert first.class_count == 2

    def test_gap_reports_step(self):
        g = graph_of(eq12_dataset())
        full = g.domain("class")
        with pytest.raises(DomainGap) as err:
            composite_partition(g, ["class", "class"], full)
        assert err.value.step == 1
        assert err.value.label == "class"

    def test_empty_path_rejected(self):
        g = graph_of(eq12_dataset())
        with pytest.raises(DomainGap):
            composite_partition(g, [], g.domain("class"))

    def test_composite_domain_split(self):
        g = graph_of(eq12_dataset())
        kept, excluded = composite_domain(g, ["class", "class"])
        assert len(kept) == 3
        assert len(excluded) == 2

    def test_refinement_monotonicity(self):
        graph, leaves, _, _, _ = chain_graph(
            [0, 0, 1, 2, 3, 3], [0, 0, 1, 1])
        p1 = composite_partition(graph, ["f"], leaves)
        p2 = composite_partition(graph, ["f", "g"], leaves)
        assert p1.refines(p2)
        assert p2.class_count <= p1.class_count


class TestMeet:
    def test_idempotent(self):
        a, b, c = abstract_nodes(3)
        p = from_lists([a, b, c], [[a, b], [c]])
        assert meet(p, p) == p

    def test_one_class_partition_is_identity(self):
        nodes = abstract_nodes(4)
        p = from_lists(nodes, [nodes[:2], nodes[2:]])
        trivial = from_lists(nodes, [nodes])
        assert meet(p, trivial) == p
        assert meet(trivial, p) == p

    def test_mismatched_universes(self):
        p = from_lists(abstract_nodes(2), [abstract_nodes(2)])
        q = from_lists(abstract_nodes(3), [abstract_nodes(3)])
        with pytest.raises(UniverseMismatch):
            meet(p, q)

    def test_crossing_partitions(self):
        a, b, c, d = abstract_nodes(4)
        rows = from_lists([a, b, c, d], [[a, b], [c, d]])
        cols = from_lists([a, b, c, d], [[a, c], [b, d]])
        assert meet(rows, cols).class_count == 4


class TestDirectedIntersection:
    def test_self_count_is_class_count(self):
        a, b, c = abstract_nodes(3)
        p = from_lists([a, b, c], [[a], [b, c]])
        assert directed_intersection_count(p, p) == p.class_count

    def test_asymmetry(self):
        a, b, c, d = abstract_nodes(4)
        fine = from_lists([a, b, c, d], [[a], [b], [c], [d]])
        coarse = from_lists([a, b, c, d], [[a, b], [c, d]])
        assert directed_intersection_count(fine, coarse) == 4
        assert directed_intersection_count(coarse, fine) == 0

    def test_mismatched_universes(self):
        p = from_lists(abstract_nodes(2), [abstract_nodes(2)])
        q = from_lists(abstract_nodes(3), [abstract_nodes(3)])
        with pytest.raises(UniverseMismatch):
            directed_intersection_count(p, q)


@st.composite
def partition_pairs(draw, max_size=8):
    n = draw(st.integers(1, max_size))
    nodes = abstract_nodes(n)
    index = {x: i for i, x in enumerate(nodes)}

    def one():
        targets = draw(st.lists(st.integers(0, n - 1),
                                min_size=n, max_size=n))
        return partition_from_map(nodes, lambda x: targets[index[x]])

    return one(), one()


@given(partition_pairs())
def test_meet_properties(pair):
    p, q = pair
    m = meet(p, q)
    assert m.refines(p) and m.refines(q)
    assert max(p.class_count, q.class_count) <= m.class_count
    assert m.class_count <= min(p.class_count * q.class_count,
                                len(m.universe))
    assert meet(q, p) == m


@given(partition_pairs())
def test_count_bounds_and_refinement(pair):
    p, q = pair
    count = directed_intersection_count(p, q)
    assert 0 <= count <= p.class_count
    assert (count == p.class_count) == p.refines(q)


def brute_subset_count(p, q):
    return sum(
        1
        for a in map(set, p.classes)
        if any(a <= set(b) for b in q.classes)
    )


def test_exhaustive_counts_match_brute_force_up_to_five():
    for n in range(1, 6):
        nodes = abstract_nodes(n)
        parts = [Partition(nodes, cls) for cls in all_partitions(nodes)]
        for p in parts:
            for q in parts:
                assert directed_intersection_count(p, q) == \
                    brute_subset_count(p, q)
