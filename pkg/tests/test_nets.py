import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutnets import (
    GenConfig,
    UndirectedNet,
    eliminate_edge,
    labeled_isomorphic,
    random_q_cuttable,
    split_of_cut_edge,
    subdivide,
    suppress,
    validate_unrooted,
)
from cutnets.cuttable import is_q_cuttable
from cutnets.errors import (
    EndpointIsLeaf,
    IsCutEdge,
    LabelSetMismatch,
    NotCutEdge,
    NotDegreeTwo,
    UnknownEdge,
    WouldCreateParallelEdge,
)
from cutnets.nets import RootedNet, Split, validate_rooted


def brute_force_bridges(net):
    def connected(edges):
        adj = {v: [] for v in net.vertices}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {next(iter(net.vertices))}
        stack = list(seen)
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(net.vertices)

    return frozenset(e for e in net.edges if not connected(net.edges - {e}))


class TestValidation:
    def test_two_leaf_base_case(self, two_leaf):
        assert validate_unrooted(two_leaf).ok

    def test_cycle4_valid(self, cycle4):
        assert validate_unrooted(cycle4).ok

    def test_triangle_with_one_leaf_reports_degree_two(self):
        net = UndirectedNet.build([(1, 2), (2, 3), (1, 3), (1, 4)], {4: "a"})
        report = validate_unrooted(net)
        assert not report.ok
        assert sum("degree 2" in v for v in report.violations) == 2

    def test_disconnected_reported(self):
        net = UndirectedNet({1, 2, 3, 4}, {(1, 2), (3, 4)}, {1: "a", 2: "b", 3: "c", 4: "d"})
        assert "network is disconnected" in validate_unrooted(net).violations


class TestSurgery:
    def test_subdivide_two_leaf(self, two_leaf):
        net, mid = subdivide(two_leaf, (1, 2))
        assert net.degree(mid) == 2
        assert net.has_edge(1, mid) and net.has_edge(mid, 2)

    def test_subdivide_arc(self):
        rooted = RootedNet.build([(1, 2), (1, 3), (2, 4), (2, 5)], 1, {3: "a", 4: "b", 5: "c"})
        out, mid = subdivide(rooted, (1, 2))
        assert (1, mid) in out.arcs and (mid, 2) in out.arcs
        assert (1, 2) not in out.arcs

    def test_subdivide_unknown_edge(self, two_leaf):
        with pytest.raises(UnknownEdge):
            subdivide(two_leaf, (1, 7))

    def test_subdivide_then_suppress_is_identity(self, cycle4):
        net, mid = subdivide(cycle4, (1, 2))
        back = suppress(net, mid)
        assert back.edges == cycle4.edges
        assert labeled_isomorphic(back, cycle4)

    def test_suppress_degree_three_rejected(self, cycle4):
        with pytest.raises(NotDegreeTwo):
            suppress(cycle4, 1)

    def test_suppress_adjacent_neighbors_rejected(self):
        # triangle a-b-v with pendant leaves on a and b: v has degree 2 but
        # its neighbors are already adjacent
        net = UndirectedNet.build([(1, 2), (1, 3), (2, 3), (1, 4), (2, 5)], {4: "a", 5: "b"})
        with pytest.raises(WouldCreateParallelEdge):
            suppress(net, 3)

    def test_eliminate_on_theta_drops_r(self, theta3):
        assert theta3.reticulation_number() == 2
        out = eliminate_edge(theta3, (1, 3))
        assert validate_unrooted(out).ok
        assert out.reticulation_number() == 1
        assert out.labels() == theta3.labels()

    def test_eliminate_cut_edge_rejected(self, cycle4):
        with pytest.raises(IsCutEdge):
            eliminate_edge(cycle4, (1, 5))

    def test_eliminate_pendant_edge_rejected(self, theta3):
        with pytest.raises(IsCutEdge):
            eliminate_edge(theta3, (3, 6))

    def test_eliminate_leaf_endpoint_rejected(self):
        # labels may sit on non-degree-1 vertices only in invalid containers;
        # the guard still refuses to melt a labeled endpoint into the blob
        net = UndirectedNet.build([(1, 2), (2, 3), (3, 1), (1, 4), (2, 5), (3, 6)],
                                  {3: "x", 4: "a", 5: "b", 6: "c"})
        with pytest.raises(EndpointIsLeaf):
            eliminate_edge(net, (1, 3))

    def test_eliminate_preserves_3cuttability(self):
        for seed in range(10):
            net = random_q_cuttable(GenConfig(seed=seed, leaf_count=6, target_r=2, target_q=3))
            candidates = sorted(net.edges - net.cut_edges())
            if not candidates:
                continue
            out = eliminate_edge(net, candidates[0])
            assert validate_unrooted(out).ok
            assert is_q_cuttable(out, 3).is_cuttable


class TestBridgesBlobsChains:
    def test_tree_all_edges_are_cut(self, two_leaf):
        assert two_leaf.cut_edges() == two_leaf.edges

    def test_cycle4_cut_edges(self, cycle4):
        assert sorted(cycle4.cut_edges()) == [(1, 5), (2, 6), (3, 7), (4, 8)]

    @given(st.integers(0, 500))
    @settings(max_examples=60, deadline=None)
    def test_cut_edges_match_bruteforce(self, seed):
        net = random_q_cuttable(GenConfig(seed=seed, leaf_count=3 + seed % 8,
                                          target_r=seed % 5, target_q=1))
        assert net.cut_edges() == brute_force_bridges(net)

    def test_tree_has_no_blobs(self, two_leaf):
        assert two_leaf.blobs() == ()

    def test_cycle4_single_blob(self, cycle4):
        (blob,) = cycle4.blobs()
        assert blob.vertices == frozenset({1, 2, 3, 4})

    def test_two_blobs_joined_by_cut_path(self, conflicting_pair):
        _, net = conflicting_pair
        assert len(net.blobs()) == 2

    def test_edge_partition_invariant(self):
        for seed in range(40):
            net = random_q_cuttable(GenConfig(seed=seed, leaf_count=3 + seed % 8,
                                              target_r=seed % 6, target_q=1 + seed % 3))
            assert len(net.cut_edges()) + sum(len(b.edges) for b in net.blobs()) == len(net.edges)

    def test_full_cycle_chain_reported_from_lowest_id(self, cycle4):
        (chain,) = cycle4.maximal_chains()
        assert chain.path_vertices == (1, 2, 3, 4)
        assert chain.length == 4
        assert chain.incident_cut_edges == ((1, 5), (2, 6), (3, 7), (4, 8))

    def test_partial_chain(self):
        # 4-cycle where only two adjacent vertices carry cut-edges
        net = UndirectedNet.build(
            [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (2, 6), (3, 7), (3, 9), (4, 8), (4, 10)],
            {5: "a", 6: "b"},
        )
        # make 3,4 into degree-3 non-cut-incident: attach them to another blob instead
        net = UndirectedNet.build(
            [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (2, 6), (3, 7), (4, 7), (7, 8)],
            {5: "a", 6: "b", 8: "c"},
        )
        assert validate_unrooted(net).ok
        chains = [c.path_vertices for c in net.maximal_chains()]
        assert (1, 2) in chains

    def test_tree_has_no_chains(self, two_leaf):
        assert two_leaf.maximal_chains() == ()


class TestSplitsAndNumbers:
    def test_pendant_split(self, cycle4):
        split = split_of_cut_edge(cycle4, (1, 5))
        assert split == Split.of({"a"}, {"b", "c", "d"})

    def test_not_cut_edge(self, cycle4):
        with pytest.raises(NotCutEdge):
            split_of_cut_edge(cycle4, (1, 2))

    def test_leafless_side_gives_none(self, k4_sub):
        # the K4 side of the pendant edge carries no leaf at all
        assert split_of_cut_edge(k4_sub, (5, 6)) is None

    def test_internal_cut_edge_split(self):
        net = UndirectedNet.build(
            [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6), (1, 7), (2, 8), (5, 9), (6, 10)],
            {7: "a", 8: "b", 9: "c", 10: "d"},
        )
        assert split_of_cut_edge(net, (3, 4)) == Split.of({"a", "b"}, {"c", "d"})

    def test_splits_on_2cuttable_always_exist_and_differ(self):
        for seed in range(30):
            net = random_q_cuttable(GenConfig(seed=seed, leaf_count=4 + seed % 6,
                                              target_r=seed % 4, target_q=2))
            seen = set()
            for e in net.cut_edges():
                split = split_of_cut_edge(net, e)
                assert split is not None
                assert split not in seen
                seen.add(split)

    def test_reticulation_numbers(self, two_leaf, cycle4, theta3):
        assert two_leaf.reticulation_number() == 0
        assert cycle4.reticulation_number() == 1
        assert theta3.reticulation_number() == 2

    def test_level(self, two_leaf, cycle4, theta3):
        assert two_leaf.level() == 0
        assert cycle4.level() == 1
        assert theta3.level() == 2

    def test_split_canonical_and_compat(self):
        s = Split.of({"d", "b"}, {"a", "c"})
        assert "a" in s.side_a
        assert s == Split.of({"a", "c"}, {"b", "d"})
        t = Split.of({"a", "b"}, {"c", "d"})
        assert not s.is_compatible_with(t)
        assert s.is_compatible_with(Split.of({"a"}, {"b", "c", "d"}))


class TestIsomorphism:
    def test_shuffled_ids(self, cycle4):
        mapping = {1: 11, 2: 22, 3: 33, 4: 44, 5: 55, 6: 66, 7: 77, 8: 88}
        other = UndirectedNet.build(
            [(mapping[a], mapping[b]) for a, b in cycle4.edges],
            {mapping[v]: lab for v, lab in cycle4.leaf_labels.items()},
        )
        assert labeled_isomorphic(cycle4, other)
        assert labeled_isomorphic(other, cycle4)

    def test_different_cherries_not_isomorphic(self):
        from cutnets.formats import parse_newick_tree

        t1 = parse_newick_tree("((a,b),(c,d));")
        t2 = parse_newick_tree("((a,c),(b,d));")
        assert not labeled_isomorphic(t1, t2)
        assert labeled_isomorphic(t1, t1)

    def test_label_set_mismatch(self, two_leaf, cycle4):
        with pytest.raises(LabelSetMismatch):
            labeled_isomorphic(two_leaf, cycle4)


class TestMixedGraph:
    def test_edge_arc_overlap_rejected(self):
        from cutnets import MixedGraph

        MixedGraph(frozenset({1, 2, 3}), frozenset({(1, 2)}), frozenset({(2, 3)}), root=1)
        with pytest.raises(ValueError):
            MixedGraph(frozenset({1, 2}), frozenset({(1, 2)}), frozenset({(2, 1)}))


class TestRootedValidation:
    def test_rooted_cherry(self):
        net = RootedNet.build([(1, 2), (1, 3)], 1, {2: "a", 3: "b"})
        assert validate_rooted(net).ok

    def test_cycle_reported(self):
        net = RootedNet.build(
            [(1, 2), (1, 3), (2, 4), (4, 5), (5, 2), (5, 6), (4, 7)],
            1, {3: "a", 6: "b", 7: "c"})
        assert any("cycle" in v for v in validate_rooted(net).violations)

    def test_bad_degree_reported(self):
        net = RootedNet.build([(1, 2), (1, 3), (1, 4)], 1, {2: "a", 3: "b", 4: "c"})
        assert any("out-degree 3" in v for v in validate_rooted(net).violations)
