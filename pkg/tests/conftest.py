import random

import pytest

from cutnets import UndirectedNet, CnfInstance, make_q_cuttable
from cutnets.formats import parse_newick_tree
from cutnets.nets import canon_edge, subdivide


@pytest.fixture
def two_leaf():
    return UndirectedNet({1, 2}, {(1, 2)}, {1: "a", 2: "b"})


@pytest.fixture
def cycle4():
    """4-cycle with a pendant leaf on each cycle vertex."""
    return UndirectedNet.build(
        [(1, 2), (2, 3), (3, 4), (1, 4), (1, 5), (2, 6), (3, 7), (4, 8)],
        {5: "a", 6: "b", 7: "c", 8: "d"},
    )


@pytest.fixture
def theta3():
    """Two degree-3 hubs joined by three subdivided paths, a leaf per path."""
    return UndirectedNet.build(
        [(1, 3), (3, 2), (1, 4), (4, 2), (1, 5), (5, 2), (3, 6), (4, 7), (5, 8)],
        {6: "a", 7: "b", 8: "c"},
    )


@pytest.fixture
def k4_sub():
    """K4 with one edge subdivided to carry the single leaf: a blob with a
    cycle no vertex of which touches a cut-edge."""
    return UndirectedNet.build(
        [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5), (5, 6)], {6: "a"}
    )


@pytest.fixture
def phi_bench():
    """(x v -y v z)(-x v y v -z)(x v y v -z)(-x v -y v z)"""
    return CnfInstance(3, ((1, -2, 3), (-1, 2, -3), (1, 2, -3), (-1, -2, 3)))


@pytest.fixture
def displayed_pair():
    """A 3-cuttable network on six leaves together with a tree it displays
    and the hand-checked embedding data (network ids v1..v8 are 1..8)."""
    net = UndirectedNet.build(
        [(1, 9), (2, 10), (3, 11), (5, 12), (6, 13), (7, 14),
         (1, 2), (6, 7), (3, 4), (4, 5), (1, 8), (7, 8), (4, 8), (2, 3), (5, 6)],
        {9: "a", 10: "b", 11: "c", 12: "d", 13: "e", 14: "f"},
    )
    tree = parse_newick_tree("((a,b),(c,d),(e,f));")
    return tree, net


@pytest.fixture
def conflicting_pair():
    """Two leaf-decorated 4-cycles joined by a cut-edge inducing abc|dfg,
    against a tree carrying the incompatible split abg|cdf."""
    net = UndirectedNet.build(
        [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (2, 6), (3, 7), (4, 8),
         (8, 9), (9, 10), (10, 11), (11, 8), (9, 12), (10, 13), (11, 14)],
        {5: "a", 6: "b", 7: "c", 12: "d", 13: "f", 14: "g"},
    )
    tree = parse_newick_tree("(((a,b),g),((d,f),c));")
    return tree, net


def build_simple_3cuttable(seed: int) -> UndirectedNet:
    """Simple 3-cuttable network: leaf-decorated ring, a few in-blob handles,
    then chain insertion; every step preserves simpleness."""
    rng = random.Random(seed)
    k = rng.randint(4, 7)
    edges = [(i, i % k + 1) for i in range(1, k + 1)]
    labels = {}
    for i in range(1, k + 1):
        leaf = k + i
        edges.append((i, leaf))
        labels[leaf] = f"t{i}"
    net = UndirectedNet.build(edges, labels)
    for _ in range(rng.randint(0, 2)):
        e1, e2 = rng.sample(net.sorted_edges(), 2)
        net, m1 = subdivide(net, e1)
        net, m2 = subdivide(net, e2)
        net = net.replace(edges=net.edges | {canon_edge(m1, m2)})
    return make_q_cuttable(net, 3, seed)
