import pytest

from cutnets import GenConfig, labeled_isomorphic, random_q_cuttable, rooted_isomorphic
from cutnets.errors import (
    ClauseArityError,
    DegreeError,
    NotBinary,
    ParseError,
    ValidationError,
)
from cutnets.formats import (
    parse_dimacs_cnf,
    parse_enewick,
    parse_newick_tree,
    parse_upn,
    serialize_dimacs_cnf,
    serialize_enewick,
    serialize_newick_tree,
    serialize_upn,
)
from cutnets.generate import random_2balanced_cnf, random_tree
from cutnets.orient import tree_child_orient_2cuttable
from cutnets.sat import parse_gmap, serialize_gmap


class TestUpn:
    def test_two_leaf(self):
        net = parse_upn("UPN/1\nV 1\nV 2\nL 1 a\nL 2 b\nE 1 2\n")
        assert net.labels() == {"a", "b"}
        assert net.edges == {(1, 2)}

    def test_comments_and_blank_lines(self):
        net = parse_upn("# hello\n\nUPN/1\nV 1 # first\nV 2\nL 1 a\nL 2 b\nE 1 2\n")
        assert net.labels() == {"a", "b"}

    def test_duplicate_label_is_validation_error(self):
        text = "UPN/1\nV 1\nV 2\nV 3\nV 4\nL 1 a\nL 2 a\nL 4 c\nE 1 3\nE 2 3\nE 3 4\n"
        with pytest.raises(ValidationError):
            parse_upn(text)

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_upn("V 1\n")

    def test_undeclared_vertex_position(self):
        with pytest.raises(ParseError) as err:
            parse_upn("UPN/1\nV 1\nE 1 2\n")
        assert err.value.line == 3

    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_upn("")

    def test_serialize_is_canonical_fixed_point(self, cycle4):
        text = serialize_upn(cycle4)
        again = serialize_upn(parse_upn(text))
        assert text == again
        assert text.splitlines()[0] == "UPN/1"

    def test_roundtrip_corpus(self):
        texts = set()
        for seed in range(25):
            net = random_q_cuttable(GenConfig(seed=seed, leaf_count=3 + seed % 8,
                                              target_r=seed % 5, target_q=1 + seed % 3))
            text = serialize_upn(net)
            back = parse_upn(text)
            assert labeled_isomorphic(back, net)
            assert serialize_upn(back) == text
            assert text not in texts
            texts.add(text)


class TestENewick:
    def test_root_degree_error(self):
        with pytest.raises(DegreeError):
            parse_enewick("((a,b));")

    def test_single_reticulation(self):
        net = parse_enewick("((a,(b)#H1),(#H1,c));")
        assert net.reticulation_number() == 1
        assert net.labels() == {"a", "b", "c"}

    def test_undefined_hybrid(self):
        with pytest.raises(DegreeError):
            parse_enewick("((a,#H1),(b,c));")

    def test_parallel_arcs_rejected(self):
        with pytest.raises(DegreeError):
            parse_enewick("(((a)#H1,#H1),b);")

    def test_roundtrip_rooted_fixtures(self):
        for seed in range(20):
            net = random_q_cuttable(GenConfig(seed=seed, leaf_count=3 + seed % 7,
                                              target_r=seed % 4, target_q=2))
            rooted = tree_child_orient_2cuttable(net)
            text = serialize_enewick(rooted)
            back = parse_enewick(text)
            assert rooted_isomorphic(rooted, back)
            assert serialize_enewick(back) == text


class TestNewickTree:
    def test_three_leaf_star(self):
        tree = parse_newick_tree("(a,b,c);")
        assert tree.reticulation_number() == 0
        center = next(iter(tree.internal_vertices()))
        assert tree.degree(center) == 3

    def test_quartet_split(self):
        tree = parse_newick_tree("((a,b),(c,d));")
        from cutnets import split_of_cut_edge
        internal = [e for e in tree.edges
                    if e[0] in tree.internal_vertices() and e[1] in tree.internal_vertices()]
        (edge,) = internal
        split = split_of_cut_edge(tree, edge)
        assert {tuple(sorted(split.side_a)), tuple(sorted(split.side_b))} == {("a", "b"), ("c", "d")}

    def test_not_binary(self):
        with pytest.raises(NotBinary):
            parse_newick_tree("((a,b),c,d,e);")

    def test_tags_rejected(self):
        with pytest.raises(ParseError):
            parse_newick_tree("((a)#H1,(#H1,b));")

    def test_roundtrip(self):
        for seed in range(20):
            labels = [f"t{i}" for i in range(1, 3 + seed % 9)]
            if len(labels) < 2:
                continue
            tree = random_tree(labels, seed)
            text = serialize_newick_tree(tree)
            back = parse_newick_tree(text)
            assert labeled_isomorphic(tree, back)
            assert serialize_newick_tree(back) == text


class TestDimacs:
    def test_phi_bench_doc(self, phi_bench):
        text = "c phi\np cnf 3 4\n1 -2 3 0\n-1 2 -3 0\n1 2 -3 0\n-1 -2 3 0\n"
        assert parse_dimacs_cnf(text) == phi_bench

    def test_clause_arity(self):
        with pytest.raises(ClauseArityError):
            parse_dimacs_cnf("p cnf 2 1\n1 2 0\n")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_dimacs_cnf("")

    def test_literal_out_of_range(self):
        with pytest.raises(ParseError):
            parse_dimacs_cnf("p cnf 2 1\n1 2 5 0\n")

    def test_unterminated_clause(self):
        with pytest.raises(ParseError):
            parse_dimacs_cnf("p cnf 3 1\n1 2 3\n")

    def test_roundtrip(self):
        for seed in range(15):
            cnf = random_2balanced_cnf(3 * (1 + seed % 3), seed)
            text = serialize_dimacs_cnf(cnf)
            assert parse_dimacs_cnf(text) == cnf
            assert serialize_dimacs_cnf(parse_dimacs_cnf(text)) == text


class TestGmap:
    def test_roundtrip(self, phi_bench):
        from cutnets import build_u_phi

        _, gmap = build_u_phi(phi_bench)
        text = serialize_gmap(gmap)
        back = parse_gmap(text)
        assert back.named == gmap.named
        assert [g.name for g in back.gadgets] == [g.name for g in gmap.gadgets]
        assert all(a.vertex_ids == b.vertex_ids for a, b in zip(back.gadgets, gmap.gadgets))
        assert serialize_gmap(back) == text
        assert back.variable_count == 3
        assert back.clause_count == 4

    def test_bad_header(self):
        with pytest.raises(ParseError):
            parse_gmap("GMAP/2\n")
