import random

import pytest

from conftest import is_2tsp_definitional, random_sp_ast
from tuttebound.graphs import (GraphError, Multigraph, TwoTerminalGraph, banana,
                               max_flow, maxmaxflow, path_graph)
from tuttebound.sp import (DecompTree, ParseError, check_proper_flow_bound,
                           constituent_flows, decompose_sp, gen_gadget_cycle,
                           gen_leaf_joined_tree, gen_theta, gen_wheatstone,
                           is_nice, leaf_joined_vertex_count, parse_sp, realize)


def test_parse_parallel_edges():
    tt, tree = parse_sp("P(e,e,e)")
    assert tt.graph.vertex_count == 2
    assert tt.graph.edge_count == 3
    # left-folded: two p-nodes over three leaves
    kinds = [n.kind for n in tree.nodes()]
    assert kinds.count("p") == 2 and kinds.count("leaf") == 3


def test_parse_diamond():
    tt, _ = parse_sp("P(S(e,e),S(e,e))")
    assert tt.graph.vertex_count == 4
    assert tt.graph.edge_count == 4


def test_parse_wheatstone_composite():
    tt, tree = parse_sp("P(S(e,W),S(e,W))")
    assert tt.graph.vertex_count == 8
    assert tt.graph.edge_count == 12
    assert sum(1 for n in tree.leaves() if n.base == "W") == 2


def test_parse_repetition_sugar():
    tt, _ = parse_sp("e^><2^||3")
    theta, _ = gen_theta(2, 3)
    assert tt.graph.vertex_count == theta.graph.vertex_count
    assert tt.graph.edge_count == theta.graph.edge_count
    tt2, _ = parse_sp("e^⋈2^||3")        # unicode bowtie synonym
    assert tt2.graph.edge_count == 6
    tt3, _ = parse_sp("e^||1")
    assert tt3.graph.edge_count == 1


def test_parse_errors_carry_position():
    for text, pos in [("", 0), ("P(e,", 4), ("P(e)", 4), ("Q(e,e)", 0), ("e e", 2)]:
        with pytest.raises(ParseError) as err:
            parse_sp(text)
        assert err.value.position == pos


def test_whitespace_insignificant():
    a, _ = parse_sp(" P( S(e , e), S( e,e ) ) ")
    b, _ = parse_sp("P(S(e,e),S(e,e))")
    assert a.graph.edges == b.graph.edges


def test_decompose_parallel_edges():
    tree = decompose_sp(TwoTerminalGraph(banana(3), 0, 1))
    assert tree is not None
    kinds = [n.kind for n in tree.nodes()]
    assert kinds.count("p") == 2 and kinds.count("leaf") == 3
    assert all(n.base == "e" for n in tree.leaves())


def test_decompose_wheatstone_absent():
    assert decompose_sp(gen_wheatstone()) is None


def test_decompose_leaf_joined_root_is_parallel():
    g22, _ = gen_leaf_joined_tree(2, 2)
    tree = decompose_sp(g22)
    assert tree is not None
    assert tree.root.kind == "p"


def test_decompose_rejects_disconnected_and_loops():
    g = Multigraph(3, ((0, 1),))
    with pytest.raises(GraphError):
        decompose_sp(TwoTerminalGraph(g, 0, 1))
    g = Multigraph(2, ((0, 1), (1, 1)))
    with pytest.raises(GraphError):
        decompose_sp(TwoTerminalGraph(g, 0, 1))


def test_decompose_agrees_with_definition():
    rng = random.Random(17)
    seen_true = seen_false = 0
    for _ in range(60):
        if rng.random() < 0.5:
            ast = random_sp_ast(rng, rng.randint(1, 6))
            tt, _ = realize(ast)
            if tt.graph.edge_count > 8:
                continue
        else:
            n = rng.randint(2, 5)
            edges = tuple((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 8)))
            edges = tuple((a, b) for a, b in edges if a != b)
            if not edges:
                continue
            g = Multigraph(n, edges)
            if not g.is_connected():
                continue
            tt = TwoTerminalGraph(g, *sorted(set(edges[0]))[:2])
        got = decompose_sp(tt) is not None
        want = is_2tsp_definitional(tt)
        assert got == want
        seen_true += got
        seen_false += not got
    assert seen_true > 5 and seen_false > 2


def test_decompose_leaves_cover_edges_once():
    rng = random.Random(19)
    for _ in range(40):
        tt, _ = realize(random_sp_ast(rng, rng.randint(1, 8)))
        tree = decompose_sp(tt)
        assert tree is not None
        covered = sorted(i for leaf in tree.leaves() for i in leaf.edges)
        assert covered == list(range(tt.graph.edge_count))
        # every leaf is a single edge with matching endpoints
        for leaf in tree.leaves():
            (i,) = leaf.edges
            assert set(tt.graph.edges[i]) == {leaf.s, leaf.t}


def _replay(tree: DecompTree, node) -> tuple[set[int], int, int]:
    """Rebuild (edge set, terminals) bottom-up, checking composition gluing."""
    if node.is_leaf():
        return set(node.edges), node.s, node.t
    e1, s1, t1 = _replay(tree, node.children[0])
    e2, s2, t2 = _replay(tree, node.children[1])
    assert not (e1 & e2)
    if node.kind == "s":
        assert t1 == s2
        assert (node.s, node.t) == (s1, t2)
    else:
        assert (s1, t1) == (s2, t2) == (node.s, node.t)
    return e1 | e2, node.s, node.t


def test_tree_reconstruction_matches_graph():
    rng = random.Random(29)
    for _ in range(30):
        tt, tree = realize(random_sp_ast(rng, rng.randint(1, 8), bases=("e", "W")))
        edges, s, t = _replay(tree, tree.root)
        assert edges == set(range(tt.graph.edge_count))
        assert (s, t) == (tt.s, tt.t)
        tree2 = decompose_sp(tt)
        if tree2 is not None:
            edges2, s2, t2 = _replay(tree2, tree2.root)
            assert edges2 == set(range(tt.graph.edge_count))
            assert (s2, t2) == (tt.s, tt.t)


def test_is_nice_examples():
    assert is_nice(TwoTerminalGraph(banana(1), 0, 1))
    assert is_nice(TwoTerminalGraph(path_graph(2), 0, 2))
    pendant = Multigraph(4, ((0, 1), (1, 2), (1, 3)))
    assert not is_nice(TwoTerminalGraph(pendant, 0, 1))
    disconnected = Multigraph(3, ((0, 1),))
    assert not is_nice(TwoTerminalGraph(disconnected, 0, 2))


def test_nice_compositions_stay_nice():
    # Compositions of nice pieces are nice, so realized expressions are nice.
    rng = random.Random(31)
    for _ in range(30):
        tt, _ = realize(random_sp_ast(rng, rng.randint(1, 7), bases=("e", "W")))
        assert is_nice(tt)


def test_flow_cache_matches_flow_oracle():
    rng = random.Random(37)
    for _ in range(20):
        tt, tree = realize(random_sp_ast(rng, rng.randint(1, 7), bases=("e", "W")))
        for node, flow in constituent_flows(tree).items():
            sub = tree.constituent(node)
            assert max_flow(sub) == flow


def test_flow_examples():
    _, tree = parse_sp("P(e,e,e)")
    flows = sorted(constituent_flows(tree).values())
    assert flows == [1, 1, 1, 2, 3]
    assert check_proper_flow_bound(tree, 3)
    _, tree = parse_sp("S(e,e)")
    assert tree.root.flow == 1
    g32, tree32 = gen_leaf_joined_tree(2, 3)
    assert tree32.root.flow == 2
    assert maxmaxflow(g32.graph) == 3


def test_flow_bound_needs_parallel_root():
    _, tree = parse_sp("S(e,e)")
    with pytest.raises(GraphError):
        check_proper_flow_bound(tree, 3)


def test_proper_constituents_bounded_by_maxmaxflow():
    # With a parallel root, no proper constituent flow reaches maxmaxflow.
    rng = random.Random(41)
    checked = 0
    while checked < 200:
        tt, tree = realize(random_sp_ast(rng, rng.randint(2, 9)))
        if tree.root.kind != "p":
            continue
        lam = maxmaxflow(tt.graph)
        assert check_proper_flow_bound(tree, lam)
        checked += 1


def test_leaf_joined_tree_generator():
    g, _ = gen_leaf_joined_tree(2, 1)
    assert g.graph.vertex_count == 2 and g.graph.edge_count == 2
    g, _ = gen_leaf_joined_tree(2, 3)
    assert g.graph.vertex_count == 8
    g, _ = gen_leaf_joined_tree(3, 2)
    assert g.graph.vertex_count == 5
    assert max_flow(g) == 3
    assert maxmaxflow(g.graph) == 4
    assert leaf_joined_vertex_count(2, 12) == 4096 + 0
    with pytest.raises(GraphError):
        gen_leaf_joined_tree(2, 3, max_vertices=4)
    with pytest.raises(GraphError):
        gen_leaf_joined_tree(1, 3)


def test_theta_generator():
    tt, _ = gen_theta(2, 2)
    assert tt.graph.vertex_count == 4 and tt.graph.edge_count == 4
    tt, _ = gen_theta(1, 4)
    assert tt.graph.edges == banana(4).edges
    tt, _ = gen_theta(3, 1)
    assert tt.graph.edge_count == 3
    with pytest.raises(GraphError):
        gen_theta(0, 2)


def test_wheatstone_generator():
    w = gen_wheatstone()
    assert w.graph.vertex_count == 4
    assert w.graph.edge_count == 5
    assert w.graph.degree(w.s) == 2
    assert w.graph.degree(w.t) == 2
    assert max_flow(w) == 2


def test_gadget_cycle_94_vertices():
    g52, _ = gen_leaf_joined_tree(2, 5)
    h, tree = gen_gadget_cycle(g52, 3)
    assert h.graph.vertex_count == 94
    assert maxmaxflow(h.graph) == 3
    gadget_leaves = [n for n in tree.leaves() if n.base is None]
    assert len(gadget_leaves) == 3
    edge_leaves = [n for n in tree.leaves() if n.base == "e"]
    assert len(edge_leaves) == 1
