"""Tests for labeled graphs, gluing products, bases and moment matrices."""

from fractions import Fraction
from random import Random

import pytest

from graphtrop.gluing import (
    Basis,
    Combination,
    ExponentVector,
    LabeledGraph,
    alpha_vector,
    cherry,
    component_counts,
    enumerate_basis,
    eval_combination,
    glue,
    glue_product,
    graph_key,
    is_trivial_square,
    labeled_canonical_form,
    labeled_components,
    labeled_edge,
    labeled_graph,
    labeled_isomorphic,
    lift,
    moment_matrix,
    square_expand,
    unit,
    unlabel,
    unlabeled_product,
)
from graphtrop.hypergraphs import (
    Hypergraph,
    complete_bipartite,
    complete_graph,
    disjoint_union,
    is_isomorphic,
    longbroom,
    path_graph,
    single_edge,
    star_hypergraph,
)
from oracles import random_labeled


def K(name):
    return graph_key({"e": single_edge(), "p2": path_graph(2), "K3": complete_graph(3)}[name])


# ---------------------------------------------------------------------------
# Labeled graphs and canonical forms
# ---------------------------------------------------------------------------


def test_labeled_graph_validation():
    with pytest.raises(ValueError):
        LabeledGraph(Hypergraph.make(2, 3, [(0, 1)]), ())  # isolated vertex
    with pytest.raises(ValueError):
        LabeledGraph(Hypergraph.make(2, 2, [(0, 1)]), ((1, 0), (1, 1)))
    with pytest.raises(ValueError):
        LabeledGraph(Hypergraph.make(2, 2, [(0, 1)]), ((1, 0), (2, 0)))
    with pytest.raises(ValueError):
        LabeledGraph(Hypergraph.make(2, 2, [(0, 1)]), ((0, 0),))


def test_labeled_canonical_form_invariance():
    rng = Random(42)
    for _ in range(40):
        A = random_labeled(rng, 5, 0.5, 3)
        assert labeled_canonical_form(A) == A
        # permute the unlabeled vertices via a relabeled reconstruction
        perm = list(range(A.graph.n))
        rng.shuffle(perm)
        G2 = Hypergraph.make(2, A.graph.n, [(perm[a], perm[b]) for a, b in A.graph.edges])
        labs2 = tuple(sorted((l, perm[v]) for l, v in A.labels))
        assert labeled_canonical_form(LabeledGraph(G2, labs2)) == A


def test_labeled_isomorphism_fixes_labels():
    assert not labeled_isomorphic(labeled_edge(1), labeled_edge(2))
    assert labeled_isomorphic(
        labeled_graph(2, 3, [(0, 1), (1, 2)], {1: 1}),
        labeled_graph(2, 3, [(2, 1), (0, 2)], {1: 2}),
    )
    assert not labeled_isomorphic(cherry(1, 2, 3), cherry(2, 1, 3))


def test_labeled_components():
    A = LabeledGraph(
        disjoint_union(path_graph(2), single_edge()).edges and
        disjoint_union(path_graph(2), single_edge()),
        ((1, 0), (2, 3)),
    )
    comps = labeled_components(A)
    assert len(comps) == 2
    assert comps[0].labels == ((1, 0),)
    assert comps[1].labels == ((2, 0),)


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------


def test_glue_identical_edges_merge():
    e12 = labeled_edge(1, 2)
    assert glue(e12, e12) == e12


def test_glue_unit_is_identity():
    rng = Random(3)
    for _ in range(20):
        A = random_labeled(rng, 5, 0.5, 3)
        assert glue(A, unit()) == A
        assert glue(unit(), A) == A


def test_glue_shared_label_makes_cherry():
    g = glue(labeled_edge(1), labeled_edge(1))
    assert g.graph.edge_count == 2
    assert is_isomorphic(unlabel(g), path_graph(2))
    lab, v = g.labels[0]
    assert lab == 1 and g.graph.degree(v) == 2


def test_glue_commutative_associative():
    rng = Random(8)
    for _ in range(25):
        A = random_labeled(rng, 4, 0.6, 3)
        B = random_labeled(rng, 4, 0.6, 3)
        C = random_labeled(rng, 4, 0.6, 3)
        assert glue(A, B) == glue(B, A)
        assert glue(glue(A, B), C) == glue(A, glue(B, C))


def test_glue_label_disjoint_is_disjoint_union():
    A = labeled_graph(2, 3, [(0, 1), (1, 2)], {1: 0})
    B = labeled_graph(2, 2, [(0, 1)], {2: 0})
    assert is_isomorphic(
        unlabeled_product(A, B), disjoint_union(unlabel(A), unlabel(B))
    )


def test_unlabel_canonical():
    A = labeled_graph(2, 3, [(0, 2), (1, 2)], {2: 1})
    assert unlabel(A) == path_graph(2) or is_isomorphic(unlabel(A), path_graph(2))


# ---------------------------------------------------------------------------
# Combinations, squares, evaluation
# ---------------------------------------------------------------------------


def test_combination_arithmetic():
    a = lift(labeled_edge(1)) - lift(labeled_edge(2))
    assert (a + a) == 2 * a
    assert a - a == Combination()
    assert -a == (-1) * a


def test_square_expand_difference_of_edges():
    sq = square_expand(lift(labeled_edge(1)) - lift(labeled_edge(2)))
    want = Combination(
        {path_graph(2): 2, disjoint_union(single_edge(), single_edge()): -2}
    )
    assert sq == want


def test_square_expand_bilinear_matches_glue_product():
    rng = Random(11)
    for _ in range(10):
        A = random_labeled(rng, 4, 0.5, 2)
        B = random_labeled(rng, 4, 0.5, 2)
        a = lift(A) - 2 * lift(B)
        direct = square_expand(a)
        via_product = Combination(
            {
                unlabel(P): c
                for P, c in glue_product(a, a).terms.items()
            }
        )
        # collecting by unlabeled graph must agree
        acc = {}
        for P, c in glue_product(a, a).terms.items():
            U = unlabel(P)
            acc[U] = acc.get(U, Fraction(0)) + c
        assert direct == Combination(acc)


def test_goodman_identity():
    a1 = (
        lift(labeled_edge(2, 3))
        - lift(cherry(2, 1, 3))
        - lift(cherry(3, 1, 2))
        + lift(labeled_graph(2, 3, [(0, 1), (0, 2), (1, 2)], {1: 0, 2: 1, 3: 2}))
    )
    a2 = lift(labeled_edge(1)) - lift(labeled_edge(2))
    total = square_expand(a1) + square_expand(a2)
    want = Combination(
        {
            complete_graph(3): 1,
            disjoint_union(single_edge(), single_edge()): -2,
            single_edge(): 1,
        }
    )
    assert total == want
    assert eval_combination(total, complete_graph(3)) == 0
    assert eval_combination(total, complete_bipartite(2, 2)) == 0
    # pentagon: t(K3)=0, t(e)=2/5 -> 0 - 2*(2/5)^2 + 2/5 = 2/25
    C5 = Hypergraph.make(2, 5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    assert eval_combination(total, C5) == Fraction(2, 25)


def test_eval_combination_unit():
    assert eval_combination(Combination({Hypergraph(2, 0, frozenset()): 1}), complete_graph(3)) == 1


# ---------------------------------------------------------------------------
# Exponent vectors
# ---------------------------------------------------------------------------


def test_alpha_vector_examples():
    e, p2, P3 = single_edge(), path_graph(2), path_graph(3)
    e3 = disjoint_union(disjoint_union(e, e), e)
    assert alpha_vector(e3, [e, P3]).exponents == (3, 0)
    assert alpha_vector(disjoint_union(disjoint_union(e, e), p2), [e, p2]).exponents == (2, 1)
    with pytest.raises(ValueError):
        alpha_vector(complete_graph(3), [e, p2])


def test_alpha_vector_additive_over_union():
    rng = Random(17)
    basis = [single_edge(), path_graph(2), complete_graph(3), path_graph(3)]
    pieces = [single_edge(), path_graph(2), path_graph(3), complete_graph(3)]
    for _ in range(10):
        A = rng.choice(pieces)
        B = rng.choice(pieces)
        u = alpha_vector(disjoint_union(A, B), basis)
        va = alpha_vector(A, basis).exponents
        vb = alpha_vector(B, basis).exponents
        assert u.exponents == tuple(x + y for x, y in zip(va, vb))


def test_exponent_vector_validation():
    with pytest.raises(ValueError):
        ExponentVector(("a", "a"), (1, 2))
    with pytest.raises(ValueError):
        ExponentVector(("a",), (1, 2))


# ---------------------------------------------------------------------------
# Basis enumeration
# ---------------------------------------------------------------------------


def test_basis_degree1_budget2():
    b = enumerate_basis("B_tilde", 1, 2)
    jsons = [el.to_json() for el in b.elements]
    assert len(b) == 4
    assert '{"edges":[],"labels":{},"n":0,"r":2}' in jsons
    assert '{"edges":[[0,1]],"labels":{"1":0},"n":2,"r":2}' in jsons
    assert '{"edges":[[0,1]],"labels":{"2":0},"n":2,"r":2}' in jsons
    assert '{"edges":[[0,1]],"labels":{"1":0,"2":1},"n":2,"r":2}' in jsons
    # unrestricted basis additionally has the unlabeled edge
    assert len(enumerate_basis("B", 1, 2)) == 5


def test_basis_zero_budget():
    b = enumerate_basis("B_tilde", 1, 0)
    assert len(b) == 1
    assert b.elements[0] == unit()


def test_basis_degree2_budget4_counts():
    # 1 empty + 10 single-edge labelings + 38 two-edge-path labelings
    # + 21 disjoint-pair labelings, every component labeled
    assert len(enumerate_basis("B_tilde", 2, 4)) == 1 + 10 + 38 + 21
    assert len(enumerate_basis("B", 2, 4)) == 83


def test_v_basis_degree1():
    v = enumerate_basis("V", 1, 2)
    assert [g.to_json() for g in v.elements] == [
        single_edge().to_json(),
        graph_key(path_graph(2)),
    ]


def test_v_basis_degree2_is_the_ten_small_graphs():
    v = enumerate_basis("V", 2, 4)
    keys = {g.to_json() for g in v.elements}
    paw = Hypergraph.make(2, 4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    spider = Hypergraph.make(2, 5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    expected = {
        graph_key(single_edge()),
        graph_key(path_graph(2)),
        graph_key(complete_graph(3)),
        graph_key(path_graph(3)),
        graph_key(star_hypergraph(3, 1)),
        graph_key(path_graph(4)),
        graph_key(star_hypergraph(4, 1)),
        graph_key(complete_bipartite(2, 2)),
        graph_key(paw),
        graph_key(spider),
    }
    assert keys == expected
    counts = [g.edge_count for g in v.elements]
    assert counts == sorted(counts)


def test_basis_bad_kind():
    with pytest.raises(ValueError):
        enumerate_basis("Z", 1, 2)


# ---------------------------------------------------------------------------
# Moment matrices
# ---------------------------------------------------------------------------


def test_moment_matrix_degree1_entries():
    M = moment_matrix(enumerate_basis("B_tilde", 1, 2))
    elems = {el.to_json(): i for i, el in enumerate(M.basis)}
    i1 = elems['{"edges":[],"labels":{},"n":0,"r":2}']
    i12 = elems['{"edges":[[0,1]],"labels":{"1":0,"2":1},"n":2,"r":2}']
    ia = elems['{"edges":[[0,1]],"labels":{"1":0},"n":2,"r":2}']
    ib = elems['{"edges":[[0,1]],"labels":{"2":0},"n":2,"r":2}']
    e, p2 = single_edge(), path_graph(2)
    assert M.entry_graph(i1, i1).n == 0
    assert M.entry_graph(i1, ia) == canonical_form_of(e)
    assert M.entry_graph(i12, i12) == canonical_form_of(e)
    assert is_isomorphic(M.entry_graph(ia, ia), p2)
    assert is_isomorphic(M.entry_graph(ia, i12), p2)
    assert is_isomorphic(M.entry_graph(ib, i12), p2)
    assert M.entry_graph(ia, ib).edge_count == 2
    assert len(connected_components_of(M.entry_graph(ia, ib))) == 2
    assert M.vbasis == (graph_key(e), graph_key(p2))
    assert M.exponent_vector(ia, ib).exponents == (2, 0)
    assert M.exponent_vector(i1, ia).exponents == (1, 0)


def canonical_form_of(G):
    from graphtrop.hypergraphs import canonical_form

    return canonical_form(G)


def connected_components_of(G):
    from graphtrop.hypergraphs import connected_components

    return connected_components(G)


def test_moment_matrix_symmetry_and_extension():
    basis = enumerate_basis("B_tilde", 1, 2)
    M = moment_matrix(basis, vbasis=[single_edge()])
    assert M.extensions == (graph_key(path_graph(2)),)
    assert set(M.vbasis) == {graph_key(single_edge()), graph_key(path_graph(2))}
    for i in range(M.size):
        for j in range(M.size):
            assert M.entry_graph(i, j) == M.entry_graph(j, i)


def test_moment_matrix_unit_row():
    M = moment_matrix(enumerate_basis("B_tilde", 1, 2))
    for j, el in enumerate(M.basis):
        assert M.entry_graph(0, j) == unlabel(el)


def test_symbolically_zero_minor_needs_shared_labeled_components():
    # distinct elements with every component labeled never cancel
    basis = enumerate_basis("B_tilde", 2, 2)
    M = moment_matrix(basis)
    for i in range(M.size):
        for j in range(i + 1, M.size):
            m = _minor_vector(M, i, j)
            assert any(c != 0 for c in m.values()), (i, j)
    # but an unlabeled component shared through the product cancels exactly
    A = LabeledGraph(disjoint_union(single_edge(), single_edge()), ((1, 0),))
    B = labeled_edge(1)
    m = _pair_vector(A, B)
    assert all(c == 0 for c in m.values())


def _pair_vector(A, B):
    out: dict[str, int] = {}
    for U, s in ((unlabeled_product(A, A), 1), (unlabeled_product(B, B), 1), (unlabeled_product(A, B), -2)):
        for k, c in component_counts(U).items():
            out[k] = out.get(k, 0) + s * c
    return out


def _minor_vector(M, i, j):
    out: dict[str, int] = {}
    for (a, b), s in (((i, i), 1), ((j, j), 1), ((i, j), -2)):
        for k, c in M.alpha_entry(a, b).items():
            out[k] = out.get(k, 0) + s * c
    return out


# ---------------------------------------------------------------------------
# Trivial squares
# ---------------------------------------------------------------------------


def test_trivial_square_paths():
    assert is_trivial_square(path_graph(3))
    assert not is_trivial_square(path_graph(2))
    # the 4-edge path folds out of a cherry with one labeled leaf
    assert not is_trivial_square(path_graph(4))


def test_trivial_square_edge_and_clique():
    # the only labeled graph squaring to a single edge is the fully labeled edge
    assert is_trivial_square(single_edge())
    assert is_trivial_square(complete_graph(3))


def test_trivial_square_star_fails():
    # a half-labeled cherry squares to the 3-star
    assert not is_trivial_square(star_hypergraph(3, 1))


def test_trivial_square_validation():
    with pytest.raises(ValueError):
        is_trivial_square(Hypergraph(2, 3, frozenset()))
