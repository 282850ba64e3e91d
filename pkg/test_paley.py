import pytest

from src.errors import CapExceededError, GraphError, VerificationError
from src.finite_field import build_tower
from src.paley import (
    PaleyGraph,
    SrgParams,
    build_paley,
    complement,
    expected_srg_parameters,
    extension_candidates,
    is_automorphism,
    is_clique,
    is_coclique,
    is_maximal_clique,
    is_maximal_coclique,
    iter_bits,
    mask_of,
    srg_eigenvalues,
    srg_parameters,
    verify_self_complementary,
    verify_srg,
)


@pytest.fixture(scope="module")
def p9():
    ctx = build_tower(3)
    return ctx, build_paley(ctx)


def test_bit_helpers():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert mask_of([5, 0, 3]) == 0b101001
    assert list(iter_bits(0)) == []


def test_q3_is_the_rook_graph(p9):
    _, g = p9
    assert g.v == 9
    assert g.neighbours(0) == [1, 2, 3, 6]
    # x + y*alpha ~ x' + y'*alpha iff exactly one coordinate differs
    for a in range(9):
        for b in range(9):
            if a != b:
                same_row, same_col = a // 3 == b // 3, a % 3 == b % 3
                assert g.adjacent(a, b) == (same_row or same_col)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_srg_parameters_match_paley_formula(q):
    g = build_paley(build_tower(q))
    params = srg_parameters(g)
    assert params.as_tuple() == (q * q, (q * q - 1) // 2, (q * q - 5) // 4, (q * q - 1) // 4)
    assert params == expected_srg_parameters(q)
    assert params.feasible()


def test_srg_parameters_with_workers_match_serial():
    g = build_paley(build_tower(5))
    assert srg_parameters(g, threads=2, progress=False) == srg_parameters(g)


@pytest.mark.parametrize("params, eigenvalues", [
    (SrgParams(9, 4, 1, 2), (4, 1, -2)),
    (SrgParams(25, 12, 5, 6), (12, 2, -3)),
    (SrgParams(49, 24, 11, 12), (24, 3, -4)),
])
def test_srg_eigenvalues(params, eigenvalues):
    assert srg_eigenvalues(params) == eigenvalues


def test_non_integral_eigenvalues_are_rejected():
    # the pentagon, a conference graph with irrational spectrum
    with pytest.raises(GraphError):
        srg_eigenvalues(SrgParams(5, 2, 0, 1))


def test_edge_count_q5():
    g = build_paley(build_tower(5))
    assert g.edge_count() == 150
    assert len(list(g.edges())) == 150
    assert verify_srg(g).details["eigenvalues"] == [12, 2, -3]


def test_irregular_graph_is_not_strongly_regular():
    # a path on three vertices
    g = PaleyGraph(3, (0b010, 0b101, 0b010))
    with pytest.raises(VerificationError) as info:
        srg_parameters(g)
    assert info.value.witness["degrees"] == [1, 2]


def test_vertex_cap():
    with pytest.raises(CapExceededError):
        build_paley(build_tower(7), max_vertices=25)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_self_complementary(q):
    ctx = build_tower(q)
    assert verify_self_complementary(build_paley(ctx), ctx)


def test_identity_is_not_a_complement_isomorphism(p9):
    _, g = p9
    assert is_automorphism(g, list(range(9)))
    assert not is_automorphism(complement(g), list(range(9)), target=g)
    assert not is_automorphism(g, [0] * 9)


def test_complement_partitions_the_pairs(p9):
    _, g = p9
    h = complement(g)
    for i in range(9):
        assert g.adj[i] & h.adj[i] == 0
        assert (g.adj[i] | h.adj[i] | 1 << i) == g.full_mask


def test_clique_predicates(p9):
    _, g = p9
    assert is_clique(g, [0, 1, 2])
    assert is_maximal_clique(g, [0, 1, 2])
    assert is_clique(g, [0, 1]) and not is_maximal_clique(g, [0, 1])
    assert extension_candidates(g, [0, 1]) == 1 << 2
    assert is_coclique(g, [0, 4, 8])
    assert is_maximal_coclique(g, [0, 4, 8])
    assert not is_coclique(g, [0, 1])
    assert is_clique(g, [4]) and is_coclique(g, [4])


def test_bad_vertex_sets(p9):
    _, g = p9
    with pytest.raises(GraphError):
        is_clique(g, [])
    with pytest.raises(GraphError):
        is_coclique(g, [0, 9])


def test_induced_edges(p9):
    _, g = p9
    assert g.induced_edges([0, 1, 2, 4]) == [(0, 1), (0, 2), (1, 2), (1, 4)]
