import pytest

from src.affine_plane import AffinePlane
from src.constructions import (
    COMPLETE_BIPARTITE,
    TWO_CLIQUES,
    AffineMap,
    Theorem1Set,
    adjacency_structure,
    apply_affine,
    build_oval_decomposition,
    group_generators,
    orbit,
    scaled_cliques,
    subfield_clique,
    theorem1_sets,
    verify_affine_automorphisms,
    verify_lemma_tq,
    verify_neighbours_of_one,
    verify_scaled_partition,
    verify_secants_through_zero,
    verify_subfield_clique,
    verify_theorem1,
)
from src.errors import FieldError, TruncatedError, VerificationError
from src.finite_field import build_tower
from src.paley import build_paley, is_clique, is_maximal_clique, is_maximal_coclique

ODD_PRIME_POWERS = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31]


def setup(q):
    ctx = build_tower(q)
    return ctx, build_paley(ctx), build_oval_decomposition(ctx)


@pytest.fixture(scope="module")
def q7():
    return setup(7)


def test_decomposition_q3():
    ctx, _, dec = setup(3)
    # omega = beta^2 = 2*alpha
    assert dec.omega == ctx.encode(0, 2)
    assert dec.powers == (3, 2, 6, 1)
    assert dec.q0 == (3, 6)
    assert dec.q1 == (2, 1)
    assert [s.vertices for s in theorem1_sets(ctx, dec)] == [(0, 3, 6), (0, 1, 2)]


@pytest.mark.parametrize("q", ODD_PRIME_POWERS)
def test_theorem1(q):
    ctx, g, dec = setup(q)
    sets = theorem1_sets(ctx, dec)
    result = verify_theorem1(g, sets)
    for s in sets:
        if q % 4 == 1:
            assert s.kind == "coclique" and len(s.vertices) == (q + 1) // 2
            assert is_maximal_coclique(g, s.vertices)
        else:
            assert s.kind == "clique" and len(s.vertices) == (q + 3) // 2
            assert is_maximal_clique(g, s.vertices)
        assert result.details[s.label]["maximal"]


def test_theorem1_failure_has_a_witness():
    ctx, g, _ = setup(3)
    with pytest.raises(VerificationError) as info:
        verify_theorem1(g, [Theorem1Set("bad", (0, 1, 4), "clique", 3)])
    assert info.value.witness == {"pair": [0, 4]}
    with pytest.raises(VerificationError, match="set extends"):
        verify_theorem1(g, [Theorem1Set("small", (0, 1), "clique", 2)])


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_subfield_is_a_maximal_clique(q):
    ctx, g, _ = setup(q)
    assert verify_subfield_clique(g, ctx).details["size"] == q
    assert subfield_clique(ctx) == tuple(c * q for c in range(q))


def test_scaled_cliques(q7):
    ctx, g, dec = q7
    for s in range(1, 7):
        for clique in scaled_cliques(ctx, dec, s):
            assert len(clique) == 5
            assert is_maximal_clique(g, clique)
    assert scaled_cliques(ctx, dec, 1) == tuple(s.vertices for s in theorem1_sets(ctx, dec))


def test_scaled_cliques_need_q_3_mod_4():
    ctx, _, dec = setup(5)
    with pytest.raises(FieldError):
        scaled_cliques(ctx, dec, 1)
    ctx, _, dec = setup(7)
    with pytest.raises(FieldError):
        scaled_cliques(ctx, dec, 0)


def test_center_s_does_not_give_a_clique(q7):
    # s*Q_1 + {s} with s = 1: 1 sees none of Q_1 when q = 3 (mod 4)
    ctx, g, dec = q7
    assert not is_clique(g, (ctx.one, *dec.q1))


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_scaled_partition(q):
    ctx, g, dec = setup(q)
    result = verify_scaled_partition(g, ctx, dec)
    assert result.details["distinct_sets"] == (q - 1) // 2
    assert result.details["cliques_checked"] == (2 * (q - 1) if q % 4 == 3 else 0)


def test_affine_map():
    ctx = build_tower(5)
    with pytest.raises(FieldError):
        AffineMap(0)
    shift = AffineMap(ctx.one, ctx.alpha)
    assert shift(ctx, 0) == ctx.alpha
    assert sorted(shift.permutation(ctx)) == list(range(25))
    assert apply_affine(ctx, AffineMap(ctx.one, ctx.one), [0, ctx.alpha]) == \
        tuple(sorted([ctx.one, ctx.add(ctx.alpha, ctx.one)]))


def test_orbit_of_the_subfield_is_the_quadratic_lines():
    ctx = build_tower(3)
    plane = AffinePlane(ctx)
    images = orbit(ctx, [subfield_clique(ctx)], group_generators(ctx))
    quadratic = sorted(plane.points(line) for line in plane.all_lines() if plane.is_quadratic(line))
    assert images == quadratic
    assert len(images) == 6
    with pytest.raises(TruncatedError):
        orbit(ctx, [subfield_clique(ctx)], group_generators(ctx), limit=3)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_lemma_tq(q):
    ctx, _, dec = setup(q)
    result = verify_lemma_tq(ctx, AffinePlane(ctx), dec)
    assert result.details["items"] == [1, 2, 3, 4, 5, 6, 7]
    assert result.details["maps"] == q + 1


@pytest.mark.parametrize("q, shape", [(3, TWO_CLIQUES), (5, COMPLETE_BIPARTITE), (7, TWO_CLIQUES),
                                      (9, COMPLETE_BIPARTITE), (11, TWO_CLIQUES), (13, COMPLETE_BIPARTITE)])
def test_adjacency_structure(q, shape):
    _, g, dec = setup(q)
    assert adjacency_structure(g, dec) == shape


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_neighbours_of_one(q):
    _, g, dec = setup(q)
    expected = (q + 1) // 2 if q % 4 == 1 else (q + 1) // 2 - 1
    assert verify_neighbours_of_one(g, dec).details["neighbours_in_Q"] == expected


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_secants_through_zero(q):
    ctx, _, dec = setup(q)
    assert verify_secants_through_zero(AffinePlane(ctx), dec).details["secants"] == (q + 1) // 2


@pytest.mark.parametrize("q", [3, 5, 7])
def test_affine_automorphisms(q):
    ctx, g, _ = setup(q)
    assert verify_affine_automorphisms(g, ctx).passed


@pytest.mark.parametrize("q", [5, 7, 9, 11])
def test_secant_points_split_between_halves_only_when_q_is_1_mod_4(q):
    ctx, _, dec = setup(q)
    q0 = set(dec.q0)
    for g in dec.powers:
        assert ((g in q0) != (ctx.neg(g) in q0)) == (q % 4 == 1)
