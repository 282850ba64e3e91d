import pytest

from src.affine_plane import AffinePlane
from src.clique_search import (
    CliqueCensus,
    census,
    clique_number,
    contains_set,
    enumerate_maximal_cliques,
    maximum_clique,
    reference_sets,
    verify_census_symmetry,
    verify_enumeration_soundness,
)
from src.config import Settings
from src.constructions import build_oval_decomposition, subfield_clique, theorem1_sets
from src.errors import CapExceededError, TruncatedError, VerificationError
from src.finite_field import build_tower
from src.paley import PaleyGraph, build_paley, complement, is_clique


def setup(q):
    ctx = build_tower(q)
    return ctx, build_paley(ctx), build_oval_decomposition(ctx)


@pytest.fixture(scope="module")
def q5():
    return setup(5)


@pytest.fixture(scope="module")
def q7():
    return setup(7)


def test_q3_maximal_cliques_are_the_quadratic_lines():
    ctx, g, _ = setup(3)
    result = enumerate_maximal_cliques(g)
    assert not result.truncated
    plane = AffinePlane(ctx)
    quadratic = sorted(plane.points(line) for line in plane.all_lines() if plane.is_quadratic(line))
    assert result.cliques == quadratic
    assert len(result.cliques) == 6


def test_single_vertex_graph():
    assert enumerate_maximal_cliques(PaleyGraph(1, (0,))).cliques == [(0,)]


def test_size_window(q5):
    _, g, _ = q5
    everything = enumerate_maximal_cliques(g).cliques
    window = enumerate_maximal_cliques(g, min_size=4, max_size=4).cliques
    assert window == [c for c in everything if len(c) == 4]
    assert enumerate_maximal_cliques(g, min_size=6).cliques == []
    assert enumerate_maximal_cliques(g, min_size=4, max_size=3).cliques == []


def test_enumeration_is_sound_and_sorted(q5):
    _, g, _ = q5
    cliques = enumerate_maximal_cliques(g).cliques
    assert cliques == sorted(cliques)
    assert verify_enumeration_soundness(g, cliques).details["checked"] == len(cliques)


def test_soundness_catches_bad_lists(q5):
    _, g, _ = q5
    clique = enumerate_maximal_cliques(g).cliques[0]
    with pytest.raises(VerificationError):
        verify_enumeration_soundness(g, [clique, clique])
    with pytest.raises(VerificationError):
        verify_enumeration_soundness(g, [clique[:-1]])


def test_workers_do_not_change_the_output(q5):
    _, g, _ = q5
    assert enumerate_maximal_cliques(g, threads=2, progress=False) == enumerate_maximal_cliques(g)


def test_limit_marks_truncation(q5):
    _, g, _ = q5
    result = enumerate_maximal_cliques(g, limit=3)
    assert result.truncated
    assert len(result.cliques) == 3
    with pytest.raises(TruncatedError):
        enumerate_maximal_cliques(g, limit=3, strict=True)


def test_enumeration_cap(q5):
    _, g, _ = q5
    with pytest.raises(CapExceededError):
        enumerate_maximal_cliques(g, settings=Settings(enumeration_cap=10))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_clique_number_meets_the_delsarte_bound(q):
    _, g, _ = setup(q)
    clique = maximum_clique(g)
    assert is_clique(g, clique)
    assert clique_number(g) == q


def test_full_census_q3():
    ctx, g, dec = setup(3)
    result = census(g, ctx, references=reference_sets(ctx, dec))
    assert result.histogram == {3: 6}
    assert result.total == 6
    assert result.orbit_counts == {"subfield": 6, "theorem1": 6}
    assert not result.truncated
    assert result.to_dict()["histogram"] == {"3": 6}


def test_census_q7_size5_is_one_orbit_of_oval_cliques(q7):
    ctx, g, dec = q7
    result = census(g, ctx, 5, reference_sets(ctx, dec))
    assert set(result.histogram) == {5}
    assert result.total == result.orbit_counts["theorem1"] == 294
    assert result.orbit_counts["subfield"] == 0
    for s in theorem1_sets(ctx, dec):
        assert contains_set(result, s.vertices)
    assert not contains_set(result, [])
    assert not contains_set(result, subfield_clique(ctx))


def test_census_q11_size7_finds_cliques_outside_the_oval_orbit():
    ctx, g, dec = setup(11)
    result = census(g, ctx, 7, reference_sets(ctx, dec), threads=2, progress=False)
    assert result.total == 7260
    assert result.orbit_counts["theorem1"] == 1210
    assert verify_census_symmetry(ctx, result).passed


def test_census_q9_complement_finds_cocliques_outside_the_oval_orbit():
    ctx, g, dec = setup(9)
    result = census(complement(g), ctx, 5, reference_sets(ctx, dec, on_complement=True))
    assert result.total == 10368
    assert result.orbit_counts["theorem1"] == 648


def test_census_q5_contains_the_subfield(q5):
    ctx, g, dec = q5
    result = census(g, ctx, 5, reference_sets(ctx, dec))
    assert contains_set(result, subfield_clique(ctx))
    assert result.orbit_counts["subfield"] == 5 * 3


def test_cocliques_are_cliques_of_the_complement(q5):
    ctx, g, dec = q5
    result = census(complement(g), ctx, 3, reference_sets(ctx, dec, on_complement=True))
    for s in theorem1_sets(ctx, dec):
        assert s.kind == "coclique"
        assert contains_set(result, s.vertices)
    assert result.orbit_counts["theorem1"] >= 2


def test_census_symmetry(q5):
    ctx, g, dec = q5
    result = census(g, ctx)
    assert verify_census_symmetry(ctx, result).details["cliques"] == result.total
    assert result.samples[5][0] in result.keys
    assert max(result.histogram) == 5


def test_census_caps():
    ctx, g, _ = setup(17)
    with pytest.raises(CapExceededError):
        census(g, ctx)
    ctx, g, _ = setup(19)
    with pytest.raises(CapExceededError):
        census(g, ctx, 10)


def test_gap_sizes():
    partial = CliqueCensus(7, {4: 2, 5: 3, 6: 1, 7: 2}, {}, 0.0, {})
    assert partial.gap_sizes == [6]
    assert partial.total == 8
    assert CliqueCensus(5, {3: 1, 4: 2, 5: 1}, {}, 0.0, {}).gap_sizes == [4]
