import pytest

from src.affine_plane import AffinePlane, OvalView, point_classes
from src.config import Settings
from src.constructions import build_oval_decomposition
from src.errors import CapExceededError, FieldError, GraphError, VerificationError
from src.finite_field import build_tower
from src.paley import SrgParams, build_paley, srg_parameters
from src.spectral import (
    Eigenfunction,
    build_oval_eigenfunction,
    eigenvalue_identities,
    min_support_oracle,
    minimum_support_functions,
    oval_eigenvalue,
    srg_multiplicities,
    support_size,
    verify_bound_tightness,
    verify_eigenspace_dimensions,
    verify_local_condition,
    verify_theorem2,
    weight_distribution_bound,
)

ODD_PRIME_POWERS = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31]


def setup(q):
    ctx = build_tower(q)
    return ctx, build_paley(ctx), build_oval_decomposition(ctx)


@pytest.fixture(scope="module")
def p9():
    return build_paley(build_tower(3))


@pytest.fixture(scope="module")
def p25():
    return build_paley(build_tower(5))


@pytest.mark.parametrize("q, theta", [(3, 1), (5, -3), (7, 3), (9, -5), (11, 5), (13, -7)])
def test_oval_eigenvalue(q, theta):
    assert oval_eigenvalue(q) == theta


@pytest.mark.parametrize("q", ODD_PRIME_POWERS)
def test_theorem2(q):
    _, g, dec = setup(q)
    f = build_oval_eigenfunction(dec)
    assert support_size(f) == q + 1 == weight_distribution_bound(q)
    result = verify_theorem2(g, dec)
    assert result.details["support_size"] == q + 1
    assert result.details["max_residual"] == 0


def test_theorem2_reports_point_classes():
    ctx, g, dec = setup(5)
    plane = AffinePlane(ctx)
    classes = point_classes(plane, OvalView(plane, dec.powers))
    result = verify_theorem2(g, dec, classes, srg_parameters(g))
    assert result.details["classes"] == {"exterior-with-tangents": 12, "exterior-without": 7, "on-oval": 6}


def test_local_condition_with_workers():
    _, g, dec = setup(7)
    assert verify_local_condition(g, build_oval_eigenfunction(dec), threads=2, progress=False).passed


def test_local_condition_failure_names_a_vertex():
    _, g, dec = setup(5)
    f = build_oval_eigenfunction(dec)
    values = list(f.values)
    values[dec.q0[0]] = 2
    with pytest.raises(VerificationError) as info:
        verify_local_condition(g, Eigenfunction(tuple(values), f.theta))
    assert "vertex" in info.value.witness
    with pytest.raises(VerificationError):
        verify_local_condition(g, Eigenfunction((0,) * 25, f.theta))
    with pytest.raises(VerificationError):
        verify_local_condition(g, Eigenfunction((1,) * 9, f.theta))


def test_wrong_eigenvalue_fails():
    _, g, dec = setup(7)
    f = build_oval_eigenfunction(dec)
    with pytest.raises(VerificationError):
        verify_local_condition(g, Eigenfunction(f.values, -4))


def test_scaled_eigenfunction_keeps_support():
    _, g, dec = setup(3)
    f = build_oval_eigenfunction(dec).scaled(-3)
    assert verify_local_condition(g, f).details["support_size"] == 4
    assert f.sparse() == {1: 3, 2: 3, 3: -3, 6: -3}


def test_weight_distribution_bound_rejects_non_prime_powers():
    assert weight_distribution_bound(9) == 10
    with pytest.raises(FieldError):
        weight_distribution_bound(15)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_eigenvalue_identities(q):
    _, g, _ = setup(q)
    details = eigenvalue_identities(srg_parameters(g)).details
    assert details["theta1"] == (q - 1) // 2
    assert details["theta2"] == (-1 - q) // 2


def test_oracle_q3(p9):
    assert min_support_oracle(p9, 1, 4) == 4
    assert min_support_oracle(p9, -2, 4) == 4
    assert min_support_oracle(p9, 1, 3) is None


def test_oracle_q5(p25):
    assert min_support_oracle(p25, -3, 6) == 6


def test_minimum_support_functions_q3(p9):
    functions = minimum_support_functions(p9, 1, 4)
    assert functions
    for f in functions:
        assert support_size(f) == 4
        assert 0 in f.support
        assert f.values[f.support[0]] > 0
        assert verify_local_condition(p9, f).passed
    assert verify_bound_tightness(p9, 1, 4).details["minimum"] == 4


def test_oracle_limits(p9):
    with pytest.raises(GraphError):
        min_support_oracle(p9, 0, 4)
    with pytest.raises(CapExceededError):
        min_support_oracle(p9, 1, 9)
    with pytest.raises(CapExceededError):
        min_support_oracle(build_paley(build_tower(7)), 3, 8)
    assert min_support_oracle(p9, 1, 4, settings=Settings(oracle_max_cap=4)) == 4


def test_srg_multiplicities():
    assert srg_multiplicities(SrgParams(9, 4, 1, 2)) == {4: 1, 1: 4, -2: 4}
    assert srg_multiplicities(SrgParams(25, 12, 5, 6)) == {12: 1, 2: 12, -3: 12}


@pytest.mark.parametrize("q", [3, 5, 7])
def test_eigenspace_dimensions_match_the_multiplicities(q):
    _, g, _ = setup(q)
    dimensions = verify_eigenspace_dimensions(g).details["dimensions"]
    half = (q * q - 1) // 2
    assert dimensions == {str((q * q - 1) // 2): 1, str((q - 1) // 2): half, str((-1 - q) // 2): half}


def test_eigenspace_dimensions_respect_the_vertex_limit(p25):
    with pytest.raises(CapExceededError):
        verify_eigenspace_dimensions(p25, max_vertices=9)
