import pytest

from src.affine_plane import (
    ALL_NONQUADRATIC,
    ALL_QUADRATIC,
    EXTERIOR_WITH_TANGENTS,
    EXTERIOR_WITHOUT,
    ON_OVAL,
    AffinePlane,
    Line,
    OvalView,
    classify_points,
    directions,
    is_quadratic_line,
    line_through,
    oval_intersection,
    tangents_from,
    verify_difference_squareness,
    verify_incidence,
    verify_lines_through_a_point,
    verify_oval,
    verify_qvist,
    verify_tangent_uniformity,
)
from src.constructions import build_oval_decomposition
from src.errors import GeometryError, VerificationError
from src.finite_field import build_tower


def plane_and_oval(q):
    ctx = build_tower(q)
    plane = AffinePlane(ctx)
    return ctx, plane, OvalView(plane, build_oval_decomposition(ctx).powers)


@pytest.fixture(scope="module")
def q3():
    return plane_and_oval(3)


def test_directions(q3):
    ctx, plane, _ = q3
    assert directions(ctx) == [3, 1, 4, 7]
    # 1 and alpha are squares when q = 3
    assert [ctx.is_square(s) for s in directions(ctx)] == [True, True, False, False]


def test_lines_and_points(q3):
    ctx, plane, _ = q3
    assert len(plane.all_lines()) == 12
    assert plane.line(0, 2) == Line(1, 0)
    assert plane.points(Line(1, 0)) == (0, 1, 2)
    assert line_through(plane, 0, 2) == Line(1, 0)
    assert line_through(plane, 3, 6) == Line(3, 0)
    assert is_quadratic_line(plane, Line(3, 0))
    assert not is_quadratic_line(plane, line_through(plane, 0, 4))


def test_degenerate_inputs(q3):
    _, plane, oval = q3
    with pytest.raises(GeometryError):
        plane.line_through(5, 5)
    with pytest.raises(GeometryError):
        plane.direction_of(0)
    with pytest.raises(GeometryError):
        plane.points(Line(3, 4))
    with pytest.raises(GeometryError):
        oval.tangent_at(0)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_plane_axioms_and_line_classes(q):
    _, plane, _ = plane_and_oval(q)
    assert verify_incidence(plane).details == {"lines": q * (q + 1), "points": q * q}
    assert verify_lines_through_a_point(plane).details["quadratic_per_point"] == (q + 1) // 2
    assert verify_difference_squareness(plane).passed


def test_oval_intersections_q3(q3):
    ctx, plane, oval = q3
    assert oval.points == (1, 2, 3, 6)
    assert verify_oval(plane, oval).details == {"exterior": 2, "tangent": 4, "secant": 6}
    hit = oval_intersection(Line(3, 0), oval)
    assert hit.count == 2 and hit.points == (3, 6)
    # the tangent at 1 is the vertical line x = 1
    assert oval.tangent_at(3) == Line(1, 3)
    assert tangents_from(3, oval).count == 1
    assert tangents_from(0, oval).count == 0


@pytest.mark.parametrize("q, expected", [(3, ALL_QUADRATIC), (5, ALL_NONQUADRATIC), (7, ALL_QUADRATIC),
                                         (9, ALL_NONQUADRATIC), (11, ALL_QUADRATIC), (13, ALL_NONQUADRATIC)])
def test_tangent_uniformity(q, expected):
    _, plane, oval = plane_and_oval(q)
    assert verify_tangent_uniformity(plane, oval) == expected


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_qvist_and_point_classes(q):
    _, plane, oval = plane_and_oval(q)
    counts = verify_qvist(plane, oval).details
    assert counts[ON_OVAL] == q + 1
    assert counts[EXTERIOR_WITH_TANGENTS] == (q + 1) * (q - 1) // 2
    assert counts[EXTERIOR_WITHOUT] == q * (q - 1) // 2 - (q + 1) // 2


def test_classify_points_report(q3):
    _, plane, oval = q3
    report = {entry["point"]: entry for entry in classify_points(plane, oval)}
    assert report[0]["class"] == EXTERIOR_WITHOUT
    assert report[0]["secants"] == 2
    assert report[3] == {"point": 3, "class": ON_OVAL, "tangents": 1, "secants": 3, "quadratic_lines": 2}


def test_three_collinear_points_are_not_an_oval(q3):
    _, plane, _ = q3
    bad = OvalView(plane, [0, 1, 2, 4])
    with pytest.raises(VerificationError) as info:
        verify_oval(plane, bad)
    assert info.value.witness["points"] == [0, 1, 2]
