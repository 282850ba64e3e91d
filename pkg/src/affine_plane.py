"""
The affine plane A(2, q) on the points of F_{q^2}.

A line is {a + c*s : c in F_q}. Its slope s is normalised to one of the q + 1
representatives 1, alpha, 1 + alpha, ..., (q-1) + alpha, and the line is keyed
by (slope, least point on the line).
"""

import logging
from typing import Dict, Iterable, List, NamedTuple, Tuple

from src.certificate import CheckResult, require
from src.errors import GeometryError, VerificationError
from src.finite_field import QuadExtContext
from src.paley import iter_bits, mask_of

logger = logging.getLogger(__name__)

ON_OVAL = "on-oval"
EXTERIOR_WITH_TANGENTS = "exterior-with-tangents"
EXTERIOR_WITHOUT = "exterior-without"

ALL_QUADRATIC = "all-quadratic"
ALL_NONQUADRATIC = "all-nonquadratic"


class Line(NamedTuple):
    slope: int
    base: int


class OvalIntersection(NamedTuple):
    count: int
    points: Tuple[int, ...]

    @property
    def kind(self) -> str:
        return ("exterior", "tangent", "secant")[self.count] if self.count <= 2 else "not-an-oval"


class TangentReport(NamedTuple):
    count: int
    tangents: Tuple[Line, ...]


def directions(ctx: QuadExtContext) -> List[int]:
    """The q + 1 slope representatives: 1, then c + alpha for c in F_q."""
    return [ctx.one] + [ctx.encode(c, 1) for c in range(ctx.q)]


class AffinePlane:
    """
    Incidence structure of A(2, q). All lines are enumerated once on first use;
    afterwards lookups are table driven.
    """

    def __init__(self, ctx: QuadExtContext):
        self.ctx = ctx
        self.q = ctx.q
        self.directions = directions(ctx)
        self._direction_index = {s: i for i, s in enumerate(self.directions)}
        self._quadratic_direction = [ctx.is_square(s) for s in self.directions]
        self._lines: List[Line] = []
        self._line_ids: Dict[Line, int] = {}
        self._points: List[Tuple[int, ...]] = []
        self._masks: List[int] = []
        self._line_of: List[List[int]] = []

    def _build(self) -> None:
        if self._lines:
            return
        ctx = self.ctx
        for s in self.directions:
            steps = [ctx.scale(c, s) for c in range(self.q)]
            line_of = [-1] * ctx.order
            for a in range(ctx.order):
                if line_of[a] != -1:
                    continue
                # a is the least point not yet covered, hence the least point of its line
                points = tuple(sorted(ctx.add(a, step) for step in steps))
                line = Line(s, a)
                ident = len(self._lines)
                self._lines.append(line)
                self._line_ids[line] = ident
                self._points.append(points)
                self._masks.append(mask_of(points))
                for point in points:
                    line_of[point] = ident
            self._line_of.append(line_of)
        logger.debug("A(2,%d): %d lines", self.q, len(self._lines))

    def direction_of(self, delta: int) -> int:
        """The slope representative proportional (over F_q*) to the nonzero vector delta."""
        if delta == 0:
            raise GeometryError("the zero vector has no direction")
        F = self.ctx.base
        x, y = self.ctx.decode(delta)
        if y == 0:
            return self.ctx.one
        return self.ctx.encode(F.div(x, y), 1)

    def all_lines(self) -> List[Line]:
        self._build()
        return list(self._lines)

    def line(self, point: int, slope: int) -> Line:
        """The line through `point` with direction `slope` (any nonzero element)."""
        self._build()
        s = self._direction_index.get(slope)
        if s is None:
            s = self._direction_index[self.direction_of(slope)]
        return self._lines[self._line_of[s][point]]

    def points(self, line: Line) -> Tuple[int, ...]:
        self._build()
        return self._points[self._id(line)]

    def mask(self, line: Line) -> int:
        self._build()
        return self._masks[self._id(line)]

    def _id(self, line: Line) -> int:
        try:
            return self._line_ids[line]
        except KeyError:
            raise GeometryError(f"{line} is not a canonical line") from None

    def lines_through(self, point: int) -> List[Line]:
        self._build()
        return [self._lines[line_of[point]] for line_of in self._line_of]

    def line_through(self, p1: int, p2: int) -> Line:
        if p1 == p2:
            raise GeometryError("a line needs two distinct points")
        return self.line(p1, self.direction_of(self.ctx.sub(p2, p1)))

    def is_quadratic(self, line: Line) -> bool:
        return self._quadratic_direction[self._direction_index[line.slope]]


def line_through(plane: AffinePlane, p1: int, p2: int) -> Line:
    return plane.line_through(p1, p2)


def is_quadratic_line(plane: AffinePlane, line: Line) -> bool:
    return plane.is_quadratic(line)


class OvalView:
    """A point set of size q + 1 in the plane with cached line intersections."""

    def __init__(self, plane: AffinePlane, points: Iterable[int]):
        self.plane = plane
        self.points = tuple(sorted(set(points)))
        self.mask = mask_of(self.points)
        self._cache: Dict[Line, OvalIntersection] = {}

    def __contains__(self, point: int) -> bool:
        return bool((self.mask >> point) & 1)

    def __len__(self) -> int:
        return len(self.points)

    def intersection(self, line: Line) -> OvalIntersection:
        hit = self._cache.get(line)
        if hit is None:
            common = self.plane.mask(line) & self.mask
            hit = OvalIntersection(common.bit_count(), tuple(iter_bits(common)))
            self._cache[line] = hit
        return hit

    def tangent_at(self, point: int) -> Line:
        if point not in self:
            raise GeometryError(f"{point} is not on the oval")
        tangents = [l for l in self.plane.lines_through(point) if self.intersection(l).count == 1]
        if len(tangents) != 1:
            raise VerificationError("oval", "point does not have a unique tangent",
                                    {"point": point, "tangents": len(tangents)})
        return tangents[0]


def oval_intersection(line: Line, oval: OvalView) -> OvalIntersection:
    return oval.intersection(line)


def tangents_from(point: int, oval: OvalView) -> TangentReport:
    """Tangents to the oval through `point`; exactly one when the point lies on the oval."""
    tangents = tuple(l for l in oval.plane.lines_through(point) if oval.intersection(l).count == 1)
    return TangentReport(len(tangents), tangents)


def verify_tangent_uniformity(plane: AffinePlane, oval: OvalView) -> str:
    """All tangents to the norm-one oval share one squareness class, fixed by q mod 4."""
    claim = "tangent uniformity"
    classes = {}
    for point in oval.points:
        classes.setdefault(plane.is_quadratic(oval.tangent_at(point)), point)
    if len(classes) != 1:
        raise VerificationError(claim, "tangents are mixed quadratic and non-quadratic",
                                {"quadratic_at": classes[True], "nonquadratic_at": classes[False]})
    ((quadratic, _),) = classes.items()
    expected = plane.q % 4 == 3
    require(quadratic == expected, claim, "tangent class contradicts q mod 4",
            {"q": plane.q, "quadratic": quadratic})
    return ALL_QUADRATIC if quadratic else ALL_NONQUADRATIC


def verify_incidence(plane: AffinePlane) -> CheckResult:
    claim = "affine plane axioms"
    q = plane.q
    lines = plane.all_lines()
    require(len(lines) == q * (q + 1), claim, "wrong number of lines", {"lines": len(lines)})
    for line in lines:
        require(len(plane.points(line)) == q, claim, "line does not have q points", {"line": list(line)})
    full = (1 << plane.ctx.order) - 1
    for point in plane.ctx.elements():
        through = plane.lines_through(point)
        union = 0
        covered = 0
        for line in through:
            mask = plane.mask(line)
            require((mask >> point) & 1 == 1, claim, "line does not contain its point", {"point": point})
            covered += (mask & ~(1 << point)).bit_count()
            union |= mask
        # the q+1 lines through a point cover every other point exactly once
        require(len(set(through)) == q + 1 and union == full and covered == plane.ctx.order - 1,
                claim, "two points do not span exactly one line", {"point": point})
    return CheckResult(claim, True, {"lines": len(lines), "points": plane.ctx.order})


def verify_lines_through_a_point(plane: AffinePlane) -> CheckResult:
    """(q+1)/2 quadratic and (q+1)/2 non-quadratic lines through every point."""
    claim = "lines through a point"
    half = (plane.q + 1) // 2
    for point in plane.ctx.elements():
        quadratic = sum(plane.is_quadratic(l) for l in plane.lines_through(point))
        require(quadratic == half, claim, "quadratic line count is not (q+1)/2",
                {"point": point, "quadratic": quadratic})
    return CheckResult(claim, True, {"quadratic_per_point": half, "nonquadratic_per_point": half})


def verify_difference_squareness(plane: AffinePlane) -> CheckResult:
    """Differences of points on a (non-)quadratic line are (non-)squares."""
    claim = "difference squareness"
    ctx = plane.ctx
    for line in plane.all_lines():
        quadratic = plane.is_quadratic(line)
        points = plane.points(line)
        for i, a in enumerate(points):
            for b in points[i + 1:]:
                if ctx.is_square(ctx.sub(b, a)) != quadratic:
                    raise VerificationError(claim, "difference squareness differs from the line class",
                                            {"line": list(line), "points": [a, b]})
    return CheckResult(claim, True, {"lines": len(plane.all_lines())})


def verify_oval(plane: AffinePlane, oval: OvalView) -> CheckResult:
    """q + 1 points, no three collinear."""
    claim = "oval"
    require(len(oval) == plane.q + 1, claim, "oval does not have q+1 points", {"size": len(oval)})
    counts = {0: 0, 1: 0, 2: 0}
    for line in plane.all_lines():
        hit = oval.intersection(line)
        require(hit.count <= 2, claim, "three oval points are collinear",
                {"line": list(line), "points": list(hit.points)})
        counts[hit.count] += 1
    return CheckResult(claim, True, {"exterior": counts[0], "tangent": counts[1], "secant": counts[2]})


def classify_points(plane: AffinePlane, oval: OvalView) -> List[Dict[str, object]]:
    """Per-point line report: class, tangents, secants and quadratic lines through it."""
    report = []
    for point in plane.ctx.elements():
        tangents = secants = quadratic = 0
        for line in plane.lines_through(point):
            count = oval.intersection(line).count
            tangents += count == 1
            secants += count == 2
            quadratic += plane.is_quadratic(line)
        if point in oval:
            kind = ON_OVAL
        elif tangents:
            kind = EXTERIOR_WITH_TANGENTS
        else:
            kind = EXTERIOR_WITHOUT
        report.append({"point": point, "class": kind, "tangents": tangents,
                       "secants": secants, "quadratic_lines": quadratic})
    return report


def verify_qvist(plane: AffinePlane, oval: OvalView) -> CheckResult:
    """One tangent through each oval point, 0 or 2 through every other point."""
    claim = "qvist"
    classes = {ON_OVAL: 0, EXTERIOR_WITH_TANGENTS: 0, EXTERIOR_WITHOUT: 0}
    for entry in classify_points(plane, oval):
        tangents = entry["tangents"]
        if entry["class"] == ON_OVAL:
            require(tangents == 1, claim, "oval point without a unique tangent", entry)
        else:
            require(tangents in (0, 2), claim, "exterior point with a tangent count other than 0 or 2", entry)
        classes[entry["class"]] += 1
    return CheckResult(claim, True, classes)


def point_classes(plane: AffinePlane, oval: OvalView) -> Dict[int, str]:
    return {entry["point"]: entry["class"] for entry in classify_points(plane, oval)}

