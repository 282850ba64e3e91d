"""
The norm-one oval Q = <omega>, its halves Q_0 and Q_1, the cliques and
cocliques built from them, and the affine maps gamma -> b1*gamma + b2 that
move them around.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.affine_plane import AffinePlane, Line, OvalView
from src.certificate import CheckResult, require
from src.errors import FieldError, TruncatedError, VerificationError
from src.finite_field import QuadExtContext
from src.paley import (
    PaleyGraph,
    complement,
    extension_candidates,
    is_automorphism,
    mask_of,
)

logger = logging.getLogger(__name__)

COMPLETE_BIPARTITE = "complete-bipartite"
TWO_CLIQUES = "two-cliques"

SetKey = Tuple[int, ...]


def set_key(vertices: Iterable[int]) -> SetKey:
    return tuple(sorted(set(vertices)))


@dataclass(frozen=True)
class OvalDecomposition:
    q: int
    omega: int
    powers: Tuple[int, ...]  # omega^0 .. omega^q

    @property
    def q0(self) -> Tuple[int, ...]:
        return self.powers[0::2]

    @property
    def q1(self) -> Tuple[int, ...]:
        return self.powers[1::2]

    @property
    def points(self) -> SetKey:
        return set_key(self.powers)


def build_oval_decomposition(ctx: QuadExtContext) -> OvalDecomposition:
    """omega = beta^(q-1) and its q + 1 powers, checked against the kernel of the norm."""
    claim = "oval decomposition"
    q = ctx.q
    omega = ctx.pow(ctx.beta, q - 1)
    powers = [ctx.one]
    for _ in range(q):
        powers.append(ctx.mul(powers[-1], omega))
    require(ctx.mul(powers[-1], omega) == ctx.one, claim, "omega^(q+1) != 1")
    require(len(set(powers)) == q + 1, claim, "omega does not have order q+1")
    require(ctx.is_square(omega), claim, "omega is not a square")
    kernel = [a for a in range(1, ctx.order) if ctx.norm(a) == 1]
    require(sorted(powers) == kernel, claim, "<omega> is not the kernel of the norm",
            {"powers": sorted(powers), "kernel": kernel})
    return OvalDecomposition(q, omega, tuple(powers))


@dataclass(frozen=True)
class Theorem1Set:
    label: str
    vertices: SetKey
    kind: str  # "clique" or "coclique"
    expected_size: int

    def to_dict(self) -> Dict[str, object]:
        return {"label": self.label, "kind": self.kind, "expected_size": self.expected_size,
                "set": list(self.vertices)}


def theorem1_sets(ctx: QuadExtContext, dec: OvalDecomposition) -> List[Theorem1Set]:
    """Q_0, Q_1 as cocliques when q = 1 (4); Q_0 + {0}, Q_1 + {0} as cliques when q = 3 (4)."""
    q = ctx.q
    if q % 4 == 1:
        size = (q + 1) // 2
        return [Theorem1Set("Q0", set_key(dec.q0), "coclique", size),
                Theorem1Set("Q1", set_key(dec.q1), "coclique", size)]
    size = (q + 3) // 2
    return [Theorem1Set("Q0+0", set_key((0, *dec.q0)), "clique", size),
            Theorem1Set("Q1+0", set_key((0, *dec.q1)), "clique", size)]


def _verify_set(g: PaleyGraph, vertices: Sequence[int], clique: bool, claim: str) -> None:
    mask = mask_of(vertices)
    for i in vertices:
        inside = g.adj[i] & mask
        wrong = (mask & ~inside & ~(1 << i)) if clique else inside
        if wrong:
            j = (wrong & -wrong).bit_length() - 1
            relation = "non-adjacent" if clique else "adjacent"
            raise VerificationError(claim, f"vertices are {relation}", {"pair": [i, j]})
    extra = extension_candidates(g, vertices, clique=clique)
    if extra:
        raise VerificationError(claim, "set extends", {"extension": (extra & -extra).bit_length() - 1})


def verify_theorem1(g: PaleyGraph, sets: Sequence[Theorem1Set]) -> CheckResult:
    """Each set is a clique (coclique) of its expected size and no vertex extends it."""
    details = {}
    for s in sets:
        claim = f"theorem 1 {s.label}"
        require(len(s.vertices) == s.expected_size, claim, "wrong size",
                {"size": len(s.vertices), "expected": s.expected_size})
        _verify_set(g, s.vertices, s.kind == "clique", claim)
        details[s.label] = {"kind": s.kind, "size": len(s.vertices), "maximal": True, "set": list(s.vertices)}
    return CheckResult("theorem 1", True, details)


def subfield_clique(ctx: QuadExtContext) -> SetKey:
    """F_q inside F_{q^2}: the q elements x + 0*alpha."""
    return set_key(ctx.embed(c) for c in range(ctx.q))


def verify_subfield_clique(g: PaleyGraph, ctx: QuadExtContext) -> CheckResult:
    claim = "subfield clique"
    clique = subfield_clique(ctx)
    require(len(clique) == ctx.q, claim, "subfield does not have q elements")
    _verify_set(g, clique, True, claim)
    return CheckResult(claim, True, {"size": len(clique), "set": list(clique)})


def scaled_cliques(ctx: QuadExtContext, dec: OvalDecomposition, s: int) -> Tuple[SetKey, SetKey]:
    """
    s*Q_0 + {0} and s*Q_1 + {0} for s in F_q*, the images of the Theorem 1 cliques
    under gamma -> s*gamma. s*Q is the set of elements of norm s^2.
    """
    if ctx.q % 4 != 3:
        raise FieldError(f"scaled cliques need q = 3 (mod 4), got q = {ctx.q}")
    if not 0 < s < ctx.q:
        raise FieldError(f"s must be a nonzero element of F_{ctx.q}, got {s}")
    return (set_key((0, *(ctx.scale(s, a) for a in dec.q0))),
            set_key((0, *(ctx.scale(s, a) for a in dec.q1))))


def verify_scaled_partition(g: PaleyGraph, ctx: QuadExtContext, dec: OvalDecomposition) -> CheckResult:
    """The sets sQ partition the nonzero squares by norm; for q = 3 (4) their halves give cliques."""
    claim = "scaled ovals"
    F = ctx.base
    seen: Dict[SetKey, int] = {}
    for s in range(1, ctx.q):
        scaled = set_key(ctx.scale(s, a) for a in dec.powers)
        target = F.mul(s, s)
        for a in scaled:
            require(ctx.norm(a) == target, claim, "element of sQ does not have norm s^2",
                    {"s": s, "gamma": a})
        seen.setdefault(scaled, s)
    covered = sorted(a for key in seen for a in key)
    require(covered == ctx.nonzero_squares(), claim, "the sets sQ do not partition the nonzero squares",
            {"distinct_sets": len(seen)})
    require(len(seen) == (ctx.q - 1) // 2, claim, "unexpected number of distinct sets sQ", {"distinct_sets": len(seen)})
    cliques = 0
    if ctx.q % 4 == 3:
        for s in range(1, ctx.q):
            for clique in scaled_cliques(ctx, dec, s):
                require(len(clique) == (ctx.q + 3) // 2, claim, "scaled clique has the wrong size", {"s": s})
                _verify_set(g, clique, True, f"{claim} s={s}")
                cliques += 1
    return CheckResult(claim, True, {"distinct_sets": len(seen), "cliques_checked": cliques})


@dataclass(frozen=True)
class AffineMap:
    """gamma -> multiplier * gamma + shift."""

    multiplier: int
    shift: int = 0

    def __post_init__(self):
        if self.multiplier == 0:
            raise FieldError("an affine map needs a nonzero multiplier")

    def __call__(self, ctx: QuadExtContext, gamma: int) -> int:
        return ctx.add(ctx.mul(self.multiplier, gamma), self.shift)

    def permutation(self, ctx: QuadExtContext) -> List[int]:
        return [self(ctx, gamma) for gamma in ctx.elements()]


def apply_affine(ctx: QuadExtContext, mapped: AffineMap, vertices: Iterable[int]) -> SetKey:
    return set_key(mapped(ctx, gamma) for gamma in vertices)


def group_generators(ctx: QuadExtContext) -> List[AffineMap]:
    """Generators of T: all square multipliers and all shifts."""
    return [AffineMap(ctx.mul(ctx.beta, ctx.beta), 0), AffineMap(ctx.one, ctx.one)]


def orbit(ctx: QuadExtContext, sets: Iterable[Iterable[int]], generators: Sequence[AffineMap],
          limit: Optional[int] = None) -> List[SetKey]:
    """Closure of `sets` under the generators, as sorted canonical keys."""
    perms = [gen.permutation(ctx) for gen in generators]
    seen = set()
    queue = deque()
    for s in sets:
        key = set_key(s)
        if key not in seen:
            seen.add(key)
            queue.append(key)
    while queue:
        key = queue.popleft()
        for perm in perms:
            image = tuple(sorted(perm[v] for v in key))
            if image not in seen:
                seen.add(image)
                queue.append(image)
                if limit is not None and len(seen) > limit:
                    raise TruncatedError(f"orbit exceeds {limit} sets")
    return sorted(seen)


def _map_line(plane: AffinePlane, mapped: AffineMap, line: Line) -> Optional[Line]:
    ctx = plane.ctx
    image = [mapped(ctx, p) for p in plane.points(line)]
    candidate = plane.line_through(image[0], image[1])
    return candidate if plane.mask(candidate) == mask_of(image) else None


def verify_lemma_tq(ctx: QuadExtContext, plane: AffinePlane, dec: OvalDecomposition,
                    oval: Optional[OvalView] = None) -> CheckResult:
    """The seven statements about T_Q = <psi_(omega,0)> acting on the plane and the oval."""
    claim = "lemma T_Q"
    oval = OvalView(plane, dec.powers) if oval is None else oval
    maps = [AffineMap(w, 0) for w in dec.powers]  # T_Q, omega^i at position i
    q_points = set(dec.powers)
    q0, q1 = set(dec.q0), set(dec.q1)
    lines = plane.all_lines()

    # (1) lines go to lines, (7) line classes are preserved
    for i, m in enumerate(maps):
        for line in lines:
            image = _map_line(plane, m, line)
            require(image is not None, f"{claim} (1)", "image of a line is not a line",
                    {"power": i, "line": list(line)})
            require(plane.is_quadratic(image) == plane.is_quadratic(line), f"{claim} (7)",
                    "line class not preserved", {"power": i, "line": list(line)})

    # (2) Q is stabilised
    for i, m in enumerate(maps):
        image = {m(ctx, a) for a in q_points}
        require(image == q_points, f"{claim} (2)", "Q is not stabilised", {"power": i})

    # (3) transitive on the points of Q
    generator = maps[1]
    point_orbit = {ctx.one}
    current = ctx.one
    for _ in range(ctx.q):
        current = generator(ctx, current)
        point_orbit.add(current)
    require(point_orbit == q_points, f"{claim} (3)", "orbit of 1 is not Q", {"orbit_size": len(point_orbit)})

    # (4) transitive on the tangents
    tangents = {oval.tangent_at(a) for a in dec.powers}
    tangent_orbit = set()
    line = oval.tangent_at(ctx.one)
    for _ in range(ctx.q + 1):
        tangent_orbit.add(line)
        line = _map_line(plane, generator, line)
    require(tangent_orbit == tangents and len(tangents) == ctx.q + 1, f"{claim} (4)",
            "tangents form more than one orbit", {"orbit_size": len(tangent_orbit), "tangents": len(tangents)})

    # (5) T_{Q_0} stabilises Q_0 and Q_1 and is transitive on each
    for i in range(0, ctx.q + 1, 2):
        m = maps[i]
        require({m(ctx, a) for a in q0} == q0 and {m(ctx, a) for a in q1} == q1, f"{claim} (5)",
                "T_Q0 does not stabilise Q0 and Q1", {"power": i})
    require({maps[i](ctx, ctx.one) for i in range(0, ctx.q + 1, 2)} == q0, f"{claim} (5)", "T_Q0 not transitive on Q0")
    require({maps[i](ctx, dec.omega) for i in range(0, ctx.q + 1, 2)} == q1, f"{claim} (5)", "T_Q0 not transitive on Q1")

    # (6) every element of T_{Q_1} swaps Q_0 and Q_1
    for i in range(1, ctx.q + 1, 2):
        m = maps[i]
        require({m(ctx, a) for a in q0} == q1 and {m(ctx, a) for a in q1} == q0, f"{claim} (6)",
                "element of T_Q1 does not swap Q0 and Q1", {"power": i})

    return CheckResult(claim, True, {"items": [1, 2, 3, 4, 5, 6, 7], "maps": len(maps), "lines": len(lines)})


def adjacency_structure(g: PaleyGraph, dec: OvalDecomposition) -> str:
    """Shape of the subgraph induced on Q: complete bipartite (q = 1 mod 4) or two cliques (q = 3 mod 4)."""
    claim = "adjacency structure of Q"
    m0, m1 = mask_of(dec.q0), mask_of(dec.q1)
    bipartite = all(g.adj[a] & m0 == 0 and g.adj[a] & m1 == m1 for a in dec.q0) and \
        all(g.adj[a] & m1 == 0 and g.adj[a] & m0 == m0 for a in dec.q1)
    cliques = all(g.adj[a] & m1 == 0 and (g.adj[a] | 1 << a) & m0 == m0 for a in dec.q0) and \
        all(g.adj[a] & m0 == 0 and (g.adj[a] | 1 << a) & m1 == m1 for a in dec.q1)
    if bipartite:
        shape = COMPLETE_BIPARTITE
    elif cliques:
        shape = TWO_CLIQUES
    else:
        raise VerificationError(claim, "Q induces neither K_(n,n) nor two cliques",
                                {"edges": g.induced_edges(dec.powers)})
    expected = COMPLETE_BIPARTITE if dec.q % 4 == 1 else TWO_CLIQUES
    require(shape == expected, claim, "structure contradicts q mod 4", {"q": dec.q, "shape": shape})
    return shape


def verify_neighbours_of_one(g: PaleyGraph, dec: OvalDecomposition) -> CheckResult:
    """1 sees all of Q_1 and none of Q_0 - {1} (q = 1 mod 4), or the reverse (q = 3 mod 4)."""
    claim = "neighbours of 1"
    one = dec.powers[0]
    rest0 = [a for a in dec.q0 if a != one]
    if dec.q % 4 == 1:
        adjacent, apart = list(dec.q1), rest0
    else:
        adjacent, apart = rest0, list(dec.q1)
    for a in adjacent:
        require(g.adjacent(one, a), claim, "1 is not adjacent", {"vertex": a})
    for a in apart:
        require(not g.adjacent(one, a), claim, "1 is adjacent", {"vertex": a})
    neighbours = sum(g.adjacent(one, a) for a in dec.powers)
    return CheckResult(claim, True, {"neighbours_in_Q": neighbours})


def verify_secants_through_zero(plane: AffinePlane, dec: OvalDecomposition,
                              oval: Optional[OvalView] = None) -> CheckResult:
    """Quadratic lines through 0 are the secants {g, -g} of Q; the others miss Q."""
    claim = "lines through 0"
    ctx = plane.ctx
    oval = OvalView(plane, dec.powers) if oval is None else oval
    q0 = set(dec.q0)
    split = dec.q % 4 == 1
    secants = 0
    for line in plane.lines_through(0):
        hit = oval.intersection(line)
        if not plane.is_quadratic(line):
            require(hit.count == 0, claim, "non-quadratic line through 0 meets Q", {"line": list(line)})
            continue
        require(hit.count == 2, claim, "quadratic line through 0 is not a secant", {"line": list(line)})
        a, b = hit.points
        require(b == ctx.neg(a), claim, "secant through 0 does not join g and -g", {"points": [a, b]})
        # one point in each half exactly when -1 is an odd power of omega
        require(((a in q0) != (b in q0)) == split, claim, "secant meets the halves of Q unexpectedly",
                {"points": [a, b]})
        secants += 1
    return CheckResult(claim, True, {"secants": secants})


def verify_affine_automorphisms(g: PaleyGraph, ctx: QuadExtContext) -> CheckResult:
    """The generators of T are automorphisms; a non-square multiplier swaps edges and non-edges."""
    claim = "affine automorphisms"
    for gen in group_generators(ctx):
        require(is_automorphism(g, gen.permutation(ctx)), claim, "generator of T is not an automorphism",
                {"multiplier": gen.multiplier, "shift": gen.shift})
    swap = AffineMap(ctx.beta, 0).permutation(ctx)
    require(is_automorphism(g, swap, target=complement(g)), claim,
            "multiplying by beta does not map P onto its complement")
    return CheckResult(claim, True, {"generators": [[m.multiplier, m.shift] for m in group_generators(ctx)]})

