"""
Paley graphs P(q^2) as bitset graphs.

Row i of the adjacency is a Python int whose bit j is set iff i ~ j. Vertex
i is the element of F_{q^2} with index i (see src.finite_field).
"""

import logging
from dataclasses import dataclass
from functools import partial
from math import isqrt
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from src.certificate import CheckResult, require
from src.errors import CapExceededError, GraphError, VerificationError
from src.finite_field import QuadExtContext
from src.parallel import run_tasks

logger = logging.getLogger(__name__)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of `mask`, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class PaleyGraph:
    q: int
    adj: Tuple[int, ...]

    @property
    def v(self) -> int:
        return len(self.adj)

    @property
    def full_mask(self) -> int:
        return (1 << self.v) - 1

    def adjacent(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def neighbours(self, i: int) -> List[int]:
        return list(iter_bits(self.adj[i]))

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        for i, row in enumerate(self.adj):
            for j in iter_bits(row >> (i + 1)):
                yield i, i + 1 + j

    def induced_edges(self, vertices: Iterable[int]) -> List[Tuple[int, int]]:
        members = sorted(set(vertices))
        mask = mask_of(members)
        return [(i, j) for i in members for j in iter_bits(self.adj[i] & mask) if i < j]


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def feasible(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.v - self.k - 1) * self.mu

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)


def expected_srg_parameters(q: int) -> SrgParams:
    v = q * q
    return SrgParams(v, (v - 1) // 2, (v - 5) // 4, (v - 1) // 4)


def build_paley(ctx: QuadExtContext, max_vertices: Optional[int] = None) -> PaleyGraph:
    """The Cayley graph of F_{q^2}^+ generated by the nonzero squares."""
    v = ctx.order
    if max_vertices is not None and v > max_vertices:
        raise CapExceededError("vertex count", v, max_vertices)
    # -1 is a square in F_{q^2} for odd q, so the connection set is symmetric
    if not ctx.is_square(ctx.neg(ctx.one)):
        raise GraphError("-1 is not a square; the Cayley graph would be directed")
    squares = ctx.nonzero_squares()
    rows = []
    for u in range(v):
        row = 0
        for s in squares:
            row |= 1 << ctx.add(u, s)
        rows.append(row)
    logger.debug("built P(%d): %d vertices, degree %d", v, v, len(squares))
    return PaleyGraph(ctx.q, tuple(rows))


def _pair_counts(adj: Sequence[int], rows: Tuple[int, int]):
    # common-neighbour counts for pairs (i, j), i in [start, stop), j > i
    start, stop = rows
    lam, mu = {}, {}
    for i in range(start, stop):
        row = adj[i]
        for j in range(i + 1, len(adj)):
            common = (row & adj[j]).bit_count()
            bucket = lam if (row >> j) & 1 else mu
            bucket.setdefault(common, (i, j))
    return lam, mu


def srg_parameters(g: PaleyGraph, threads: int = 1, progress: Optional[bool] = None) -> SrgParams:
    """(v, k, lambda, mu) by exhaustive common-neighbour counting."""
    claim = "strongly regular"
    degrees = {g.degree(i) for i in range(g.v)}
    if len(degrees) != 1:
        raise VerificationError(claim, "graph is not regular", {"degrees": sorted(degrees)})
    (k,) = degrees
    step = max(1, g.v // (4 * max(threads, 1)))
    chunks = [(start, min(start + step, g.v)) for start in range(0, g.v, step)]
    results = run_tasks(partial(_pair_counts, g.adj), chunks, threads, "pairs", progress)
    lam, mu = {}, {}
    for part_lam, part_mu in results:
        for count, pair in part_lam.items():
            lam.setdefault(count, pair)
        for count, pair in part_mu.items():
            mu.setdefault(count, pair)
    if len(lam) > 1:
        raise VerificationError(claim, "adjacent pairs disagree on common neighbours",
                                {"counts": {str(c): list(p) for c, p in sorted(lam.items())}})
    if len(mu) > 1:
        raise VerificationError(claim, "non-adjacent pairs disagree on common neighbours",
                                {"counts": {str(c): list(p) for c, p in sorted(mu.items())}})
    # complete or empty graphs leave one bucket empty
    return SrgParams(g.v, k, next(iter(lam), 0), next(iter(mu), 0))


def srg_eigenvalues(params: SrgParams) -> Tuple[int, int, int]:
    """(k, theta_1, theta_2): the roots of x^2 - (lam - mu) x - (k - mu) = 0 besides k."""
    b = params.lam - params.mu
    disc = b * b + 4 * (params.k - params.mu)
    root = isqrt(disc)
    if root * root != disc or (b + root) % 2:
        raise GraphError(f"eigenvalues of {params.as_tuple()} are not integers")
    return params.k, (b + root) // 2, (b - root) // 2


def verify_srg(g: PaleyGraph, threads: int = 1, progress: Optional[bool] = None) -> CheckResult:
    """A^2 = kI + lam A + mu (J - I - A) with the Paley parameters of P(q^2)."""
    claim = "srg parameters"
    params = srg_parameters(g, threads, progress)
    expected = expected_srg_parameters(g.q)
    require(params == expected, claim, "parameters differ from the Paley formula",
            {"found": list(params.as_tuple()), "expected": list(expected.as_tuple())})
    require(params.feasible(), claim, "k(k - lam - 1) != (v - k - 1) mu")
    require(g.edge_count() == params.v * params.k // 2, claim, "edge count != vk/2")
    k, theta1, theta2 = srg_eigenvalues(params)
    return CheckResult(claim, True, {"parameters": list(params.as_tuple()), "eigenvalues": [k, theta1, theta2]})


def complement(g: PaleyGraph) -> PaleyGraph:
    full = g.full_mask
    return PaleyGraph(g.q, tuple(full & ~row & ~(1 << i) for i, row in enumerate(g.adj)))


def is_automorphism(g: PaleyGraph, mapping: Sequence[int], target: Optional[PaleyGraph] = None) -> bool:
    """True iff i ~ j in g exactly when mapping[i] ~ mapping[j] in target (default g)."""
    target = g if target is None else target
    if sorted(mapping) != list(range(g.v)):
        return False
    for i, row in enumerate(g.adj):
        image = 0
        for j in iter_bits(row):
            image |= 1 << mapping[j]
        if image != target.adj[mapping[i]]:
            return False
    return True


def verify_self_complementary(g: PaleyGraph, ctx: QuadExtContext) -> bool:
    """gamma -> beta * gamma maps the complement of g onto g."""
    mapping = [ctx.mul(ctx.beta, i) for i in range(g.v)]
    return is_automorphism(complement(g), mapping, target=g)


def _checked_mask(g: PaleyGraph, vertices: Iterable[int]) -> int:
    members = list(vertices)
    if not members:
        raise GraphError("vertex set is empty")
    for v in members:
        if not 0 <= v < g.v:
            raise GraphError(f"vertex {v} out of range for {g.v} vertices")
    return mask_of(members)


def is_clique(g: PaleyGraph, vertices: Iterable[int]) -> bool:
    mask = _checked_mask(g, vertices)
    return all((g.adj[i] | (1 << i)) & mask == mask for i in iter_bits(mask))


def is_coclique(g: PaleyGraph, vertices: Iterable[int]) -> bool:
    mask = _checked_mask(g, vertices)
    return all(g.adj[i] & mask == 0 for i in iter_bits(mask))


def extension_candidates(g: PaleyGraph, vertices: Iterable[int], clique: bool = True) -> int:
    """Bitmask of outside vertices adjacent (clique) or non-adjacent (coclique) to all of the set."""
    mask = _checked_mask(g, vertices)
    common = g.full_mask & ~mask
    for i in iter_bits(mask):
        common &= g.adj[i] if clique else ~g.adj[i]
    return common


def is_maximal_clique(g: PaleyGraph, vertices: Iterable[int]) -> bool:
    members = list(vertices)
    return is_clique(g, members) and extension_candidates(g, members, clique=True) == 0


def is_maximal_coclique(g: PaleyGraph, vertices: Iterable[int]) -> bool:
    members = list(vertices)
    return is_coclique(g, members) and extension_candidates(g, members, clique=False) == 0
