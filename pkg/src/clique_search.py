"""
Exhaustive maximal-clique enumeration on bitset graphs.

Enumeration is Bron-Kerbosch with a pivot (the vertex of P | X seeing the most
of P, least index on ties); the root branches are independent tasks, so the
merged, sorted output does not depend on the worker count. Maximum cliques
use branch and bound with a greedy colouring bound.
"""

import logging
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from src.certificate import CheckResult, require
from src.config import DEFAULT_SETTINGS, Settings
from src.constructions import (
    AffineMap,
    OvalDecomposition,
    SetKey,
    apply_affine,
    group_generators,
    orbit,
    set_key,
    subfield_clique,
    theorem1_sets,
)
from src.errors import CapExceededError, TruncatedError
from src.finite_field import QuadExtContext
from src.paley import PaleyGraph, is_maximal_clique, iter_bits
from src.parallel import run_tasks

logger = logging.getLogger(__name__)


class _LimitReached(Exception):
    pass


class Enumeration(NamedTuple):
    cliques: List[SetKey]
    truncated: bool


def _colour_sort(candidates: int, adj: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Greedy colouring of `candidates`; colours[i] bounds the clique size among order[:i+1]."""
    order, colours = [], []
    colour = 0
    remaining = candidates
    while remaining:
        colour += 1
        available = remaining
        while available:
            v = (available & -available).bit_length() - 1
            order.append(v)
            colours.append(colour)
            remaining &= ~(1 << v)
            available &= ~(1 << v) & ~adj[v]
    return order, colours


def _pivot(adj: Sequence[int], candidates: int, excluded: int) -> int:
    best, best_score = -1, -1
    for u in iter_bits(candidates | excluded):
        score = (candidates & adj[u]).bit_count()
        if score > best_score:
            best, best_score = u, score
    return best


class _Expander:
    def __init__(self, adj: Sequence[int], min_size: int, max_size: Optional[int], limit: Optional[int]):
        self.adj = adj
        self.min_size = min_size
        self.max_size = max_size
        self.limit = limit
        self.found: List[int] = []

    def expand(self, clique: int, size: int, candidates: int, excluded: int) -> None:
        if not candidates:
            if not excluded and size >= self.min_size:
                self.found.append(clique)
                if self.limit is not None and len(self.found) > self.limit:
                    raise _LimitReached
            return
        if size + candidates.bit_count() < self.min_size:
            return
        # any maximal clique below has more than `size` members
        if self.max_size is not None and size >= self.max_size:
            return
        if size + 1 < self.min_size and size + _colour_sort(candidates, self.adj)[1][-1] < self.min_size:
            return
        adj = self.adj
        pivot = _pivot(adj, candidates, excluded)
        for v in iter_bits(candidates & ~adj[pivot]):
            bit = 1 << v
            self.expand(clique | bit, size + 1, candidates & adj[v], excluded & adj[v])
            candidates &= ~bit
            excluded |= bit


def _root_branches(adj: Sequence[int], full: int) -> List[Tuple[int, int, int]]:
    candidates, excluded = full, 0
    branches = []
    for v in iter_bits(candidates & ~adj[_pivot(adj, candidates, excluded)]):
        branches.append((v, candidates & adj[v], excluded & adj[v]))
        candidates &= ~(1 << v)
        excluded |= 1 << v
    return branches


def _enumerate_branch(adj: Sequence[int], min_size: int, max_size: Optional[int], limit: Optional[int],
                      branch: Tuple[int, int, int]) -> Tuple[List[int], bool]:
    v, candidates, excluded = branch
    expander = _Expander(adj, min_size, max_size, limit)
    try:
        expander.expand(1 << v, 1, candidates, excluded)
    except _LimitReached:
        return expander.found, True
    return expander.found, False


def enumerate_maximal_cliques(g: PaleyGraph, min_size: Optional[int] = None, max_size: Optional[int] = None,
                              limit: Optional[int] = None, threads: int = 1, settings: Optional[Settings] = None,
                              strict: bool = False, progress: Optional[bool] = None) -> Enumeration:
    """
    Every maximal clique with min_size <= |C| <= max_size, as sorted vertex
    tuples in lexicographic order. With `limit`, at most that many are kept and
    the result is flagged truncated (TruncatedError instead when `strict`).
    """
    settings = DEFAULT_SETTINGS if settings is None else settings
    if g.v > settings.enumeration_cap:
        raise CapExceededError("enumeration vertex count", g.v, settings.enumeration_cap)
    if limit is not None and limit < 1:
        raise ValueError("limit must be positive")
    low = 1 if min_size is None else max(min_size, 1)
    if max_size is not None and max_size < low:
        return Enumeration([], False)
    if g.v == 0:
        return Enumeration([], False)
    branches = _root_branches(g.adj, g.full_mask)
    task = partial(_enumerate_branch, g.adj, low, max_size, limit)
    results = run_tasks(task, branches, threads, "cliques", progress)
    truncated = any(cut for _, cut in results)
    cliques = sorted(tuple(iter_bits(mask)) for found, _ in results for mask in found)
    if limit is not None and len(cliques) > limit:
        cliques, truncated = cliques[:limit], True
    if truncated:
        logger.warning("clique enumeration on %d vertices stopped at limit %d", g.v, limit)
        if strict:
            raise TruncatedError(f"more than {limit} maximal cliques")
    return Enumeration(cliques, truncated)


def maximum_clique(g: PaleyGraph, settings: Optional[Settings] = None) -> SetKey:
    """A largest clique (the first one met in branch-and-bound order)."""
    settings = DEFAULT_SETTINGS if settings is None else settings
    if g.v > settings.enumeration_cap:
        raise CapExceededError("enumeration vertex count", g.v, settings.enumeration_cap)
    adj = g.adj
    best = [0, 0]  # size, mask

    def expand(size: int, clique: int, candidates: int) -> None:
        if not candidates:
            if size > best[0]:
                best[0], best[1] = size, clique
            return
        order, colours = _colour_sort(candidates, adj)
        for i in range(len(order) - 1, -1, -1):
            if size + colours[i] <= best[0]:
                return
            v = order[i]
            expand(size + 1, clique | 1 << v, candidates & adj[v])
            candidates &= ~(1 << v)

    expand(0, 0, g.full_mask)
    return tuple(iter_bits(best[1]))


def clique_number(g: PaleyGraph, settings: Optional[Settings] = None) -> int:
    return len(maximum_clique(g, settings))


@dataclass
class CliqueCensus:
    q: int
    histogram: Dict[int, int]
    samples: Dict[int, List[SetKey]]
    elapsed: float
    params: Dict[str, object]
    truncated: bool = False
    orbit_counts: Dict[str, int] = field(default_factory=dict)
    keys: FrozenSet[SetKey] = field(default_factory=frozenset, repr=False)

    @property
    def total(self) -> int:
        return sum(self.histogram.values())

    @property
    def gap_sizes(self) -> List[int]:
        """Sizes found strictly between the largest oval-based construction and q."""
        low = (self.q + 3) // 2 if self.q % 4 == 3 else (self.q + 1) // 2
        return sorted(s for s in self.histogram if low < s < self.q)

    def to_dict(self, include_timing: bool = False) -> Dict[str, object]:
        out = {
            "q": self.q,
            "histogram": {str(s): n for s, n in sorted(self.histogram.items())},
            "orbit_counts": dict(sorted(self.orbit_counts.items())),
            "truncated": self.truncated,
            "total": self.total,
            "gap_sizes": self.gap_sizes,
            "samples": {str(s): [list(c) for c in cs] for s, cs in sorted(self.samples.items())},
            "params": self.params,
        }
        if include_timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def reference_sets(ctx: QuadExtContext, dec: OvalDecomposition,
                   on_complement: bool = False) -> Dict[str, List[SetKey]]:
    """
    Known maximal cliques to look for: the subfield and the oval-based sets
    of the right kind. On the complement graph the subfield is replaced by
    beta * F_q and the cocliques of the q = 1 (mod 4) construction count.
    """
    oval_sets = [s.vertices for s in theorem1_sets(ctx, dec)]
    if not on_complement:
        refs = {"subfield": [subfield_clique(ctx)]}
        if ctx.q % 4 == 3:
            refs["theorem1"] = oval_sets
        return refs
    refs = {"subfield": [apply_affine(ctx, AffineMap(ctx.beta), subfield_clique(ctx))]}
    if ctx.q % 4 == 1:
        refs["theorem1"] = oval_sets
    return refs


def _check_census_limits(g: PaleyGraph, target_size: Optional[int], settings: Settings) -> None:
    if target_size is None and g.q > settings.census_full_max_q:
        raise CapExceededError("full census q", g.q, settings.census_full_max_q)
    if g.q > settings.census_window_max_q:
        raise CapExceededError("census q", g.q, settings.census_window_max_q)


def census(g: PaleyGraph, ctx: QuadExtContext, target_size: Optional[int] = None,
           references: Optional[Mapping[str, Iterable[Iterable[int]]]] = None, limit: Optional[int] = None,
           sample_count: int = 3, threads: int = 1, settings: Optional[Settings] = None,
           progress: Optional[bool] = None) -> CliqueCensus:
    """
    Maximal cliques of g by size (all sizes, or only `target_size`), with the
    number that are affine images of each family of reference sets.
    """
    settings = DEFAULT_SETTINGS if settings is None else settings
    _check_census_limits(g, target_size, settings)
    started = time.perf_counter()
    result = enumerate_maximal_cliques(g, target_size, target_size, limit, threads, settings, progress=progress)
    histogram: Dict[int, int] = {}
    samples: Dict[int, List[SetKey]] = {}
    for clique in result.cliques:
        histogram[len(clique)] = histogram.get(len(clique), 0) + 1
        picked = samples.setdefault(len(clique), [])
        if len(picked) < sample_count:
            picked.append(clique)
    keys = frozenset(result.cliques)
    orbit_counts = {}
    generators = group_generators(ctx)
    for label, seeds in (references or {}).items():
        images = orbit(ctx, seeds, generators)
        orbit_counts[label] = sum(1 for key in images if key in keys)
    elapsed = time.perf_counter() - started
    params = {"target_size": target_size, "limit": limit, "sample_count": sample_count}
    logger.info("census q=%d: %d maximal cliques in %.2fs", g.q, len(keys), elapsed)
    return CliqueCensus(ctx.q, histogram, samples, elapsed, params, result.truncated, orbit_counts, keys)


def contains_set(census: CliqueCensus, vertices: Iterable[int]) -> bool:
    key = set_key(vertices)
    return bool(key) and key in census.keys


def verify_enumeration_soundness(g: PaleyGraph, cliques: Iterable[SetKey]) -> CheckResult:
    """Every listed set is a maximal clique and none is listed twice."""
    claim = "enumeration soundness"
    seen = set()
    for clique in cliques:
        require(clique not in seen, claim, "clique listed twice", {"set": list(clique)})
        require(is_maximal_clique(g, clique), claim, "listed set is not a maximal clique", {"set": list(clique)})
        seen.add(clique)
    return CheckResult(claim, True, {"checked": len(seen)})


def verify_census_symmetry(ctx: QuadExtContext, census: CliqueCensus) -> CheckResult:
    """The enumerated cliques are closed under the generators of T, so every size count is T-invariant."""
    claim = "census symmetry"
    require(not census.truncated, claim, "a truncated census has no symmetry guarantee")
    for gen in group_generators(ctx):
        perm = gen.permutation(ctx)
        for key in census.keys:
            image = tuple(sorted(perm[v] for v in key))
            require(image in census.keys, claim, "image of a maximal clique is missing",
                    {"set": list(key), "image": list(image), "multiplier": gen.multiplier, "shift": gen.shift})
    return CheckResult(claim, True, {"generators": len(group_generators(ctx)), "cliques": census.total})
