"""
Eigenfunctions of Paley graphs: the +-1 function on the oval, the exact
local condition theta * f(g) = sum of f over the neighbours of g, and a
brute-force search for the smallest possible support.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from src.certificate import CheckResult, require
from src.config import DEFAULT_SETTINGS, Settings
from src.constructions import OvalDecomposition
from src.errors import CapExceededError, GraphError, VerificationError
from src.finite_field import factor_prime_power
from src.linalg import ColumnEchelon, rank
from src.paley import PaleyGraph, SrgParams, srg_eigenvalues, srg_parameters
from src.parallel import run_tasks

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

# exact rank of a v x v integer matrix; q <= 13
EIGENSPACE_MAX_VERTICES = 169


@dataclass(frozen=True)
class Eigenfunction:
    values: Tuple[int, ...]
    theta: Rational

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.values) if x)

    def scaled(self, c: int) -> "Eigenfunction":
        return Eigenfunction(tuple(c * x for x in self.values), self.theta)

    def sparse(self) -> Dict[int, int]:
        return {i: x for i, x in enumerate(self.values) if x}


def oval_eigenvalue(q: int) -> int:
    """theta_2 = (-1-q)/2 when q = 1 (mod 4), theta_1 = (-1+q)/2 when q = 3 (mod 4)."""
    return (-1 - q) // 2 if q % 4 == 1 else (q - 1) // 2


def build_oval_eigenfunction(dec: OvalDecomposition) -> Eigenfunction:
    """+1 on Q_0, -1 on Q_1, 0 elsewhere."""
    values = [0] * (dec.q * dec.q)
    for a in dec.q0:
        values[a] = 1
    for a in dec.q1:
        values[a] = -1
    return Eigenfunction(tuple(values), oval_eigenvalue(dec.q))


def support_size(f: Eigenfunction) -> int:
    return len(f.support)


def weight_distribution_bound(q: int) -> int:
    """Lower bound q + 1 on the support of a non-principal eigenfunction of P(q^2)."""
    factor_prime_power(q)
    return q + 1


def _residuals(adj: Sequence[int], masks: Sequence[Tuple[int, int]], values: Sequence[int],
               theta: Rational, vertices: Tuple[int, int]):
    start, stop = vertices
    worst = (Fraction(0), None, 0)
    for v in range(start, stop):
        neighbour_sum = sum(value * (adj[v] & mask).bit_count() for value, mask in masks)
        residual = theta * values[v] - neighbour_sum
        if abs(residual) > abs(worst[0]):
            worst = (residual, v, neighbour_sum)
    return worst


def verify_local_condition(g: PaleyGraph, f: Eigenfunction, classes: Optional[Mapping[int, str]] = None,
                           threads: int = 1, progress: Optional[bool] = None) -> CheckResult:
    """theta * f(v) == sum of f over the neighbours of v, exactly, at every vertex."""
    claim = "eigenfunction"
    require(len(f.values) == g.v, claim, "function length differs from the vertex count",
            {"length": len(f.values), "vertices": g.v})
    require(any(f.values), claim, "the zero function is not an eigenfunction")
    by_value: Dict[int, int] = {}
    for i, x in enumerate(f.values):
        if x:
            by_value[x] = by_value.get(x, 0) | 1 << i
    masks = sorted(by_value.items())
    step = max(1, g.v // (4 * max(threads, 1)))
    chunks = [(start, min(start + step, g.v)) for start in range(0, g.v, step)]
    task = partial(_residuals, g.adj, masks, f.values, f.theta)
    worst = max(run_tasks(task, chunks, threads, "local condition", progress), key=lambda w: abs(w[0]))
    residual, vertex, neighbour_sum = worst
    if residual:
        raise VerificationError(claim, "local condition fails",
                                {"vertex": vertex, "value": f.values[vertex], "theta": str(f.theta),
                                 "neighbour_sum": neighbour_sum})
    details = {"theta": str(f.theta), "vertices": g.v, "max_residual": 0, "support_size": support_size(f)}
    if classes is not None:
        details["classes"] = dict(sorted(Counter(classes.values()).items()))
    return CheckResult(claim, True, details)


def eigenvalue_identities(params: SrgParams) -> CheckResult:
    """theta_1 * theta_2 = mu - k and theta_1 + theta_2 = lam - mu."""
    claim = "eigenvalue identities"
    k, theta1, theta2 = srg_eigenvalues(params)
    require(theta1 * theta2 == params.mu - params.k, claim, "theta_1 theta_2 != mu - k")
    require(theta1 + theta2 == params.lam - params.mu, claim, "theta_1 + theta_2 != lam - mu")
    return CheckResult(claim, True, {"k": k, "theta1": theta1, "theta2": theta2})


def srg_multiplicities(params: SrgParams) -> Dict[int, int]:
    """Eigenvalue multiplicities forced by the srg parameters."""
    k, theta1, theta2 = srg_eigenvalues(params)
    gap = theta1 - theta2
    return {k: 1, theta1: -(k + theta2 * (params.v - 1)) // gap, theta2: (k + theta1 * (params.v - 1)) // gap}


def verify_eigenspace_dimensions(g: PaleyGraph, params: Optional[SrgParams] = None,
                                 max_vertices: int = EIGENSPACE_MAX_VERTICES) -> CheckResult:
    """dim ker(A - theta I) = v - rank(A - theta I) matches the srg multiplicity of every eigenvalue."""
    claim = "eigenspace dimensions"
    if g.v > max_vertices:
        raise CapExceededError("eigenspace vertex count", g.v, max_vertices)
    params = srg_parameters(g) if params is None else params
    dimensions = {}
    for theta, multiplicity in srg_multiplicities(params).items():
        matrix = [[((g.adj[i] >> j) & 1) - (theta if i == j else 0) for j in range(g.v)] for i in range(g.v)]
        dim = g.v - rank(matrix)
        require(dim == multiplicity, claim, "eigenspace dimension differs from the srg multiplicity",
                {"theta": theta, "dimension": dim, "multiplicity": multiplicity})
        dimensions[str(theta)] = dim
    logger.debug("eigenspace dimensions on %d vertices: %s", g.v, dimensions)
    return CheckResult(claim, True, {"dimensions": dimensions})


def verify_theorem2(g: PaleyGraph, dec: OvalDecomposition, classes: Optional[Mapping[int, str]] = None,
                    params: Optional[SrgParams] = None, threads: int = 1,
                    progress: Optional[bool] = None) -> CheckResult:
    """The oval function is an eigenfunction for the paired eigenvalue with support exactly q + 1."""
    claim = "theorem 2"
    f = build_oval_eigenfunction(dec)
    params = srg_parameters(g, threads, progress) if params is None else params
    _, theta1, theta2 = srg_eigenvalues(params)
    expected = theta2 if dec.q % 4 == 1 else theta1
    require(f.theta == expected, claim, "eigenvalue pairing contradicts q mod 4",
            {"theta": f.theta, "expected": expected})
    check = verify_local_condition(g, f, classes, threads, progress)
    bound = weight_distribution_bound(dec.q)
    require(support_size(f) == bound, claim, "support differs from the weight-distribution bound",
            {"support": support_size(f), "bound": bound})
    require(sum(f.values) == 0, claim, "values do not sum to zero")
    return CheckResult(claim, True, {**check.details, "bound": bound})


# minimum support search

def _column(g: PaleyGraph, theta: int, j: int) -> List[int]:
    col = [(g.adj[j] >> i) & 1 for i in range(g.v)]
    col[j] -= theta
    return col


def _search_branch(columns: Sequence[Sequence[int]], cap: int, second: int):
    """
    Circuits {0, second, ...} of the columns of A - theta*I, listed in ascending
    vertex order, with at most `cap` members. Returns (size, relations).
    """
    n = len(columns)
    echelon = ColumnEchelon()
    echelon.push(columns[0], 0)
    relation = echelon.push(columns[second], second)
    if relation is not None:
        return (2, [relation]) if len(relation) == 2 else (cap + 1, [])
    best = cap + 1
    found: List[Dict[int, int]] = []

    def extend(start: int, size: int) -> None:
        nonlocal best, found
        # `size` independent columns chosen; any circuit below has size >= size + 1
        for c in range(start, n):
            relation = echelon.push(columns[c], c)
            if relation is not None:
                # count it only on its own path: the relation must use every chosen column
                if len(relation) == size + 1:
                    if size + 1 < best:
                        best, found = size + 1, [relation]
                    elif size + 1 == best:
                        found.append(relation)
                continue
            if size + 2 <= min(best, cap):
                extend(c + 1, size + 1)
            echelon.pop()

    if 3 <= cap:
        extend(second + 1, 2)
    return best, found


def _check_oracle_limits(g: PaleyGraph, theta: int, cap: int, settings: Settings) -> List[List[int]]:
    if g.v > settings.oracle_max_vertices:
        raise CapExceededError("oracle vertex count", g.v, settings.oracle_max_vertices)
    if cap > settings.oracle_max_cap:
        raise CapExceededError("oracle support cap", cap, settings.oracle_max_cap)
    spectrum = srg_eigenvalues(srg_parameters(g))
    if theta not in spectrum:
        raise GraphError(f"{theta} is not an eigenvalue; the spectrum is {sorted(set(spectrum), reverse=True)}")
    return [_column(g, theta, j) for j in range(g.v)]


def _minimum_circuits(g: PaleyGraph, theta: int, cap: int, settings: Optional[Settings],
                      threads: int, progress: Optional[bool]):
    settings = DEFAULT_SETTINGS if settings is None else settings
    columns = _check_oracle_limits(g, theta, cap, settings)
    # Paley graphs are vertex transitive, so some minimum support contains vertex 0
    if not any(columns[0]):
        return 1, [{0: 1}]
    if cap < 2:
        return None, []
    task = partial(_search_branch, columns, cap)
    results = run_tasks(task, list(range(1, g.v)), threads, "supports", progress)
    best = min(size for size, _ in results)
    if best > cap:
        return None, []
    relations = [r for size, found in results if size == best for r in found]
    logger.info("minimum support %d for theta=%s: %d circuits through vertex 0", best, theta, len(relations))
    return best, relations


def min_support_oracle(g: PaleyGraph, theta: int, cap: int, settings: Optional[Settings] = None,
                       threads: int = 1, progress: Optional[bool] = None) -> Optional[int]:
    """
    The least |S| <= cap such that a nonzero function supported on S satisfies the
    local condition at every vertex, or None when there is no such S.
    """
    best, _ = _minimum_circuits(g, theta, cap, settings, threads, progress)
    return best


def minimum_support_functions(g: PaleyGraph, theta: int, cap: int, settings: Optional[Settings] = None,
                              threads: int = 1, progress: Optional[bool] = None) -> List[Eigenfunction]:
    """Every minimum-support eigenfunction whose support contains vertex 0, up to scaling."""
    _, relations = _minimum_circuits(g, theta, cap, settings, threads, progress)
    out = []
    for relation in relations:
        values = [0] * g.v
        sign = 1 if relation[min(relation)] > 0 else -1
        for vertex, coefficient in relation.items():
            values[vertex] = sign * coefficient
        out.append(Eigenfunction(tuple(values), theta))
    return sorted(out, key=lambda f: (f.support, f.values))


def verify_bound_tightness(g: PaleyGraph, theta: int, expected: int, settings: Optional[Settings] = None,
                           threads: int = 1, progress: Optional[bool] = None,
                           functions: Optional[Sequence[Eigenfunction]] = None) -> CheckResult:
    """The smallest support for theta is exactly `expected` (pass `functions` to reuse a finished search)."""
    claim = "minimum support"
    if functions is None:
        functions = minimum_support_functions(g, theta, expected, settings, threads, progress)
    found = support_size(functions[0]) if functions else None
    require(found == expected, claim, "oracle minimum differs", {"found": found, "expected": expected})
    for f in functions:
        verify_local_condition(g, f)
    return CheckResult(claim, True, {"theta": theta, "minimum": found, "functions_through_0": len(functions)})

