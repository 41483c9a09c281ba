"""Brute-force references and arithmetic bound checkers.

Everything here is deliberately slow and obviously correct: exhaustive
enumeration for the optimum, full pairwise oracle evaluation for the
exchange graph, subset enumeration for circuits.  The solver is validated
against these on small instances, never the other way around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .matroids import GroundSetError, MatroidOracle, OracleContractError
from .solver import NoCircuitError, RunStats

BRUTE_FORCE_LIMIT = 20
CIRCUIT_ENUM_LIMIT = 14

# Largest observed total_calls / (n * (r+1) * log2(r+2)^2) over the
# partition_matching generator family at n in {64, 128, 256}, seeds
# {1, 2, 3}.  Empirical scaling constant, not a theorem; regenerate with
# scripts/calibrate_budget.py after solver changes.
CALIBRATED_BUDGET_CONSTANT = 0.394537


def brute_force_max_common(
    oracle1: MatroidOracle, oracle2: MatroidOracle
) -> tuple[int, frozenset[int]]:
    """Exhaustive maximum common independent set for tiny ground sets.

    Depth-first over elements in ascending order, include-branch first,
    pruning supersets of dependent sets (hereditary property) and branches
    that cannot strictly beat the incumbent.  Returns the maximum size and
    its lexicographically least witness.  Refuses n > 20.
    """
    if oracle1.ground_size != oracle2.ground_size:
        raise GroundSetError(
            f"ground sizes disagree: {oracle1.ground_size} != {oracle2.ground_size}"
        )
    n = oracle1.ground_size
    if n > BRUTE_FORCE_LIMIT:
        raise GroundSetError(
            f"refusing exhaustive enumeration for n={n} > {BRUTE_FORCE_LIMIT}"
        )

    best: list[int] = []
    current: set[int] = set()

    def explore(e: int) -> None:
        if len(current) + (n - e) <= len(best):
            return
        if e == n:
            return
        current.add(e)
        if oracle1.is_independent(current) and oracle2.is_independent(current):
            if len(current) > len(best):
                best[:] = sorted(current)
            explore(e + 1)
        current.discard(e)
        explore(e + 1)

    explore(0)
    return len(best), frozenset(best)


@dataclass(frozen=True)
class ExchangeGraph:
    """Fully materialized exchange graph for one solution.

    ``arcs_from_solution`` holds (y, x) with y in S, x outside, S - y + x
    independent in the first matroid; ``arcs_into_solution`` holds (x, y)
    with the swap independent in the second.
    """

    ground_size: int
    solution: frozenset[int]
    arcs_from_solution: frozenset[tuple[int, int]]
    arcs_into_solution: frozenset[tuple[int, int]]
    sources: frozenset[int]
    sinks: frozenset[int]


def build_naive_exchange_graph(
    oracle1: MatroidOracle, oracle2: MatroidOracle, solution
) -> ExchangeGraph:
    """Evaluate every potential arc of the exchange graph directly.

    2 * |S| * (n - |S|) pair queries plus n - |S| source and n - |S| sink
    queries; no shortcuts, so this is a fair reference for the lazy BFS.
    """
    n = oracle1.ground_size
    inside = set(solution)
    outside = [x for x in range(n) if x not in inside]

    sources = frozenset(x for x in outside if oracle1.is_independent(inside | {x}))
    sinks = frozenset(x for x in outside if oracle2.is_independent(inside | {x}))

    from_solution = set()
    into_solution = set()
    for y in inside:
        swapped = inside - {y}
        for x in outside:
            candidate = swapped | {x}
            if oracle1.is_independent(candidate):
                from_solution.add((y, x))
            if oracle2.is_independent(candidate):
                into_solution.add((x, y))
    return ExchangeGraph(
        ground_size=n,
        solution=frozenset(inside),
        arcs_from_solution=frozenset(from_solution),
        arcs_into_solution=frozenset(into_solution),
        sources=sources,
        sinks=sinks,
    )


def breadth_first_layers(graph: ExchangeGraph) -> tuple[list[list[int]], bool]:
    """Textbook layered BFS from the sources of a materialized graph.

    Stops once a generated layer contains a sink (same stopping rule as
    the lazy search).  Returns the layers, each sorted ascending, and
    whether a sink layer was reached.
    """
    adjacency: dict[int, list[int]] = {}
    for y, x in graph.arcs_from_solution:
        adjacency.setdefault(y, []).append(x)
    for x, y in graph.arcs_into_solution:
        adjacency.setdefault(x, []).append(y)

    layers: list[list[int]] = []
    reached: set[int] = set()
    frontier = sorted(graph.sources)
    while frontier:
        layers.append(frontier)
        reached.update(frontier)
        if any(v in graph.sinks for v in frontier):
            return layers, True
        frontier = sorted(
            {w for v in frontier for w in adjacency.get(v, ())} - reached
        )
    return layers, False


def brute_force_circuit(
    matroid: MatroidOracle, solution, extra: int
) -> frozenset[int]:
    """The unique circuit of solution + extra, by subset enumeration.

    The solution must be independent and solution + extra dependent
    (otherwise :class:`NoCircuitError`).  All subsets of solution + extra
    are classified with one oracle call each, then the minimal dependent
    ones are picked out; with an independent solution exactly one exists.
    Refuses ground sets larger than 14.
    """
    if matroid.ground_size > CIRCUIT_ENUM_LIMIT:
        raise GroundSetError(
            f"refusing circuit enumeration for n={matroid.ground_size} > "
            f"{CIRCUIT_ENUM_LIMIT}"
        )
    elements = sorted(set(solution) | {extra})
    m = len(elements)
    dependent = []
    for mask in range(1 << m):
        subset = {elements[i] for i in range(m) if mask >> i & 1}
        dependent.append(not matroid.is_independent(subset))
    if not dependent[(1 << m) - 1]:
        raise NoCircuitError("solution plus extra is independent; no circuit exists")

    minimal = []
    for mask in range(1, 1 << m):
        if not dependent[mask]:
            continue
        rest = mask
        is_minimal = True
        while rest:
            bit = rest & -rest
            rest ^= bit
            if dependent[mask ^ bit]:
                is_minimal = False
                break
        if is_minimal:
            minimal.append(mask)
    if len(minimal) != 1:
        raise OracleContractError(
            f"expected exactly one circuit, found {len(minimal)}; the given "
            "solution was not independent"
        )
    mask = minimal[0]
    return frozenset(elements[i] for i in range(m) if mask >> i & 1)


@dataclass(frozen=True)
class PathBoundCheck:
    """One augmenting path against the shortest-path length guarantee."""

    arc_count: int
    size_before: int
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class BoundReport:
    """Outcome of the per-path, total-length, and call-budget checks.

    The path and total checks are theorems for shortest-path augmentation;
    a failure there is a solver bug.  The budget check compares measured
    calls against c * n * (r+1) * log2(r+2)^2 with an empirically
    calibrated c, so it is a regression tripwire rather than a proof.
    """

    per_path: tuple[PathBoundCheck, ...]
    total_arcs: int
    total_bound: Fraction
    total_ok: bool
    measured_calls: int
    budget_value: float
    budget_ok: bool

    @property
    def ok(self) -> bool:
        return (
            all(check.ok for check in self.per_path)
            and self.total_ok
            and self.budget_ok
        )


def path_length_bound(size_before: int, maximum: int) -> Fraction:
    """Largest possible shortest-augmenting-path arc count at this size.

    Exact rational 2 * size / (maximum - size) + 2; only defined while the
    solution is below the maximum.
    """
    if size_before >= maximum:
        raise ValueError(
            f"no augmenting path exists at size {size_before} >= maximum {maximum}"
        )
    return Fraction(2 * size_before, maximum - size_before) + 2


def total_length_bound(maximum: int) -> Fraction:
    """Sum of the per-size path bounds over a full run, exact arithmetic."""
    return sum(
        (path_length_bound(k, maximum) for k in range(maximum)), Fraction(0)
    )


def check_bounds(stats: RunStats, n: int, r: int, c_budget: float) -> BoundReport:
    """Check a finished run's paths and call totals against the guarantees.

    ``r`` is the larger of the two matroid ranks over the full ground set;
    the budget formula uses r + 1 as a factor and r + 2 inside the
    logarithm so that r in {0, 1} stays meaningful.
    """
    p = stats.solution_size
    per = []
    for arcs, size_before in zip(stats.path_lengths, stats.path_start_sizes):
        bound = path_length_bound(size_before, p)
        per.append(
            PathBoundCheck(
                arc_count=arcs, size_before=size_before, bound=bound, ok=arcs <= bound
            )
        )
    total_arcs = sum(stats.path_lengths)
    total = total_length_bound(p)
    budget_value = c_budget * n * (r + 1) * math.log2(r + 2) ** 2
    measured = stats.total_calls
    return BoundReport(
        per_path=tuple(per),
        total_arcs=total_arcs,
        total_bound=total,
        total_ok=total_arcs <= total,
        measured_calls=measured,
        budget_value=budget_value,
        budget_ok=measured <= budget_value,
    )


def budget_ratio(total_calls: int, n: int, r: int) -> float:
    """Measured calls divided by n * (r+1) * log2(r+2)^2."""
    return total_calls / (n * (r + 1) * math.log2(r + 2) ** 2)
