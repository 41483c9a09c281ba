"""Maximum common independent set by augmenting paths, frugal with oracle calls.

Setting: two matroids over the same ground set, each visible only through
its independence oracle.  For a common independent set S the exchange graph
is the bipartite digraph on S versus the rest, with an arc y -> x (y in S,
x outside) when S - y + x stays independent in the first matroid, and an
arc x -> y when S - y + x stays independent in the second.  Sources are the
elements addable to S in the first matroid, sinks those addable in the
second; augmenting along a shortest source-to-sink path grows S by one.

The expensive part is discovering arcs.  This solver never materializes the
graph: BFS asks for the out-neighbors of one layer at a time, and each
request is answered with binary searches over prefixes of an ordering of S
(:func:`min_dependent_prefix`), so a discovered neighbor costs
O(log |S|) oracle calls instead of O(|S|).

Layer expansion alternates two shapes:

* even layer (outside S): for each vertex v, the new in-S neighbors are the
  not-yet-reached elements of the unique circuit of S + v in the second
  matroid, extracted one per binary search (:func:`fan_in_neighbors`);
* odd layer (inside S): scan every unreached element u outside S, keep it
  iff S minus the layer plus u is independent in the first matroid, and
  binary-search the layer for a parent (:func:`fan_out_neighbors`).

When BFS exhausts without meeting a sink, the reached set yields a
certificate of maximality: with U the unreached elements,
rank1(U) + rank2(complement of U) equals |S|.
"""

from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .matroids import (
    PHASES,
    CountingOracle,
    GroundSetError,
    MatroidOracle,
    OracleContractError,
    rank,
)


class NoCircuitError(RuntimeError):
    """A prefix search found no dependent prefix: the full set is independent."""


class SolverInternalError(RuntimeError):
    """An internal invariant failed; indicates a bug in the solver itself."""


class OrderedGround:
    """Mutable ordering of the current solution with a reached prefix.

    The first ``reached_prefix_len`` positions hold exactly the elements
    already reached by the ongoing BFS; the rest are unreached.  Reaching
    an element swaps it into the prefix, so the sequence always stays a
    permutation of the original members.
    """

    def __init__(self, members: Iterable[int]):
        self.sequence: list[int] = sorted(members)
        self.reached_prefix_len = 0
        self._position = {e: i for i, e in enumerate(self.sequence)}

    def __len__(self) -> int:
        return len(self.sequence)

    def position_of(self, element: int) -> int:
        return self._position[element]

    def reached(self) -> list[int]:
        return self.sequence[: self.reached_prefix_len]

    def mark_reached(self, element: int) -> None:
        i = self._position[element]
        j = self.reached_prefix_len
        if i < j:
            raise ValueError(f"element {element} is already in the reached prefix")
        seq = self.sequence
        seq[i], seq[j] = seq[j], seq[i]
        self._position[seq[i]] = i
        self._position[seq[j]] = j
        self.reached_prefix_len = j + 1


@dataclass(frozen=True)
class AugmentingPath:
    """Alternating vertex sequence x0, y1, x1, ..., xt from source to sink.

    Vertices at even positions lie outside the solution, odd positions
    inside; the vertex count is odd, and a single vertex (a source that is
    also a sink) is the degenerate direct-addition case.
    """

    vertices: tuple[int, ...]

    @property
    def arc_count(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def sink(self) -> int:
        return self.vertices[-1]


@dataclass(frozen=True)
class ReachableSet:
    """Everything BFS reached before exhausting; no augmenting path exists."""

    members: frozenset[int]


@dataclass
class BfsState:
    """Layered reachability snapshot of one lazy BFS run.

    ``layers[0]`` is the source set; even-indexed layers lie outside the
    solution, odd-indexed layers inside.  ``predecessor`` maps every
    reached vertex outside layer 0 to its discoverer in the previous
    layer.
    """

    layers: list[list[int]] = field(default_factory=list)
    reached_in_solution: set[int] = field(default_factory=set)
    reached_outside: set[int] = field(default_factory=set)
    predecessor: dict[int, int] = field(default_factory=dict)
    sinks: frozenset[int] = frozenset()

    @property
    def reached(self) -> frozenset[int]:
        return frozenset(self.reached_in_solution | self.reached_outside)


@dataclass(frozen=True)
class Certificate:
    """Maximality witness: rank1(dual_set) + rank2(complement) = solution size.

    No subset independent in both matroids can exceed that sum, so carrying
    one of these certifies the solution without any brute force.
    """

    dual_set: frozenset[int]
    rank1_inside: int
    rank2_outside: int

    @property
    def value(self) -> int:
        return self.rank1_inside + self.rank2_outside


@dataclass
class RunStats:
    """Oracle-call accounting and per-augmentation path lengths for one run.

    ``path_lengths[i]`` is the arc count of the i-th augmenting path and
    ``path_start_sizes[i]`` the solution size just before it was applied;
    direct additions (source that is also a sink) are counted separately in
    ``shortcut_additions`` and record no path.
    """

    calls_matroid1: dict[str, int] = field(default_factory=dict)
    calls_matroid2: dict[str, int] = field(default_factory=dict)
    path_lengths: list[int] = field(default_factory=list)
    path_start_sizes: list[int] = field(default_factory=list)
    augmentations: int = 0
    shortcut_additions: int = 0
    solution_size: int = 0

    @property
    def total_calls(self) -> int:
        return sum(self.calls_matroid1.values()) + sum(self.calls_matroid2.values())


def _phase(oracle: MatroidOracle, label: str):
    enter = getattr(oracle, "in_phase", None)
    return enter(label) if enter is not None else nullcontext()


def compute_free_additions(oracle: MatroidOracle, solution: Iterable[int]) -> set[int]:
    """Elements outside the solution whose addition keeps it independent.

    Exactly ``n - |solution|`` oracle calls.  The solution must already be
    independent in ``oracle`` (not re-verified here, to keep the call count
    exact); with the first matroid this yields the BFS sources, with the
    second the sinks.
    """
    probe = set(solution)
    free: set[int] = set()
    for x in range(oracle.ground_size):
        if x in probe:
            continue
        probe.add(x)
        if oracle.is_independent(probe):
            free.add(x)
        probe.discard(x)
    return free


class _PrefixProber:
    """Evaluates dependence of base + sequence[:i], mutating one scratch set.

    Successive probes only add or remove the elements between the previous
    and the requested prefix length, so a whole binary search costs O(k)
    set mutations total, not O(k) per probe.  ``sequence`` must be disjoint
    from ``base``.
    """

    def __init__(self, oracle: MatroidOracle, sequence: list[int], base: Iterable[int]):
        self._oracle = oracle
        self._sequence = sequence
        self._members = set(base)
        self._length = 0

    def dependent_at(self, i: int) -> bool:
        members, seq = self._members, self._sequence
        while self._length < i:
            members.add(seq[self._length])
            self._length += 1
        while self._length > i:
            self._length -= 1
            members.discard(seq[self._length])
        return not self._oracle.is_independent(members)


def _min_dependent_prefix_over(
    oracle: MatroidOracle,
    sequence: list[int],
    base: Iterable[int],
    lo: int,
    hi: int,
) -> int:
    """Smallest i in [lo, hi] with base + sequence[:i] dependent.

    Dependence is monotone in i, so binary search applies.  The caller
    promises dependence at hi; if every probe comes back independent the
    boundary is verified with one extra call and :class:`NoCircuitError`
    is raised when the promise fails.
    """
    prober = _PrefixProber(oracle, sequence, base)
    confirmed = False
    while lo < hi:
        mid = (lo + hi) // 2
        if prober.dependent_at(mid):
            hi = mid
            confirmed = True
        else:
            lo = mid + 1
    if not confirmed and not prober.dependent_at(lo):
        raise NoCircuitError(
            "prefix search found no dependent prefix; the searched set is independent"
        )
    return lo


def min_dependent_prefix(
    oracle: MatroidOracle,
    order: OrderedGround,
    extra: int,
    hi: int | None = None,
) -> int:
    """Smallest i with the first i ordered elements plus ``extra`` dependent.

    Returns 0 when ``extra`` alone is dependent (a loop); for i >= 1 the
    i-th element of the ordering belongs to the unique circuit of the
    solution plus ``extra``.  Costs ceil(log2(hi + 1)) oracle calls, plus
    at most one boundary-verification call.  Raises
    :class:`NoCircuitError` when even the full prefix plus ``extra`` is
    independent.
    """
    if hi is None:
        hi = len(order.sequence)
    return _min_dependent_prefix_over(oracle, order.sequence, (extra,), 0, hi)


def fan_in_neighbors(
    oracle2: MatroidOracle, order: OrderedGround, vertex: int
) -> set[int]:
    """Unreached circuit elements of solution + vertex in the second matroid.

    ``vertex`` lies outside the solution and must not be a sink, so the
    solution plus it has a unique circuit there; the returned elements are
    that circuit minus the already-reached prefix.  Each one is found by a
    prefix binary search and swapped into the reached prefix, so the loop
    stops as soon as a search lands inside the prefix: at that point every
    circuit element is accounted for.  O((|found| + 1) log |S|) calls.
    """
    found: set[int] = set()
    hi = len(order.sequence)
    while True:
        try:
            i = min_dependent_prefix(oracle2, order, vertex, hi)
        except NoCircuitError:
            raise OracleContractError(
                f"element {vertex} is addable in the second matroid (a sink); "
                "sinks must be recognized before expansion"
            ) from None
        if i <= order.reached_prefix_len:
            return found
        element = order.sequence[i - 1]
        found.add(element)
        order.mark_reached(element)


def fan_out_neighbors(
    oracle1: MatroidOracle,
    solution: Iterable[int],
    layer: Iterable[int],
    reached_outside: Iterable[int],
) -> list[tuple[int, int]]:
    """New outside-the-solution vertices swappable with the given layer.

    Emits ``(element, parent)`` pairs in ascending element order: element u
    is kept iff the solution minus the layer plus u is independent in the
    first matroid (its unique circuit then meets the layer), and the parent
    is the layer element located by binary search over the layer's
    ascending ordering, guaranteeing solution - parent + u independent.
    ``reached_outside`` must contain every source, otherwise a scanned
    element has no circuit at all.  O(log |layer|) calls per kept element,
    one call per rejected one.
    """
    solution = set(solution)
    members = sorted(layer)
    if not set(members) <= solution:
        raise OracleContractError("layer must be a subset of the current solution")
    skip = solution | set(reached_outside)
    base = solution.difference(members)
    out: list[tuple[int, int]] = []
    for u in range(oracle1.ground_size):
        if u in skip:
            continue
        base.add(u)
        try:
            if oracle1.is_independent(base):
                try:
                    i = _min_dependent_prefix_over(oracle1, members, base, 1, len(members))
                except NoCircuitError:
                    raise OracleContractError(
                        f"element {u} is addable in the first matroid (a source) "
                        "but was not in reached_outside"
                    ) from None
                out.append((u, members[i - 1]))
        finally:
            base.discard(u)
    return out


def _trace_path(sink: int, predecessor: dict[int, int]) -> AugmentingPath:
    vertices = [sink]
    while vertices[-1] in predecessor:
        vertices.append(predecessor[vertices[-1]])
    vertices.reverse()
    return AugmentingPath(tuple(vertices))


def lazy_bfs(
    oracle1: MatroidOracle,
    oracle2: MatroidOracle,
    solution: Iterable[int],
    sources: set[int] | None = None,
    sinks: set[int] | None = None,
) -> tuple[AugmentingPath | None, BfsState]:
    """Layered BFS over the exchange graph, constructing it on demand.

    The solution must be independent in both matroids and, once sources
    and sinks are known, disjoint from their intersection (directly
    addable elements are the caller's business).  Layer vertices are
    processed in ascending id order, which fixes the predecessor choice
    and hence the returned path among the shortest ones.  Sinks are
    recognized the moment an even layer is generated; the first sink in
    layer order ends the search.

    Returns ``(path, state)`` with ``path`` None when BFS exhausted.
    """
    if oracle1.ground_size != oracle2.ground_size:
        raise GroundSetError(
            f"ground sizes disagree: {oracle1.ground_size} != {oracle2.ground_size}"
        )
    current = set(solution)
    if sources is None:
        with _phase(oracle1, "sources_sinks"):
            sources = compute_free_additions(oracle1, current)
    if sinks is None:
        with _phase(oracle2, "sources_sinks"):
            sinks = compute_free_additions(oracle2, current)
    if sources & sinks:
        raise OracleContractError(
            "some element is both a source and a sink; add it directly "
            "instead of searching for a path"
        )

    state = BfsState(sinks=frozenset(sinks))
    if not sources:
        return None, state
    state.reached_outside |= sources
    frontier = sorted(sources)
    state.layers.append(list(frontier))
    order = OrderedGround(current)
    depth = 0
    while True:
        if depth % 2 == 0:
            # Expand outside-solution layer into the solution.
            nxt: list[int] = []
            with _phase(oracle2, "case1"):
                for v in frontier:
                    for u in fan_in_neighbors(oracle2, order, v):
                        state.predecessor[u] = v
                        nxt.append(u)
            nxt.sort()
            if not nxt:
                return None, state
            state.reached_in_solution.update(nxt)
            state.layers.append(nxt)
        else:
            # Expand solution layer back outside.
            with _phase(oracle1, "case2"):
                pairs = fan_out_neighbors(oracle1, current, frontier, state.reached_outside)
            nxt = [t for t, _ in pairs]
            if not nxt:
                return None, state
            for t, parent in pairs:
                state.predecessor[t] = parent
            state.reached_outside.update(nxt)
            state.layers.append(nxt)
            for t in nxt:
                if t in state.sinks:
                    return _trace_path(t, state.predecessor), state
        frontier = nxt
        depth += 1


def shortest_augmenting_path(
    oracle1: MatroidOracle, oracle2: MatroidOracle, solution: Iterable[int]
) -> AugmentingPath | ReachableSet:
    """Shortest source-to-sink path in the exchange graph, or the reached set.

    A :class:`ReachableSet` return means no augmenting path exists; feed it
    to :func:`certificate_from_reachable` to certify maximality.
    """
    path, state = lazy_bfs(oracle1, oracle2, solution)
    if path is not None:
        return path
    return ReachableSet(state.reached)


def augment(
    oracle1: MatroidOracle,
    oracle2: MatroidOracle,
    solution: Iterable[int],
    path: AugmentingPath,
) -> set[int]:
    """Apply a shortest augmenting path: symmetric difference, size + 1.

    Shortest paths provably preserve independence in both matroids, but
    this is asserted anyway (two oracle calls, charged to the
    ``augment_check`` phase); a failure means the path was not valid for
    this solution and is reported as a solver bug.
    """
    current = set(solution)
    result = current.symmetric_difference(path.vertices)
    if len(result) != len(current) + 1:
        raise SolverInternalError(
            f"augmentation changed the size from {len(current)} to {len(result)}; "
            "expected growth by exactly 1"
        )
    with _phase(oracle1, "augment_check"):
        ok1 = oracle1.is_independent(result)
    with _phase(oracle2, "augment_check"):
        ok2 = oracle2.is_independent(result)
    if not (ok1 and ok2):
        raise SolverInternalError(
            "augmented set lost independence "
            f"(matroid1 ok: {ok1}, matroid2 ok: {ok2}); the path was invalid"
        )
    return result


def certificate_from_reachable(
    oracle1: MatroidOracle,
    oracle2: MatroidOracle,
    solution: Iterable[int],
    reachable: Iterable[int],
) -> Certificate:
    """Build the maximality certificate from an exhausted BFS's reached set.

    The dual set is everything BFS could not reach.  Both ranks are
    computed greedily (charged to the ``certificate`` phase) and their sum
    must equal the solution size exactly; anything else is a solver bug.
    """
    everything = range(oracle1.ground_size)
    dual_set = frozenset(everything) - frozenset(reachable)
    with _phase(oracle1, "certificate"):
        r1 = rank(oracle1, dual_set)
    with _phase(oracle2, "certificate"):
        r2 = rank(oracle2, frozenset(everything) - dual_set)
    size = len(set(solution))
    if r1 + r2 != size:
        raise SolverInternalError(
            f"certificate gap: rank1(U) + rank2(E-U) = {r1} + {r2} != {size}"
        )
    return Certificate(dual_set=dual_set, rank1_inside=r1, rank2_outside=r2)


def _phase_snapshot(counter: CountingOracle) -> dict[str, int]:
    counts = {label: 0 for label in PHASES}
    counts.update(counter.phase_counts)
    return counts


def solve(
    oracle1: MatroidOracle,
    oracle2: MatroidOracle,
    on_bfs: Callable[[frozenset[int]], None] | None = None,
) -> tuple[frozenset[int], Certificate, RunStats]:
    """Maximum common independent set of two matroids on one ground set.

    Starts empty and grows one element per round: recompute sources and
    sinks, add the lowest-id directly-addable element if any, otherwise
    augment along a shortest exchange-graph path; stop when BFS exhausts
    and return the solution with its maximality certificate and the
    per-phase oracle-call accounting.  ``on_bfs``, when given, receives a
    snapshot of the solution right before each BFS (handy for comparing
    against a non-lazy reference).

    Deterministic: identical inputs produce identical solutions, paths,
    and call counts.
    """
    if oracle1.ground_size != oracle2.ground_size:
        raise GroundSetError(
            f"ground sizes disagree: {oracle1.ground_size} != {oracle2.ground_size}"
        )
    counter1 = CountingOracle(oracle1)
    counter2 = CountingOracle(oracle2)
    solution: set[int] = set()
    stats = RunStats()

    while True:
        with counter1.in_phase("sources_sinks"):
            sources = compute_free_additions(counter1, solution)
        with counter2.in_phase("sources_sinks"):
            sinks = compute_free_additions(counter2, solution)

        direct = sources & sinks
        if direct:
            solution = augment(
                counter1, counter2, solution, AugmentingPath((min(direct),))
            )
            stats.shortcut_additions += 1
            continue

        if on_bfs is not None:
            on_bfs(frozenset(solution))
        path, state = lazy_bfs(counter1, counter2, solution, sources, sinks)
        if path is None:
            certificate = certificate_from_reachable(
                counter1, counter2, solution, state.reached
            )
            stats.calls_matroid1 = _phase_snapshot(counter1)
            stats.calls_matroid2 = _phase_snapshot(counter2)
            stats.solution_size = len(solution)
            if stats.augmentations + stats.shortcut_additions != stats.solution_size:
                raise SolverInternalError("solution size drifted from the step count")
            return frozenset(solution), certificate, stats

        stats.path_start_sizes.append(len(solution))
        stats.path_lengths.append(path.arc_count)
        solution = augment(counter1, counter2, solution, path)
        stats.augmentations += 1
