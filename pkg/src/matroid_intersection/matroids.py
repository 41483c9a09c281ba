"""Matroid ground sets and independence oracles.

Elements are dense integer ids in ``[0, n)``.  A matroid is exposed only
through its independence oracle: a pure, deterministic predicate on subsets
of the ground set.  One oracle invocation is the unit of cost everywhere in
this package; :class:`CountingOracle` is the meter.

Subset arguments are plain collections of ids (sets in spirit; callers must
not pass duplicates).  Oracles treat the argument as read-only and do not
retain it, so hot loops may pass a mutable scratch set.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterable

# Phase labels used by the solver when charging calls to a CountingOracle.
PHASES = ("sources_sinks", "case1", "case2", "augment_check", "certificate")

AXIOM_CHECK_LIMIT = 12


class GroundSetError(ValueError):
    """An element id is outside [0, n), or two ground sets disagree in size."""


class OracleContractError(RuntimeError):
    """A documented precondition of an oracle-driven routine was violated."""


class ConcurrentAccessError(RuntimeError):
    """A CountingOracle was used from two threads without detach()."""


class MatroidOracle:
    """Black-box independence tester over the ground set ``{0, .., n-1}``.

    Subclasses set ``ground_size`` and implement :meth:`is_independent`,
    which must be pure and deterministic, accept the empty set, be
    downward closed, and satisfy the exchange axiom (see
    :func:`axiom_check` for an exhaustive test on small ground sets).
    """

    ground_size: int

    def is_independent(self, members: Iterable[int]) -> bool:
        raise NotImplementedError

    def _check_element(self, e: int) -> int:
        if not 0 <= e < self.ground_size:
            raise GroundSetError(
                f"element id {e} outside ground set [0, {self.ground_size})"
            )
        return e


class UniformMatroid(MatroidOracle):
    """Independent iff the subset has at most ``k`` elements."""

    def __init__(self, n: int, k: int):
        if n < 0:
            raise GroundSetError(f"ground size must be non-negative, got {n}")
        if k < 0:
            raise GroundSetError(f"rank cap must be non-negative, got {k}")
        self.ground_size = n
        self.k = k

    def __repr__(self):
        return f"UniformMatroid(n={self.ground_size}, k={self.k})"

    def is_independent(self, members):
        count = 0
        for e in members:
            self._check_element(e)
            count += 1
        return count <= self.k


class PartitionMatroid(MatroidOracle):
    """Independent iff each block contributes at most its capacity.

    ``blocks`` must partition ``[0, n)`` exactly; ``capacities`` gives one
    non-negative bound per block.
    """

    def __init__(self, blocks: Iterable[Iterable[int]], capacities: Iterable[int]):
        self.blocks = [tuple(b) for b in blocks]
        self.capacities = tuple(capacities)
        if len(self.blocks) != len(self.capacities):
            raise GroundSetError(
                f"{len(self.blocks)} blocks but {len(self.capacities)} capacities"
            )
        for cap in self.capacities:
            if cap < 0:
                raise GroundSetError(f"capacity must be non-negative, got {cap}")
        n = sum(len(b) for b in self.blocks)
        block_of = [-1] * n
        for idx, block in enumerate(self.blocks):
            for e in block:
                if not 0 <= e < n:
                    raise GroundSetError(
                        f"blocks must cover [0, {n}) exactly; {e} is out of range"
                    )
                if block_of[e] != -1:
                    raise GroundSetError(f"element {e} appears in two blocks")
                block_of[e] = idx
        self.ground_size = n
        self._block_of = block_of

    def __repr__(self):
        return f"PartitionMatroid(blocks={self.blocks!r}, capacities={self.capacities!r})"

    def is_independent(self, members):
        counts: dict[int, int] = {}
        for e in members:
            self._check_element(e)
            b = self._block_of[e]
            c = counts.get(b, 0) + 1
            if c > self.capacities[b]:
                return False
            counts[b] = c
        return True


class GraphicMatroid(MatroidOracle):
    """Independent iff the chosen edges are acyclic (a forest).

    Element id ``i`` is the edge ``edges[i]``.  Parallel edges are fine;
    a self-loop is dependent on its own.
    """

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if vertex_count < 0:
            raise GroundSetError(f"vertex count must be non-negative, got {vertex_count}")
        self.vertex_count = vertex_count
        self.edges = [(int(u), int(v)) for u, v in edges]
        for u, v in self.edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GroundSetError(
                    f"edge ({u}, {v}) has an endpoint outside [0, {vertex_count})"
                )
        self.ground_size = len(self.edges)

    def __repr__(self):
        return f"GraphicMatroid(vertex_count={self.vertex_count}, edges={self.edges!r})"

    def is_independent(self, members):
        # Union-find over the touched vertices only.
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            root = parent.setdefault(x, x)
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        for e in members:
            self._check_element(e)
            u, v = self.edges[e]
            if u == v:
                return False
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class LinearMatroidGF2(MatroidOracle):
    """Independent iff the chosen binary columns are linearly independent
    over GF(2).  Column ``i`` is ``columns[i]``, a 0/1 vector of length
    ``row_count``; the all-zero column is dependent on its own.
    """

    def __init__(self, row_count: int, columns: Iterable[Iterable[int]]):
        if row_count < 0:
            raise GroundSetError(f"row count must be non-negative, got {row_count}")
        self.row_count = row_count
        self.columns = [tuple(int(b) for b in col) for col in columns]
        masks = []
        for i, col in enumerate(self.columns):
            if len(col) != row_count:
                raise GroundSetError(
                    f"column {i} has {len(col)} rows, expected {row_count}"
                )
            if any(b not in (0, 1) for b in col):
                raise GroundSetError(f"column {i} has entries outside {{0, 1}}")
            masks.append(sum(bit << row for row, bit in enumerate(col)))
        self._masks = masks
        self.ground_size = len(masks)

    def __repr__(self):
        return f"LinearMatroidGF2(row_count={self.row_count}, columns={self.columns!r})"

    def is_independent(self, members):
        # Incremental XOR basis keyed by leading bit.
        basis: dict[int, int] = {}
        for e in members:
            self._check_element(e)
            m = self._masks[e]
            while m:
                lead = m.bit_length() - 1
                other = basis.get(lead)
                if other is None:
                    basis[lead] = m
                    break
                m ^= other
            if m == 0:
                return False
        return True


class CountingOracle(MatroidOracle):
    """Delegating wrapper that counts oracle calls, split by phase label.

    Answers are always identical to the inner oracle's.  ``call_count`` is
    the total; ``phase_counts[label]`` sums to it.  The wrapper is
    single-threaded: the first call binds it to the calling thread and any
    call from another thread raises :class:`ConcurrentAccessError`.  Call
    :meth:`detach` to hand a quiescent wrapper to another thread.
    """

    def __init__(self, inner: MatroidOracle, phase: str = "unphased"):
        self.inner = inner
        self.phase = phase
        self.call_count = 0
        self.phase_counts: dict[str, int] = {}
        self._owner: int | None = None

    def __repr__(self):
        return f"CountingOracle({self.inner!r}, calls={self.call_count})"

    @property
    def ground_size(self) -> int:
        return self.inner.ground_size

    def is_independent(self, members):
        tid = threading.get_ident()
        if self._owner is None:
            self._owner = tid
        elif self._owner != tid:
            raise ConcurrentAccessError(
                "CountingOracle is bound to another thread; call detach() "
                "while quiescent before handing it over"
            )
        self.call_count += 1
        self.phase_counts[self.phase] = self.phase_counts.get(self.phase, 0) + 1
        return self.inner.is_independent(members)

    def detach(self) -> None:
        """Release thread ownership (only while no call is in flight)."""
        self._owner = None

    @contextmanager
    def in_phase(self, label: str):
        previous = self.phase
        self.phase = label
        try:
            yield self
        finally:
            self.phase = previous


def rank(matroid: MatroidOracle, members: Iterable[int]) -> int:
    """Size of a maximal independent subset of ``members``.

    Greedy scan in ascending id order; exactly one oracle call per element.
    The result does not depend on the scan order (exchange property).
    """
    kept: set[int] = set()
    r = 0
    for e in sorted(members):
        kept.add(e)
        if matroid.is_independent(kept):
            r += 1
        else:
            kept.discard(e)
    return r


@dataclass
class AxiomReport:
    """Outcome of an exhaustive matroid-axiom check.

    ``hereditary_violations`` holds ``(subset, superset)`` pairs where the
    superset is independent but the subset is not, restricted to pairs that
    differ in one element (which already witnesses every hereditary
    failure).  ``exchange_violations`` holds independent pairs ``(X, Y)``
    with ``|Y| = |X| + 1`` and no element of ``Y - X`` extending ``X``;
    when the hereditary list is empty this adjacent-size check is
    equivalent to the axiom for arbitrary size gaps.
    """

    ground_size: int
    empty_set_dependent: bool = False
    hereditary_violations: list[tuple[frozenset[int], frozenset[int]]] = field(
        default_factory=list
    )
    exchange_violations: list[tuple[frozenset[int], frozenset[int]]] = field(
        default_factory=list
    )

    @property
    def ok(self) -> bool:
        return (
            not self.empty_set_dependent
            and not self.hereditary_violations
            and not self.exchange_violations
        )

    def summary(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        if self.empty_set_dependent:
            parts.append("empty set dependent")
        if self.hereditary_violations:
            parts.append(f"{len(self.hereditary_violations)} hereditary violation(s)")
        if self.exchange_violations:
            parts.append(f"{len(self.exchange_violations)} exchange violation(s)")
        return "; ".join(parts)


def axiom_check(matroid: MatroidOracle) -> AxiomReport:
    """Exhaustively test the three matroid axioms on a small ground set.

    Enumerates all ``2^n`` subsets (one oracle call each), so the ground
    set is capped at ``AXIOM_CHECK_LIMIT`` elements; larger inputs are
    refused rather than sampled.
    """
    n = matroid.ground_size
    if n > AXIOM_CHECK_LIMIT:
        raise GroundSetError(
            f"refusing exhaustive axiom check for n={n} > {AXIOM_CHECK_LIMIT}"
        )
    size = 1 << n

    def members_of(mask: int) -> frozenset[int]:
        return frozenset(i for i in range(n) if mask >> i & 1)

    independent = [matroid.is_independent(members_of(m)) for m in range(size)]
    report = AxiomReport(ground_size=n, empty_set_dependent=not independent[0])

    by_size: dict[int, list[int]] = {}
    grow: dict[int, int] = {}
    for mask in range(size):
        if not independent[mask]:
            continue
        by_size.setdefault(mask.bit_count(), []).append(mask)
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            if not independent[mask ^ bit]:
                report.hereditary_violations.append(
                    (members_of(mask ^ bit), members_of(mask))
                )
        bits = 0
        for y in range(n):
            b = 1 << y
            if not mask & b and independent[mask | b]:
                bits |= b
        grow[mask] = bits

    for k in sorted(by_size):
        larger = by_size.get(k + 1)
        if not larger:
            continue
        for x in by_size[k]:
            can_grow = grow[x]
            for y in larger:
                if not y & ~x & can_grow:
                    report.exchange_violations.append((members_of(x), members_of(y)))
    return report
