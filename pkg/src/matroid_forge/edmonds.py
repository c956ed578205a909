"""Classical matroid intersection: augmenting paths, brute force, certificates.

These routines share nothing with :mod:`matroid_forge.intersection` beyond
the independence oracles, so they can serve as its referee.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .bits import SubsetLike, as_mask, fmt, iter_bits, members, popcount
from .config import DEFAULTS
from .core import Matroid, downward_closed_family
from .errors import ArgumentError, CapacityError


@dataclass
class ExchangeGraph:
    """Auxiliary digraph for the current common independent set ``current``.

    ``arcs[y]`` for ``y`` in the set lists ``z`` with ``I - y + z`` independent
    in M1; ``arcs[z]`` for ``z`` outside lists ``y`` with ``I - y + z``
    independent in M2.  Adjacency lists are ascending.
    """

    current: int
    arcs: dict[int, list[int]]
    sources: int
    sinks: int


def exchange_graph(m1: Matroid, m2: Matroid, current: int) -> ExchangeGraph:
    ground = m1.ground_mask
    inside = members(current)
    outside = members(ground & ~current)
    arcs: dict[int, list[int]] = {e: [] for e in members(ground)}
    sources = sinks = 0
    for z in outside:
        zb = 1 << z
        if m1._independent(current | zb):
            sources |= zb
        if m2._independent(current | zb):
            sinks |= zb
    for y in inside:
        base = current & ~(1 << y)
        for z in outside:
            swapped = base | (1 << z)
            if m1._independent(swapped):
                arcs[y].append(z)
            if m2._independent(swapped):
                arcs[z].append(y)
    return ExchangeGraph(current, arcs, sources, sinks)


def _shortest_path(graph: ExchangeGraph) -> list[int] | None:
    """Lexicographically least among the shortest source-to-sink paths."""
    preds: dict[int, list[int]] = {v: [] for v in graph.arcs}
    for u, outs in graph.arcs.items():
        for v in outs:
            preds[v].append(u)
    dist: dict[int, int] = {}
    queue = deque()
    for t in members(graph.sinks):
        dist[t] = 0
        queue.append(t)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    starts = [s for s in members(graph.sources) if s in dist]
    if not starts:
        return None
    best = min(dist[s] for s in starts)
    node = min(s for s in starts if dist[s] == best)
    path = [node]
    while dist[node]:
        node = min(v for v in graph.arcs[node] if dist.get(v) == dist[node] - 1)
        path.append(node)
    return path


def _reachable(graph: ExchangeGraph) -> int:
    seen = graph.sources
    queue = deque(members(graph.sources))
    while queue:
        u = queue.popleft()
        for v in graph.arcs[u]:
            if not seen >> v & 1:
                seen |= 1 << v
                queue.append(v)
    return seen


@dataclass
class CertifiedOptimum:
    """A maximum common independent set together with its min-max certificate."""

    I_star: int
    A: int
    history: list[int] = field(default_factory=list, repr=False)

    @property
    def size(self) -> int:
        return popcount(self.I_star)

    def to_dict(self) -> dict:
        return {"I_star": members(self.I_star), "A": members(self.A), "size": self.size}


def _same_ground(m1: Matroid, m2: Matroid) -> None:
    if m1.ground_mask != m2.ground_mask:
        raise ArgumentError(f"ground sets differ: {fmt(m1.ground_mask)} vs {fmt(m2.ground_mask)}")


def max_common_independent(m1: Matroid, m2: Matroid) -> CertifiedOptimum:
    """Maximum common independent set by shortest augmenting paths.

    Length-zero paths are taken first as an ascending greedy pass (always
    picking the least element of ``X1 & X2`` is the same thing).  After the
    last phase, ``A`` is the set of elements not reachable from ``X1``; then
    ``r1(A) + r2(E - A) = |I|``.
    """
    _same_ground(m1, m2)
    current = 0
    history: list[int] = []
    for b in iter_bits(m1.ground_mask):
        if m1._independent(current | b) and m2._independent(current | b):
            current |= b
            history.append(current)
    while True:
        graph = exchange_graph(m1, m2, current)
        path = _shortest_path(graph)
        if path is None:
            break
        for v in path:
            current ^= 1 << v
        history.append(current)
    return CertifiedOptimum(current, m1.ground_mask & ~_reachable(graph), history)


def brute_force_max_common(m1: Matroid, m2: Matroid, threshold: int | None = DEFAULTS.brute) -> int:
    """Lexicographically least maximum common independent set, by enumeration."""
    _same_ground(m1, m2)
    if threshold is not None and len(m1) > threshold:
        raise CapacityError(f"brute force limited to {threshold} elements, got {len(m1)}")
    best = 0
    best_size = 0
    # the enumeration is in lexicographic order, so the first set of each size wins ties
    for s in downward_closed_family(m1.ground_mask, lambda s: m1._independent(s) and m2._independent(s)):
        k = popcount(s)
        if k > best_size:
            best, best_size = s, k
    return best


def certify(m1: Matroid, m2: Matroid, common: SubsetLike, a: SubsetLike) -> bool:
    """True iff ``r1(A) + r2(E - A) == |I|``, which proves ``I`` maximum."""
    _same_ground(m1, m2)
    i = m1._check(as_mask(common))
    a = m1._check(as_mask(a))
    if not (m1._independent(i) and m2._independent(i)):
        return False
    return m1._rank(a) + m2._rank(m1.ground_mask & ~a) == popcount(i)


__all__ = [
    "CertifiedOptimum",
    "ExchangeGraph",
    "brute_force_max_common",
    "certify",
    "exchange_graph",
    "max_common_independent",
]
