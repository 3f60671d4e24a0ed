"""Metric multigraphs, shortest homologically nontrivial cycles, and the
greedy cycle-basis construction with its certified length-product bound.

Cycles are edge-index sets; every cycle of a graph is nontrivial in
degree-1 homology mod 2, so the homological systole is the minimum-weight
cycle.  The greedy construction peels one shortest cycle per step and
deletes its heaviest edge, which drops the cycle rank by exactly one while
keeping the graph connected.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import FrozenSet, Sequence

from . import gf2
from .errors import (
    AcyclicError,
    DisconnectedGraphError,
    ParseError,
    TooLargeError,
)

Cycle = FrozenSet[int]


@dataclass(frozen=True)
class MetricGraph:
    """Connected weighted multigraph; parallel edges and loops allowed."""

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        for u, v, w in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) endpoint out of range")
            if not (w > 0):
                raise ValueError("edge lengths must be strictly positive")
        if not self._is_connected(frozenset(range(len(self.edges)))):
            raise DisconnectedGraphError("graph must be connected")

    def _is_connected(self, alive: FrozenSet[int]) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(self.vertex_count)}
        for idx in alive:
            u, v, _ = self.edges[idx]
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == self.vertex_count

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)}"]
        for u, v, w in self.edges:
            lines.append(f"{u} {v} {w!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MetricGraph":
        lines = text.splitlines()
        if not lines or not lines[0].strip():
            raise ParseError("empty graph file", line=1)
        header = lines[0].split()
        if len(header) != 2:
            raise ParseError("expected 'V E'", line=1)
        try:
            vcount, ecount = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("non-integer header", line=1) from None
        edges = []
        for k in range(1, len(lines)):
            ln = lines[k].strip()
            if not ln:
                continue
            toks = ln.split()
            if len(toks) != 3:
                raise ParseError("expected 'u v length'", line=k + 1)
            try:
                u, v, w = int(toks[0]), int(toks[1]), float(toks[2])
            except ValueError:
                raise ParseError("bad edge tokens", line=k + 1) from None
            edges.append((u, v, w))
        if len(edges) != ecount:
            raise ParseError(
                f"declared {ecount} edges, found {len(edges)}", line=len(lines)
            )
        try:
            return cls(vcount, tuple(edges))
        except ValueError as exc:
            raise ParseError(str(exc), line=1) from exc


@dataclass(frozen=True)
class CycleBasisCertificate:
    """Cycles forming a rank-b basis together with the theorem bound."""

    cycles: tuple[Cycle, ...]
    lengths: tuple[float, ...]
    product: float
    bound: float
    independence_rank: int

    @property
    def bound_holds(self) -> bool:
        return self.product <= self.bound


def betti1(graph: MetricGraph) -> int:
    """Cycle rank |E| - |V| + 1 of a connected graph."""
    return len(graph.edges) - graph.vertex_count + 1


def total_length(graph: MetricGraph) -> float:
    return math.fsum(w for _, _, w in graph.edges)


def cycle_length(graph: MetricGraph, cycle: Sequence[int]) -> float:
    return math.fsum(graph.edges[i][2] for i in cycle)


def is_embedded_cycle(graph: MetricGraph, cycle: Sequence[int]) -> bool:
    """Closed embedded path: every touched vertex has degree exactly 2
    within the cycle and the cycle's edges are connected."""
    edge_set = set(cycle)
    if not edge_set:
        return False
    degree: dict[int, int] = {}
    for i in edge_set:
        u, v, _ = graph.edges[i]
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    if any(d != 2 for d in degree.values()):
        return False
    adj: dict[int, list[int]] = {v: [] for v in degree}
    for i in edge_set:
        u, v, _ = graph.edges[i]
        adj[u].append(v)
        adj[v].append(u)
    start = next(iter(degree))
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(degree)


def _dijkstra(
    graph: MetricGraph, alive: FrozenSet[int], source: int, banned: int
) -> tuple[list[float], list[tuple[int, int]]]:
    """Shortest distances from source avoiding one banned edge index.

    Returns (dist, pred) with pred[v] = (previous vertex, edge index).
    """
    adj: dict[int, list[tuple[int, int, float]]] = {
        v: [] for v in range(graph.vertex_count)
    }
    for idx in alive:
        if idx == banned:
            continue
        u, v, w = graph.edges[idx]
        adj[u].append((v, idx, w))
        adj[v].append((u, idx, w))
    dist = [math.inf] * graph.vertex_count
    pred: list[tuple[int, int]] = [(-1, -1)] * graph.vertex_count
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, cur = heapq.heappop(heap)
        if d > dist[cur]:
            continue
        for nxt, idx, w in adj[cur]:
            nd = d + w
            if nd < dist[nxt]:
                dist[nxt] = nd
                pred[nxt] = (cur, idx)
                heapq.heappush(heap, (nd, nxt))
    return dist, pred


def _shortest_cycle_in(
    graph: MetricGraph, alive: FrozenSet[int]
) -> tuple[Cycle, float]:
    best: tuple[float, tuple[int, ...]] | None = None
    for idx in sorted(alive):
        u, v, w = graph.edges[idx]
        if u == v:
            edge_tuple = (idx,)
        else:
            dist, pred = _dijkstra(graph, alive, u, idx)
            if math.isinf(dist[v]):
                continue
            path = [idx]
            cur = v
            while cur != u:
                prev, eidx = pred[cur]
                path.append(eidx)
                cur = prev
            edge_tuple = tuple(sorted(path))
        # Canonical length: fsum over the edge set, independent of the
        # order Dijkstra accumulated it in.
        candidate = (cycle_length(graph, edge_tuple), edge_tuple)
        if best is None or candidate < best:
            best = candidate
    if best is None:
        raise AcyclicError("graph has no cycle")
    return frozenset(best[1]), best[0]


def shortest_cycle(graph: MetricGraph) -> tuple[Cycle, float]:
    """Minimum-length cycle: min over edges e = (u, v) of len(e) plus the
    u-v distance avoiding e; ties broken on sorted edge indices."""
    if betti1(graph) < 1:
        raise AcyclicError("graph has no cycle")
    return _shortest_cycle_in(graph, frozenset(range(len(graph.edges))))


def length_product_bound(b: int, graph_length: float) -> float:
    """Right side of the greedy length-product inequality.

    b >= 2: 4^(b-1)/(b-1)! * prod_{k=2..b} log2(k) * total^b;
    b = 1 degenerates to the total length itself.
    """
    if b < 1:
        raise AcyclicError("bound needs cycle rank >= 1")
    if b == 1:
        return graph_length
    log_prod = 1.0
    for k in range(2, b + 1):
        log_prod *= math.log2(k)
    return 4.0 ** (b - 1) / math.factorial(b - 1) * log_prod * graph_length**b


def greedy_homology_basis(graph: MetricGraph) -> CycleBasisCertificate:
    """Peel shortest cycles, deleting the heaviest cycle edge each round.

    The recorded cycles live on the original edge set, are independent of
    rank b over GF(2), and for b >= 2 their length product is checked
    against the certified bound (reported, not assumed, for multigraphs).
    """
    b = betti1(graph)
    if b < 1:
        raise AcyclicError("graph has no cycle")
    alive = frozenset(range(len(graph.edges)))
    cycles: list[Cycle] = []
    lengths: list[float] = []
    for step in range(b):
        cycle, length = _shortest_cycle_in(graph, alive)
        cycles.append(cycle)
        lengths.append(length)
        # Heaviest edge of the cycle; ties to the smallest index.
        drop = max(cycle, key=lambda i: (graph.edges[i][2], -i))
        alive = alive - {drop}
        remaining_b = len(alive) - graph.vertex_count + 1
        if remaining_b != b - step - 1 or not graph._is_connected(alive):
            raise RuntimeError("edge deletion broke the induction invariant")
    rank = verify_independence(graph, cycles)
    if rank != b:
        raise RuntimeError("greedy cycles are not independent")
    product = math.prod(lengths)
    bound = length_product_bound(b, total_length(graph))
    return CycleBasisCertificate(
        cycles=tuple(cycles),
        lengths=tuple(lengths),
        product=product,
        bound=bound,
        independence_rank=rank,
    )


def enumerate_embedded_cycles(graph: MetricGraph) -> list[tuple[Cycle, float]]:
    """All embedded cycles, found by scanning the full GF(2) cycle space.

    Only usable at desk scale: the space has 2^b - 1 nonzero elements.
    """
    b = betti1(graph)
    if b > 8:
        raise TooLargeError(f"cycle rank {b} exceeds oracle limit 8")
    if b < 1:
        raise AcyclicError("graph has no cycle")
    # Fundamental cycles from a spanning tree (as edge bitmasks).
    parent_edge = {0: -1}
    order = [0]
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(graph.vertex_count)}
    for idx, (u, v, _) in enumerate(graph.edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    tree_edges: set[int] = set()
    stack = [0]
    seen = {0}
    while stack:
        cur = stack.pop()
        for nxt, idx in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                tree_edges.add(idx)
                parent_edge[nxt] = idx
                stack.append(nxt)
    # Path masks from root to every vertex, walking the tree.
    path_mask = [0] * graph.vertex_count
    tree_adj: dict[int, list[tuple[int, int]]] = {
        v: [] for v in range(graph.vertex_count)
    }
    for idx in tree_edges:
        u, v, _ = graph.edges[idx]
        tree_adj[u].append((v, idx))
        tree_adj[v].append((u, idx))
    seen = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for nxt, idx in tree_adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                path_mask[nxt] = path_mask[cur] ^ (1 << idx)
                stack.append(nxt)
    fundamental = []
    for idx, (u, v, _) in enumerate(graph.edges):
        if idx not in tree_edges:
            fundamental.append((1 << idx) | path_mask[u] ^ path_mask[v])
    assert len(fundamental) == b

    cycles = []
    for combo in range(1, 1 << b):
        mask = 0
        for k in range(b):
            if (combo >> k) & 1:
                mask ^= fundamental[k]
        edge_set = frozenset(i for i in range(len(graph.edges)) if (mask >> i) & 1)
        if edge_set and is_embedded_cycle(graph, edge_set):
            cycles.append((edge_set, cycle_length(graph, edge_set)))
    cycles.sort(key=lambda c: (c[1], tuple(sorted(c[0]))))
    return cycles


def min_cycle_basis(graph: MetricGraph) -> CycleBasisCertificate:
    """Successive-minima basis: shortest embedded cycles kept greedily
    while they stay independent over GF(2).  Desk-scale oracle (b <= 8)."""
    b = betti1(graph)
    if b < 1:
        raise AcyclicError("graph has no cycle")
    candidates = enumerate_embedded_cycles(graph)
    n_edges = len(graph.edges)
    kept: list[Cycle] = []
    lengths: list[float] = []
    masks: list[int] = []
    for edge_set, length in candidates:
        mask = 0
        for i in edge_set:
            mask |= 1 << i
        trial = masks + [mask]
        if gf2.rank(gf2.BitMatrix(len(trial), n_edges, tuple(trial))) == len(trial):
            kept.append(edge_set)
            lengths.append(length)
            masks.append(mask)
        if len(kept) == b:
            break
    if len(kept) != b:
        raise RuntimeError("embedded cycles failed to span the cycle space")
    return CycleBasisCertificate(
        cycles=tuple(kept),
        lengths=tuple(lengths),
        product=math.prod(lengths),
        bound=length_product_bound(b, total_length(graph)),
        independence_rank=b,
    )


def verify_independence(graph: MetricGraph, cycles: Sequence[Cycle]) -> int:
    """GF(2) rank of the cycles' edge-indicator vectors."""
    vectors = []
    for cycle in cycles:
        vectors.append([1 if i in cycle else 0 for i in range(len(graph.edges))])
    return gf2.rank_of_vectors(vectors, len(graph.edges))


def bst_bound(graph: MetricGraph) -> float:
    """Systolic upper bound 4 log2(b)/(b-1) * total length, for b >= 2."""
    b = betti1(graph)
    if b < 2:
        raise AcyclicError("systolic bound needs cycle rank >= 2")
    return 4.0 * math.log2(b) / (b - 1) * total_length(graph)
