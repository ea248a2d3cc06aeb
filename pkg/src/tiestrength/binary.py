"""Binary strong/weak labeling: the wedge graph, greedy covers and an exact
branch-and-bound for small graphs.

Labeling edges strong so that no wedge has two strong edges is the same as
picking an independent set in the wedge graph, whose nodes are the edges
of ``G`` and whose links are the wedges.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Graph, Wedge, enumerate_wedges
from .lp import LinearProgram, _edge_vars, _wedge_rows
from .simplex import solve


@dataclass(frozen=True)
class WedgeGraph:
    node_count: int
    links: tuple[tuple[int, int], ...]

    def neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.node_count)]
        for a, b in self.links:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class BinaryAssignment:
    graph: Graph
    strong: tuple[bool, ...]

    @property
    def objective(self) -> int:
        return sum(self.strong)

    @property
    def weak_count(self) -> int:
        return len(self.strong) - self.objective

    def value(self, eid: int) -> int:
        return int(self.strong[eid])

    def violations(self, wedges: Sequence[Wedge]) -> list[Wedge]:
        idx = self.graph.edge_index
        return [w for w in wedges if self.strong[idx[w.edges[0]]] and self.strong[idx[w.edges[1]]]]


def build_wedge_graph(g: Graph, wedges: Sequence[Wedge] | None = None) -> WedgeGraph:
    if wedges is None:
        wedges = enumerate_wedges(g)
    idx = g.edge_index
    links = set()
    for w in wedges:
        a, b = sorted(idx[e] for e in w.edges)
        links.add((a, b))
    return WedgeGraph(g.edge_count, tuple(sorted(links)))


def matching_weak_set(wg: WedgeGraph) -> list[bool]:
    """Maximal matching over the links in sorted order; matched nodes are weak.

    The matched nodes cover every link, so the weak set is a vertex cover of
    the wedge graph of at most twice the minimum size.
    """
    matched = [False] * wg.node_count
    for a, b in wg.links:
        if not matched[a] and not matched[b]:
            matched[a] = matched[b] = True
    return matched


def degree_weak_set(wg: WedgeGraph) -> list[bool]:
    """Repeatedly mark the node with the most uncovered links weak (lowest
    edge id on ties) until every link is covered."""
    adj = [set(a) for a in wg.neighbors()]
    heap = [(-len(a), e) for e, a in enumerate(adj) if a]
    heapq.heapify(heap)
    weak = [False] * wg.node_count
    while heap:
        negdeg, e = heapq.heappop(heap)
        if weak[e] or -negdeg != len(adj[e]):
            if not weak[e] and adj[e]:
                heapq.heappush(heap, (-len(adj[e]), e))
            continue
        weak[e] = True
        for f in adj[e]:
            adj[f].discard(e)
        adj[e].clear()
    return weak


GREEDY_RULES = ("best", "degree", "matching")


def greedy_binary(g: Graph, wg: WedgeGraph | None = None, rule: str = "best") -> BinaryAssignment:
    """Polynomial-time STC labeling.

    ``"degree"`` is the max-degree vertex-cover heuristic, ``"matching"`` the
    maximal-matching cover with its factor-2 guarantee on the number of weak
    edges. ``"best"`` runs both and keeps the one with more strong edges
    (the degree rule on ties), so it inherits the guarantee.
    """
    if rule not in GREEDY_RULES:
        raise ValueError(f"unknown greedy rule {rule!r}")
    if wg is None:
        wg = build_wedge_graph(g)
    if rule == "matching":
        weak = matching_weak_set(wg)
    elif rule == "degree":
        weak = degree_weak_set(wg)
    else:
        weak = min(degree_weak_set(wg), matching_weak_set(wg), key=sum)
    return BinaryAssignment(g, tuple(not w for w in weak))


class TooLarge(ValueError):
    pass


def exact_binary(g: Graph, wedges: Sequence[Wedge] | None = None,
                 limit_edges: int = 30) -> BinaryAssignment:
    """Maximum number of strong edges, by branch-and-bound.

    Edges are branched on in order of decreasing wedge degree, strong first.
    A strong label forces its wedge neighbours weak. Each node is bounded by
    the LP1 relaxation with the decided labels fixed.
    """
    if g.edge_count > limit_edges:
        raise TooLarge(f"exact search is limited to {limit_edges} edges, graph has {g.edge_count}")
    if wedges is None:
        wedges = enumerate_wedges(g)
    wg = build_wedge_graph(g, wedges)
    adj = wg.neighbors()
    m = g.edge_count
    order = sorted(range(m), key=lambda e: (-len(adj[e]), e))
    best = list(greedy_binary(g, wg).strong)
    best_val = sum(best)
    # LP1 bound; built directly because clique components are allowed here
    lp = LinearProgram(tuple(_edge_vars(g, Fraction(0), Fraction(1))), tuple(_wedge_rows(g, wedges)),
                       "lp1")
    one, zero = Fraction(1), Fraction(0)

    def bound(labels):
        fixed = {e: (one, one) if v else (zero, zero) for e, v in enumerate(labels) if v is not None}
        res = solve(lp.with_bounds(fixed))
        return math.floor(res.objective) if res.optimal else -1

    def search(labels, pos):
        nonlocal best, best_val
        while pos < m and labels[order[pos]] is not None:
            pos += 1
        if pos == m:
            val = sum(1 for v in labels if v)
            if val > best_val:
                best, best_val = [bool(v) for v in labels], val
            return
        free = sum(1 for v in labels if v is None)
        if sum(1 for v in labels if v) + free <= best_val:
            return
        if bound(labels) <= best_val:
            return
        e = order[pos]
        if all(labels[f] is not True for f in adj[e]):
            nxt = list(labels)
            nxt[e] = True
            for f in adj[e]:
                nxt[f] = False
            search(nxt, pos + 1)
        nxt = list(labels)
        nxt[e] = False
        search(nxt, pos + 1)

    if m:
        # edges outside every wedge are strong in some optimum
        labels = [True if not adj[e] else None for e in range(m)]
        search(labels, 0)
    return BinaryAssignment(g, tuple(best))
