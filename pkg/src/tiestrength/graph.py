"""Graph representation, edge-list ingestion and the structural queries the
tie-strength formulations are built from: wedges, triangles, edge classes,
triangle cliques, bundles, clique components and the contracted graph.
"""

from __future__ import annotations

import enum
import io
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, TextIO

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


class EdgeListError(ValueError):
    """Raised for unreadable edge-list input."""


class StructureError(RuntimeError):
    """A structural invariant failed; this points at a bug upstream."""


def canon(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


class Graph:
    """Undirected simple graph on nodes ``0 .. node_count - 1``.

    Edges are stored as sorted ``(i, j)`` pairs with ``i < j``, in
    lexicographic order; the position of an edge in :attr:`edges` is its
    edge id.
    """

    def __init__(self, node_count: int, edges: Iterable[Edge],
                 node_labels: Iterable[str] | None = None):
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        es = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise ValueError(f"edge ({i}, {j}) out of range")
            es.add(canon(i, j))
        self.node_count = node_count
        self.edges: tuple[Edge, ...] = tuple(sorted(es))
        self.edge_index: dict[Edge, int] = {e: k for k, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(node_count)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._nbr_sets = [frozenset(a) for a in self.adjacency]
        if node_labels is None:
            self.node_labels: tuple[str, ...] = tuple(str(i) for i in range(node_count))
        else:
            self.node_labels = tuple(node_labels)
            if len(self.node_labels) != node_count:
                raise ValueError("one label per node required")

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={len(self.edges)})"

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.node_count == other.node_count
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.node_count, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self._nbr_sets[i]

    def neighbors(self, i: int) -> frozenset[int]:
        return self._nbr_sets[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def edge_id(self, i: int, j: int) -> int:
        return self.edge_index[canon(i, j)]

    def label(self, i: int) -> str:
        return self.node_labels[i]

    def without_edges(self, drop: Iterable[Edge]) -> "Graph":
        """Same node set and labels with the given edges removed."""
        drop = {canon(*e) for e in drop}
        return Graph(self.node_count, (e for e in self.edges if e not in drop),
                     self.node_labels)

    def components(self) -> list[list[int]]:
        """Connected components as sorted node lists, ordered by smallest node."""
        seen = [False] * self.node_count
        out = []
        for s in range(self.node_count):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            out.append(sorted(comp))
        return out


# --------------------------------------------------------------------------
# ingestion

class GroundTruth:
    """Externally supplied weight per edge (exact decimal values)."""

    def __init__(self, weights: dict[Edge, Fraction]):
        self.weights = dict(weights)

    def __len__(self):
        return len(self.weights)

    def get(self, e: Edge):
        return self.weights.get(canon(*e))

    @property
    def range(self) -> tuple[Fraction, Fraction] | None:
        if not self.weights:
            return None
        return min(self.weights.values()), max(self.weights.values())


class EdgeList(NamedTuple):
    graph: Graph
    ground_truth: GroundTruth | None
    warnings: list[str]


_SPLIT = re.compile(r"[\t ,]+")


def load_edge_list(source: TextIO | str, weighted: bool = False) -> EdgeList:
    """Read an edge list: one ``u v [weight]`` per line.

    Separators may be tabs, spaces or commas; ``#`` lines and blank lines are
    skipped. Node tokens are remapped to dense ids in order of first
    appearance. Duplicate edges and self-loops are dropped, each counted as a
    warning. With ``weighted`` the third column is required and returned as
    ground truth.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    ids: dict[str, int] = {}
    labels: list[str] = []
    edges: list[Edge] = []
    seen: set[Edge] = set()
    weights: dict[Edge, Fraction] = {}
    warnings: list[str] = []

    def node(tok: str) -> int:
        if tok not in ids:
            ids[tok] = len(labels)
            labels.append(tok)
        return ids[tok]

    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in _SPLIT.split(line) if p]
        if len(parts) < 2 or len(parts) > 3 or (weighted and len(parts) != 3):
            raise EdgeListError(f"line {lineno}: expected 'u v{' weight' if weighted else ' [weight]'}', got {raw.rstrip()!r}")
        w = None
        if weighted:
            try:
                w = Fraction(parts[2])
            except (ValueError, ZeroDivisionError):
                raise EdgeListError(f"line {lineno}: bad weight {parts[2]!r}") from None
        if parts[0] == parts[1]:
            warnings.append(f"line {lineno}: self-loop on {parts[0]!r} dropped")
            continue
        e = canon(node(parts[0]), node(parts[1]))
        if e in seen:
            warnings.append(f"line {lineno}: duplicate edge {parts[0]!r}-{parts[1]!r} dropped")
            continue
        seen.add(e)
        edges.append(e)
        if w is not None:
            weights[e] = w
    if not edges:
        raise EdgeListError("edge list contains no edges")
    for msg in warnings:
        logger.warning(msg)
    g = Graph(len(labels), edges, labels)
    return EdgeList(g, GroundTruth(weights) if weighted else None, warnings)


def read_edge_list(path, weighted: bool = False) -> EdgeList:
    with open(path, encoding="utf-8") as f:
        return load_edge_list(f, weighted=weighted)


# --------------------------------------------------------------------------
# wedges and triangles

class Wedge(NamedTuple):
    """Open triple: edges {root, j} and {root, k} present, {j, k} absent; j < k."""
    root: int
    j: int
    k: int

    @property
    def endpoints(self) -> Edge:
        return (self.j, self.k)

    @property
    def edges(self) -> tuple[Edge, Edge]:
        return canon(self.root, self.j), canon(self.root, self.k)


class Triangle(NamedTuple):
    i: int
    j: int
    k: int

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        return (self.i, self.j), (self.i, self.k), (self.j, self.k)


def enumerate_wedges(g: Graph) -> list[Wedge]:
    """All wedges, sorted by (root, j, k)."""
    out = []
    for i in range(g.node_count):
        nb = g.adjacency[i]
        for a in range(len(nb)):
            j = nb[a]
            nj = g.neighbors(j)
            for k in nb[a + 1:]:
                if k not in nj:
                    out.append(Wedge(i, j, k))
    return out


def enumerate_triangles(g: Graph) -> list[Triangle]:
    """All triangles, sorted; each edge (i, j) is intersected with ids > j."""
    out = []
    for i, j in g.edges:
        common = g.neighbors(i) & g.neighbors(j)
        for k in sorted(common):
            if k > j:
                out.append(Triangle(i, j, k))
    return out


def absent_pairs(wedges: Iterable[Wedge]) -> list[Edge]:
    """Distinct wedge endpoint pairs, sorted."""
    return sorted({w.endpoints for w in wedges})


# --------------------------------------------------------------------------
# edge classes, triangle cliques, bundles

class EdgeClass(enum.Enum):
    TRIANGLE = "triangle"
    WEDGE = "wedge"
    ISOLATED_CLIQUE = "isolated-clique"


@dataclass(frozen=True)
class EdgeClassification:
    classes: tuple[EdgeClass, ...]          # by edge id
    in_triangle: tuple[bool, ...]
    in_wedge: tuple[bool, ...]

    def of(self, g: Graph, i: int, j: int) -> EdgeClass:
        return self.classes[g.edge_id(i, j)]

    def is_triangle_edge(self, eid: int) -> bool:
        """In a triangle and in no wedge (also true inside clique components)."""
        return self.in_triangle[eid] and not self.in_wedge[eid]

    def count(self, cls: EdgeClass) -> int:
        return sum(c is cls for c in self.classes)


def detect_clique_components(g: Graph) -> list[list[int]]:
    """Connected components with at least two nodes that are complete graphs."""
    out = []
    for comp in g.components():
        k = len(comp)
        if k < 2:
            continue
        m = sum(g.degree(u) for u in comp) // 2
        if m == k * (k - 1) // 2:
            out.append(comp)
    return out


def strip_clique_components(g: Graph) -> tuple[Graph, list[list[int]]]:
    """Remove the edges of every clique component; node ids are kept."""
    comps = detect_clique_components(g)
    if not comps:
        return g, comps
    drop = [e for comp in comps for e in combinations(comp, 2)]
    return g.without_edges(drop), comps


def classify_edges(g: Graph, wedges: Iterable[Wedge] | None = None,
                   triangles: Iterable[Triangle] | None = None) -> EdgeClassification:
    if wedges is None:
        wedges = enumerate_wedges(g)
    if triangles is None:
        triangles = enumerate_triangles(g)
    m = g.edge_count
    in_w = [False] * m
    in_t = [False] * m
    for w in wedges:
        for e in w.edges:
            in_w[g.edge_index[e]] = True
    for t in triangles:
        for e in t.edges:
            in_t[g.edge_index[e]] = True
    clique_nodes = {u for comp in detect_clique_components(g) for u in comp}
    classes = []
    for eid, (i, j) in enumerate(g.edges):
        if i in clique_nodes:
            classes.append(EdgeClass.ISOLATED_CLIQUE)
        elif in_w[eid]:
            classes.append(EdgeClass.WEDGE)
        elif in_t[eid]:
            classes.append(EdgeClass.TRIANGLE)
        else:
            raise StructureError(f"edge {(i, j)} in no wedge, no triangle, no clique component")
    return EdgeClassification(tuple(classes), tuple(in_t), tuple(in_w))


@dataclass(frozen=True)
class TriangleClique:
    id: int
    members: tuple[int, ...]

    @property
    def edges(self) -> list[Edge]:
        return list(combinations(self.members, 2))

    def __len__(self):
        return len(self.members)


def triangle_cliques(g: Graph, classification: EdgeClassification | None = None) -> list[TriangleClique]:
    """Components of the subgraph induced by triangle edges.

    Each component is checked to be complete on its members, with every
    member pair a triangle edge.
    """
    if classification is None:
        classification = classify_edges(g)
    parent = list(range(g.node_count))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    touched = set()
    for eid, (i, j) in enumerate(g.edges):
        if classification.is_triangle_edge(eid):
            touched.update((i, j))
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for u in sorted(touched):
        groups.setdefault(find(u), []).append(u)
    cliques = []
    for members in sorted(groups.values()):
        for a, b in combinations(members, 2):
            if not g.has_edge(a, b) or not classification.is_triangle_edge(g.edge_id(a, b)):
                raise StructureError(f"triangle-edge component {members} is not a clique")
        cliques.append(TriangleClique(len(cliques), tuple(members)))
    return cliques


@dataclass(frozen=True)
class Bundle:
    clique_id: int
    neighbor: int
    rays: tuple[Edge, ...]


def bundles(g: Graph, cliques: Iterable[TriangleClique]) -> list[Bundle]:
    out = []
    for c in cliques:
        members = set(c.members)
        external = sorted({k for i in c.members for k in g.neighbors(i)} - members)
        for k in external:
            nk = g.neighbors(k)
            if not members <= nk:
                raise StructureError(f"node {k} sees only part of triangle clique {c.members}")
            out.append(Bundle(c.id, k, tuple(canon(k, i) for i in c.members)))
    return out


# --------------------------------------------------------------------------
# contraction

@dataclass(frozen=True)
class ContractedGraph:
    """Quotient of a graph by the relation "joined by a triangle edge".

    ``quotient`` is the contracted graph itself as a :class:`Graph` whose node
    ``A`` stands for ``super_nodes[A]``.
    """
    original: Graph
    super_nodes: tuple[tuple[int, ...], ...]
    back_map: tuple[int, ...]
    quotient: Graph = field(repr=False)

    @property
    def multiplicity(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.super_nodes)

    @property
    def super_edges(self) -> tuple[Edge, ...]:
        return self.quotient.edges

    def edge_weight(self, a: int, b: int) -> int:
        return len(self.super_nodes[a]) * len(self.super_nodes[b])

    def clique_weight(self, a: int) -> int:
        k = len(self.super_nodes[a])
        return k * (k - 1) // 2


def contract(g: Graph, cliques: Iterable[TriangleClique] | None = None) -> ContractedGraph:
    if cliques is None:
        cliques = triangle_cliques(g)
    back = [-1] * g.node_count
    groups: list[tuple[int, ...]] = [c.members for c in cliques]
    in_clique = {u for grp in groups for u in grp}
    groups.extend((u,) for u in range(g.node_count) if u not in in_clique)
    groups.sort()
    for a, grp in enumerate(groups):
        for u in grp:
            back[u] = a
    cross: dict[Edge, int] = {}
    for i, j in g.edges:
        a, b = back[i], back[j]
        if a != b:
            key = canon(a, b)
            cross[key] = cross.get(key, 0) + 1
    for (a, b), n in cross.items():
        if n != len(groups[a]) * len(groups[b]):
            raise StructureError(f"super-nodes {groups[a]} and {groups[b]} only partially joined")
    labels = ["+".join(g.label(u) for u in grp) for grp in groups]
    quotient = Graph(len(groups), cross.keys(), labels)
    return ContractedGraph(g, tuple(groups), tuple(back), quotient)


# --------------------------------------------------------------------------
# report

def analyze(g: Graph) -> dict:
    """Structural summary used by the ``analyze`` command."""
    wedges = enumerate_wedges(g)
    triangles = enumerate_triangles(g)
    cls = classify_edges(g, wedges, triangles)
    comps = detect_clique_components(g)
    core, _ = strip_clique_components(g)
    cliques = triangle_cliques(core)
    bs = bundles(core, cliques)
    cg = contract(core, cliques)
    return {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "wedges": len(wedges),
        "triangles": len(triangles),
        "absent_pairs": len(absent_pairs(wedges)),
        "edge_classes": {c.value: cls.count(c) for c in EdgeClass},
        "triangle_clique_sizes": [len(c) for c in cliques],
        "bundles": len(bs),
        "contracted": {
            "super_nodes": len(cg.super_nodes),
            "super_edges": len(cg.super_edges),
        },
        "clique_components": [[g.label(u) for u in comp] for comp in comps],
    }
