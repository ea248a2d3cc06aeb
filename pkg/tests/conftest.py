import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tiestrength import datasets
from tiestrength.graph import Graph, strip_clique_components

TOY_EDGES = [(1, 2), (2, 3), (2, 4), (1, 4), (3, 4), (4, 5), (5, 6), (5, 7), (5, 8),
             (6, 7), (6, 8), (7, 8)]


def graph_from(edges, labels=None):
    nodes = sorted({u for e in edges for u in e})
    ids = {u: k for k, u in enumerate(nodes)}
    return Graph(len(nodes), [(ids[u], ids[v]) for u, v in edges],
                 [str(u) for u in nodes] if labels is None else labels)


def edge_by_label(g, u, v):
    idx = {lab: k for k, lab in enumerate(g.node_labels)}
    i, j = idx[str(u)], idx[str(v)]
    return (i, j) if i < j else (j, i)


@pytest.fixture(scope="session")
def toy():
    return datasets.toy().graph


@pytest.fixture(scope="session")
def lesmis():
    return datasets.lesmis()


def path3():
    return graph_from([("a", "b"), ("b", "c")], ["a", "b", "c"])


def star(k):
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def triangle_plus_pendant():
    return Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])


Z = range(1, 7)
X = range(7, 10)
B1, B2 = 10, 11


def figure2_graph():
    """y joined to every node of a 6-clique z and a 3-clique x; b1 and b2 are
    each joined to all of x."""
    edges = [(0, z) for z in Z] + [(0, x) for x in X]
    edges += list(itertools.combinations(Z, 2)) + list(itertools.combinations(X, 2))
    edges += [(b, x) for b in (B1, B2) for x in X]
    labels = ["y"] + [f"z{k}" for k in range(1, 7)] + [f"x{k}" for k in range(1, 4)] + ["b1", "b2"]
    return Graph(12, edges, labels)


def figure2_unequal_bundles(g):
    """The unequal-bundle LP2 (d=2) optimum drawn with that graph."""
    w = {}
    for e in g.edges:
        i, j = e
        if i == 0:
            w[e] = Fraction(1) if j in Z else Fraction(0)
        elif i in Z:
            w[e] = Fraction(3)
        elif j in X:
            w[e] = Fraction(2)
    third = {B1: (Fraction(1, 3), Fraction(2, 3), Fraction(1, 3)),
             B2: (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3))}
    for b, vals in third.items():
        for x, v in zip(X, vals):
            w[(x, b)] = v
    return w


def erdos_renyi(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def er_corpus(count=200, seed=20240611):
    """Seeded random graphs with n in [6, 30], p in {0.2, 0.4}, clique
    components removed; graphs left without edges are skipped."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(6, 30)
        p = rng.choice((0.2, 0.4))
        core, _ = strip_clique_components(erdos_renyi(rng, n, p))
        if core.edge_count:
            out.append(core)
    return out


@st.composite
def small_graphs(draw, min_nodes=3, max_nodes=9, max_edges=None):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges or len(pairs)))
    return Graph(n, chosen)


def brute_wedges(g):
    out = set()
    for i in range(g.node_count):
        for j, k in itertools.combinations(range(g.node_count), 2):
            if i in (j, k):
                continue
            if g.has_edge(i, j) and g.has_edge(i, k) and not g.has_edge(j, k):
                out.add((i, j, k))
    return out


def brute_triangles(g):
    return {t for t in itertools.combinations(range(g.node_count), 3)
            if g.has_edge(t[0], t[1]) and g.has_edge(t[0], t[2]) and g.has_edge(t[1], t[2])}


def brute_stc_max(g):
    """Maximum number of strong edges by enumerating every labeling."""
    wedges = brute_wedges(g)
    idx = g.edge_index
    pairs = [(idx[(min(i, j), max(i, j))], idx[(min(i, k), max(i, k))]) for i, j, k in wedges]
    best = 0
    for bits in range(1 << g.edge_count):
        if all(not ((bits >> a) & 1 and (bits >> b) & 1) for a, b in pairs):
            best = max(best, bin(bits).count("1"))
    return best


def scipy_max(lp):
    """Floating-point oracle: optimum of an LP via scipy's HiGHS."""
    import numpy as np
    from scipy.optimize import linprog
    n = lp.num_vars
    c = -np.array([float(v.objective) for v in lp.variables])
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in lp.constraints:
        r = np.zeros(n)
        for j, v in row.coeffs:
            r[j] += float(v)
        (a_eq if row.sense == "==" else a_ub).append(r)
        (b_eq if row.sense == "==" else b_ub).append(float(row.rhs))
    bounds = [(None if v.lower is None else float(v.lower), None if v.upper is None else float(v.upper))
              for v in lp.variables]
    res = linprog(c, A_ub=np.array(a_ub) if a_ub else None, b_ub=b_ub or None,
                  A_eq=np.array(a_eq) if a_eq else None, b_eq=b_eq or None,
                  bounds=bounds, method="highs")
    if res.status == 3:
        return "unbounded"
    if res.status == 2:
        return "infeasible"
    return -res.fun


HALF_GRID = {Fraction(0), Fraction(1, 2), Fraction(1)}


def triangle_levels(d):
    d = Fraction(d)
    return {Fraction(2), (d + 3) / 2, d + 1}


# toy strengths drawn in the toy-example figure, keyed by node labels
H = Fraction(1, 2)
FIG3B = {(1, 2): H, (2, 3): H, (2, 4): 1, (1, 4): H, (3, 4): H, (4, 5): 0, (5, 6): 1, (5, 7): 1,
         (5, 8): 1, (6, 7): 1, (6, 8): 1, (7, 8): 1}
FIG3C = {e: (Fraction(2) if e in ((6, 7), (6, 8), (7, 8)) else Fraction(v)) for e, v in FIG3B.items()}
FIG3D = {e: (Fraction(-1) if e == (4, 5) else Fraction(2)) for e in FIG3B}
FIG3D_ADDED = {(1, 3): Fraction(2)}


def by_label(g, values):
    """Translate a label-keyed dict to node-id edges."""
    return {edge_by_label(g, u, v): Fraction(w) for (u, v), w in values.items()}


def values_from_labels(lp, g, edges, absent=None, default_absent=None):
    ids = by_label(g, edges)
    extra = by_label(g, absent or {})
    out = []
    for var in lp.variables:
        kind, i, j = var.tag
        if kind == "edge":
            out.append(ids[(i, j)])
        else:
            out.append(extra.get((i, j), default_absent))
    return out
