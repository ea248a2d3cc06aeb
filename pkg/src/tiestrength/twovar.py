"""Integer programs with two variables per constraint, solved by minimum cut.

A system maximizes ``sum d_i x_i`` over integers ``l_i <= x_i <= u_i``
subject to constraints ``a x_i - b x_j >= c``. A constraint is monotone when
``a`` and ``b`` have the same sign; monotone systems are solved exactly by a
single minimum cut. Non-monotone systems are first doubled into a monotone
one whose optimum gives a half-integral solution of the original relaxation.

``solve_lp1_hn`` and ``solve_lp2sym_hn`` apply this to the tie-strength
relaxations whose constraints have the required shape.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

from .graph import ContractedGraph, Graph, Wedge
from .lp import (LinearProgram, Params, StrengthAssignment, assignment_from_values,
                 build_lp1, build_lp2sym, check_feasible, expand_symmetric_solution)


class MalformedSystem(ValueError):
    pass


@dataclass(frozen=True)
class TwoVarConstraint:
    """``a * x[i] - b * x[j] >= c``."""
    a: Fraction
    i: int
    b: Fraction
    j: int
    c: Fraction

    @property
    def monotone(self) -> bool:
        return self.a * self.b > 0

    def holds(self, x: Sequence) -> bool:
        return self.a * x[self.i] - self.b * x[self.j] >= self.c


@dataclass(frozen=True)
class TwoVarVariable:
    name: str
    lower: int
    upper: int
    objective: Fraction = Fraction(0)


@dataclass
class TwoVarSystem:
    variables: list[TwoVarVariable]
    constraints: list[TwoVarConstraint]

    def __post_init__(self):
        n = len(self.variables)
        for v in self.variables:
            if v.lower > v.upper:
                raise MalformedSystem(f"{v.name}: lower bound {v.lower} above upper bound {v.upper}")
        for k in self.constraints:
            if k.i == k.j:
                raise MalformedSystem(f"constraint uses x{k.i} twice")
            if not (0 <= k.i < n and 0 <= k.j < n):
                raise MalformedSystem("constraint references an undeclared variable")

    @property
    def monotone(self) -> bool:
        return all(k.monotone for k in self.constraints)

    def objective(self, x: Sequence) -> Fraction:
        return sum((v.objective * xv for v, xv in zip(self.variables, x)), Fraction(0))

    def feasible(self, x: Sequence) -> bool:
        return (all(v.lower <= xv <= v.upper for v, xv in zip(self.variables, x))
                and all(k.holds(x) for k in self.constraints))


def monotonize(sys: TwoVarSystem) -> TwoVarSystem:
    """Double every variable into ``x+`` (index ``2i``) and ``x-`` (``2i+1``).

    On ``x+ = x``, ``x- = -x`` every new constraint reduces to an original
    one, so ``x = (x+ - x-)/2`` maps solutions back.
    """
    vs = []
    for v in sys.variables:
        half = Fraction(v.objective) / 2
        vs.append(TwoVarVariable(v.name + "+", v.lower, v.upper, half))
        vs.append(TwoVarVariable(v.name + "-", -v.upper, -v.lower, -half))
    cs = []
    for k in sys.constraints:
        ip, im, jp, jm = 2 * k.i, 2 * k.i + 1, 2 * k.j, 2 * k.j + 1
        if k.monotone:
            cs.append(TwoVarConstraint(k.a, ip, k.b, jp, k.c))
            cs.append(TwoVarConstraint(k.b, jm, k.a, im, k.c))
        else:
            nb = -k.b
            cs.append(TwoVarConstraint(k.a, ip, nb, jm, k.c))
            cs.append(TwoVarConstraint(nb, jp, k.a, im, k.c))
    return TwoVarSystem(vs, cs)


def unmonotonize(values: Sequence[int]) -> list[Fraction]:
    return [Fraction(values[2 * i] - values[2 * i + 1], 2) for i in range(len(values) // 2)]


# --------------------------------------------------------------------------
# cut graph

SOURCE, SINK = 0, 1


@dataclass
class FlowNetwork:
    """Directed network; ``capacity`` of ``None`` means infinite."""
    node_count: int
    arcs: list[tuple[int, int, Fraction | None]]
    offsets: list[int] = field(default_factory=list)
    lowers: list[int] = field(default_factory=list)
    positive: frozenset[int] = frozenset()

    def value_node(self, var: int, p: int) -> int:
        return self.offsets[var] + (p - self.lowers[var])


def _normalized(k: TwoVarConstraint) -> tuple[Fraction, int, Fraction, int, Fraction]:
    """Rewrite as ``a x_i - b x_j >= c`` with ``a, b > 0``."""
    if k.a == 0 or k.b == 0:
        raise MalformedSystem("zero coefficient in a two-variable constraint")
    if not k.monotone:
        raise MalformedSystem("cut graph needs a monotone system")
    if k.a > 0:
        return Fraction(k.a), k.i, Fraction(k.b), k.j, Fraction(k.c)
    # -|a| x_i + |b| x_j >= c  <=>  |b| x_j - |a| x_i >= c
    return Fraction(-k.b), k.j, Fraction(-k.a), k.i, Fraction(k.c)


def build_cut_graph(sys: TwoVarSystem) -> FlowNetwork:
    """Node ``v_ip`` in the source side means ``x_i >= p``."""
    offsets, lowers = [], []
    nodes = 2
    for v in sys.variables:
        offsets.append(nodes)
        lowers.append(v.lower)
        nodes += v.upper - v.lower + 1
    net = FlowNetwork(nodes, [], offsets, lowers,
                      frozenset(i for i, v in enumerate(sys.variables) if v.objective > 0))
    arcs = net.arcs
    for i, v in enumerate(sys.variables):
        arcs.append((SOURCE, net.value_node(i, v.lower), None))
        for p in range(v.lower + 1, v.upper + 1):
            arcs.append((net.value_node(i, p), net.value_node(i, p - 1), None))
        d = Fraction(v.objective)
        if d > 0:
            for p in range(v.lower + 1, v.upper + 1):
                arcs.append((SOURCE, net.value_node(i, p), d))
        elif d < 0:
            for p in range(v.lower + 1, v.upper + 1):
                arcs.append((net.value_node(i, p), SINK, -d))
    for k in sys.constraints:
        a, i, b, j, c = _normalized(k)
        vi, vj = sys.variables[i], sys.variables[j]
        for p in range(vj.lower, vj.upper + 1):
            q = math.ceil((c + b * p) / a)
            if q <= vi.lower:
                continue
            head = SINK if q > vi.upper else net.value_node(i, q)
            arcs.append((net.value_node(j, p), head, None))
    return net


@dataclass
class CutResult:
    value: Fraction
    source_set: frozenset[int]


def _scale(arcs) -> tuple[list[tuple[int, int, int]], int, int]:
    finite = [c for _, _, c in arcs if c is not None]
    lcm = 1
    for c in finite:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    total = sum(int(c * lcm) for c in finite)
    inf = total + 1
    return [(u, v, inf if c is None else int(c * lcm)) for u, v, c in arcs], lcm, inf


def min_cut(net: FlowNetwork) -> CutResult:
    """Dinic max-flow on integer-scaled capacities; the source set is the
    residual-reachable set from the source."""
    arcs, lcm, inf = _scale(net.arcs)
    n = net.node_count
    head, cap, nxt = [], [], []
    first = [-1] * n
    for u, v, c in arcs:
        for a, b, cc in ((u, v, c), (v, u, 0)):
            head.append(b)
            cap.append(cc)
            nxt.append(first[a])
            first[a] = len(head) - 1
    adj = [[] for _ in range(n)]
    for u in range(n):
        e = first[u]
        while e != -1:
            adj[u].append(e)
            e = nxt[e]
    for lst in adj:
        lst.reverse()

    flow = 0
    while True:
        level = [-1] * n
        level[SOURCE] = 0
        dq = deque([SOURCE])
        while dq:
            u = dq.popleft()
            for e in adj[u]:
                if cap[e] > 0 and level[head[e]] < 0:
                    level[head[e]] = level[u] + 1
                    dq.append(head[e])
        if level[SINK] < 0:
            break
        it = [0] * n
        while True:
            # iterative DFS for one augmenting path in the level graph
            path = []
            u = SOURCE
            while u != SINK:
                while it[u] < len(adj[u]):
                    e = adj[u][it[u]]
                    if cap[e] > 0 and level[head[e]] == level[u] + 1:
                        break
                    it[u] += 1
                else:
                    if not path:
                        u = None
                        break
                    level[u] = -1
                    e = path.pop()
                    u = head[e ^ 1]
                    it[u] += 1
                    continue
                path.append(e)
                u = head[e]
            if u is None:
                break
            push = min(cap[e] for e in path)
            for e in path:
                cap[e] -= push
                cap[e ^ 1] += push
            flow += push
    seen = [False] * n
    seen[SOURCE] = True
    dq = deque([SOURCE])
    while dq:
        u = dq.popleft()
        for e in adj[u]:
            if cap[e] > 0 and not seen[head[e]]:
                seen[head[e]] = True
                dq.append(head[e])
    if seen[SINK] or flow >= inf:
        raise RuntimeError("no finite cut: the network admits infinite flow")
    return CutResult(Fraction(flow, lcm), frozenset(u for u in range(n) if seen[u]))


def recover_solution(sys: TwoVarSystem, net: FlowNetwork, cut: CutResult) -> list[int]:
    """``x_i = max{p : v_ip in S}``."""
    out = []
    S = cut.source_set
    for i, v in enumerate(sys.variables):
        if net.value_node(i, v.lower) not in S:
            raise RuntimeError(f"lowest value node of {v.name} is cut off from the source")
        best = v.lower
        for p in range(v.lower + 1, v.upper + 1):
            inside = net.value_node(i, p) in S
            if inside:
                if best != p - 1:
                    raise RuntimeError(f"value nodes of {v.name} are not a prefix of the chain")
                best = p
        out.append(best)
    return out


def solve_monotone(sys: TwoVarSystem) -> tuple[list[int], Fraction]:
    """Optimal integral solution of a monotone system and its objective."""
    net = build_cut_graph(sys)
    cut = min_cut(net)
    x = recover_solution(sys, net, cut)
    if not sys.feasible(x):
        raise RuntimeError("recovered solution violates the system")
    top = sum((Fraction(v.objective) * (v.upper if v.objective > 0 else v.lower)
               for v in sys.variables if v.objective), Fraction(0))
    obj = sys.objective(x)
    if obj != top - cut.value:
        raise RuntimeError("cut value does not match the recovered objective")
    return x, obj


def solve_relaxation(sys: TwoVarSystem) -> list[Fraction]:
    """Half-integral optimum of a (possibly non-monotone) system's relaxation."""
    doubled = monotonize(sys)
    x, _ = solve_monotone(doubled)
    return unmonotonize(x)


def write_dimacs(net: FlowNetwork, out: TextIO) -> None:
    """DIMACS max-flow format, integer capacities after scaling."""
    arcs, lcm, inf = _scale(net.arcs)
    out.write(f"c capacities scaled by {lcm}; {inf} stands for infinity\n")
    out.write(f"p max {net.node_count} {len(arcs)}\n")
    out.write(f"n {SOURCE + 1} s\n")
    out.write(f"n {SINK + 1} t\n")
    for u, v, c in arcs:
        out.write(f"a {u + 1} {v + 1} {c}\n")


# --------------------------------------------------------------------------
# tie-strength reductions

def system_from_lp(lp: LinearProgram, scale: Sequence[int],
                   upper: Sequence[Fraction]) -> TwoVarSystem:
    """Translate an LP whose rows have at most two variables.

    Variable ``k`` becomes the integer ``X_k = scale[k] * x_k`` on
    ``[scale[k] * lower, scale[k] * upper[k]]``; one-variable rows tighten
    the bounds.
    """
    lo = [Fraction(v.lower) * s for v, s in zip(lp.variables, scale)]
    up = [Fraction(u) * s for u, s in zip(upper, scale)]
    cons = []
    for row in lp.constraints:
        if row.sense != "<=":
            raise MalformedSystem("only <= rows can be translated")
        terms = [(j, c / scale[j]) for j, c in row.coeffs if c]
        if len(terms) == 1:
            j, c = terms[0]
            if c > 0:
                up[j] = min(up[j], row.rhs / c)
            else:
                lo[j] = max(lo[j], row.rhs / c)
        elif len(terms) == 2:
            (j1, c1), (j2, c2) = terms
            # c1 X1 + c2 X2 <= r  <=>  (-c1) X1 - c2 X2 >= -r
            cons.append(TwoVarConstraint(-c1, j1, c2, j2, -row.rhs))
        else:
            raise MalformedSystem(f"row {row.name} has {len(terms)} variables")
    vs = [TwoVarVariable(v.name, math.ceil(l), math.floor(u), v.objective / s)
          for v, l, u, s in zip(lp.variables, lo, up, scale)]
    return TwoVarSystem(vs, cons)


def solve_lp1_hn(g: Graph, wedges: Sequence[Wedge] | None = None) -> StrengthAssignment:
    lp = build_lp1(g, wedges)
    sys = system_from_lp(lp, [1] * lp.num_vars, [v.upper for v in lp.variables])
    x = solve_relaxation(sys)
    if not check_feasible(lp, x).ok:
        raise RuntimeError("combinatorial LP1 solution is infeasible")
    return assignment_from_values(lp, g, x, solver="hn")


def lp2sym_system(lp: LinearProgram, p: Params) -> tuple[TwoVarSystem, list[int]]:
    """Clique variables are scaled by the denominator of ``d`` so every
    coefficient is integral; super-edge variables stay on their own grid.

    Every super-edge lies in a wedge, so ``s <= 1`` and ``t <= d + 1`` are
    implied bounds.
    """
    a = p.d.denominator
    scale, upper = [], []
    for v in lp.variables:
        if v.tag[0] == "clique":
            scale.append(a)
            upper.append(p.d + 1)
        else:
            scale.append(1)
            upper.append(Fraction(1))
    return system_from_lp(lp, scale, upper), scale


def solve_lp2sym_hn(cg: ContractedGraph, p: Params = Params()) -> StrengthAssignment:
    lp = build_lp2sym(cg, p)
    sys, scale = lp2sym_system(lp, p)
    X = solve_relaxation(sys)
    x = [xv / s for xv, s in zip(X, scale)]
    if not check_feasible(lp, x).ok:
        raise RuntimeError("combinatorial LP2sym solution is infeasible")
    return expand_symmetric_solution(cg, lp, x, solver="hn")


def lp1_network(g: Graph) -> FlowNetwork:
    lp = build_lp1(g)
    return build_cut_graph(monotonize(system_from_lp(lp, [1] * lp.num_vars,
                                                     [v.upper for v in lp.variables])))


def lp2sym_network(cg: ContractedGraph, p: Params = Params()) -> FlowNetwork:
    sys, _ = lp2sym_system(build_lp2sym(cg, p), p)
    return build_cut_graph(monotonize(sys))
