import io
import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tiestrength.graph import contract, strip_clique_components
from tiestrength.lp import Params, build_lp1, build_lp2sym
from tiestrength.simplex import solve
from tiestrength.twovar import (SINK, SOURCE, FlowNetwork, MalformedSystem, TwoVarConstraint,
                                TwoVarSystem, TwoVarVariable, build_cut_graph, lp1_network,
                                lp2sym_network, min_cut, monotonize, recover_solution,
                                solve_lp1_hn, solve_lp2sym_hn, solve_monotone, solve_relaxation,
                                unmonotonize, write_dimacs)

from conftest import HALF_GRID, figure2_graph, path3, small_graphs, star, triangle_levels

F = Fraction
INF = float("inf")


def brute_min_cut(net):
    others = [u for u in range(net.node_count) if u not in (SOURCE, SINK)]
    best = INF
    for bits in range(1 << len(others)):
        S = {SOURCE} | {u for k, u in enumerate(others) if bits >> k & 1}
        val = F(0)
        for u, v, c in net.arcs:
            if u in S and v not in S:
                if c is None:
                    val = INF
                    break
                val += c
        best = min(best, val)
    return best


def cut_value(net, S):
    total = F(0)
    for u, v, c in net.arcs:
        if u in S and v not in S:
            if c is None:
                return INF
            total += c
    return total


def test_single_arc_chain():
    net = FlowNetwork(3, [(SOURCE, 2, F(1)), (2, SINK, F(2))])
    cut = min_cut(net)
    assert cut.value == 1 and cut.source_set == {SOURCE}


def test_two_paths():
    net = FlowNetwork(6, [(SOURCE, 2, F(1)), (2, SINK, F(3)), (SOURCE, 3, F(2)), (3, SINK, F(2))])
    assert min_cut(net).value == 3


def test_infinite_path_has_no_finite_cut():
    with pytest.raises(RuntimeError):
        min_cut(FlowNetwork(3, [(SOURCE, 2, None), (2, SINK, None)]))


caps = st.one_of(st.none(), st.fractions(min_value=0, max_value=5, max_denominator=4))


@st.composite
def networks(draw):
    n = draw(st.integers(2, 12))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and v != SOURCE and u != SINK]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
    return FlowNetwork(n, [(u, v, draw(caps)) for u, v in chosen])


@settings(max_examples=200, deadline=None)
@given(networks())
def test_min_cut_matches_enumeration(net):
    expected = brute_min_cut(net)
    if expected == INF:
        with pytest.raises(RuntimeError):
            min_cut(net)
        return
    cut = min_cut(net)
    assert cut.value == expected
    assert SOURCE in cut.source_set and SINK not in cut.source_set
    assert cut_value(net, cut.source_set) == expected


def test_one_variable_max():
    sys = TwoVarSystem([TwoVarVariable("x", 0, 1, F(1))], [])
    net = build_cut_graph(sys)
    assert net.node_count == 4
    assert (SOURCE, net.value_node(0, 1), F(1)) in net.arcs
    assert (SOURCE, net.value_node(0, 0), None) in net.arcs
    cut = min_cut(net)
    assert cut.value == 0
    assert recover_solution(sys, net, cut) == [1]


def test_one_variable_min():
    sys = TwoVarSystem([TwoVarVariable("x", -2, 1, F(-1))], [])
    net = build_cut_graph(sys)
    assert all(v == SINK for u, v, c in net.arcs if c is not None)
    x, obj = solve_monotone(sys)
    assert x == [-2] and obj == 2


def test_monotonize_single_wedge_row():
    # x + y <= 1 written as -x - y >= -1
    sys = TwoVarSystem([TwoVarVariable("x", 0, 1, F(1)), TwoVarVariable("y", 0, 1, F(1))],
                       [TwoVarConstraint(F(-1), 0, F(1), 1, F(-1))])
    assert not sys.monotone
    m = monotonize(sys)
    assert m.monotone
    assert [v.name for v in m.variables] == ["x+", "x-", "y+", "y-"]
    assert [(v.lower, v.upper, v.objective) for v in m.variables] == \
        [(0, 1, F(1, 2)), (-1, 0, F(-1, 2)), (0, 1, F(1, 2)), (-1, 0, F(-1, 2))]
    assert {(k.i, k.j) for k in m.constraints} == {(0, 3), (2, 1)}
    x = solve_relaxation(sys)
    assert sys.objective(x) == 1
    assert set(x) <= HALF_GRID and x[0] + x[1] <= 1


def test_path_lp1_half_integral_candidates():
    # every half-integral candidate of the path system, best value 1
    g = path3()
    cands = [(a, b) for a in HALF_GRID for b in HALF_GRID if a + b <= 1]
    assert max(a + b for a, b in cands) == 1
    assert solve_lp1_hn(g).objective == 1


def test_zero_coefficient_is_malformed():
    sys = TwoVarSystem([TwoVarVariable("x", 0, 1), TwoVarVariable("y", 0, 1)],
                       [TwoVarConstraint(F(0), 0, F(1), 1, F(0))])
    with pytest.raises(MalformedSystem):
        build_cut_graph(sys)


def test_system_validation():
    with pytest.raises(MalformedSystem):
        TwoVarSystem([TwoVarVariable("x", 2, 1)], [])
    with pytest.raises(MalformedSystem):
        TwoVarSystem([TwoVarVariable("x", 0, 1)], [TwoVarConstraint(F(1), 0, F(1), 0, F(0))])
    with pytest.raises(MalformedSystem):
        TwoVarSystem([TwoVarVariable("x", 0, 1)], [TwoVarConstraint(F(1), 0, F(1), 1, F(0))])
    with pytest.raises(MalformedSystem):
        build_cut_graph(TwoVarSystem([TwoVarVariable("x", 0, 1), TwoVarVariable("y", 0, 1)],
                                     [TwoVarConstraint(F(1), 0, F(-1), 1, F(0))]))


nonzero = st.fractions(min_value=-3, max_value=3, max_denominator=2).filter(lambda q: q != 0)


@st.composite
def systems(draw, monotone=True):
    n = draw(st.integers(1, 4))
    vs = []
    for k in range(n):
        lo = draw(st.integers(-2, 2))
        hi = lo + draw(st.integers(0, 3))
        vs.append(TwoVarVariable(f"x{k}", lo, hi, draw(st.fractions(-3, 3, max_denominator=3))))
    cs = []
    if n >= 2:
        for _ in range(draw(st.integers(0, 5))):
            i, j = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            a = draw(nonzero)
            b = draw(nonzero)
            if monotone and a * b < 0:
                b = -b
            cs.append(TwoVarConstraint(a, i, b, j, draw(st.fractions(-4, 4, max_denominator=2))))
    return TwoVarSystem(vs, cs)


def brute_integer_optimum(sys):
    best = None
    for x in itertools.product(*(range(v.lower, v.upper + 1) for v in sys.variables)):
        if sys.feasible(x):
            val = sys.objective(x)
            best = val if best is None else max(best, val)
    return best


@settings(max_examples=300, deadline=None)
@given(systems())
def test_monotone_solver_matches_enumeration(sys):
    best = brute_integer_optimum(sys)
    if best is None:
        with pytest.raises(RuntimeError):
            solve_monotone(sys)
        return
    x, obj = solve_monotone(sys)
    assert sys.feasible(x)
    assert obj == best


@settings(max_examples=100, deadline=None)
@given(systems())
def test_monotonized_monotone_system_keeps_optimum(sys):
    best = brute_integer_optimum(sys)
    assume(best is not None)
    m = monotonize(sys)
    assert len(m.variables) == 2 * len(sys.variables)
    assert len(m.constraints) == 2 * len(sys.constraints)
    _, obj = solve_monotone(m)
    assert obj == best


@settings(max_examples=200, deadline=None)
@given(systems(monotone=False))
def test_relaxation_is_feasible_and_half_integral(sys):
    m = monotonize(sys)
    try:
        xm, _ = solve_monotone(m)
    except RuntimeError:
        # an infeasible doubled system means the relaxation has no half-integral point
        assert brute_integer_optimum(sys) is None
        return
    x = unmonotonize(xm)
    assert all((2 * v).denominator == 1 for v in x)
    assert sys.feasible(x)
    best = brute_integer_optimum(sys)
    if best is not None:
        assert sys.objective(x) >= best


def test_cut_graph_node_count(toy):
    sys = monotonize(system_for(toy))
    net = build_cut_graph(sys)
    assert net.node_count == 2 + sum(v.upper - v.lower + 1 for v in sys.variables)


def system_for(g):
    from tiestrength.twovar import system_from_lp
    lp = build_lp1(g)
    return system_from_lp(lp, [1] * lp.num_vars, [v.upper for v in lp.variables])


def test_star_lp1_matches_simplex():
    g = star(2)
    assert solve_lp1_hn(g).objective == solve(build_lp1(g)).objective == 1


def test_toy_lp1(toy):
    a = solve_lp1_hn(toy)
    assert a.objective == 9
    assert set(a.edges.values()) <= HALF_GRID
    assert a.solver == "hn"


@pytest.mark.parametrize("d", [1, 2, F(3, 2), F(7, 3)])
def test_toy_lp2sym_levels(toy, d):
    cg = contract(toy)
    p = Params(d)
    a = solve_lp2sym_hn(cg, p)
    assert a.objective == solve(build_lp2sym(cg, p)).objective
    tri = {e for e in toy.edges if cg.back_map[e[0]] == cg.back_map[e[1]]}
    assert {a.edges[e] for e in tri} <= triangle_levels(d)
    assert {a.edges[e] for e in a.edges if e not in tri} <= HALF_GRID


def test_figure2_d2_matches_simplex():
    cg = contract(figure2_graph())
    p = Params(2)
    a = solve_lp2sym_hn(cg, p)
    assert a.objective == solve(build_lp2sym(cg, p)).objective
    assert {a.edges[(i, j)] for i in range(1, 7) for j in range(i + 1, 7)} == {3}


def test_lp2sym_rejects_small_d(toy):
    from tiestrength.lp import UnsupportedParameter
    with pytest.raises(UnsupportedParameter):
        solve_lp2sym_hn(contract(toy), Params(F(1, 2)))


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_nodes=9))
def test_reductions_match_simplex(g):
    g, _ = strip_clique_components(g)
    if not g.edge_count:
        return
    assert solve_lp1_hn(g).objective == solve(build_lp1(g)).objective
    cg = contract(g)
    for d in (1, F(5, 2)):
        p = Params(d)
        assert solve_lp2sym_hn(cg, p).objective == solve(build_lp2sym(cg, p)).objective


def test_dimacs(toy):
    buf = io.StringIO()
    net = lp1_network(toy)
    write_dimacs(net, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("c ")
    p_line = lines[1].split()
    assert p_line[:2] == ["p", "max"] and int(p_line[2]) == net.node_count
    arcs = [ln for ln in lines if ln.startswith("a ")]
    assert int(p_line[3]) == len(arcs) == len(net.arcs)
    assert "n 1 s" in lines and "n 2 t" in lines
    assert all(len(ln.split()) == 4 for ln in arcs)
    buf2 = io.StringIO()
    write_dimacs(lp2sym_network(contract(toy), Params(F(3, 2))), buf2)
    assert buf2.getvalue().count("\na ") > 0
