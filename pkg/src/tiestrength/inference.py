"""One entry point from a graph to edge strengths, for every method."""

from __future__ import annotations

from fractions import Fraction

from .binary import exact_binary, greedy_binary
from .graph import Graph, contract, enumerate_triangles, enumerate_wedges, strip_clique_components
from .lp import (LinearProgram, Params, StrengthAssignment, assignment_from_values, build_lp1,
                 build_lp2, build_lp2sym, build_lp3, build_lp4, check_feasible,
                 expand_symmetric_solution)
from .simplex import Status, solve
from .twovar import solve_lp1_hn, solve_lp2sym_hn

METHODS = ("greedy", "exact", "lp1", "lp2", "lp2sym", "lp3", "lp4")
SOLVERS = ("auto", "hn", "simplex")
HN_METHODS = ("lp1", "lp2sym")
BINARY_METHODS = ("greedy", "exact")


class IncompatibleSolver(ValueError):
    pass


class UnboundedProblem(Exception):
    """The LP has no finite optimum."""

    def __init__(self, formulation: str, params: Params | None, ray_origin: str | None,
                 advisories: tuple[str, ...] = ()):
        self.formulation = formulation
        self.params = params
        self.ray_origin = ray_origin
        self.advisories = advisories
        super().__init__(f"{formulation} is unbounded" +
                         (f" (improving ray along {ray_origin})" if ray_origin else ""))


def resolve_solver(method: str, solver: str = "auto") -> str | None:
    """Check the (method, solver) pair and pick a concrete solver."""
    if method not in METHODS:
        raise IncompatibleSolver(f"unknown method {method!r}")
    if solver not in SOLVERS:
        raise IncompatibleSolver(f"unknown solver {solver!r}")
    if method in BINARY_METHODS:
        if solver != "auto":
            raise IncompatibleSolver(f"method {method} takes no solver")
        return None
    if solver == "auto":
        return "hn" if method in HN_METHODS else "simplex"
    if solver == "hn" and method not in HN_METHODS:
        raise IncompatibleSolver(f"the combinatorial solver handles only {', '.join(HN_METHODS)}")
    return solver


def build_model(g: Graph, method: str, p: Params = Params()) -> LinearProgram:
    """LP for ``method`` on ``g``, which must be free of clique components."""
    if method == "lp1":
        return build_lp1(g)
    if method == "lp2sym":
        return build_lp2sym(contract(g), p)
    wedges, triangles = enumerate_wedges(g), enumerate_triangles(g)
    if method == "lp2":
        return build_lp2(g, wedges, triangles, p)
    if method == "lp3":
        return build_lp3(g, wedges, triangles, p)
    if method == "lp4":
        return build_lp4(g, wedges, triangles, p)
    raise ValueError(f"{method} is not an LP method")


def _empty(g: Graph, method: str, p: Params | None, solver: str) -> StrengthAssignment:
    return StrengthAssignment(g, method, {}, Fraction(0), p, solver=solver)


def infer(g: Graph, method: str, solver: str = "auto", p: Params = Params(),
          greedy_rule: str = "best") -> StrengthAssignment:
    """Strengths for every edge of ``g``.

    Clique components are set aside before any LP is built: their edges get
    strength 1 under LP1 and are reported unbounded otherwise.
    """
    chosen = resolve_solver(method, solver)
    if method in BINARY_METHODS:
        b = greedy_binary(g, rule=greedy_rule) if method == "greedy" else exact_binary(g)
        if b.violations(enumerate_wedges(g)):
            raise RuntimeError(f"{method} labeling has a wedge with two strong edges")
        edges = {e: Fraction(int(s)) for e, s in zip(g.edges, b.strong)}
        return StrengthAssignment(g, method, edges, Fraction(b.objective), None,
                                  solver=greedy_rule if method == "greedy" else "branch-and-bound")
    core, comps = strip_clique_components(g)
    excluded = {e: (Fraction(1) if method == "lp1" else None)
                for e in g.edges if e not in core.edge_index}
    params = None if method == "lp1" else p
    if not core.edges:
        a = _empty(core, method, params, chosen)
    elif chosen == "hn":
        a = solve_lp1_hn(core) if method == "lp1" else solve_lp2sym_hn(contract(core), p)
    else:
        a = _solve_simplex(core, method, p)
    a.graph = g
    a.excluded = excluded
    if method == "lp1":
        a.objective += sum(excluded.values(), Fraction(0))
    return a


def _solve_simplex(g: Graph, method: str, p: Params) -> StrengthAssignment:
    if method == "lp2sym":
        cg = contract(g)
        lp = build_lp2sym(cg, p)
    else:
        lp = build_model(g, method, p)
    res = solve(lp)
    if res.status is Status.UNBOUNDED:
        raise UnboundedProblem(method, lp.params, res.ray_origin, lp.advisories)
    if res.status is Status.INFEASIBLE:
        raise RuntimeError(f"{method} reported infeasible, which cannot happen")
    report = check_feasible(lp, res.values)
    if not report.ok:
        raise RuntimeError(f"simplex solution violates {method}: {report.violations[:3]}")
    if method == "lp2sym":
        return expand_symmetric_solution(cg, lp, res.values, solver="simplex")
    return assignment_from_values(lp, g, res.values, solver="simplex")
