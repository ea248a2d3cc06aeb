"""Linear-programming formulations of tie-strength inference.

All models share one exact-rational representation, :class:`LinearProgram`:
maximize ``c . x`` subject to sparse rows ``a . x <= b`` (or ``==``) and
per-variable bounds. Every variable carries a tag saying what it stands for:

* ``("edge", i, j)``       strength of an existing edge
* ``("absent", j, k)``     strength of an absent wedge-endpoint pair (LP3/LP4)
* ``("clique", A)``        common strength inside triangle clique ``A`` (LP2sym)
* ``("superedge", A, B)``  common strength of the edges between ``A`` and ``B``
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, TextIO

from .graph import (ContractedGraph, Edge, Graph, Triangle, Wedge, absent_pairs,
                    canon, detect_clique_components, enumerate_triangles,
                    enumerate_wedges)

Number = Fraction | int


class FormulationError(ValueError):
    """The graph or the parameters do not fit the requested formulation."""


class UnsupportedParameter(FormulationError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or string")
    return Fraction(x)


@dataclass(frozen=True)
class Params:
    """Triangle-constraint slope ``d`` and wedge-violation penalty ``C``."""
    d: Fraction = Fraction(1)
    C: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "d", as_fraction(self.d))
        object.__setattr__(self, "C", as_fraction(self.C))
        if self.d <= 0:
            raise FormulationError(f"d must be positive, got {self.d}")
        if self.C < 0:
            raise FormulationError(f"C must be non-negative, got {self.C}")

    @property
    def absent_level(self) -> Fraction:
        """Strength that stands for "no edge": -1/d."""
        return -1 / self.d


@dataclass(frozen=True)
class Variable:
    name: str
    lower: Fraction | None = Fraction(0)
    upper: Fraction | None = None
    objective: Fraction = Fraction(0)
    tag: tuple = ()


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[int, Fraction], ...]
    rhs: Fraction
    sense: str = "<="
    name: str = ""

    def activity(self, x: Sequence) -> Fraction:
        return sum((c * x[v] for v, c in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    formulation: str = ""
    params: Params | None = None
    advisories: tuple[str, ...] = ()
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.variables)
        for r in self.constraints:
            if r.sense not in ("<=", "=="):
                raise ValueError(f"unknown relation {r.sense!r}")
            for v, _ in r.coeffs:
                if not 0 <= v < n:
                    raise ValueError(f"constraint {r.name!r} references undeclared variable {v}")
        object.__setattr__(self, "_index", {var.tag: k for k, var in enumerate(self.variables)})

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    @property
    def num_rows(self) -> int:
        return len(self.constraints)

    def index(self, tag: tuple) -> int:
        return self._index[tag]

    def objective_value(self, x: Sequence) -> Fraction:
        return sum((var.objective * x[k] for k, var in enumerate(self.variables) if var.objective),
                   Fraction(0))

    def with_objective(self, coeffs: Mapping[int, Number]) -> "LinearProgram":
        obj = {k: as_fraction(c) for k, c in coeffs.items()}
        vs = tuple(replace(v, objective=obj.get(k, Fraction(0))) for k, v in enumerate(self.variables))
        return replace(self, variables=vs, _index=None)

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearProgram":
        return replace(self, constraints=self.constraints + tuple(extra), _index=None)

    def with_bounds(self, bounds: Mapping[int, tuple]) -> "LinearProgram":
        vs = list(self.variables)
        for k, (lo, up) in bounds.items():
            vs[k] = replace(vs[k], lower=lo, upper=up)
        return replace(self, variables=tuple(vs), _index=None)


# --------------------------------------------------------------------------
# builders

def _require_no_clique_components(g: Graph):
    comps = detect_clique_components(g)
    if comps:
        raise FormulationError(
            f"graph has {len(comps)} connected component(s) that are cliques; "
            "remove them first (see graph.strip_clique_components)")


def _require_d_at_least_one(p: Params):
    if p.d < 1:
        raise UnsupportedParameter(f"d < 1 is not supported (got d = {p.d})")


def _edge_vars(g: Graph, lower, upper, objective=Fraction(1)) -> list[Variable]:
    return [Variable(f"w_{i}_{j}", lower, upper, objective, ("edge", i, j)) for i, j in g.edges]


def _wedge_rows(g: Graph, wedges: Iterable[Wedge]) -> list[Constraint]:
    rows = []
    for w in wedges:
        a, b = w.edges
        rows.append(Constraint(((g.edge_index[a], Fraction(1)), (g.edge_index[b], Fraction(1))),
                               Fraction(1), "<=", f"wedge_{w.root}_{w.j}_{w.k}"))
    return rows


def _triangle_rows(g: Graph, triangles: Iterable[Triangle], d: Fraction) -> list[Constraint]:
    rows = []
    one = Fraction(1)
    for t in triangles:
        ij, ik, jk = (g.edge_index[e] for e in t.edges)
        for left1, left2, right, tag in ((ij, ik, jk, t.i), (ij, jk, ik, t.j), (ik, jk, ij, t.k)):
            rows.append(Constraint(((left1, one), (left2, one), (right, -d)), Fraction(2), "<=",
                                   f"tri_{t.i}_{t.j}_{t.k}_at_{tag}"))
    return rows


def build_lp1(g: Graph, wedges: Sequence[Wedge] | None = None) -> LinearProgram:
    """Box relaxation: ``0 <= w <= 1``, one ``w_ij + w_ik <= 1`` per wedge."""
    _require_no_clique_components(g)
    if wedges is None:
        wedges = enumerate_wedges(g)
    return LinearProgram(tuple(_edge_vars(g, Fraction(0), Fraction(1))),
                         tuple(_wedge_rows(g, wedges)), "lp1")


def build_lp2(g: Graph, wedges: Sequence[Wedge] | None = None,
              triangles: Sequence[Triangle] | None = None,
              p: Params = Params()) -> LinearProgram:
    """Upper bounds replaced by ``w_ij + w_ik <= 2 + d w_jk`` on every triangle."""
    _require_d_at_least_one(p)
    _require_no_clique_components(g)
    if wedges is None:
        wedges = enumerate_wedges(g)
    if triangles is None:
        triangles = enumerate_triangles(g)
    rows = _wedge_rows(g, wedges) + _triangle_rows(g, triangles, p.d)
    return LinearProgram(tuple(_edge_vars(g, Fraction(0), None)), tuple(rows), "lp2", p)


def build_lp2sym(cg: ContractedGraph, p: Params = Params()) -> LinearProgram:
    """LP2 restricted to solutions constant on triangle cliques and bundles.

    One variable per triangle clique (weight = its edge count) and one per
    super-edge (weight = number of original edges it stands for).
    """
    _require_d_at_least_one(p)
    _require_no_clique_components(cg.original)
    q = cg.quotient
    variables = []
    clique_var = {}
    for a, members in enumerate(cg.super_nodes):
        if len(members) >= 2:
            clique_var[a] = len(variables)
            variables.append(Variable(f"t_{a}", Fraction(0), None,
                                      Fraction(cg.clique_weight(a)), ("clique", a)))
    edge_var = {}
    for a, b in q.edges:
        edge_var[(a, b)] = len(variables)
        variables.append(Variable(f"s_{a}_{b}", Fraction(0), None,
                                  Fraction(cg.edge_weight(a, b)), ("superedge", a, b)))
    one = Fraction(1)
    rows = []
    for w in enumerate_wedges(q):
        e1, e2 = w.edges
        rows.append(Constraint(((edge_var[e1], one), (edge_var[e2], one)), one, "<=",
                               f"wedge_{w.root}_{w.j}_{w.k}"))
    seen = set()
    slope = p.d - 1
    for (a, b), sv in edge_var.items():
        for side in (a, b):
            if side not in clique_var:
                continue
            coeffs = ((clique_var[side], one),) if slope == 0 else \
                ((clique_var[side], one), (sv, -slope))
            if coeffs in seen:
                continue
            seen.add(coeffs)
            rows.append(Constraint(coeffs, Fraction(2), "<=", f"ray_{side}_{a}_{b}"))
    return LinearProgram(tuple(variables), tuple(rows), "lp2sym", p)


def boundedness_advisories(g: Graph, wedges: Sequence[Wedge], p: Params) -> list[str]:
    """Warnings for penalties ``C`` too small to guarantee a finite optimum."""
    out = []
    largest = max((len(c) for c in g.components()), default=0)
    safe = largest ** 2 * max(p.d, p.d ** 2)
    if p.C <= safe:
        out.append(f"possibly unbounded: C = {p.C} <= n^2 * max(d, d^2) = {safe} "
                   f"(n = {largest}, largest component)")
    per_edge: dict[Edge, int] = {}
    for w in wedges:
        for e in w.edges:
            per_edge[e] = per_edge.get(e, 0) + 1
    if per_edge:
        e, k = max(per_edge.items(), key=lambda kv: (kv[1], [-x for x in kv[0]]))
        if p.C <= Fraction(1, k):
            out.append(f"likely unbounded: C = {p.C} <= 1/{k}, edge {g.label(e[0])}-{g.label(e[1])} "
                       f"lies in {k} wedges")
    return out


def _build_slack_lp(g, wedges, triangles, p, edge_lower, name) -> LinearProgram:
    _require_d_at_least_one(p)
    _require_no_clique_components(g)
    if wedges is None:
        wedges = enumerate_wedges(g)
    if triangles is None:
        triangles = enumerate_triangles(g)
    variables = _edge_vars(g, edge_lower, None)
    pairs = absent_pairs(wedges)
    absent_var = {}
    for j, k in pairs:
        absent_var[(j, k)] = len(variables)
        variables.append(Variable(f"a_{j}_{k}", p.absent_level, None, -p.C, ("absent", j, k)))
    one = Fraction(1)
    rows = []
    for w in wedges:
        a, b = w.edges
        rows.append(Constraint(((g.edge_index[a], one), (g.edge_index[b], one),
                                (absent_var[w.endpoints], -p.d)),
                               Fraction(2), "<=", f"wedge_{w.root}_{w.j}_{w.k}"))
    rows += _triangle_rows(g, triangles, p.d)
    return LinearProgram(tuple(variables), tuple(rows), name, p,
                         tuple(boundedness_advisories(g, wedges, p)))


def build_lp3(g: Graph, wedges=None, triangles=None, p: Params = Params()) -> LinearProgram:
    """LP2 with wedge violations allowed; absent pairs get strengths >= -1/d
    and each unit of absent-pair strength costs ``C``."""
    if p.C <= 0:
        raise FormulationError("LP3 needs C > 0")
    return _build_slack_lp(g, wedges, triangles, p, Fraction(0), "lp3")


def build_lp4(g: Graph, wedges=None, triangles=None, p: Params = Params()) -> LinearProgram:
    """LP3 with existing edges also allowed down to the absent level -1/d."""
    return _build_slack_lp(g, wedges, triangles, p, p.absent_level, "lp4")


# --------------------------------------------------------------------------
# solutions

@dataclass
class StrengthAssignment:
    """Exact strengths for the edges (and possibly absent pairs) of a graph.

    ``excluded`` holds edges of clique components, which are left out of the
    formulations; the value is ``None`` where the formulation leaves them
    unbounded.
    """
    graph: Graph
    formulation: str
    edges: dict[Edge, Fraction]
    objective: Fraction
    params: Params | None = None
    absent: dict[Edge, Fraction] = field(default_factory=dict)
    excluded: dict[Edge, Fraction | None] = field(default_factory=dict)
    labels: dict[Edge, str] = field(default_factory=dict)
    solver: str = ""

    def values(self) -> list[Fraction]:
        return list(self.edges.values())


def assignment_from_values(lp: LinearProgram, g: Graph, x: Sequence[Fraction],
                           solver: str = "") -> StrengthAssignment:
    edges, absent = {}, {}
    for var, val in zip(lp.variables, x):
        kind = var.tag[0]
        if kind == "edge":
            edges[(var.tag[1], var.tag[2])] = val
        elif kind == "absent":
            absent[(var.tag[1], var.tag[2])] = val
        else:
            raise FormulationError(f"variable {var.name} is not an edge or absent-pair variable")
    return StrengthAssignment(g, lp.formulation, edges, lp.objective_value(x), lp.params,
                              absent, solver=solver)


def values_for(lp: LinearProgram, a: StrengthAssignment) -> list[Fraction]:
    """Inverse of :func:`assignment_from_values`."""
    out = []
    for var in lp.variables:
        kind, i, j = var.tag
        out.append(a.edges[(i, j)] if kind == "edge" else a.absent[(i, j)])
    return out


def expand_symmetric_solution(cg: ContractedGraph, lp: LinearProgram,
                              x: Sequence[Fraction], solver: str = "") -> StrengthAssignment:
    """Map an LP2sym solution back to one strength per original edge.

    The result is replayed against the full LP2 model; infeasibility or an
    objective mismatch raises ``RuntimeError``.
    """
    clique_val, edge_val = {}, {}
    for var, val in zip(lp.variables, x):
        if var.tag[0] == "clique":
            clique_val[var.tag[1]] = val
        else:
            edge_val[(var.tag[1], var.tag[2])] = val
    g = cg.original
    back = cg.back_map
    strengths = {}
    for i, j in g.edges:
        a, b = back[i], back[j]
        strengths[(i, j)] = clique_val[a] if a == b else edge_val[canon(a, b)]
    p = lp.params or Params()
    full = build_lp2(g, p=p)
    xs = [strengths[(var.tag[1], var.tag[2])] for var in full.variables]
    report = check_feasible(full, xs)
    if not report.ok:
        raise RuntimeError(f"expanded symmetric solution violates LP2: {report.violations[:3]}")
    obj = full.objective_value(xs)
    if obj != lp.objective_value(x):
        raise RuntimeError(f"objective mismatch after expansion: {obj} vs {lp.objective_value(x)}")
    return StrengthAssignment(g, "lp2sym", strengths, obj, p, solver=solver)


@dataclass
class FeasibilityReport:
    violations: list[tuple[str, str, object]]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_feasible(lp: LinearProgram, x: Sequence, tol=0) -> FeasibilityReport:
    """List every violated bound and row with the amount of violation.

    With exact values and ``tol = 0`` the check is exact; floats can be
    checked with a positive tolerance.
    """
    if len(x) != lp.num_vars:
        raise ValueError(f"expected {lp.num_vars} values, got {len(x)}")
    bad = []
    for k, var in enumerate(lp.variables):
        v = x[k]
        if var.lower is not None and var.lower - v > tol:
            bad.append(("lower", var.name, var.lower - v))
        if var.upper is not None and v - var.upper > tol:
            bad.append(("upper", var.name, v - var.upper))
    for r, row in enumerate(lp.constraints):
        act = sum(c * x[v] for v, c in row.coeffs)
        excess = act - row.rhs
        if excess > tol or (row.sense == "==" and -excess > tol):
            bad.append(("row", row.name or f"c{r}", excess))
    return FeasibilityReport(bad)


# --------------------------------------------------------------------------
# LP text format

def _num(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return format(float(q), ".12g")


def _linear(terms: Iterable[tuple[str, Fraction]]) -> list[str]:
    out = []
    for name, c in terms:
        sign = "-" if c < 0 else "+"
        out.append(f"{sign} {_num(abs(c))} {name}")
    return out


def _wrap(head: str, tokens: list[str], width: int = 78) -> list[str]:
    lines, cur = [], head
    for tok in tokens:
        if len(cur) + len(tok) + 1 > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur += " " + tok
    lines.append(cur)
    return lines


def write_lp(lp: LinearProgram, out: TextIO) -> None:
    """Write the model in the text LP format (Maximize / Subject To / Bounds / End)."""
    names = [v.name for v in lp.variables]
    out.write(f"\\ {lp.formulation or 'model'}: {lp.num_vars} variables, {lp.num_rows} constraints\n")
    out.write("Maximize\n")
    obj = _linear((v.name, v.objective) for v in lp.variables if v.objective)
    for line in _wrap(" obj:", obj or ["0 " + names[0]] if names else ["0"]):
        out.write(line + "\n")
    out.write("Subject To\n")
    for r, row in enumerate(lp.constraints):
        rel = "<=" if row.sense == "<=" else "="
        toks = _linear((names[v], c) for v, c in row.coeffs) + [rel, _num(row.rhs)]
        for line in _wrap(f" {row.name or f'c{r}'}:", toks):
            out.write(line + "\n")
    out.write("Bounds\n")
    for v in lp.variables:
        if v.lower is None and v.upper is None:
            out.write(f" {v.name} free\n")
        elif v.upper is None:
            out.write(f" {v.name} >= {_num(v.lower)}\n")
        elif v.lower is None:
            out.write(f" -inf <= {v.name} <= {_num(v.upper)}\n")
        else:
            out.write(f" {_num(v.lower)} <= {v.name} <= {_num(v.upper)}\n")
    out.write("End\n")


def lp_sidecar(lp: LinearProgram, g: Graph | None = None) -> dict:
    """Exact rational companion to :func:`write_lp` (all numbers as strings)."""
    def q(x):
        return None if x is None else str(x)

    doc = {
        "formulation": lp.formulation,
        "params": None if lp.params is None else {"d": str(lp.params.d), "C": str(lp.params.C)},
        "variables": [{"name": v.name, "lower": q(v.lower), "upper": q(v.upper),
                       "objective": str(v.objective), "tag": list(v.tag)} for v in lp.variables],
        "constraints": [{"name": r.name, "sense": r.sense, "rhs": str(r.rhs),
                         "coeffs": [[lp.variables[k].name, str(c)] for k, c in r.coeffs]}
                        for r in lp.constraints],
    }
    if g is not None:
        doc["node_labels"] = list(g.node_labels)
    return doc


def write_lp_sidecar(lp: LinearProgram, out: TextIO, g: Graph | None = None) -> None:
    json.dump(lp_sidecar(lp, g), out, indent=1)
    out.write("\n")
