"""Exact rational primal simplex for :class:`~tiestrength.lp.LinearProgram`.

The solver works on the nonbasic side of the dictionary. With ``n``
structural variables there are always ``n`` nonbasic variables, each a
structural at one of its bounds or the slack of an active row. Stacking
their defining rows gives an ``n x n`` matrix ``M`` with ``M x = v``; the
solver keeps ``M^-1`` as sparse rows and updates it by a rank-one row
replacement at every pivot. Rows are only ever touched through sparse dot
products, so the cost per iteration grows with the number of structural
variables, not with the (usually much larger) number of constraints.

The entering variable is the one with the largest reduced cost; after a
run of degenerate pivots the solver falls back to Bland's rule (lowest
index enters, ratio ties go to the lowest index) until the objective moves
again, which rules out cycling. ``pricing="bland"`` uses Bland's rule
throughout. Every tie is broken by index, so runs are deterministic. Box
bounds are handled directly, including bound flips.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

from .lp import Constraint, LinearProgram, check_feasible

_ZERO = Q(0)

# Consecutive degenerate pivots tolerated under largest-coefficient pricing
# before switching to Bland's rule, which cannot cycle.
BLAND_AFTER = 50


def _q(x) -> Q:
    if x is None:
        return None
    return Q(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class Status(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass
class SolveResult:
    status: Status
    values: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    basis: tuple[str, ...] = ()
    iterations: int = 0
    ray: tuple[Fraction, ...] | None = None
    ray_origin: str | None = None
    row_duals: tuple[Fraction, ...] | None = None
    reduced_costs: tuple[Fraction, ...] | None = None
    _state: "_Tableau | None" = field(default=None, repr=False, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Mutable solver state. Keys ``0..n-1`` are structurals, ``n + r`` the
    slack of row ``r``."""

    def __init__(self, rows, rhs, lower, upper, slack_upper, names):
        self.rows = rows
        self.rhs = rhs
        self.n = len(lower)
        self.lower = lower
        self.upper = upper
        self.slack_upper = slack_upper
        self.names = names
        self.col_rows: list[list[int]] = [[] for _ in range(self.n)]
        for r, row in enumerate(rows):
            for j in row:
                self.col_rows[j].append(r)
        self.slot_key: dict[int, int] = {}
        self.key_slot: dict[int, int] = {}
        self.minv: list[dict[int, Q]] = []
        self.x: list[Q] = []
        self.s: list[Q] = []
        self.iterations = 0
        self.bland = False

    def copy(self) -> "_Tableau":
        t = object.__new__(_Tableau)
        t.__dict__.update(self.__dict__)
        t.lower = list(self.lower)
        t.upper = list(self.upper)
        t.slack_upper = list(self.slack_upper)
        t.slot_key = dict(self.slot_key)
        t.key_slot = dict(self.key_slot)
        t.minv = [dict(r) for r in self.minv]
        t.x = list(self.x)
        t.s = list(self.s)
        return t

    def key_name(self, key: int) -> str:
        if key < self.n:
            return self.names[key]
        return f"row:{key - self.n}"

    def start_at_bounds(self):
        self.x = []
        for j in range(self.n):
            lo, up = self.lower[j], self.upper[j]
            self.x.append(lo if lo is not None else (up if up is not None else _ZERO))
        self.minv = [{j: Q(1)} for j in range(self.n)]
        self.slot_key = {j: j for j in range(self.n)}
        self.key_slot = {j: j for j in range(self.n)}
        self.s = [self.rhs[r] - sum((c * self.x[j] for j, c in row.items()), _ZERO)
                  for r, row in enumerate(self.rows)]

    def column(self, slot: int) -> dict[int, Q]:
        out = {}
        for i, row in enumerate(self.minv):
            v = row.get(slot)
            if v is not None:
                out[i] = v
        return out

    def duals(self, c: dict[int, Q]) -> dict[int, Q]:
        y: dict[int, Q] = {}
        for j, cj in c.items():
            for slot, v in self.minv[j].items():
                y[slot] = y.get(slot, _ZERO) + cj * v
        return {k: v for k, v in y.items() if v != 0}

    def _entering(self, y, bland: bool):
        best = None
        best_score = None
        n = self.n
        for slot, yv in y.items():
            key = self.slot_key[slot]
            if key < n:
                lo, up = self.lower[key], self.upper[key]
                if lo is not None and lo == up:
                    continue
                xv = self.x[key]
                if yv > 0:
                    if up is not None and xv >= up:
                        continue
                    sgn = 1
                else:
                    if lo is not None and xv <= lo:
                        continue
                    sgn = -1
            else:
                if yv > 0 or self.slack_upper[key - n] is not None:
                    continue
                sgn = 1
            if bland:
                if best is None or key < best[0]:
                    best = (key, slot, sgn)
            else:
                score = abs(yv)
                if best is None or score > best_score or (score == best_score and key < best[0]):
                    best, best_score = (key, slot, sgn), score
        return best

    def iterate(self, c: dict[int, Q], max_iterations=None):
        """Run Phase II for objective ``c`` from the current feasible state.

        Returns ``None`` at optimum, or ``(direction, key)`` for an
        unbounded ray.
        """
        n = self.n
        y = self.duals(c)
        stalled = 0
        while True:
            ent = self._entering(y, self.bland or stalled >= BLAND_AFTER)
            if ent is None:
                return None
            if max_iterations is not None and self.iterations >= max_iterations:
                raise RuntimeError(f"iteration limit {max_iterations} reached")
            self.iterations += 1
            key, slot, sgn = ent
            u = self.column(slot)
            # x moves along dx per unit of the entering variable
            step = sgn if key < n else -sgn
            dx = {i: step * v for i, v in u.items()}
            best_ratio, best_key, best_to_upper = None, None, False
            if key < n:
                lo, up = self.lower[key], self.upper[key]
                if lo is not None and up is not None:
                    best_ratio, best_key, best_to_upper = up - lo, key, sgn > 0
            for i, d in dx.items():
                if i == key or i in self.key_slot:
                    continue
                if d > 0 and self.upper[i] is not None:
                    ratio, to_up = (self.upper[i] - self.x[i]) / d, True
                elif d < 0 and self.lower[i] is not None:
                    ratio, to_up = (self.x[i] - self.lower[i]) / -d, False
                else:
                    continue
                if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and i < best_key):
                    best_ratio, best_key, best_to_upper = ratio, i, to_up
            touched: dict[int, Q] = {}
            rows = self.rows
            for i, d in dx.items():
                for r in self.col_rows[i]:
                    touched[r] = touched.get(r, _ZERO) + rows[r][i] * d
            for r, ad in touched.items():
                if ad == 0:
                    continue
                rk = n + r
                if rk == key or rk in self.key_slot:
                    continue
                if ad > 0:
                    ratio, to_up = self.s[r] / ad, False
                else:
                    su = self.slack_upper[r]
                    if su is None:
                        continue
                    ratio, to_up = (su - self.s[r]) / -ad, True
                if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and rk < best_key):
                    best_ratio, best_key, best_to_upper = ratio, rk, to_up
            if best_ratio is None:
                return dx, key
            theta = best_ratio
            stalled = 0 if theta else stalled + 1
            if theta:
                for i, d in dx.items():
                    self.x[i] += theta * d
                for r, ad in touched.items():
                    if ad:
                        self.s[r] -= theta * ad
            if best_key == key:
                # bound flip: basis unchanged
                self.x[key] = self.upper[key] if sgn > 0 else self.lower[key]
                continue
            # pivot best_key into the nonbasic slot vacated by key
            if best_key < n:
                self.x[best_key] = self.upper[best_key] if best_to_upper else self.lower[best_key]
            else:
                r = best_key - n
                self.s[r] = self.slack_upper[r] if best_to_upper else _ZERO
            self.exchange(slot, best_key, u, y)

    def defining_row(self, key: int) -> dict[int, Q]:
        """``m^T M^-1`` for the defining row ``m`` of ``key``."""
        if key < self.n:
            return dict(self.minv[key])
        w: dict[int, Q] = {}
        for j, a in self.rows[key - self.n].items():
            for sl, v in self.minv[j].items():
                w[sl] = w.get(sl, _ZERO) + a * v
        return {k: v for k, v in w.items() if v != 0}

    def exchange(self, slot: int, new_key: int, u: dict[int, Q] | None = None,
                 y: dict[int, Q] | None = None, w: dict[int, Q] | None = None):
        """Make ``new_key`` nonbasic in ``slot``: rank-one update of ``M^-1``
        (and of the duals ``y`` when given)."""
        if u is None:
            u = self.column(slot)
        if w is None:
            w = self.defining_row(new_key)
        wt = w[slot]
        for i, ui in u.items():
            f = ui / wt
            mrow = self.minv[i]
            for k, wk in w.items():
                nv = mrow.get(k, _ZERO) - f * wk
                if nv:
                    mrow[k] = nv
                else:
                    mrow.pop(k, None)
            nv = mrow.get(slot, _ZERO) + f
            if nv:
                mrow[slot] = nv
            else:
                mrow.pop(slot, None)
        if y is not None:
            yt = y.get(slot, _ZERO)
            if yt:
                f = yt / wt
                for k, wk in w.items():
                    nv = y.get(k, _ZERO) - f * wk
                    if nv:
                        y[k] = nv
                    else:
                        y.pop(k, None)
                nv = y.get(slot, _ZERO) + f
                if nv:
                    y[slot] = nv
                else:
                    y.pop(slot, None)
        del self.key_slot[self.slot_key[slot]]
        self.slot_key[slot] = new_key
        self.key_slot[new_key] = slot

    def recompute(self, values: dict[int, Q]):
        """Set ``x = M^-1 v`` where ``v`` holds each nonbasic structural's value
        (``values``) or the right-hand side of each active row."""
        v = {}
        for slot, key in self.slot_key.items():
            v[slot] = values[key] if key < self.n else self.rhs[key - self.n]
        self.x = [sum((c * v[sl] for sl, c in row.items()), _ZERO) for row in self.minv]
        for key in self.slot_key.values():
            if key < self.n:
                self.x[key] = values[key]
        self.s = [self.rhs[r] - sum((c * self.x[j] for j, c in row.items()), _ZERO)
                  for r, row in enumerate(self.rows)]

    def feasible(self) -> bool:
        for j, xv in enumerate(self.x):
            if (self.lower[j] is not None and xv < self.lower[j]) or \
                    (self.upper[j] is not None and xv > self.upper[j]):
                return False
        return all(sv >= 0 and (su is None or sv <= su) for sv, su in zip(self.s, self.slack_upper))


def _prepare(lp: LinearProgram):
    rows, rhs, names = [], [], []
    for con in lp.constraints:
        row = {}
        for j, c in con.coeffs:
            if c:
                row[j] = row.get(j, _ZERO) + _q(c)
        row = {j: v for j, v in row.items() if v != 0}
        if con.sense == "==":
            rows.append({j: -v for j, v in row.items()})
            rhs.append(-_q(con.rhs))
            names.append(con.name)
        rows.append(row)
        rhs.append(_q(con.rhs))
        names.append(con.name)
    lower = [_q(v.lower) for v in lp.variables]
    upper = [_q(v.upper) for v in lp.variables]
    return rows, rhs, lower, upper, [v.name for v in lp.variables]


def _phase_one(rows, rhs, lower, upper, names, max_iterations, bland=False):
    """Find a feasible basis with a single artificial variable ``z``.

    Every row violated at the starting bound point gets ``-z`` added, and
    the most violated row is made active; maximizing ``-z`` then drives the
    violation to zero or proves infeasibility.
    """
    n = len(lower)
    probe = _Tableau(rows, rhs, lower, upper, [None] * len(rows), names)
    probe.bland = bland
    probe.start_at_bounds()
    violated = [r for r, s in enumerate(probe.s) if s < 0]
    if any(lo is not None and up is not None and lo > up for lo, up in zip(lower, upper)):
        return None, 0
    if not violated:
        return probe, 0
    worst = min(violated, key=lambda r: (probe.s[r], r))
    aug_rows = [dict(row) for row in rows]
    for r in violated:
        aug_rows[r][n] = Q(-1)
    t = _Tableau(aug_rows, rhs, lower + [_ZERO], upper + [None], [None] * len(rows), names + ["_z"])
    t.bland = bland
    t.start_at_bounds()
    # make row `worst` active in the slot of z: M row = (a_worst, -1), self-inverse
    t.x[n] = -probe.s[worst]
    t.minv[n] = {j: c for j, c in aug_rows[worst].items()}
    del t.key_slot[n]
    t.slot_key[n] = n + 1 + worst
    t.key_slot[n + 1 + worst] = n
    t.s = [rhs[r] - sum((c * t.x[j] for j, c in row.items()), _ZERO) for r, row in enumerate(aug_rows)]
    t.iterate({n: Q(-1)}, max_iterations)
    iters = t.iterations
    if t.x[n] > 0:
        return None, iters
    if n not in t.key_slot:
        # z basic at zero: pivot it out degenerately
        slot = min((sl for sl, v in t.minv[n].items() if v), key=lambda sl: t.slot_key[sl])
        t.exchange(slot, n)
    zslot = t.key_slot[n]
    out = _Tableau(rows, rhs, lower, upper, [None] * len(rows), names)
    out.bland = bland
    out.x = t.x[:n]
    out.s = [rhs[r] - sum((c * out.x[j] for j, c in row.items()), _ZERO) for r, row in enumerate(rows)]
    out.minv = []
    for i in range(n):
        row = dict(t.minv[i])
        row.pop(zslot, None)
        out.minv.append(row)
    for slot, key in t.slot_key.items():
        if slot == zslot:
            continue
        # translate augmented row keys (n + 1 + r) back to n + r
        k = key if key < n else key - 1
        out.slot_key[slot] = k
        out.key_slot[k] = slot
    return out, iters


def _result_from_state(lp: LinearProgram, t: _Tableau, c: dict[int, Q]) -> SolveResult:
    n = t.n
    values = tuple(_frac(v) for v in t.x)
    y = t.duals(c)
    m_internal = len(t.rows)
    row_duals_internal = [Fraction(0)] * m_internal
    reduced = [Fraction(0)] * n
    basis = []
    for slot, key in sorted(t.slot_key.items(), key=lambda kv: kv[1]):
        yv = _frac(y.get(slot, _ZERO))
        if key < n:
            reduced[key] = yv
            where = "upper" if t.upper[key] is not None and t.x[key] == t.upper[key] else "lower"
            basis.append(f"{t.names[key]}@{where}")
        else:
            row_duals_internal[key - n] = yv
            basis.append(f"row:{key - n}")
    # fold the internal row pairs back onto the model's constraints
    duals = []
    k = 0
    for con in lp.constraints:
        if con.sense == "==":
            duals.append(row_duals_internal[k + 1] - row_duals_internal[k])
            k += 2
        else:
            duals.append(row_duals_internal[k])
            k += 1
    return SolveResult(Status.OPTIMAL, values, lp.objective_value(values), tuple(basis), t.iterations,
                       row_duals=tuple(duals), reduced_costs=tuple(reduced), _state=t)


# Below this many variables the exact solver starts cold; above it a
# floating-point basis from HiGHS (when installed) is used as a starting hint.
HINT_MIN_VARS = 500


def _highs_nonbasic(rows, rhs, lower, upper, c) -> list[tuple[int, str]] | None:
    """Nonbasic set of the floating-point optimum, as ``(key, where)`` pairs."""
    try:
        import highspy
        import numpy as np
    except ImportError:
        return None
    n, m = len(lower), len(rows)
    inf = highspy.kHighsInf
    model = highspy.HighsLp()
    model.num_col_, model.num_row_ = n, m
    model.col_cost_ = np.array([-float(c.get(j, 0)) for j in range(n)])
    model.col_lower_ = np.array([-inf if v is None else float(v) for v in lower])
    model.col_upper_ = np.array([inf if v is None else float(v) for v in upper])
    model.row_lower_ = np.full(m, -inf)
    model.row_upper_ = np.array([float(v) for v in rhs])
    cols: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for r, row in enumerate(rows):
        for j, a in row.items():
            cols[j].append((r, float(a)))
    start, index, value = [0], [], []
    for col in cols:
        for r, a in col:
            index.append(r)
            value.append(a)
        start.append(len(index))
    model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    model.a_matrix_.start_ = np.array(start, dtype=np.int32)
    model.a_matrix_.index_ = np.array(index, dtype=np.int32)
    model.a_matrix_.value_ = np.array(value)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.passModel(model)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None
    basis = h.getBasis()
    basic = highspy.HighsBasisStatus.kBasic
    upper_st = highspy.HighsBasisStatus.kUpper
    out = [(j, "upper" if st == upper_st else "lower")
           for j, st in enumerate(basis.col_status) if st != basic]
    out += [(n + r, "row") for r, st in enumerate(basis.row_status) if st != basic]
    return out if len(out) == n else None


def _warm_start(rows, rhs, lower, upper, names, c, bland) -> _Tableau | None:
    """Exact tableau for the basis suggested by HiGHS, if it is primal feasible.

    Starting from the all-structural basis, each suggested active row is
    pivoted into the slot of a structural that the suggestion makes basic;
    if that is impossible the suggestion was singular and is dropped.
    """
    hint = _highs_nonbasic(rows, rhs, lower, upper, c)
    if hint is None:
        return None
    n = len(lower)
    t = _Tableau(rows, rhs, lower, upper, [None] * len(rows), names)
    t.bland = bland
    t.start_at_bounds()
    target = {k for k, _ in hint}
    for key in sorted(k for k in target if k >= n):
        w = t.defining_row(key)
        slot = min((sl for sl in w if t.slot_key[sl] < n and t.slot_key[sl] not in target),
                   key=lambda sl: t.slot_key[sl], default=None)
        if slot is None:
            return None
        t.exchange(slot, key, w=w)
    values = {}
    for key, where in hint:
        if key >= n:
            continue
        lo, up = lower[key], upper[key]
        val = up if where == "upper" else lo
        if val is None:
            val = lo if lo is not None else (up if up is not None else _ZERO)
        values[key] = val
    t.recompute(values)
    return t if t.feasible() else None


def solve(lp: LinearProgram, max_iterations: int | None = None,
          pricing: str = "dantzig", hint: str = "auto") -> SolveResult:
    """Maximize ``lp`` exactly. Unbounded and infeasible are ordinary results.

    ``hint`` is ``"auto"`` (use a floating-point starting basis for large
    models when HiGHS is available), ``"highs"`` or ``"none"``. A hint only
    chooses where the exact solver starts; optimality is still proved by
    exact pivoting from there.
    """
    if pricing not in ("dantzig", "bland"):
        raise ValueError(f"unknown pricing rule {pricing!r}")
    if hint not in ("auto", "highs", "none"):
        raise ValueError(f"unknown hint {hint!r}")
    rows, rhs, lower, upper, names = _prepare(lp)
    c = {k: _q(v.objective) for k, v in enumerate(lp.variables) if v.objective}
    t = None
    if hint == "highs" or (hint == "auto" and lp.num_vars >= HINT_MIN_VARS):
        t = _warm_start(rows, rhs, lower, upper, names, c, pricing == "bland")
    if t is None:
        t, iters = _phase_one(rows, rhs, lower, upper, names, max_iterations, pricing == "bland")
        if t is None:
            return SolveResult(Status.INFEASIBLE, iterations=iters)
        t.iterations = iters
    out = t.iterate(c, max_iterations)
    if out is not None:
        dx, key = out
        ray = [Fraction(0)] * lp.num_vars
        for i, d in dx.items():
            ray[i] = _frac(d)
        return SolveResult(Status.UNBOUNDED, iterations=t.iterations, ray=tuple(ray),
                           ray_origin=t.key_name(key))
    return _result_from_state(lp, t, c)


# --------------------------------------------------------------------------
# certificates

def verify_dual(lp: LinearProgram, result: SolveResult) -> bool:
    """Check the dual certificate carried by an optimal result.

    Row multipliers must be non-negative on inequality rows, the reduced
    costs must have the sign their bound allows, ``c = A^T y + mu`` must hold
    exactly and the dual bound must equal the primal objective.
    """
    if not result.optimal:
        return False
    y, mu, x = result.row_duals, result.reduced_costs, result.values
    grad = [Fraction(0)] * lp.num_vars
    bound = Fraction(0)
    for con, yr in zip(lp.constraints, y):
        if con.sense == "<=" and yr < 0:
            return False
        for j, c in con.coeffs:
            grad[j] += c * yr
        bound += yr * con.rhs
    for j, var in enumerate(lp.variables):
        m = var.objective - grad[j]
        if m != mu[j]:
            return False
        if m == 0:
            continue
        if m > 0 and (var.upper is None or x[j] != var.upper):
            return False
        if m < 0 and (var.lower is None or x[j] != var.lower):
            return False
        bound += m * x[j]
    return bound == result.objective


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / p
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def active_rows(lp: LinearProgram, x: Sequence[Fraction]) -> list[list[Fraction]]:
    n = lp.num_vars
    out = []
    for j, var in enumerate(lp.variables):
        if (var.lower is not None and x[j] == var.lower) or (var.upper is not None and x[j] == var.upper):
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            out.append(row)
    for con in lp.constraints:
        if con.activity(x) == con.rhs:
            row = [Fraction(0)] * n
            for j, c in con.coeffs:
                row[j] += c
            out.append(row)
    return out


def is_vertex(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    """Feasible ``x`` is a vertex iff its active constraints have rank ``n``."""
    if not check_feasible(lp, x).ok:
        return False
    if lp.num_vars == 0:
        return True
    act = active_rows(lp, x)
    return len(act) >= lp.num_vars and _rank(act) == lp.num_vars


def certify_vertex(result: SolveResult, lp: LinearProgram) -> bool:
    return result.optimal and is_vertex(lp, result.values)


# --------------------------------------------------------------------------
# optimal face

@dataclass
class OptimalFace:
    """The set of optimal points of ``base``: its feasible region cut by the
    equality ``c . x = objective``."""
    base: LinearProgram
    objective: Fraction
    result: SolveResult
    lp: LinearProgram

    @classmethod
    def from_result(cls, base: LinearProgram, result: SolveResult) -> "OptimalFace":
        if not result.optimal:
            raise ValueError("optimal face needs an optimal result")
        row = Constraint(tuple((j, v.objective) for j, v in enumerate(base.variables) if v.objective),
                         result.objective, "==", "optimal_objective")
        return cls(base, result.objective, result, base.with_constraints([row]))


def optimal_face(lp: LinearProgram, result: SolveResult | None = None) -> OptimalFace:
    if result is None:
        result = solve(lp)
    return OptimalFace.from_result(lp, result)


def _face_state(face: OptimalFace) -> _Tableau:
    """Warm-start state restricted to the optimal face.

    Complementary slackness with the final dual solution pins every
    nonbasic variable whose reduced cost is nonzero; what remains feasible
    is exactly the optimal face.
    """
    base = face.result._state
    c = {k: _q(v.objective) for k, v in enumerate(face.base.variables) if v.objective}
    y = base.duals(c)
    t = base.copy()
    for slot, key in t.slot_key.items():
        if y.get(slot, _ZERO) == 0:
            continue
        if key < t.n:
            t.lower[key] = t.upper[key] = t.x[key]
        else:
            t.slack_upper[key - t.n] = _ZERO
    return t


def edge_strength_range(face: OptimalFace, variable: int | tuple,
                        method: str = "warm") -> tuple[Fraction, Fraction]:
    """Smallest and largest value ``variable`` takes over the optimal face.

    ``method="explicit"`` solves the face LP with the objective row from
    scratch instead of warm-starting; both must agree.
    """
    k = variable if isinstance(variable, int) else face.base.index(variable)
    if method == "explicit" or face.result._state is None:
        hi = solve(face.lp.with_objective({k: 1}))
        lo = solve(face.lp.with_objective({k: -1}))
        if not (hi.optimal and lo.optimal):
            raise RuntimeError(f"range of variable {k} is not finite")
        return lo.values[k], hi.values[k]
    if method != "warm":
        raise ValueError(f"unknown method {method!r}")
    out = []
    for sign in (-1, 1):
        t = _face_state(face)
        if t.iterate({k: Q(sign)}) is not None:
            raise RuntimeError(f"range of variable {k} is not finite")
        out.append(_frac(t.x[k]))
    return out[0], out[1]


def strength_ranges(face: OptimalFace, variables: Sequence[int] | None = None,
                    method: str = "warm") -> dict[int, tuple[Fraction, Fraction]]:
    if variables is None:
        variables = range(face.base.num_vars)
    return {k: edge_strength_range(face, k, method) for k in variables}
