"""Strength levels, ground-truth comparison, edit suggestions, the strength
TSV format and a small timing harness."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, TextIO

from .graph import GroundTruth
from .lp import StrengthAssignment

HALF = Fraction(1, 2)

# level names by formulation family
BINARY_LIKE = ("greedy", "exact", "lp1")
TRIANGLE_LIKE = ("lp2", "lp2sym")
SLACK_LIKE = ("lp3", "lp4")


class EvaluationError(ValueError):
    pass


def level_grid(formulation: str, d: Fraction = Fraction(1)) -> dict[Fraction, str]:
    """The named strength values a vertex solution can take."""
    grid = {Fraction(0): "weak", HALF: "half", Fraction(1): "strong"}
    if formulation in BINARY_LIKE:
        return grid
    d = Fraction(d)
    if d == 1:
        grid[Fraction(2)] = "triangle"
    else:
        grid[Fraction(2)] = "triangle-low"
        grid[(d + 3) / 2] = "triangle-mid"
        grid[d + 1] = "triangle-high"
    return grid


def label_value(value: Fraction | None, formulation: str, d: Fraction = Fraction(1),
                absent: bool = False) -> str:
    if value is None:
        return "unbounded"
    if formulation in SLACK_LIKE:
        floor = -1 / Fraction(d)
        if absent:
            return "add" if value > floor else "absent"
        if value == floor:
            return "delete"
    return level_grid(formulation, d).get(value, "other")


def label_levels(a: StrengthAssignment) -> dict[tuple[int, int], str]:
    """Level name for every edge (absent pairs are labelled separately)."""
    d = a.params.d if a.params else Fraction(1)
    out = {e: label_value(v, a.formulation, d) for e, v in a.edges.items()}
    for e in a.excluded:
        out[e] = "clique-component"
    return out


def off_grid(a: StrengthAssignment) -> list[tuple[int, int]]:
    """Edges whose strength is not on the vertex level grid."""
    return [e for e, lab in label_levels(a).items() if lab == "other"]


@dataclass
class Level:
    value: Fraction | None
    label: str
    count: int
    covered: int
    mean: Fraction | None

    def mean_text(self) -> str:
        return "-" if self.mean is None else f"{float(self.mean):.2f}"

    def value_text(self) -> str:
        return "unbounded" if self.value is None else format_fraction(self.value)


@dataclass
class LevelReport:
    levels: list[Level]
    total: int
    covered: int
    formulation: str = ""

    def counts(self) -> dict[Fraction | None, int]:
        return {lv.value: lv.count for lv in self.levels}

    def as_dict(self) -> dict:
        return {
            "formulation": self.formulation,
            "edges": self.total,
            "covered": self.covered,
            "levels": [{"value": lv.value_text(), "label": lv.label, "count": lv.count,
                        "covered": lv.covered,
                        "mean": None if lv.mean is None else round(float(lv.mean), 2)}
                       for lv in self.levels],
        }

    def render(self, fmt: str = "table") -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=1) + "\n"
        rows = [(lv.value_text(), lv.label, str(lv.count), lv.mean_text()) for lv in self.levels]
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["value", "label", "count", "mean_ground_truth"])
            w.writerows(rows)
            return buf.getvalue()
        if fmt != "table":
            raise ValueError(f"unknown format {fmt!r}")
        head = ("value", "label", "count", "mean")
        widths = [max(len(r[k]) for r in rows + [head]) for k in range(4)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(head, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        lines.append(f"coverage: {self.covered}/{self.total} edges with ground truth")
        return "\n".join(lines) + "\n"


def level_report(strengths: Mapping, labels: Mapping, weights: Mapping | None = None,
                 formulation: str = "") -> LevelReport:
    """Group edges by exact strength, highest first, with mean weights.

    ``strengths`` maps an edge key to its value (``None`` for unbounded);
    edges missing from ``weights`` are counted but left out of the means.
    """
    groups: dict = {}
    for e, v in strengths.items():
        groups.setdefault(v, []).append(e)
    order = sorted(groups, key=lambda v: (v is not None, v if v is not None else 0), reverse=True)
    levels = []
    covered_total = 0
    for v in order:
        es = groups[v]
        ws = [weights[e] for e in es if weights is not None and weights.get(e) is not None]
        covered_total += len(ws)
        mean = sum(ws, Fraction(0)) / len(ws) if ws else None
        lab = labels.get(es[0], "")
        levels.append(Level(v, lab, len(es), len(ws), mean))
    return LevelReport(levels, len(strengths), covered_total, formulation)


def mean_ground_truth(a: StrengthAssignment, gt: GroundTruth) -> LevelReport:
    if gt is None or not len(gt):
        raise EvaluationError("ground truth is empty")
    strengths = dict(a.edges)
    strengths.update(a.excluded)
    return level_report(strengths, label_levels(a), {e: gt.get(e) for e in strengths}, a.formulation)


@dataclass
class EditSuggestions:
    deletions: list[tuple[int, int]] = field(default_factory=list)
    additions: list[tuple[tuple[int, int], Fraction]] = field(default_factory=list)


def edit_suggestions(a: StrengthAssignment, tol: Fraction = Fraction(0)) -> EditSuggestions:
    """Edges at the absent level are deletions; absent pairs above it are
    additions."""
    if a.formulation not in SLACK_LIKE:
        raise EvaluationError(f"edit suggestions need an lp3 or lp4 result, got {a.formulation}")
    floor = -1 / a.params.d
    dels = [e for e, v in a.edges.items() if v <= floor + tol]
    adds = [(e, v) for e, v in a.absent.items() if v > floor + tol]
    return EditSuggestions(dels, adds)


# --------------------------------------------------------------------------
# strength TSV

def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def write_strengths(a: StrengthAssignment, out: TextIO, header: bool = True) -> None:
    """``u<TAB>v<TAB>num/den<TAB>label`` per edge, then ``~u<TAB>v...`` per
    absent pair. Edges of clique components carry ``unbounded`` unless the
    formulation bounds them."""
    g = a.graph
    d = a.params.d if a.params else Fraction(1)
    labels = label_levels(a)
    if header:
        bits = [f"formulation={a.formulation}"]
        if a.solver:
            bits.append(f"solver={a.solver}")
        if a.params and a.formulation not in ("greedy", "exact", "lp1"):
            bits.append(f"d={a.params.d}")
            if a.formulation in SLACK_LIKE:
                bits.append(f"C={a.params.C}")
        bits.append(f"objective={format_fraction(a.objective)}")
        out.write("# " + " ".join(bits) + "\n")
    for e in g.edges:
        if e in a.edges:
            v = a.edges[e]
        else:
            v = a.excluded[e]
        text = "unbounded" if v is None else format_fraction(v)
        out.write(f"{g.label(e[0])}\t{g.label(e[1])}\t{text}\t{labels[e]}\n")
    for e, v in sorted(a.absent.items()):
        lab = label_value(v, a.formulation, d, absent=True)
        out.write(f"~{g.label(e[0])}\t{g.label(e[1])}\t{format_fraction(v)}\t{lab}\n")


@dataclass
class StrengthTable:
    edges: dict[tuple[str, str], Fraction | None]
    labels: dict[tuple[str, str], str]
    absent: dict[tuple[str, str], Fraction]
    meta: dict[str, str]


def label_pair(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


def read_strengths(src: TextIO) -> StrengthTable:
    edges, labels, absent, meta = {}, {}, {}, {}
    for lineno, line in enumerate(src, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise EvaluationError(f"line {lineno}: expected 4 tab-separated fields")
        u, v, val, lab = parts
        is_absent = u.startswith("~")
        key = label_pair(u[1:] if is_absent else u, v)
        try:
            q = None if val == "unbounded" else parse_fraction(val)
        except (ValueError, ZeroDivisionError):
            raise EvaluationError(f"line {lineno}: bad strength {val!r}") from None
        if is_absent:
            absent[key] = q
        else:
            edges[key] = q
            labels[key] = lab
    return StrengthTable(edges, labels, absent, meta)


def evaluate_table(table: StrengthTable, weights: Mapping[tuple[str, str], Fraction]) -> LevelReport:
    if not weights:
        raise EvaluationError("ground truth is empty")
    return level_report(table.edges, table.labels, weights, table.meta.get("formulation", ""))


# --------------------------------------------------------------------------
# timing

@dataclass
class Timing:
    graph: str
    method: str
    build: float
    solve: float

    @property
    def total(self) -> float:
        return self.build + self.solve


def bench(graphs: Mapping[str, object], methods: Mapping[str, tuple[Callable, Callable]],
          repetitions: int = 3) -> list[Timing]:
    """Median wall-clock time per graph and method.

    Each method is a pair ``(build, solve)``: ``build(graph)`` makes the
    model and ``solve(model)`` solves it; the two phases are timed apart.
    """
    out = []
    for gname, g in graphs.items():
        for mname, (build, run) in methods.items():
            builds, solves = [], []
            for _ in range(repetitions):
                t0 = time.perf_counter()
                model = build(g)
                t1 = time.perf_counter()
                run(model)
                t2 = time.perf_counter()
                builds.append(t1 - t0)
                solves.append(t2 - t1)
            out.append(Timing(gname, mname, statistics.median(builds), statistics.median(solves)))
    return out


def render_timings(rows: Iterable[Timing]) -> str:
    lines = ["graph\tmethod\tsolve\ttotal"]
    for r in rows:
        lines.append(f"{r.graph}\t{r.method}\t{r.solve:.4f}\t{r.total:.4f}")
    return "\n".join(lines) + "\n"
