"""How much the ranking moves when switching from one score variant to the other.

Per cohort: score/rank/percentile deltas, Pearson on scores, Spearman on
ranks and the average absolute percentile shift.  Across cohorts: summary
statistics per discipline (UDA), the quartile contingency matrix and the
relation between the share of uncited professors and the shift.
"""

from __future__ import annotations

import csv
import math
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import CohortMismatchError, UndefinedCorrelationError
from .impact import format_cohort, format_number
from .ranking import Quartile, RankedCohort

# --- correlation ---------------------------------------------------------


def _check_pair(x, y):
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise UndefinedCorrelationError("correlation needs at least two observations")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation (two-pass, exactly rounded sums)."""
    x, y = _check_pair(x, y)
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("correlation is undefined for a constant vector")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def fractional_ranks(values: Sequence[float]) -> list:
    """1-based ranks in ascending order; tied values get the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    x, y = _check_pair(x, y)
    return pearson(fractional_ranks(x), fractional_ranks(y))


def _maybe(fn, *args):
    try:
        return fn(*args)
    except UndefinedCorrelationError:
        return None


# --- per-cohort comparison -----------------------------------------------


@dataclass(frozen=True)
class DeltaRow:
    professor_id: str
    score_c: float
    score_wc: float
    rank_c: int
    rank_wc: int
    percentile_c: float
    percentile_wc: float
    quartile_c: Optional[Quartile]
    quartile_wc: Optional[Quartile]
    # percent change; math.inf when only the second score is positive, None when both are 0
    delta_score_pct: Optional[float]
    delta_rank: int  # positive = moved up
    delta_percentile: float
    n_publications: Optional[int] = None

    @property
    def delta_rank_label(self) -> str:
        return render_delta_rank(self.delta_rank)

    @property
    def delta_score_label(self) -> str:
        return render_delta_score(self.delta_score_pct)


def delta_score_pct(score_c: float, score_wc: float) -> Optional[float]:
    if score_c > 0:
        return 100.0 * (score_wc - score_c) / score_c
    if score_wc > 0:
        return math.inf
    return None


def render_delta_score(value: Optional[float], full_precision: bool = False) -> str:
    if value is None:
        return "n.a."
    if math.isinf(value):
        return "∞"
    return format_number(value, 1, full_precision) + "%"


def render_delta_rank(delta: int) -> str:
    if delta > 0:
        return f"{delta} ↑"
    if delta < 0:
        return f"{-delta} ↓"
    return "0 ="


@dataclass(frozen=True)
class CohortComparison:
    key: tuple
    uda_id: Optional[str]
    rows: tuple
    pearson_scores: Optional[float]
    spearman_ranks: Optional[float]
    avg_abs_percentile_shift: float
    avg_abs_rank_shift: float
    share_unshifted: float
    n_unproductive: Optional[int] = None
    n_uncited_productive: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def uncited_share(self) -> Optional[float]:
        """Productive professors whose first-variant score is 0, over cohort size."""
        if self.n_uncited_productive is None:
            return None
        return self.n_uncited_productive / self.size


def compare_cohort(ranked_c: RankedCohort, ranked_wc: RankedCohort) -> CohortComparison:
    """Pair the two rankings of one cohort professor by professor.

    Rows follow the order of ``ranked_c``.
    """
    a = ranked_c.by_professor()
    b = ranked_wc.by_professor()
    if set(a) != set(b) or len(a) != len(ranked_c.entries) or len(b) != len(ranked_wc.entries):
        only_a = sorted(set(a) - set(b))
        only_b = sorted(set(b) - set(a))
        raise CohortMismatchError(
            f"cohort {format_cohort(ranked_c.key)!r}: professor sets differ "
            f"(only in first: {only_a[:5]}, only in second: {only_b[:5]})"
        )
    rows = []
    for e in ranked_c.entries:
        f = b[e.professor_id]
        npub = e.n_publications if e.n_publications is not None else f.n_publications
        rows.append(
            DeltaRow(
                e.professor_id, e.score, f.score, e.rank, f.rank,
                e.percentile, f.percentile, e.quartile, f.quartile,
                delta_score_pct(e.score, f.score),
                e.rank - f.rank,
                f.percentile - e.percentile,
                npub,
            )
        )
    n = len(rows)
    sc = [r.score_c for r in rows]
    sw = [r.score_wc for r in rows]
    known = all(r.n_publications is not None for r in rows)
    return CohortComparison(
        key=ranked_c.key,
        uda_id=ranked_c.uda_id or ranked_wc.uda_id,
        rows=tuple(rows),
        pearson_scores=_maybe(pearson, sc, sw),
        spearman_ranks=_maybe(spearman, sc, sw),
        avg_abs_percentile_shift=math.fsum(abs(r.delta_percentile) for r in rows) / n,
        avg_abs_rank_shift=math.fsum(abs(r.delta_rank) for r in rows) / n,
        share_unshifted=sum(1 for r in rows if r.delta_rank == 0) / n,
        n_unproductive=sum(1 for r in rows if r.n_publications == 0) if known else None,
        n_uncited_productive=(
            sum(1 for r in rows if r.n_publications > 0 and r.score_c == 0) if known else None
        ),
    )


# --- cross-cohort aggregates ---------------------------------------------


@dataclass(frozen=True)
class Contingency:
    counts: tuple  # 4x4, rows = first variant quartile, cols = second
    total: int
    # uda_id -> (staff, shifting >= 1 quartile, shifting >= 2 quartiles)
    shifts_by_uda: dict = field(default_factory=dict)

    @property
    def shares(self) -> tuple:
        if self.total == 0:
            return tuple((0.0,) * 4 for _ in range(4))
        return tuple(tuple(c / self.total for c in row) for row in self.counts)

    @property
    def diagonal_share(self) -> float:
        return sum(self.counts[i][i] for i in range(4)) / self.total if self.total else 0.0


def quartile_contingency(comparisons: Iterable[CohortComparison]) -> Contingency:
    counts = [[0] * 4 for _ in range(4)]
    by_uda = defaultdict(lambda: [0, 0, 0])
    total = 0
    for comp in comparisons:
        uda = comp.uda_id or ""
        for r in comp.rows:
            i, j = r.quartile_c.index, r.quartile_wc.index
            counts[i][j] += 1
            total += 1
            cell = by_uda[uda]
            cell[0] += 1
            if abs(i - j) >= 1:
                cell[1] += 1
            if abs(i - j) >= 2:
                cell[2] += 1
    return Contingency(
        tuple(tuple(r) for r in counts),
        total,
        {k: tuple(v) for k, v in sorted(by_uda.items())},
    )


def _describe(values):
    """(min, max, mean, sample stdev) with stdev None below two values."""
    if not values:
        return None, None, None, None
    sd = statistics.stdev(values) if len(values) > 1 else None
    return min(values), max(values), math.fsum(values) / len(values), sd


@dataclass(frozen=True)
class UdaStats:
    uda_id: str
    n_cohorts: int
    shift_min: Optional[float]
    shift_min_cohorts: tuple
    shift_max: Optional[float]
    shift_max_cohorts: tuple
    shift_mean: Optional[float]
    shift_stdev: Optional[float]
    pearson: tuple   # (min, max, mean, stdev)
    spearman: tuple


def uda_statistics(comparisons: Iterable[CohortComparison]) -> list:
    groups = defaultdict(list)
    for comp in comparisons:
        groups[comp.uda_id or ""].append(comp)
    out = []
    for uda in sorted(groups):
        comps = sorted(groups[uda], key=lambda c: c.key)
        shifts = [c.avg_abs_percentile_shift for c in comps]
        lo, hi, mean, sd = _describe(shifts)
        out.append(
            UdaStats(
                uda,
                len(comps),
                lo,
                tuple(c.key for c in comps if c.avg_abs_percentile_shift == lo),
                hi,
                tuple(c.key for c in comps if c.avg_abs_percentile_shift == hi),
                mean,
                sd,
                _describe([c.pearson_scores for c in comps if c.pearson_scores is not None]),
                _describe([c.spearman_ranks for c in comps if c.spearman_ranks is not None]),
            )
        )
    return out


def uncited_sensitivity(cohort_stats) -> tuple:
    """Scatter of (uncited share, average percentile shift) and its Pearson r.

    ``cohort_stats`` holds :class:`CohortComparison` objects or plain
    ``(uncited_share, avg_shift)`` pairs.  Cohorts without publication counts
    are skipped.
    """
    points = []
    for item in cohort_stats:
        if isinstance(item, CohortComparison):
            if item.uncited_share is None:
                continue
            points.append((item.key, item.uncited_share, item.avg_abs_percentile_shift))
        else:
            share, shift = item
            points.append((None, float(share), float(shift)))
    if len(points) < 2:
        raise UndefinedCorrelationError("need at least two cohorts")
    r = pearson([p[1] for p in points], [p[2] for p in points])
    return points, r


def rank_shift_histogram(comp: CohortComparison) -> list:
    """``(delta_rank, count, share)`` sorted by delta."""
    counts = Counter(r.delta_rank for r in comp.rows)
    return [(d, counts[d], counts[d] / comp.size) for d in sorted(counts)]


def box_summary(values: Sequence[float]) -> tuple:
    """(min, first quartile, median, third quartile, max), inclusive quantiles."""
    values = sorted(values)
    if len(values) == 1:
        v = values[0]
        return v, v, v, v, v
    q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return values[0], q1, med, q3, values[-1]


@dataclass(frozen=True)
class ComparisonReport:
    cohorts: tuple
    uda_stats: tuple
    contingency: Contingency
    uncited_points: tuple
    uncited_pearson: Optional[float]


def compare_rankings(rankings_c: dict, rankings_wc: dict) -> ComparisonReport:
    """Compare two ``{cohort_key: RankedCohort}`` mappings over the same cohorts."""
    if set(rankings_c) != set(rankings_wc):
        raise CohortMismatchError(
            "the two ranking sets cover different cohorts: "
            f"{sorted(set(rankings_c) ^ set(rankings_wc))[:5]}"
        )
    comps = tuple(compare_cohort(rankings_c[k], rankings_wc[k]) for k in sorted(rankings_c))
    try:
        points, r = uncited_sensitivity(comps)
    except UndefinedCorrelationError:
        points = [(c.key, c.uncited_share, c.avg_abs_percentile_shift)
                  for c in comps if c.uncited_share is not None]
        r = None
    return ComparisonReport(
        comps,
        tuple(uda_statistics(comps)),
        quartile_contingency(comps),
        tuple(points),
        r,
    )


# --- output files --------------------------------------------------------


def _num(value, digits, full):
    if value is None:
        return ""
    return format_number(value, digits, full)


def write_report(report: ComparisonReport, out_dir, full_precision: bool = False) -> list:
    """Write every comparison table into ``out_dir``; returns the file names."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fp = full_precision
    written = []

    def dump(name, header, rows):
        with open(out_dir / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(name)

    dump(
        "comparison.csv",
        ("cohort", "uda_id", "professor_id", "score_c", "rank_c", "percentile_c",
         "quartile_c", "score_wc", "rank_wc", "percentile_wc", "quartile_wc",
         "delta_score_pct", "delta_rank", "delta_rank_label", "delta_percentile"),
        (
            (format_cohort(c.key), c.uda_id or "", r.professor_id,
             _num(r.score_c, 3, fp), r.rank_c, _num(r.percentile_c, 1, fp),
             r.quartile_c.value if r.quartile_c else "",
             _num(r.score_wc, 3, fp), r.rank_wc, _num(r.percentile_wc, 1, fp),
             r.quartile_wc.value if r.quartile_wc else "",
             render_delta_score(r.delta_score_pct, fp), r.delta_rank,
             r.delta_rank_label, _num(r.delta_percentile, 1, fp))
            for c in report.cohorts for r in c.rows
        ),
    )
    dump(
        "cohort_stats.csv",
        ("cohort", "uda_id", "n_professors", "n_unproductive", "n_uncited_productive",
         "uncited_share", "pearson_scores", "spearman_ranks", "avg_abs_percentile_shift",
         "avg_abs_rank_shift", "share_unshifted"),
        (
            (format_cohort(c.key), c.uda_id or "", c.size,
             "" if c.n_unproductive is None else c.n_unproductive,
             "" if c.n_uncited_productive is None else c.n_uncited_productive,
             _num(c.uncited_share, 3, fp), _num(c.pearson_scores, 3, fp),
             _num(c.spearman_ranks, 3, fp), _num(c.avg_abs_percentile_shift, 1, fp),
             _num(c.avg_abs_rank_shift, 2, fp), _num(c.share_unshifted, 3, fp))
            for c in report.cohorts
        ),
    )
    shifts = report.contingency.shifts_by_uda
    uda_rows = []
    for u in report.uda_stats:
        staff, one, two = shifts.get(u.uda_id, (0, 0, 0))
        uda_rows.append(
            (u.uda_id, u.n_cohorts,
             _num(u.shift_min, 1, fp), ";".join(format_cohort(k) for k in u.shift_min_cohorts),
             _num(u.shift_max, 1, fp), ";".join(format_cohort(k) for k in u.shift_max_cohorts),
             _num(u.shift_mean, 1, fp), _num(u.shift_stdev, 1, fp))
            + tuple(_num(v, 3, fp) for v in u.pearson)
            + tuple(_num(v, 3, fp) for v in u.spearman)
            + (staff, one, _num(100 * one / staff if staff else None, 1, fp),
               two, _num(100 * two / staff if staff else None, 2, fp))
        )
    dump(
        "uda_stats.csv",
        ("uda_id", "n_cohorts", "shift_min", "shift_min_cohorts", "shift_max",
         "shift_max_cohorts", "shift_mean", "shift_stdev",
         "pearson_min", "pearson_max", "pearson_mean", "pearson_stdev",
         "spearman_min", "spearman_max", "spearman_mean", "spearman_stdev",
         "n_professors", "shifting_quartile", "shifting_quartile_pct",
         "shifting_two_quartiles", "shifting_two_quartiles_pct"),
        uda_rows,
    )
    ct = report.contingency
    dump(
        "contingency.csv",
        ("quartile_c", "Q1", "Q2", "Q3", "Q4", "Q1_count", "Q2_count", "Q3_count", "Q4_count"),
        (
            (q.value,) + tuple(_num(100 * s, 2, fp) for s in ct.shares[q.index])
            + ct.counts[q.index]
            for q in Quartile
        ),
    )
    dump(
        "scatter.csv",
        ("series", "cohort", "label", "x", "y"),
        [
            ("scores", format_cohort(c.key), r.professor_id,
             _num(r.score_c, 3, fp), _num(r.score_wc, 3, fp))
            for c in report.cohorts for r in c.rows
        ]
        + [
            ("uncited_shift", format_cohort(key), "", _num(share, 3, fp), _num(shift, 1, fp))
            for key, share, shift in report.uncited_points
        ],
    )
    dump(
        "shift_histogram.csv",
        ("cohort", "delta_rank", "count", "share"),
        (
            (format_cohort(c.key), d, n, _num(s, 3, fp))
            for c in report.cohorts for d, n, s in rank_shift_histogram(c)
        ),
    )
    box_rows = []
    by_uda = defaultdict(list)
    for c in report.cohorts:
        by_uda[c.uda_id or ""].append(c.avg_abs_percentile_shift)
    for uda in sorted(by_uda):
        box_rows.append((uda, len(by_uda[uda])) + tuple(_num(v, 1, fp) for v in box_summary(by_uda[uda])))
    dump("boxplot.csv", ("uda_id", "n_cohorts", "min", "q1", "median", "q3", "max"), box_rows)
    dump(
        "summary.csv",
        ("key", "value"),
        (
            ("n_cohorts", len(report.cohorts)),
            ("n_professors", ct.total),
            ("diagonal_share_pct", _num(100 * ct.diagonal_share, 1, fp)),
            ("uncited_shift_pearson", _num(report.uncited_pearson, 3, fp)),
        ),
    )
    return written
