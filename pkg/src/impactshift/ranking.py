"""Competition ranking, 0-100 percentiles and quartiles within a cohort."""

from __future__ import annotations

import csv
import enum
from collections import defaultdict
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional

from .errors import DomainError, EmptyCohortError, SchemaError
from .impact import ScoreVariant, format_cohort, format_number, parse_cohort

DEFAULT_COHORT = ("all",)


class Quartile(str, enum.Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"

    @property
    def index(self) -> int:
        return int(self.value[1]) - 1


@dataclass(frozen=True)
class RankedEntry:
    professor_id: str
    score: float
    rank: int
    percentile: float
    quartile: Optional[Quartile] = None
    n_publications: Optional[int] = None


@dataclass(frozen=True)
class RankedCohort:
    key: tuple
    variant: ScoreVariant
    entries: tuple
    uda_id: Optional[str] = None

    def __len__(self):
        return len(self.entries)

    def by_professor(self) -> dict:
        return {e.professor_id: e for e in self.entries}


def percentile_of(rank: int, n: int, score: float) -> float:
    """Worst-to-best 0-100 position; a zero score always maps to 0."""
    if score == 0:
        return 0.0
    if n == 1:
        return 100.0
    return 100.0 * (n - rank) / (n - 1)


def quartile_of(percentile: float) -> Quartile:
    if percentile >= 75:
        return Quartile.Q1
    if percentile >= 50:
        return Quartile.Q2
    if percentile >= 25:
        return Quartile.Q3
    return Quartile.Q4


def assign_quartiles(cohort: RankedCohort) -> RankedCohort:
    entries = tuple(replace(e, quartile=quartile_of(e.percentile)) for e in cohort.entries)
    return replace(cohort, entries=entries)


def rank_cohort(
    scores,
    variant=ScoreVariant.C,
    key: tuple = DEFAULT_COHORT,
    uda_id: Optional[str] = None,
    n_publications: Optional[dict] = None,
) -> RankedCohort:
    """Rank ``(professor_id, score)`` pairs, best first, with quartiles assigned.

    Tied scores share the best position of their group and the next distinct
    score skips ahead (1, 2, 2, 4).  Ties are listed by professor id.
    """
    scores = [(str(pid), float(s)) for pid, s in scores]
    if not scores:
        raise EmptyCohortError(f"cohort {format_cohort(key) or key!r} has no professors")
    for pid, s in scores:
        if not s >= 0:
            raise DomainError(f"professor {pid!r}: score must be >= 0, got {s}")
    n_publications = n_publications or {}
    ordered = sorted(scores, key=lambda ps: (-ps[1], ps[0]))
    n = len(ordered)
    entries = []
    rank = 0
    prev = None
    for pos, (pid, s) in enumerate(ordered, 1):
        if s != prev:
            rank, prev = pos, s
        pct = percentile_of(rank, n, s)
        entries.append(
            RankedEntry(pid, s, rank, pct, quartile_of(pct), n_publications.get(pid))
        )
    return RankedCohort(tuple(key), ScoreVariant(variant), tuple(entries), uda_id)


def rank_scores(scores: Iterable) -> dict:
    """Rank every (cohort, variant) group of :class:`ImpactScore` records.

    Returns ``{(cohort_key, variant): RankedCohort}`` in sorted key order.
    Records with no cohort fall into a single ``("all",)`` cohort.
    """
    groups = defaultdict(list)
    udas = {}
    for s in scores:
        key = s.cohort or DEFAULT_COHORT
        groups[(key, s.variant)].append(s)
        if s.uda_id:
            udas.setdefault(key, s.uda_id)
    out = {}
    for key, variant in sorted(groups, key=lambda kv: (kv[0], kv[1].value)):
        members = groups[(key, variant)]
        seen = set()
        for s in members:
            if s.professor_id in seen:
                raise SchemaError(
                    f"professor {s.professor_id!r} scored twice for variant {variant.value}"
                )
            seen.add(s.professor_id)
        out[(key, variant)] = rank_cohort(
            [(s.professor_id, s.value) for s in members],
            variant,
            key,
            udas.get(key),
            {s.professor_id: s.n_publications for s in members},
        )
    return out


# --- ranking.csv ---------------------------------------------------------

RANKING_COLUMNS = (
    "cohort", "uda_id", "professor_id", "n_publications",
    "score", "rank", "percentile", "quartile", "variant",
)


def write_rankings(cohorts: Iterable[RankedCohort], path, full_precision: bool = False) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RANKING_COLUMNS)
        for c in sorted(cohorts, key=lambda c: (c.key, c.variant.value)):
            for e in c.entries:
                w.writerow(
                    (
                        format_cohort(c.key),
                        c.uda_id or "",
                        e.professor_id,
                        "" if e.n_publications is None else e.n_publications,
                        format_number(e.score, 3, full_precision),
                        e.rank,
                        format_number(e.percentile, 1, full_precision),
                        e.quartile.value if e.quartile else "",
                        c.variant.value,
                    )
                )


def read_rankings(path) -> dict:
    """Read ranking.csv into ``{(cohort_key, variant): RankedCohort}``.

    Entries are taken as written; quartiles missing from the file are
    recomputed from the percentile column.
    """
    name = Path(path).name
    groups = defaultdict(list)
    udas = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = ("professor_id", "score", "rank", "percentile", "variant")
        missing = [c for c in required if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"{name}: missing columns {', '.join(missing)}")
        for lineno, row in enumerate(reader, 2):
            key = parse_cohort(row.get("cohort")) or DEFAULT_COHORT
            variant = ScoreVariant.parse(row["variant"])
            try:
                pct = float(row["percentile"])
                q = (row.get("quartile") or "").strip()
                npub = (row.get("n_publications") or "").strip()
                entry = RankedEntry(
                    row["professor_id"].strip(),
                    float(row["score"]),
                    int(row["rank"]),
                    pct,
                    Quartile(q) if q else quartile_of(pct),
                    int(npub) if npub else None,
                )
            except ValueError:
                raise SchemaError(f"{name}:{lineno}: malformed ranking row") from None
            groups[(key, variant)].append(entry)
            uda = (row.get("uda_id") or "").strip()
            if uda:
                udas.setdefault(key, uda)
    return {
        k: RankedCohort(k[0], k[1], tuple(groups[k]), udas.get(k[0]))
        for k in sorted(groups, key=lambda kv: (kv[0], kv[1].value))
    }
