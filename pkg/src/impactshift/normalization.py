"""Per-(year, subject category) scaling baselines for citations and impact factor."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import BaselineUndefinedError, SchemaError

BASELINE_COLUMNS = ("year", "sc_id", "mean_cited_citations", "mean_if", "n_publications", "n_cited")


@dataclass(frozen=True)
class BaselineCell:
    year: int
    sc_id: str
    mean_cited_citations: Optional[float]
    mean_if: Optional[float]
    n_publications: int
    n_cited: int


class BaselineTable(Mapping):
    """Read-only mapping ``(year, sc_id) -> BaselineCell``."""

    def __init__(self, cells: Iterable[BaselineCell]):
        self._cells = {(c.year, c.sc_id): c for c in cells}

    def __getitem__(self, key):
        return self._cells[key]

    def __iter__(self):
        return iter(self._cells)

    def __len__(self):
        return len(self._cells)

    def __eq__(self, other):
        if isinstance(other, BaselineTable):
            return self._cells == other._cells
        return NotImplemented

    def cell_for(self, publication) -> BaselineCell:
        try:
            return self._cells[(publication.year, publication.sc_id)]
        except KeyError:
            raise BaselineUndefinedError(
                f"no baseline cell for year {publication.year}, "
                f"subject category {publication.sc_id!r}"
            ) from None


def build_baselines(corpus_or_publications) -> BaselineTable:
    """Mean citations over cited papers and mean IF over positive-IF papers, per cell.

    Accepts a corpus or any iterable of publications.
    """
    pubs = getattr(corpus_or_publications, "publications", None)
    pubs = pubs.values() if pubs is not None else corpus_or_publications

    citations = defaultdict(list)
    impact = defaultdict(list)
    counts = defaultdict(int)
    for p in pubs:
        key = (p.year, p.sc_id)
        counts[key] += 1
        if p.citations > 0:
            citations[key].append(p.citations)
        if p.journal_if > 0:
            impact[key].append(p.journal_if)

    cells = []
    for key in sorted(counts):
        cited = citations.get(key, [])
        ifs = impact.get(key, [])
        cells.append(
            BaselineCell(
                year=key[0],
                sc_id=key[1],
                # integer sum keeps the citation mean exact up to one rounding
                mean_cited_citations=sum(cited) / len(cited) if cited else None,
                mean_if=math.fsum(ifs) / len(ifs) if ifs else None,
                n_publications=counts[key],
                n_cited=len(cited),
            )
        )
    return BaselineTable(cells)


def normalized_citations(publication, baselines: BaselineTable) -> float:
    if publication.citations == 0:
        return 0.0
    cell = baselines.cell_for(publication)
    if cell.mean_cited_citations is None:
        raise BaselineUndefinedError(
            f"publication {publication.pub_id!r} is cited but cell "
            f"({cell.year}, {cell.sc_id!r}) has no citation baseline"
        )
    return publication.citations / cell.mean_cited_citations


def normalized_if(publication, baselines: BaselineTable) -> float:
    if publication.journal_if == 0:
        return 0.0
    cell = baselines.cell_for(publication)
    if cell.mean_if is None:
        raise BaselineUndefinedError(
            f"publication {publication.pub_id!r} has a positive IF but cell "
            f"({cell.year}, {cell.sc_id!r}) has no IF baseline"
        )
    return publication.journal_if / cell.mean_if


def _fmt(value):
    return "" if value is None else repr(float(value))


def write_baselines(baselines: BaselineTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BASELINE_COLUMNS)
        for key in sorted(baselines):
            c = baselines[key]
            w.writerow(
                (c.year, c.sc_id, _fmt(c.mean_cited_citations), _fmt(c.mean_if),
                 c.n_publications, c.n_cited)
            )


def read_baselines(path) -> BaselineTable:
    def opt(text):
        text = text.strip()
        return float(text) if text else None

    cells = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in BASELINE_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"{Path(path).name}: missing columns {', '.join(missing)}")
        for lineno, row in enumerate(reader, 2):
            try:
                cells.append(
                    BaselineCell(
                        int(row["year"]),
                        row["sc_id"].strip(),
                        opt(row["mean_cited_citations"]),
                        opt(row["mean_if"]),
                        int(row["n_publications"]),
                        int(row["n_cited"]),
                    )
                )
            except ValueError:
                raise SchemaError(f"{Path(path).name}:{lineno}: malformed baseline row") from None
    return BaselineTable(cells)
