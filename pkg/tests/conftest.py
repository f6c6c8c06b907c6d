import csv
from pathlib import Path

import pytest

from impactshift.corpus import (
    BylineEntry,
    BylinePolicy,
    ObservationConfig,
    Publication,
    Taxonomy,
    WeightsTable,
    build_corpus,
)

DATA = Path(__file__).parent / "data"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _criterion_of.get(report.nodeid)
    if marker is None:
        return
    n, text = marker
    prev = _criteria.get(n, (text, True))
    _criteria[n] = (text, prev[1] and report.passed)


_criterion_of = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


@pytest.fixture
def tiny_dir(tmp_path):
    """Two professors, three publications, one SDS; both variants scoreable."""
    write_csv(tmp_path / "professors.csv",
              ("professor_id", "sds_id", "academic_rank", "years_on_staff"),
              [("p1", "ING-IND/07", "full", 2), ("p2", "ING-IND/07", "associate", 3)])
    write_csv(tmp_path / "publications.csv",
              ("pub_id", "year", "sc_id", "citations", "journal_if", "doc_type"),
              [("w1", 2015, "SC1", 4, 2.0, "article"),
               ("w2", 2015, "SC1", 0, 1.0, "review"),
               ("w3", 2017, "SC1", 2, 3.0, "letter")])
    write_csv(tmp_path / "bylines.csv",
              ("pub_id", "position", "author_key", "university_id", "professor_id"),
              [("w1", 1, "a", "U1", "p1"), ("w1", 2, "b", "U2", "p2"),
               ("w2", 1, "b", "U2", "p2"),
               ("w3", 1, "c", "U9", ""), ("w3", 2, "a", "U1", "p1")])
    write_csv(tmp_path / "taxonomy.csv", ("sds_id", "uda_id", "byline_policy"),
              [("ING-IND/07", "9", "alphabetical")])
    write_csv(tmp_path / "weights.csv", ("sc_id", "window_years", "w_citation", "w_if"),
              [("SC1", w, 0.8, 0.2) for w in range(1, 5)])
    return tmp_path


def make_corpus(pubs, bylines, professors, policy="alphabetical", weights=None,
                config=None):
    """Build a corpus in memory.

    pubs: list of Publication; bylines: {pub_id: [(university, professor_id or None), ...]};
    professors: {professor_id: years_on_staff}, all in SDS "S1".
    """
    taxonomy = Taxonomy({"S1": "1"}, {"S1": BylinePolicy(policy)})
    prof_rows = [
        {"professor_id": pid, "sds_id": "S1", "academic_rank": "full", "years_on_staff": t}
        for pid, t in professors.items()
    ]
    entries = [
        (pub_id, BylineEntry(pos, f"{pub_id}-{pos}", uni, pid))
        for pub_id, authors in bylines.items()
        for pos, (uni, pid) in enumerate(authors, 1)
    ]
    return build_corpus(prof_rows, pubs, entries, taxonomy, config or ObservationConfig(), weights)


def pub(pub_id, citations, journal_if=1.0, year=2015, sc="SC1"):
    return Publication(pub_id, year, sc, citations, journal_if)


def uniform_weights(w_c, w_if, scs=("SC1",)):
    return WeightsTable.uniform(scs, range(1, 5), w_c, w_if)
