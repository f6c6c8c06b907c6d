"""Domain model and CSV ingestion for professors, publications and bylines."""

from __future__ import annotations

import csv
import enum
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import (
    BylineError,
    ConfigError,
    DuplicateKeyError,
    MissingWeightsError,
    OrderingError,
    SchemaError,
)

MIN_YEARS_ON_STAFF = 2


class AcademicRank(str, enum.Enum):
    ASSISTANT = "assistant"
    ASSOCIATE = "associate"
    FULL = "full"


class DocType(str, enum.Enum):
    ARTICLE = "article"
    LETTER = "letter"
    REVIEW = "review"
    PROCEEDING = "proceeding"


class BylinePolicy(str, enum.Enum):
    ALPHABETICAL = "alphabetical"
    POSITIONAL = "positional"


class CohortKey(str, enum.Enum):
    SDS = "sds"
    SDS_AND_RANK = "sds_and_rank"


@dataclass(frozen=True)
class Professor:
    professor_id: str
    sds_id: str
    uda_id: str
    academic_rank: AcademicRank
    years_on_staff: int


@dataclass(frozen=True)
class Publication:
    pub_id: str
    year: int
    sc_id: str
    citations: int
    journal_if: float
    doc_type: DocType = DocType.ARTICLE


@dataclass(frozen=True)
class BylineEntry:
    position: int
    author_key: str
    university_id: str
    professor_id: Optional[str] = None


@dataclass(frozen=True)
class Byline:
    pub_id: str
    entries: tuple[BylineEntry, ...]

    def __len__(self):
        return len(self.entries)

    def validate(self):
        if not self.entries:
            raise BylineError(f"publication {self.pub_id!r}: byline has no authors")
        positions = [e.position for e in self.entries]
        if positions != list(range(1, len(positions) + 1)):
            raise BylineError(
                f"publication {self.pub_id!r}: byline positions {sorted(positions)} "
                f"are not exactly 1..{len(positions)}"
            )
        linked = [e.professor_id for e in self.entries if e.professor_id]
        if len(linked) != len(set(linked)):
            raise BylineError(
                f"publication {self.pub_id!r}: a professor appears twice in the byline"
            )


@dataclass(frozen=True)
class Taxonomy:
    uda_of: Mapping[str, str]
    policy_of: Mapping[str, BylinePolicy]
    sc_ids: Optional[frozenset] = None  # None = subject categories unchecked


@dataclass(frozen=True)
class ObservationConfig:
    period_start_year: int = 2015
    period_end_year: int = 2017
    observation_year: int = 2018
    cohort_key: CohortKey = CohortKey.SDS

    def __post_init__(self):
        if not (self.period_start_year <= self.period_end_year <= self.observation_year):
            raise ConfigError(
                "expected period_start <= period_end <= observation_year, got "
                f"{self.period_start_year}, {self.period_end_year}, {self.observation_year}"
            )

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "ObservationConfig":
        known = {"period_start", "period_end", "observation_year", "cohort_key"}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        try:
            if "period_start" in values:
                kwargs["period_start_year"] = int(values["period_start"])
            if "period_end" in values:
                kwargs["period_end_year"] = int(values["period_end"])
            if "observation_year" in values:
                kwargs["observation_year"] = int(values["observation_year"])
            if "cohort_key" in values:
                kwargs["cohort_key"] = CohortKey(values["cohort_key"])
        except ValueError as exc:
            raise ConfigError(f"bad config value: {exc}") from None
        return cls(**kwargs)

    def to_mapping(self) -> dict:
        return {
            "period_start": str(self.period_start_year),
            "period_end": str(self.period_end_year),
            "observation_year": str(self.observation_year),
            "cohort_key": self.cohort_key.value,
        }


def read_key_values(path) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def load_config(path) -> ObservationConfig:
    return ObservationConfig.from_mapping(read_key_values(path))


@dataclass(frozen=True)
class WeightsTable:
    """Citation/IF weights keyed by ``(sc_id, window_years)``."""

    weights: Mapping[tuple, tuple]

    def __post_init__(self):
        for key, (w_c, w_if) in self.weights.items():
            if w_c < 0 or w_if < 0 or w_c + w_if <= 0:
                raise SchemaError(
                    f"weights for {key}: need w_citation >= 0, w_if >= 0 and a "
                    f"positive sum, got ({w_c}, {w_if})"
                )

    def lookup(self, sc_id: str, window_years: int) -> tuple:
        try:
            return self.weights[(sc_id, window_years)]
        except KeyError:
            raise MissingWeightsError(sc_id, window_years) from None

    @property
    def sc_ids(self) -> frozenset:
        return frozenset(sc for sc, _ in self.weights)

    @classmethod
    def uniform(cls, sc_ids: Iterable[str], windows: Iterable[int], w_citation, w_if):
        windows = list(windows)
        return cls({(sc, w): (w_citation, w_if) for sc in sc_ids for w in windows})


@dataclass(frozen=True)
class LoadReport:
    n_professors_read: int = 0
    excluded_professors: tuple = ()
    unlinked_entries: int = 0

    @property
    def n_excluded(self) -> int:
        return len(self.excluded_professors)


@dataclass(frozen=True)
class Corpus:
    professors: Mapping[str, Professor]
    publications: Mapping[str, Publication]
    bylines: Mapping[str, Byline]
    taxonomy: Taxonomy
    config: ObservationConfig
    weights: Optional[WeightsTable] = None
    report: LoadReport = field(default_factory=LoadReport)
    # professor_id -> tuple of (pub_id, byline position)
    authorships: Mapping[str, tuple] = field(default_factory=dict)

    def publications_of(self, professor_id: str) -> tuple:
        return self.authorships.get(professor_id, ())

    def cohort_of(self, professor: Professor) -> tuple:
        if self.config.cohort_key is CohortKey.SDS_AND_RANK:
            return (professor.sds_id, professor.academic_rank.value)
        return (professor.sds_id,)

    def cohorts(self) -> dict:
        """Cohort key -> sorted professor ids, keys in sorted order."""
        groups = defaultdict(list)
        for pid, prof in self.professors.items():
            groups[self.cohort_of(prof)].append(pid)
        return {key: sorted(groups[key]) for key in sorted(groups)}

    def byline_policy(self, professor: Professor) -> BylinePolicy:
        return self.taxonomy.policy_of[professor.sds_id]


def citation_window(publication_year: int, observation_year: int) -> int:
    """Number of calendar years, inclusive, in which the paper could be cited."""
    if publication_year > observation_year:
        raise OrderingError(
            f"publication year {publication_year} is after observation year {observation_year}"
        )
    return observation_year - publication_year + 1


def build_corpus(
    professors: Iterable[dict],
    publications: Iterable[Publication],
    byline_entries: Iterable[tuple],
    taxonomy: Taxonomy,
    config: ObservationConfig,
    weights: Optional[WeightsTable] = None,
) -> Corpus:
    """Cross-link and validate already-parsed records.

    ``professors`` yields dicts with professor_id, sds_id, academic_rank and
    years_on_staff; ``byline_entries`` yields ``(pub_id, BylineEntry)`` pairs.
    """
    profs = {}
    excluded = []
    n_read = 0
    for row in professors:
        n_read += 1
        pid = row["professor_id"]
        if pid in profs or pid in excluded:
            raise DuplicateKeyError(f"duplicate professor_id {pid!r}")
        sds = row["sds_id"]
        if sds not in taxonomy.uda_of:
            raise SchemaError(f"professor {pid!r}: unknown sds_id {sds!r}")
        years = int(row["years_on_staff"])
        if years < MIN_YEARS_ON_STAFF:
            excluded.append(pid)
            continue
        profs[pid] = Professor(
            pid, sds, taxonomy.uda_of[sds], AcademicRank(row["academic_rank"]), years
        )

    pubs = {}
    for pub in publications:
        if pub.pub_id in pubs:
            raise DuplicateKeyError(f"duplicate pub_id {pub.pub_id!r}")
        if taxonomy.sc_ids is not None and pub.sc_id not in taxonomy.sc_ids:
            raise SchemaError(f"publication {pub.pub_id!r}: unknown sc_id {pub.sc_id!r}")
        if not config.period_start_year <= pub.year <= config.period_end_year:
            raise SchemaError(
                f"publication {pub.pub_id!r}: year {pub.year} outside "
                f"{config.period_start_year}-{config.period_end_year}"
            )
        if pub.citations < 0 or pub.journal_if < 0:
            raise SchemaError(f"publication {pub.pub_id!r}: negative citations or IF")
        pubs[pub.pub_id] = pub

    grouped = defaultdict(list)
    excluded_set = set(excluded)
    unlinked = 0
    for pub_id, entry in byline_entries:
        if pub_id not in pubs:
            raise SchemaError(f"byline row for unknown pub_id {pub_id!r}")
        if entry.professor_id:
            if entry.professor_id in excluded_set:
                entry = BylineEntry(entry.position, entry.author_key, entry.university_id)
                unlinked += 1
            elif entry.professor_id not in profs:
                raise SchemaError(
                    f"publication {pub_id!r}: byline links unknown professor "
                    f"{entry.professor_id!r}"
                )
        grouped[pub_id].append(entry)

    bylines = {}
    authorships = defaultdict(list)
    for pub_id in sorted(grouped):
        byline = Byline(pub_id, tuple(sorted(grouped[pub_id], key=lambda e: e.position)))
        byline.validate()
        bylines[pub_id] = byline
        for e in byline.entries:
            if e.professor_id:
                authorships[e.professor_id].append((pub_id, e.position))

    return Corpus(
        professors=MappingProxyType(profs),
        publications=MappingProxyType(pubs),
        bylines=MappingProxyType(bylines),
        taxonomy=taxonomy,
        config=config,
        weights=weights,
        report=LoadReport(n_read, tuple(excluded), unlinked),
        authorships=MappingProxyType({k: tuple(v) for k, v in sorted(authorships.items())}),
    )


# --- CSV ingestion -------------------------------------------------------

PROFESSOR_COLUMNS = ("professor_id", "sds_id", "academic_rank", "years_on_staff")
PUBLICATION_COLUMNS = ("pub_id", "year", "sc_id", "citations", "journal_if", "doc_type")
BYLINE_COLUMNS = ("pub_id", "position", "author_key", "university_id", "professor_id")
TAXONOMY_COLUMNS = ("sds_id", "uda_id", "byline_policy")
WEIGHTS_COLUMNS = ("sc_id", "window_years", "w_citation", "w_if")


def _rows(path, columns):
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in columns if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"{path.name}: missing columns {', '.join(missing)}")
        for lineno, row in enumerate(reader, 2):
            yield f"{path.name}:{lineno}", row


def _parse(where, row, key, conv):
    try:
        return conv(row[key].strip())
    except (ValueError, TypeError, AttributeError):
        raise SchemaError(f"{where}: bad {key} {row.get(key)!r}") from None


def read_taxonomy(path, sc_ids=None) -> Taxonomy:
    uda_of, policy_of = {}, {}
    for where, row in _rows(path, TAXONOMY_COLUMNS):
        sds = row["sds_id"].strip()
        if sds in uda_of:
            raise DuplicateKeyError(f"{where}: duplicate sds_id {sds!r}")
        uda_of[sds] = row["uda_id"].strip()
        policy_of[sds] = _parse(where, row, "byline_policy", BylinePolicy)
    return Taxonomy(
        MappingProxyType(uda_of),
        MappingProxyType(policy_of),
        None if sc_ids is None else frozenset(sc_ids),
    )


def read_weights(path) -> WeightsTable:
    table = {}
    for where, row in _rows(path, WEIGHTS_COLUMNS):
        key = (row["sc_id"].strip(), _parse(where, row, "window_years", int))
        if key in table:
            raise DuplicateKeyError(f"{where}: duplicate weights row {key}")
        w_c = _parse(where, row, "w_citation", float)
        w_if = _parse(where, row, "w_if", float)
        if w_c < 0 or w_if < 0 or w_c + w_if <= 0:
            raise SchemaError(f"{where}: invalid weights ({w_c}, {w_if})")
        table[key] = (w_c, w_if)
    return WeightsTable(MappingProxyType(table))


def _professor_rows(path):
    for where, row in _rows(path, PROFESSOR_COLUMNS):
        out = {k: row[k].strip() for k in PROFESSOR_COLUMNS}
        _parse(where, row, "years_on_staff", int)
        _parse(where, row, "academic_rank", AcademicRank)
        yield out


def _publication_rows(path):
    for where, row in _rows(path, PUBLICATION_COLUMNS):
        yield Publication(
            row["pub_id"].strip(),
            _parse(where, row, "year", int),
            row["sc_id"].strip(),
            _parse(where, row, "citations", int),
            _parse(where, row, "journal_if", float),
            _parse(where, row, "doc_type", DocType),
        )


def _byline_rows(path):
    for where, row in _rows(path, BYLINE_COLUMNS):
        yield row["pub_id"].strip(), BylineEntry(
            _parse(where, row, "position", int),
            row["author_key"].strip(),
            row["university_id"].strip(),
            row["professor_id"].strip() or None,
        )


def load_corpus(
    professor_file,
    publication_file,
    byline_file,
    taxonomy_file,
    weights_file=None,
    config: Optional[ObservationConfig] = None,
) -> Corpus:
    """Read the five CSV inputs and return a validated, cross-linked corpus.

    When a weights file is given its subject categories become the set of
    known ``sc_id`` values, and publications outside it are rejected.
    """
    config = config or ObservationConfig()
    weights = read_weights(weights_file) if weights_file is not None else None
    taxonomy = read_taxonomy(taxonomy_file, weights.sc_ids if weights else None)
    return build_corpus(
        _professor_rows(professor_file),
        _publication_rows(publication_file),
        _byline_rows(byline_file),
        taxonomy,
        config,
        weights,
    )


CORPUS_FILES = {
    "professors": "professors.csv",
    "publications": "publications.csv",
    "bylines": "bylines.csv",
    "taxonomy": "taxonomy.csv",
    "weights": "weights.csv",
}


def load_corpus_dir(directory, config: Optional[ObservationConfig] = None) -> Corpus:
    directory = Path(directory)
    weights = directory / CORPUS_FILES["weights"]
    return load_corpus(
        directory / CORPUS_FILES["professors"],
        directory / CORPUS_FILES["publications"],
        directory / CORPUS_FILES["bylines"],
        directory / CORPUS_FILES["taxonomy"],
        weights if weights.exists() else None,
        config,
    )


def write_corpus(corpus: Corpus, directory) -> None:
    """Write the corpus back out in the input CSV schemas (sorted, stable)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def dump(name, header, rows):
        with open(directory / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    dump(
        CORPUS_FILES["professors"],
        PROFESSOR_COLUMNS,
        (
            (p.professor_id, p.sds_id, p.academic_rank.value, p.years_on_staff)
            for p in corpus.professors.values()
        ),
    )
    dump(
        CORPUS_FILES["publications"],
        PUBLICATION_COLUMNS,
        (
            (p.pub_id, p.year, p.sc_id, p.citations, repr(float(p.journal_if)), p.doc_type.value)
            for p in corpus.publications.values()
        ),
    )
    dump(
        CORPUS_FILES["bylines"],
        BYLINE_COLUMNS,
        (
            (b.pub_id, e.position, e.author_key, e.university_id, e.professor_id or "")
            for b in corpus.bylines.values()
            for e in b.entries
        ),
    )
    dump(
        CORPUS_FILES["taxonomy"],
        TAXONOMY_COLUMNS,
        (
            (sds, corpus.taxonomy.uda_of[sds], corpus.taxonomy.policy_of[sds].value)
            for sds in corpus.taxonomy.uda_of
        ),
    )
    if corpus.weights is not None:
        dump(
            CORPUS_FILES["weights"],
            WEIGHTS_COLUMNS,
            (
                (sc, w, repr(float(wc)), repr(float(wi)))
                for (sc, w), (wc, wi) in sorted(corpus.weights.weights.items())
            ),
        )
