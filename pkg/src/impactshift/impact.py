"""Publication scores and yearly total impact of each professor."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Corpus, Publication, WeightsTable, citation_window
from .credit import fractional_contributions
from .errors import ComputationError, SchemaError
from .normalization import BaselineTable, normalized_citations, normalized_if


class ScoreVariant(str, enum.Enum):
    C = "C"    # normalized early citations only
    WC = "WC"  # weighted citations + impact factor

    @classmethod
    def parse(cls, text: str) -> "ScoreVariant":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise SchemaError(f"unknown score variant {text!r}") from None


@dataclass(frozen=True)
class ImpactScore:
    professor_id: str
    variant: ScoreVariant
    value: float
    n_publications: Optional[int]
    t: Optional[int]
    cohort: Optional[tuple] = None
    uda_id: Optional[str] = None


def publication_score(
    publication: Publication,
    variant,
    baselines: BaselineTable,
    weights: Optional[WeightsTable] = None,
    observation_year: int = 2018,
) -> float:
    """Value of one publication under ``variant``.

    WC is ``w_citation * nc + w_if * nif`` with the weights looked up by
    subject category and citation window.
    """
    variant = ScoreVariant(variant)
    nc = normalized_citations(publication, baselines)
    if variant is ScoreVariant.C:
        return nc
    if weights is None:
        raise ComputationError("variant WC needs a weights table")
    window = citation_window(publication.year, observation_year)
    w_c, w_if = weights.lookup(publication.sc_id, window)
    return w_c * nc + w_if * normalized_if(publication, baselines)


def _sum_over_t(terms, t):
    return math.fsum(terms) / t


def total_impact(
    professor,
    variant,
    corpus: Corpus,
    baselines: BaselineTable,
    weights: Optional[WeightsTable] = None,
) -> ImpactScore:
    """Yearly total impact: credit-weighted publication scores divided by years on staff."""
    if isinstance(professor, str):
        professor = corpus.professors[professor]
    variant = ScoreVariant(variant)
    weights = weights if weights is not None else corpus.weights
    policy = corpus.byline_policy(professor)
    terms = []
    authored = corpus.publications_of(professor.professor_id)
    for pub_id, position in authored:
        pub = corpus.publications[pub_id]
        score = publication_score(pub, variant, baselines, weights, corpus.config.observation_year)
        share = fractional_contributions(corpus.bylines[pub_id], policy).at_position(position)
        terms.append(score * share)
    return ImpactScore(
        professor.professor_id,
        variant,
        _sum_over_t(terms, professor.years_on_staff),
        len(authored),
        professor.years_on_staff,
        corpus.cohort_of(professor),
        professor.uda_id,
    )


def score_corpus(
    corpus: Corpus,
    baselines: BaselineTable,
    variants: Iterable = (ScoreVariant.C, ScoreVariant.WC),
    weights: Optional[WeightsTable] = None,
) -> list:
    """Score every professor under every variant.

    Same numbers as calling :func:`total_impact` per professor, but each
    publication score and credit vector is computed once.  Output is sorted by
    cohort, professor id, variant.
    """
    variants = [ScoreVariant(v) for v in variants]
    weights = weights if weights is not None else corpus.weights
    obs = corpus.config.observation_year
    pub_scores = {v: {} for v in variants}
    credit_cache = {}

    out = []
    for key, members in corpus.cohorts().items():
        for pid in members:
            prof = corpus.professors[pid]
            policy = corpus.byline_policy(prof)
            authored = corpus.publications_of(pid)
            shares = []
            for pub_id, position in authored:
                ck = (pub_id, policy)
                credit = credit_cache.get(ck)
                if credit is None:
                    credit = fractional_contributions(corpus.bylines[pub_id], policy)
                    credit_cache[ck] = credit
                shares.append((pub_id, credit.at_position(position)))
            for v in variants:
                cache = pub_scores[v]
                terms = []
                for pub_id, share in shares:
                    s = cache.get(pub_id)
                    if s is None:
                        s = publication_score(corpus.publications[pub_id], v, baselines, weights, obs)
                        cache[pub_id] = s
                    terms.append(s * share)
                out.append(
                    ImpactScore(
                        pid, v, _sum_over_t(terms, prof.years_on_staff), len(authored),
                        prof.years_on_staff, key, prof.uda_id,
                    )
                )
    return out


# --- scores.csv ----------------------------------------------------------

SCORE_COLUMNS = ("professor_id", "variant", "value", "n_publications", "t")
COHORT_SEP = "|"


def format_cohort(key) -> str:
    return COHORT_SEP.join(key) if key else ""


def parse_cohort(text: str):
    text = (text or "").strip()
    return tuple(text.split(COHORT_SEP)) if text else None


def format_number(value: float, digits: int, full_precision: bool) -> str:
    if full_precision:
        return repr(float(value))
    return f"{value:.{digits}f}"


def write_scores(scores: Iterable[ImpactScore], path, full_precision: bool = False) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("cohort", "uda_id") + SCORE_COLUMNS)
        for s in scores:
            w.writerow(
                (
                    format_cohort(s.cohort),
                    s.uda_id or "",
                    s.professor_id,
                    s.variant.value,
                    format_number(s.value, 3, full_precision),
                    "" if s.n_publications is None else s.n_publications,
                    "" if s.t is None else s.t,
                )
            )


def read_scores(path) -> list:
    """Read a scores file; ``cohort`` and ``uda_id`` columns are optional."""
    out = []
    name = Path(path).name
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or ()
        missing = [c for c in ("professor_id", "variant", "value") if c not in fields]
        if missing:
            raise SchemaError(f"{name}: missing columns {', '.join(missing)}")
        for lineno, row in enumerate(reader, 2):
            try:
                value = float(row["value"])
                n_pubs = int(row["n_publications"]) if (row.get("n_publications") or "").strip() else None
                t = int(row["t"]) if (row.get("t") or "").strip() else None
            except ValueError:
                raise SchemaError(f"{name}:{lineno}: malformed numeric field") from None
            out.append(
                ImpactScore(
                    row["professor_id"].strip(),
                    ScoreVariant.parse(row["variant"]),
                    value,
                    n_pubs,
                    t,
                    parse_cohort(row.get("cohort")),
                    (row.get("uda_id") or "").strip() or None,
                )
            )
    return out
