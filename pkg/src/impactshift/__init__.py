"""Researcher total impact under early citations vs. a citation/IF combination,
and how the choice shifts scores, ranks, percentiles and quartiles."""

__version__ = "0.1.0"

from .compare import (
    ComparisonReport,
    compare_cohort,
    compare_rankings,
    pearson,
    quartile_contingency,
    spearman,
    uncited_sensitivity,
)
from .corpus import (
    Byline,
    BylineEntry,
    BylinePolicy,
    Corpus,
    ObservationConfig,
    Publication,
    WeightsTable,
    citation_window,
    load_corpus,
    load_corpus_dir,
)
from .credit import fractional_contributions
from .impact import ScoreVariant, publication_score, score_corpus, total_impact
from .normalization import build_baselines, normalized_citations, normalized_if
from .ranking import assign_quartiles, rank_cohort, rank_scores
from .synth import SynthSpec, generate_corpus
