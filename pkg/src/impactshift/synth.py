"""Seeded synthetic corpora.

Random numbers come from SplitMix64 (Steele, Lea & Flood 2014) on 64-bit
unsigned integers, so a given seed gives the same corpus on any platform.
Each SDS draws from its own stream, seeded with ``splitmix64(seed ^ index)``
where ``index`` is the 0-based SDS number; SDSs can therefore be generated in
any order.

Distributions, all by inverse transform or Box-Muller from that stream:

* uniform double: ``((x >> 11) + 1) / 2**53`` in (0, 1]
* publications of a productive professor: ``1 + Geometric`` with the given mean
  (truncated at ``pubs_max``); a professor is unproductive with probability
  ``unproductive_share``
* citations: 0 with probability ``uncited_share``, else ``ceil(LogNormal)``
  with mean ``citation_mean - 0.5`` and shape ``citation_sigma``
* impact factor: 0 with probability ``if_missing_share``, else LogNormal with
  mean ``if_mean`` and shape ``if_sigma``
* authors per publication: ``1 + Geometric`` with mean ``authors_mean``
  (truncated at ``authors_max``)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .corpus import (
    AcademicRank,
    BylineEntry,
    BylinePolicy,
    DocType,
    ObservationConfig,
    Publication,
    Taxonomy,
    WeightsTable,
    build_corpus,
    read_key_values,
    write_corpus,
)
from .errors import SpecError

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One SplitMix64 output for the given 64-bit state (already advanced)."""
    z = state & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        return splitmix64(self.state)

    def uniform(self) -> float:
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def below(self, n: int) -> int:
        """Integer in [0, n) (multiply-shift; bias < n / 2**64)."""
        return (self.next_u64() * n) >> 64

    def geometric(self, mean: float) -> int:
        """Failures before the first success, with the given mean."""
        if mean <= 0:
            return 0
        p = 1.0 / (1.0 + mean)
        return int(math.floor(math.log(self.uniform()) / math.log1p(-p)))

    def normal(self) -> float:
        u1, u2 = self.uniform(), self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def lognormal(self, mean: float, sigma: float) -> float:
        mu = math.log(mean) - sigma * sigma / 2
        return math.exp(mu + sigma * self.normal())


def _per_sds(value, n, name, conv=float):
    if isinstance(value, (list, tuple)):
        if len(value) != n:
            raise SpecError(f"{name}: expected {n} values (one per SDS), got {len(value)}")
        return [conv(v) for v in value]
    return [conv(value)] * n


@dataclass(frozen=True)
class SynthSpec:
    n_sds: int = 3
    professors_per_sds: object = 30  # int or (lo, hi) inclusive
    unproductive_share: object = 0.1
    pubs_mean: float = 4.0
    pubs_max: int = 60
    uncited_share: object = 0.2
    citation_mean: float = 5.0
    citation_sigma: float = 0.8
    if_mean: float = 2.0
    if_sigma: float = 0.5
    if_missing_share: float = 0.0
    authors_mean: float = 3.0
    authors_max: int = 30
    colleague_share: float = 0.15
    home_share: float = 0.5
    n_universities: int = 20
    sc_per_sds: int = 2
    n_uda: int = 1
    byline_policy: object = "alphabetical"
    w_if: tuple = (0.6, 0.4, 0.25, 0.15)  # by window 1, 2, ...; last value repeats
    period_start: int = 2015
    period_end: int = 2017
    observation_year: int = 2018
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def sds_ids(self):
        width = max(2, len(str(self.n_sds)))
        return [f"S{i + 1:0{width}d}" for i in range(self.n_sds)]

    def validate(self):
        if self.n_sds < 1:
            raise SpecError("n_sds must be >= 1")
        size = self.professors_per_sds
        lo, hi = (size, size) if isinstance(size, int) else tuple(size)
        if not 1 <= lo <= hi:
            raise SpecError(f"professors_per_sds must be >= 1, got {size!r}")
        for name in ("unproductive_share", "uncited_share"):
            for v in _per_sds(getattr(self, name), self.n_sds, name):
                if not 0 <= v <= 1:
                    raise SpecError(f"{name} must lie in [0, 1], got {v}")
        for name in ("if_missing_share", "colleague_share", "home_share"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise SpecError(f"{name} must lie in [0, 1], got {v}")
        if any(v >= 1 for v in _per_sds(self.unproductive_share, self.n_sds, "unproductive_share")):
            raise SpecError("unproductive_share = 1 leaves no publications to generate")
        for name in ("pubs_mean", "citation_mean", "authors_mean"):
            if getattr(self, name) < 1:
                raise SpecError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name in ("if_mean", "citation_sigma", "if_sigma"):
            if getattr(self, name) <= 0:
                raise SpecError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("pubs_max", "authors_max", "n_universities", "sc_per_sds", "n_uda"):
            if getattr(self, name) < 1:
                raise SpecError(f"{name} must be >= 1")
        if not self.w_if or any(not 0 <= w <= 1 for w in self.w_if):
            raise SpecError("w_if values must lie in [0, 1]")
        for p in _per_sds(self.byline_policy, self.n_sds, "byline_policy", str):
            try:
                BylinePolicy(p)
            except ValueError:
                raise SpecError(f"unknown byline_policy {p!r}") from None
        if not self.period_start <= self.period_end <= self.observation_year:
            raise SpecError("need period_start <= period_end <= observation_year")
        if not 0 <= self.seed <= MASK64:
            raise SpecError("seed must be an unsigned 64-bit integer")

    def config(self) -> ObservationConfig:
        return ObservationConfig(self.period_start, self.period_end, self.observation_year)


_LIST_FIELDS = {"unproductive_share", "uncited_share", "byline_policy", "w_if"}


def parse_spec(values: dict, seed: Optional[int] = None) -> SynthSpec:
    """Build a spec from ``key=value`` strings (lists comma-separated, ranges ``lo-hi``)."""
    types = {f.name: f for f in fields(SynthSpec)}
    kwargs = {}
    for key, raw in values.items():
        if key not in types:
            raise SpecError(f"unknown synth key {key!r}")
        try:
            if key == "professors_per_sds":
                if "-" in raw:
                    lo, hi = raw.split("-", 1)
                    kwargs[key] = (int(lo), int(hi))
                else:
                    kwargs[key] = int(raw)
            elif key == "byline_policy":
                parts = [p.strip() for p in raw.split(",")]
                kwargs[key] = parts if len(parts) > 1 else parts[0]
            elif key == "w_if":
                kwargs[key] = tuple(float(p) for p in raw.split(","))
            elif key in _LIST_FIELDS:
                parts = [float(p) for p in raw.split(",")]
                kwargs[key] = parts if len(parts) > 1 else parts[0]
            elif isinstance(types[key].default, int):
                kwargs[key] = int(raw, 0)
            else:
                kwargs[key] = float(raw)
        except ValueError:
            raise SpecError(f"bad value for {key}: {raw!r}") from None
    if seed is not None:
        kwargs["seed"] = seed
    return SynthSpec(**kwargs)


def load_spec(path, seed: Optional[int] = None) -> SynthSpec:
    try:
        return parse_spec(read_key_values(path), seed)
    except SpecError:
        raise
    except Exception as exc:  # ConfigError from a malformed line
        raise SpecError(str(exc)) from None


def sub_seed(seed: int, index: int) -> int:
    return splitmix64((seed ^ index) & MASK64)


_RANKS = list(AcademicRank)


def _generate_sds(spec: SynthSpec, index: int, sds_id: str, sc_ids: list):
    rng = SplitMix64(sub_seed(spec.seed, index))
    size = spec.professors_per_sds
    if isinstance(size, int):
        n_prof = size
    else:
        lo, hi = size
        n_prof = lo + rng.below(hi - lo + 1)
    unproductive = _per_sds(spec.unproductive_share, spec.n_sds, "unproductive_share")[index]
    uncited = _per_sds(spec.uncited_share, spec.n_sds, "uncited_share")[index]
    period = spec.period_end - spec.period_start + 1
    max_years = max(2, period)

    professors, homes, n_own = [], {}, []
    for j in range(n_prof):
        pid = f"{sds_id}-P{j + 1:04d}"
        rank = _RANKS[rng.below(3)]
        years = 2 + rng.below(max_years - 1)
        homes[pid] = f"U{rng.below(spec.n_universities) + 1:03d}"
        professors.append(
            {"professor_id": pid, "sds_id": sds_id, "academic_rank": rank.value,
             "years_on_staff": str(years)}
        )
        if rng.uniform() <= unproductive:
            n_own.append(0)
        else:
            n_own.append(min(spec.pubs_max, 1 + rng.geometric(spec.pubs_mean - 1)))
    productive = [p["professor_id"] for p, k in zip(professors, n_own) if k > 0]

    publications, entries = [], []
    counter = 0
    for prof, k in zip(professors, n_own):
        pid = prof["professor_id"]
        for _ in range(k):
            counter += 1
            pub_id = f"{sds_id}-W{counter:06d}"
            year = spec.period_start + rng.below(period)
            sc = sc_ids[rng.below(len(sc_ids))]
            if rng.uniform() <= uncited:
                cites = 0
            else:
                cites = max(1, math.ceil(rng.lognormal(spec.citation_mean - 0.5, spec.citation_sigma)))
            if rng.uniform() <= spec.if_missing_share:
                jif = 0.0
            else:
                jif = round(rng.lognormal(spec.if_mean, spec.if_sigma), 3)
            publications.append(Publication(pub_id, year, sc, cites, jif, DocType.ARTICLE))

            n_auth = min(spec.authors_max, 1 + rng.geometric(spec.authors_mean - 1))
            own_pos = 1 + rng.below(n_auth)
            used = {pid}
            for pos in range(1, n_auth + 1):
                if pos == own_pos:
                    entries.append((pub_id, BylineEntry(pos, pid, homes[pid], pid)))
                    continue
                if productive and rng.uniform() <= spec.colleague_share:
                    other = productive[rng.below(len(productive))]
                    if other not in used:
                        used.add(other)
                        entries.append((pub_id, BylineEntry(pos, other, homes[other], other)))
                        continue
                if rng.uniform() <= spec.home_share:
                    uni = homes[pid]
                else:
                    uni = f"U{rng.below(spec.n_universities) + 1:03d}"
                entries.append((pub_id, BylineEntry(pos, f"{pub_id}-A{pos}", uni)))
    return professors, publications, entries


def generate_corpus(spec: SynthSpec):
    """Return ``(corpus, weights)``; the weights table is also attached to the corpus."""
    spec.validate()
    sds_ids = spec.sds_ids()
    policies = _per_sds(spec.byline_policy, spec.n_sds, "byline_policy", str)
    sc_of = {
        sds: [f"SC{i * spec.sc_per_sds + k + 1:03d}" for k in range(spec.sc_per_sds)]
        for i, sds in enumerate(sds_ids)
    }
    all_sc = [sc for sds in sds_ids for sc in sc_of[sds]]
    max_window = spec.observation_year - spec.period_start + 1
    table = {}
    for sc in all_sc:
        for w in range(1, max_window + 1):
            w_if = spec.w_if[min(w, len(spec.w_if)) - 1]
            table[(sc, w)] = (1.0 - w_if, w_if)
    weights = WeightsTable(table)
    taxonomy = Taxonomy(
        {sds: str(i % spec.n_uda + 1) for i, sds in enumerate(sds_ids)},
        {sds: BylinePolicy(p) for sds, p in zip(sds_ids, policies)},
        frozenset(all_sc),
    )
    professors, publications, entries = [], [], []
    for i, sds in enumerate(sds_ids):
        p, w, e = _generate_sds(spec, i, sds, sc_of[sds])
        professors += p
        publications += w
        entries += e
    corpus = build_corpus(professors, publications, entries, taxonomy, spec.config(), weights)
    return corpus, weights


def write_synthetic(spec: SynthSpec, out_dir) -> Path:
    """Generate and write the corpus CSVs plus ``config.txt`` into ``out_dir``."""
    corpus, _ = generate_corpus(spec)
    out_dir = Path(out_dir)
    write_corpus(corpus, out_dir)
    with open(out_dir / "config.txt", "w", encoding="utf-8") as fh:
        for k, v in corpus.config.to_mapping().items():
            fh.write(f"{k}={v}\n")
    return out_dir
