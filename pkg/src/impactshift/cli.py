"""Command-line entry point: score, rank, compare, synth and pipeline."""

from __future__ import annotations

import argparse
import dataclasses
import datetime as dt
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .compare import compare_rankings, write_report
from .corpus import CORPUS_FILES, CohortKey, ObservationConfig, load_config, load_corpus_dir
from .errors import EmptyCohortError, ImpactError, SchemaError
from .impact import ScoreVariant, read_scores, score_corpus, write_scores
from .normalization import build_baselines, read_baselines, write_baselines
from .ranking import rank_scores, read_rankings, write_rankings
from .synth import load_spec, write_synthetic

MANIFEST = "manifest.json"


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: Path, command: str, inputs: dict, config: dict) -> None:
    """One manifest per output directory; only ``timestamp`` varies between runs."""
    files = {
        name: {"path": str(path), "sha256": _sha256(path)}
        for name, path in sorted(inputs.items())
        if path is not None and Path(path).is_file()
    }
    digest = hashlib.sha256(
        "".join(f"{n}:{f['sha256']}\n" for n, f in files.items()).encode()
    ).hexdigest()
    manifest = {
        "tool": "impactshift",
        "version": __version__,
        "command": command,
        "inputs": files,
        "config": config,
        "corpus_digest": digest,
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    }
    with open(out_dir / MANIFEST, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _variants(flag: str) -> list:
    return {"c": [ScoreVariant.C], "wc": [ScoreVariant.WC]}.get(
        flag, [ScoreVariant.C, ScoreVariant.WC]
    )


def _config(args, data_dir=None) -> ObservationConfig:
    path = args.config
    if path is None and data_dir is not None and (Path(data_dir) / "config.txt").is_file():
        path = Path(data_dir) / "config.txt"
    config = load_config(path) if path else ObservationConfig()
    if args.cohort_key:
        config = dataclasses.replace(config, cohort_key=CohortKey(args.cohort_key))
    return config, path


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _corpus_inputs(data_dir, config_path):
    inputs = {k: Path(data_dir) / v for k, v in CORPUS_FILES.items()}
    inputs["config"] = config_path
    return inputs


def _score(args):
    config, config_path = _config(args, args.data_dir)
    corpus = load_corpus_dir(args.data_dir, config)
    baselines = read_baselines(args.baselines) if args.baselines else build_baselines(corpus)
    scores = score_corpus(corpus, baselines, _variants(args.variant))
    return corpus, baselines, scores, config, config_path


def cmd_score(args) -> int:
    corpus, baselines, scores, config, config_path = _score(args)
    out = _out_dir(args)
    write_scores(scores, out / "scores.csv", args.full_precision)
    write_baselines(baselines, out / "baselines.csv")
    inputs = _corpus_inputs(args.data_dir, config_path)
    inputs["baselines"] = args.baselines
    write_manifest(out, "score", inputs, config.to_mapping())
    if corpus.report.n_excluded:
        print(
            f"excluded {corpus.report.n_excluded} professor(s) with fewer than 2 years on staff",
            file=sys.stderr,
        )
    return 0


def cmd_rank(args) -> int:
    wanted = set(_variants(args.variant))
    scores = [s for s in read_scores(args.scores) if s.variant in wanted]
    if not scores:
        raise EmptyCohortError(f"{args.scores}: no scores left to rank")
    out = _out_dir(args)
    write_rankings(rank_scores(scores).values(), out / "ranking.csv", args.full_precision)
    write_manifest(out, "rank", {"scores": args.scores}, {"variant": args.variant})
    return 0


def _split(rankings: dict, preferred: ScoreVariant) -> dict:
    variants = {v for _, v in rankings}
    if not variants:
        raise EmptyCohortError("ranking file is empty")
    pick = preferred if preferred in variants else None
    if pick is None:
        if len(variants) > 1:
            raise SchemaError(f"cannot choose among variants {sorted(v.value for v in variants)}")
        pick = variants.pop()
    return {k: c for (k, v), c in rankings.items() if v is pick}


def cmd_compare(args) -> int:
    base = read_rankings(args.base)
    alt = read_rankings(args.alt) if args.alt else base
    report = compare_rankings(_split(base, ScoreVariant.C), _split(alt, ScoreVariant.WC))
    out = _out_dir(args)
    write_report(report, out, args.full_precision)
    write_manifest(out, "compare", {"base": args.base, "alt": args.alt}, {})
    return 0


def cmd_synth(args) -> int:
    spec = load_spec(args.spec, args.seed)
    out = _out_dir(args)
    write_synthetic(spec, out)
    write_manifest(out, "synth", {"spec": args.spec}, {"seed": str(spec.seed)})
    return 0


def cmd_pipeline(args) -> int:
    args.variant = "both"
    corpus, baselines, scores, config, config_path = _score(args)
    out = _out_dir(args)
    fp = args.full_precision
    write_scores(scores, out / "scores.csv", fp)
    write_baselines(baselines, out / "baselines.csv")
    rankings = rank_scores(scores)
    write_rankings(rankings.values(), out / "ranking.csv", fp)
    report = compare_rankings(
        {k: c for (k, v), c in rankings.items() if v is ScoreVariant.C},
        {k: c for (k, v), c in rankings.items() if v is ScoreVariant.WC},
    )
    write_report(report, out, fp)
    inputs = _corpus_inputs(args.data_dir, config_path)
    inputs["baselines"] = args.baselines
    write_manifest(out, "pipeline", inputs, config.to_mapping())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file: period_start, period_end, "
                        "observation_year, cohort_key")
    common.add_argument("--out-dir", default=".", help="output directory (default: .)")
    common.add_argument("--cohort-key", choices=[k.value for k in CohortKey])
    common.add_argument("--variant", choices=["c", "wc", "both"], default="both")
    common.add_argument("--full-precision", action="store_true",
                        help="write full float precision instead of table rounding")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="seed for synth")

    parser = argparse.ArgumentParser(
        prog="impactshift",
        description="Total impact of professors by early citations vs citations+IF, "
        "and how rankings shift between the two.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="baselines and total impact scores")
    p.add_argument("data_dir", help="directory holding the corpus CSV files")
    p.add_argument("--baselines", help="use this baselines.csv instead of building one")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rank", parents=[common], help="rank a scores file per cohort")
    p.add_argument("scores")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compare", parents=[common], help="compare two ranking sets")
    p.add_argument("base", help="ranking.csv; its C variant is used if present")
    p.add_argument("alt", nargs="?", help="second ranking.csv (default: same file, WC variant)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    p.add_argument("--spec", required=True, help="key=value synthetic corpus spec")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", parents=[common], help="score, rank and compare in one go")
    p.add_argument("data_dir")
    p.add_argument("--baselines")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ImpactError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error[input]: file not found: {exc.filename}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
