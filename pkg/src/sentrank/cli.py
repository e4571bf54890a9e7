"""Command-line interface: rank, summarize, and eval subcommands.

Precedence for every setting: command-line flag over config-file entry
over built-in default. The config file is flat `key=value` text named by
--config or the SENTRANK_CONFIG environment variable. JSON results go to
stdout; all diagnostics go to stderr.
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .embeddings import load_vectors
from .errors import SentrankError
from .evaluation import evaluate_selection, load_corpus
from .pipeline import SentenceRanker
from .preprocess import load_phrase_lexicon

CONFIG_ENV = "SENTRANK_CONFIG"

_FLOAT_KEYS = {"delta_swg", "delta_spg", "gamma_pct", "d", "gamma", "tol", "select_pct"}
_INT_KEYS = {
    "window_swg", "window_spg", "cluster_cap", "wmd_cap", "max_iter",
    "budget_words", "budget_chars",
}


def _read_config(path: Optional[str]) -> Dict[str, str]:
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    config = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise SentrankError(f"{path}:{lineno}: expected key=value")
            config[key.strip()] = value.strip()
    return config


def _coerce(key: str, value: str):
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    return value


def _merged(args: argparse.Namespace, keys: List[str]) -> Dict[str, object]:
    """Apply flag > config file > default per setting."""
    config = _read_config(args.config)
    merged = {}
    for key in keys:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
        elif key in config:
            merged[key] = _coerce(key, config[key])
    return merged


_RANKER_KEYS = [
    "method", "structure", "window_swg", "window_spg", "delta_swg", "delta_spg",
    "gamma_pct", "d", "tol", "max_iter", "gamma", "cluster_cap", "wmd_cap",
]


def _build_ranker(args, ablations=()) -> SentenceRanker:
    settings = _merged(args, _RANKER_KEYS + ["embeddings", "phrases"])
    embeddings_path = settings.pop("embeddings", None)
    phrases_path = settings.pop("phrases", None)
    if embeddings_path is None:
        raise SentrankError("an embeddings file is required (--embeddings or config)")
    table = load_vectors(embeddings_path)
    lexicon = load_phrase_lexicon(phrases_path) if phrases_path else frozenset()
    return SentenceRanker(
        embeddings=table, phrase_lexicon=lexicon, ablations=ablations, **settings
    )


def _parse_ablate(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [flag for flag in value.replace("+", ",").split(",") if flag]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--embeddings", help="text vector file")
    parser.add_argument("--phrases", help="phrase lexicon file")
    parser.add_argument("--method", choices=["ssr", "spr", "swr"])
    parser.add_argument("--structure", choices=["inverted_pyramid", "hourglass"])
    parser.add_argument("--window-swg", dest="window_swg", type=int)
    parser.add_argument("--window-spg", dest="window_spg", type=int)
    parser.add_argument("--delta-swg", dest="delta_swg", type=float)
    parser.add_argument("--delta-spg", dest="delta_spg", type=float)
    parser.add_argument("--gamma-pct", dest="gamma_pct", type=float)
    parser.add_argument("--d", type=float, help="PageRank damping factor")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--max-iter", dest="max_iter", type=int)
    parser.add_argument("--gamma", type=float, help="RBF kernel gamma")
    parser.add_argument("--cluster-cap", dest="cluster_cap", type=int)
    parser.add_argument("--wmd-cap", dest="wmd_cap", type=int)
    parser.add_argument("--verbose", action="store_true")


def _ranking_payload(doc_id: str, method: str, ranking) -> Dict[str, object]:
    return {
        "id": doc_id,
        "method": method,
        "ranking": [
            {
                "index": idx,
                "rank": rank,
                "f_s": None,  # filled below
                "unit_score": ranking.unit_scores[idx],
                "cluster": ranking.cluster[idx],
                "round": ranking.round[idx],
            }
            for rank, idx in enumerate(ranking.order, start=1)
        ],
    }


def cmd_rank(args) -> int:
    ablations = _parse_ablate(args.ablate)
    ranker = _build_ranker(args, ablations)
    text = Path(args.input).read_text("utf-8")
    ranking = ranker.rank(text)
    payload = _ranking_payload(Path(args.input).stem, ranker.method, ranking)
    for entry in payload["ranking"]:
        entry["f_s"] = ranker.salience_.f_s[entry["index"]]
    json.dump(payload, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_summarize(args) -> int:
    if (args.budget_words is None) == (args.budget_chars is None):
        raise SentrankError("exactly one of --budget-words / --budget-chars is required")
    ranker = _build_ranker(args, _parse_ablate(args.ablate))
    text = Path(args.input).read_text("utf-8")
    if args.budget_words is not None:
        sentences, over = ranker.summarize(text, args.budget_words, unit="words")
    else:
        sentences, over = ranker.summarize(text, args.budget_chars, unit="chars")
    for raw in sentences:
        print(raw)
    if over:
        print("warning: top sentence alone exceeds the budget", file=sys.stderr)
    return 0


def _reference_judges(value: Optional[str]):
    if value is None or value == "combined":
        return None
    if value.startswith("judge"):
        return [int(value[5:])]
    raise SentrankError(f"bad --references value {value!r}")


def cmd_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    settings = _merged(args, ["select_pct", "references"])
    pct = float(settings.get("select_pct", 10.0))
    judges = _reference_judges(settings.get("references"))

    variants = {"baseline": []}
    for flag in _parse_ablate(args.ablate):
        variants[flag.lower()] = [flag]

    report = {"select_pct": pct, "variants": {}, "documents": {}}
    for name, flags in variants.items():
        ranker = _build_ranker(args, flags)
        totals = [0.0, 0.0, 0.0]
        for doc in corpus:
            order = ranker.rank_presplit(doc.sentences)
            result = evaluate_selection(doc, order, pct, judges)
            report["documents"].setdefault(doc.id, {})[name] = result.as_dict()
            totals[0] += result.r1
            totals[1] += result.r2
            totals[2] += result.rsu4
        count = len(corpus)
        report["variants"][name] = {
            "r1": totals[0] / count, "r2": totals[1] / count, "rsu4": totals[2] / count,
        }
        if args.verbose:
            mean = report["variants"][name]
            print(
                f"{name:12s} R-1 {mean['r1']:.4f}  R-2 {mean['r2']:.4f}  "
                f"R-SU4 {mean['rsu4']:.4f}",
                file=sys.stderr,
            )
    json.dump(report, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank all sentences of a document")
    p_rank.add_argument("input", help="UTF-8 text document")
    _add_common(p_rank)
    p_rank.add_argument("--ablate", help="comma-separated subset of nse,nas,nsc,nsp")
    p_rank.set_defaults(func=cmd_rank)

    p_sum = sub.add_parser("summarize", help="emit a budgeted extractive summary")
    p_sum.add_argument("input")
    _add_common(p_sum)
    p_sum.add_argument("--ablate")
    p_sum.add_argument("--budget-words", dest="budget_words", type=int)
    p_sum.add_argument("--budget-chars", dest="budget_chars", type=int)
    p_sum.set_defaults(func=cmd_summarize)

    p_eval = sub.add_parser("eval", help="score rankings over a JSONL corpus")
    p_eval.add_argument("corpus", help="JSON Lines corpus file")
    _add_common(p_eval)
    p_eval.add_argument("--select-pct", dest="select_pct", type=float)
    p_eval.add_argument("--references", help="judgeN or combined")
    p_eval.add_argument("--ablate", help="variants to add, e.g. nse,nas")
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SentrankError, OSError, ValueError) as exc:
        print(f"sentrank: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
