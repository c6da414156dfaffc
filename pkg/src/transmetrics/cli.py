"""Command-line driver.

Exit status: 0 on success, 1 on data errors, 2 on usage errors.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .arpa import load_arpa, save_arpa
from .corpus import PosTag, read_corpus, load_manifest
from .errors import DataError, ZeroVarianceError
from .metrics import (LENGTH_RATIO, LEX_DENSITY, PP_DIFF, TTR, MetricResult, length_ratio_corpus,
                      lexical_density, type_token_ratio)
from .poslm import MAX_ORDER, VOCABULARY, perplexity, pp_diff, sentence_logprob, train
from .report import SCHEMA_VERSION, build_table, render
from .stats import DEFAULT_LEVEL, DEFAULT_REPLICATES, DEFAULT_SEED, bootstrap_ci, paired_t_test

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2
REPLICATES_ENV = "TRANSMETRICS_REPLICATES"
METRICS = ("ttr", "density", "lenratio", "ppdiff")
METRIC_IDS = {"ttr": TTR, "density": LEX_DENSITY, "lenratio": LENGTH_RATIO, "ppdiff": PP_DIFF}
FORMATS = ("json", "tsv", "markdown")


class UsageError(Exception):
    pass


def default_replicates() -> int:
    value = os.environ.get(REPLICATES_ENV)
    if value is None:
        return DEFAULT_REPLICATES
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{REPLICATES_ENV} must be an integer, got {value!r}") from None


@dataclass
class AnalysisConfig:
    manifest: str
    metrics: tuple = METRICS[:3]
    lm_source: Optional[str] = None
    lm_target: Optional[str] = None
    replicates: int = DEFAULT_REPLICATES
    level: float = DEFAULT_LEVEL
    seed: int = DEFAULT_SEED
    format: str = "json"
    fold_case: bool = False
    count_punct: bool = True
    content_tags: Optional[tuple] = None
    output: Optional[str] = None

    def validate(self):
        if not self.manifest:
            raise UsageError("no manifest given")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise UsageError(f"unknown metric(s) {unknown}; choose from {', '.join(METRICS)}")
        if not self.metrics:
            raise UsageError("no metrics selected")
        if "ppdiff" in self.metrics and not (self.lm_source and self.lm_target):
            raise UsageError("ppdiff needs both --lm-source and --lm-target")
        if self.replicates < 100:
            raise UsageError(f"bootstrap needs at least 100 replicates, got {self.replicates}")
        if not 0 < self.level < 1:
            raise UsageError(f"confidence level must lie in (0, 1), got {self.level}")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        if self.content_tags is not None:
            try:
                self.content_tags = tuple(PosTag(t).value for t in self.content_tags)
            except ValueError as e:
                raise UsageError(str(e)) from None
        self.metrics = tuple(m for m in METRICS if m in self.metrics)
        return self

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["metrics"] = list(self.metrics)
        if self.content_tags is not None:
            doc["content_tags"] = list(self.content_tags)
        return doc


def _split_list(value):
    if value is None:
        return None
    if isinstance(value, str):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    return tuple(value)


def config_from_args(args) -> AnalysisConfig:
    doc = {}
    base = ""
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as f:
                doc = json.load(f)
        except OSError as e:
            raise UsageError(f"cannot read config {args.config}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise UsageError(f"config {args.config} is not valid JSON: {e}") from None
        if not isinstance(doc, dict):
            raise UsageError("config must be a JSON object")
        base = os.path.dirname(args.config)
        bootstrap = doc.pop("bootstrap", {}) or {}
        for key in ("replicates", "level", "seed"):
            if key in bootstrap:
                doc[key] = bootstrap[key]
        known = set(AnalysisConfig.__dataclass_fields__)
        extra = set(doc) - known
        if extra:
            raise UsageError(f"unknown config field(s): {', '.join(sorted(extra))}")
        for key in ("manifest", "lm_source", "lm_target", "output"):
            if doc.get(key) and not os.path.isabs(doc[key]):
                doc[key] = os.path.join(base, doc[key])

    overrides = {
        "manifest": args.manifest, "lm_source": args.lm_source, "lm_target": args.lm_target,
        "replicates": args.replicates, "level": args.level, "seed": args.seed,
        "format": args.format, "output": args.output,
        "metrics": _split_list(args.metrics), "content_tags": _split_list(args.content_tags),
    }
    for key, value in overrides.items():
        if value is not None:
            doc[key] = value
    if args.fold_case:
        doc["fold_case"] = True
    if args.no_count_punct:
        doc["count_punct"] = False
    doc.setdefault("replicates", default_replicates())
    if "metrics" in doc:
        doc["metrics"] = _split_list(doc["metrics"])
    if doc.get("content_tags") is not None:
        doc["content_tags"] = _split_list(doc["content_tags"])
    if "manifest" not in doc:
        raise UsageError("analyze needs --config or --manifest")
    try:
        config = AnalysisConfig(**doc)
    except TypeError as e:
        raise UsageError(str(e)) from None
    return config.validate()


def run_header(command: str, **fields) -> dict:
    return {"tool": "transmetrics", "version": __version__, "command": command, **fields}


def _per_variant(dataset, fn):
    out = {}
    for v in dataset.variants:
        try:
            out[v.key] = fn(v)
        except DataError as e:
            raise DataError(f"dataset {dataset.name!r}, variant {v.key!r}: {e}") from e
    return out


def analyze(config: AnalysisConfig) -> list:
    """Run every selected metric over the dataset; returns one table per metric."""
    dataset = load_manifest(config.manifest)
    lm_sl = lm_tl = None
    if "ppdiff" in config.metrics:
        lm_sl = load_arpa(config.lm_source)
        lm_tl = load_arpa(config.lm_target)

    tables = []
    for metric in config.metrics:
        cis = ttests = None
        if metric == "ttr":
            def stat(sents):
                return type_token_ratio(sents, fold_case=config.fold_case)
            results = _per_variant(dataset, lambda v: stat(v.sentences))
            cis = _per_variant(dataset, lambda v: bootstrap_ci(
                v.sentences, stat, config.level, config.replicates, config.seed))
        elif metric == "density":
            results = _per_variant(dataset, lambda v: lexical_density(
                v.sentences, config.content_tags, config.count_punct))
        elif metric == "lenratio":
            results = _per_variant(dataset, lambda v: length_ratio_corpus(dataset.source, v.sentences))
            ht_keys = [v.key for v in dataset.by_kind("HT")]
            ttests = {}
            if len(ht_keys) == 1:
                ht_ratios = results[ht_keys[0]].per_sentence
                for v in dataset.variants:
                    if v.key == ht_keys[0]:
                        continue
                    try:
                        ttests[v.key] = paired_t_test(ht_ratios, results[v.key].per_sentence)
                    except ZeroVarianceError:
                        ttests[v.key] = None
        else:
            results = _per_variant(dataset, lambda v: MetricResult(
                PP_DIFF, pp_diff(v.sentences, lm_sl, lm_tl), len(v.sentences)))
        tables.append(build_table(dataset, results, cis=cis, ttests=ttests,
                                  metric_id=METRIC_IDS[metric]))
    return tables


def format_report(tables, header: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "run": header,
               "tables": [t.to_dict() for t in tables]}
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    header_line = json.dumps(header, ensure_ascii=False, sort_keys=True)
    parts = []
    if fmt == "tsv":
        parts.append(f"# run: {header_line}\n")
        for t in tables:
            parts.append(f"# table: {t.metric_id}\t{t.dataset}\t{t.direction}\n")
            parts.append(render(t, "tsv"))
    else:
        parts.append(f"<!-- run: {header_line} -->\n")
        for t in tables:
            parts.append("\n" + render(t, "markdown"))
    return "".join(parts)


def cmd_analyze(args) -> int:
    config = config_from_args(args)
    tables = analyze(config)
    header = run_header("analyze", config=config.to_dict(), seed=config.seed)
    text = format_report(tables, header, config.format)
    if config.output:
        with open(config.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_train_lm(args) -> int:
    corpus = read_corpus(args.conllu, "conllu")
    model = train(corpus, args.order, lang=args.lang)
    save_arpa(model, args.out)
    header = run_header("train-lm", conllu=args.conllu, order=args.order, out=args.out, lang=args.lang)
    print("# " + json.dumps(header, sort_keys=True))
    print(f"vocabulary_size\t{len(VOCABULARY)}")
    print(f"sentences\t{len(corpus)}")
    print(f"self_perplexity\t{perplexity(model, corpus)!r}")
    return EXIT_OK


def cmd_perplexity(args) -> int:
    model = load_arpa(args.model)
    corpus = read_corpus(args.input, "conllu")
    header = run_header("perplexity", model=args.model, input=args.input)
    print("# " + json.dumps(header, sort_keys=True))
    if args.per_sentence:
        for i, sent in enumerate(corpus):
            lp, n = sentence_logprob(model, sent)
            print(f"sentence\t{i}\t{lp!r}\t{n}")
    print(f"sentences\t{len(corpus)}")
    print(f"perplexity\t{perplexity(model, corpus)!r}")
    return EXIT_OK


def _order(value):
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid order {value!r}") from None
    if not 1 <= n <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"order must be between 1 and {MAX_ORDER}")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="transmetrics",
                                 description="Compare human, post-edited and machine translations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-lm", help="train a PoS n-gram model and write it as ARPA")
    p.add_argument("--conllu", required=True, help="PoS-tagged training corpus")
    p.add_argument("--order", type=_order, default=6)
    p.add_argument("--out", required=True, help="output ARPA path")
    p.add_argument("--lang", default="und")
    p.set_defaults(func=cmd_train_lm)

    p = sub.add_parser("perplexity", help="score a CoNLL-U corpus with an ARPA model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--per-sentence", action="store_true", help="also print per-sentence log10 probs")
    p.set_defaults(func=cmd_perplexity)

    p = sub.add_parser("analyze", help="compute metric tables for an aligned dataset")
    p.add_argument("--config", help="JSON analysis config")
    p.add_argument("--manifest", help="dataset manifest (overrides the config)")
    p.add_argument("--metrics", help=f"comma-separated subset of {','.join(METRICS)}")
    p.add_argument("--lm-source", help="ARPA PoS model of the source language")
    p.add_argument("--lm-target", help="ARPA PoS model of the target language")
    p.add_argument("--replicates", type=int, help=f"bootstrap replicates (default {DEFAULT_REPLICATES}, "
                                                  f"or ${REPLICATES_ENV})")
    p.add_argument("--level", type=float, help="bootstrap confidence level")
    p.add_argument("--seed", type=int, help="bootstrap seed")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--fold-case", action="store_true", help="lowercase tokens before counting types")
    p.add_argument("--no-count-punct", action="store_true",
                   help="leave PUNCT and SYM out of the lexical density denominator")
    p.add_argument("--content-tags", help="comma-separated UPOS tags counted as content words")
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"transmetrics {args.command}: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, ValueError, ZeroDivisionError) as e:
        print(f"transmetrics {args.command}: error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
