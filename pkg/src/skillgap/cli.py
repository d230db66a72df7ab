"""``skillgap`` command line.

Exit codes: 0 success, 1 usage error, 2 data error.  Diagnostics go to
standard error as one JSON object per line; data goes to files.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from filelock import FileLock, Timeout

from . import __version__
from .config import ConfigError, load_config, resolve_path
from .corpus import Corpus, Diagnostic, dedup, filter_relevant, ingest_records, read_corpus, write_corpus
from .fetch import Fetcher, PortalConfig, crawl
from .gap import GapReport, compute_gaps, prioritize
from .match import DfTable, document_frequency
from .report import emit_chart, emit_csv, fmt, read_df_table, read_gaps
from .taxonomy import Taxonomy, TaxonomyError, builtin_taxonomy, parse_taxonomy
from .translate import TranslationCache, make_provider, translate_if_needed

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

log = logging.getLogger("skillgap")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class _JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(
            {"level": record.levelname.lower(), "logger": record.name, "message": record.getMessage()},
            ensure_ascii=False,
        )


def _setup_logging() -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonLogFormatter())
    root = logging.getLogger("skillgap")
    root.addHandler(handler)
    root.setLevel(logging.WARNING)
    return handler


def _emit_diagnostics(diags: Sequence[Diagnostic]) -> None:
    for d in diags:
        print(d.to_json(), file=sys.stderr)


# --------------------------------------------------------------------------
# helpers


def _taxonomy(value: str, drop_stopwords: bool = False) -> Taxonomy:
    path = Path(value)
    if path.exists():
        return parse_taxonomy(path, drop_stopwords=drop_stopwords)
    if path.suffix == "" and value in ("acm-ccs", "eu-cst"):
        return builtin_taxonomy(value)
    raise DataError(f"taxonomy file not found: {value}")


def _read_corpus(path: str, side: str | None = None) -> Corpus:
    if not Path(path).exists():
        raise DataError(f"corpus file not found: {path}")
    return read_corpus(path, side)


def _read_table(path: str) -> DfTable:
    if not Path(path).exists():
        raise DataError(f"df table not found: {path}")
    return read_df_table(path)


def _provider(cfg: dict[str, Any], args: argparse.Namespace):
    t = cfg["translate"]
    kind = getattr(args, "provider", None) or t["provider"]
    dictionary = getattr(args, "dictionary", None) or (resolve_path(cfg, t["dictionary"]) if t["dictionary"] else None)
    url = getattr(args, "url", None) or t["url"]
    return make_provider(kind, dictionary, url)


def _filter(cfg: dict[str, Any], corpus: Corpus, keyword: str | None = None, min_count: int | None = None) -> Corpus:
    f = cfg["filter"]
    kw = keyword or f["keyword"]
    table = {kw: dict(f["keywords"])} if kw == f["keyword"] else {}
    return filter_relevant(corpus, kw, min_count or f["min_body_count"], table)


def _topic_labels(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) >= 2 and parts[0].strip().isdigit():
            out[f"topic-{int(parts[0])}"] = parts[1].strip()
    return out


# --------------------------------------------------------------------------
# subcommands


def cmd_config(args, cfg) -> int:
    shown = {k: v for k, v in cfg.items() if not k.startswith("_")}
    print(json.dumps(shown, indent=2, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


def cmd_fetch(args, cfg) -> int:
    portals = cfg["portals"]
    if args.portal not in portals:
        raise DataError(f"portal {args.portal!r} not defined in config (known: {', '.join(sorted(portals)) or 'none'})")
    raw = dict(portals[args.portal])
    raw.setdefault("politeness_delay", cfg["fetch"]["politeness_delay"])
    raw.setdefault("retries", cfg["fetch"]["retries"])
    portal = PortalConfig.from_mapping(args.portal, raw)
    keywords = args.keyword or cfg["fetch"]["keywords"]
    fetcher = Fetcher(0.0, portal.retries) if args.fixture_dir else Fetcher(portal.politeness_delay, portal.retries)
    records, diags = crawl(portal, keywords, fetcher, args.fixture_dir)
    corpus, ingest_diags = ingest_records(records, args.side, provenance=f"fetched from {portal.name}")
    _emit_diagnostics(diags + ingest_diags)
    write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_ingest(args, cfg) -> int:
    src = sys.stdin if args.input == "-" else None
    if src is None and not Path(args.input).exists():
        raise DataError(f"input not found: {args.input}")
    fh = src or open(args.input, encoding="utf-8")
    try:
        corpus, diags = ingest_records(fh, args.side, provenance=f"ingested from {Path(args.input).name}")
    finally:
        if src is None:
            fh.close()
    _emit_diagnostics(diags)
    write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_dedup(args, cfg) -> int:
    corpus, stats = dedup(_read_corpus(args.input))
    log.info("dedup removed %d by id, %d by content hash", stats.removed_by_id, stats.removed_by_hash)
    print(json.dumps({"removed_by_id": stats.removed_by_id, "removed_by_hash": stats.removed_by_hash}), file=sys.stderr)
    write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_filter(args, cfg) -> int:
    corpus = _filter(cfg, _read_corpus(args.input), args.keyword, args.min_body_count)
    write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_translate(args, cfg) -> int:
    provider = _provider(cfg, args)
    target = args.target or cfg["match"]["target_language"]
    corpus, diags, _ = translate_if_needed(
        _read_corpus(args.input), provider, target, TranslationCache.from_env(provider.name)
    )
    _emit_diagnostics(diags)
    write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_match(args, cfg) -> int:
    taxonomy = _taxonomy(args.taxonomy, args.drop_stopwords)
    threshold = args.threshold if args.threshold is not None else cfg["match"]["threshold"]
    include_title = cfg["match"]["include_title"] and not args.body_only
    corpus = _read_corpus(args.corpus)
    if len(corpus) == 0:
        raise DataError(f"{args.corpus}: corpus is empty")
    emit_csv(document_frequency(corpus, taxonomy, threshold, include_title), args.out)
    return EXIT_OK


def _vocabulary(cfg, corpus):
    from .topics import build_vocabulary, stopwords

    t = cfg["topics"]
    return build_vocabulary(corpus, t["min_df"], t["max_df_fraction"], stopwords(t["stopwords"]) if t["stopwords"] else ())


def cmd_topics_train(args, cfg) -> int:
    from .topics import annotate, npmi_coherence, save_model, top_words, train_lda

    t = cfg["topics"]
    corpus = _read_corpus(args.corpus)
    vocab = _vocabulary(cfg, corpus)
    k = args.k or t["k"]
    alpha = args.alpha or t["alpha"] or None
    model = train_lda(
        corpus, vocab, k, alpha, args.beta or t["beta"], args.iterations or t["iterations"],
        args.seed if args.seed is not None else cfg["seed"], check_invariants=args.check_invariants,
    )
    if args.labels:
        model = annotate(model, args.labels)
    save_model(model, args.out)
    if args.top_words_out:
        n = t["top_words"]
        with open(args.top_words_out, "w", encoding="utf-8", newline="") as fh:
            for topic in range(model.n_topics):
                fh.write(f"{topic}\t{model.label_of(topic)}\t{' '.join(top_words(model, topic, n))}\n")
    if args.coherence_out:
        emit_csv(npmi_coherence(model, corpus, t["npmi_top_n"], args.corpus), args.coherence_out)
    return EXIT_OK


def cmd_topics_sweep(args, cfg) -> int:
    from .topics import save_model, select_k

    t = cfg["topics"]
    corpus = _read_corpus(args.corpus)
    result = select_k(
        corpus,
        args.k_min or t["k_min"],
        args.k_max or t["k_max"],
        args.k_step or t["k_step"],
        vocabulary=_vocabulary(cfg, corpus),
        alpha=t["alpha"] or None,
        beta=t["beta"],
        iterations=args.iterations or t["iterations"],
        seed=args.seed if args.seed is not None else cfg["seed"],
        top_n=t["npmi_top_n"],
        workers=args.workers,
        keep_models=bool(args.model_out),
    )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("k,npmi,best\n")
        for k, score in result.curve.items():
            fh.write(f"{k},{fmt(score)},{int(k == result.best_k)}\n")
    for k, err in result.failures.items():
        print(json.dumps({"kind": "train-failed", "k": k, "message": err}), file=sys.stderr)
    if args.model_out:
        save_model(result.models[result.best_k], args.model_out)
    return EXIT_OK


def _model(path: str):
    from .topics import load_model

    if not Path(path).exists():
        raise DataError(f"model not found: {path}")
    return load_model(path)


def cmd_topics_infer(args, cfg) -> int:
    from .topics import infer_corpus

    model = _model(args.model)
    corpus = _read_corpus(args.corpus)
    seed = args.seed if args.seed is not None else cfg["seed"]
    theta = infer_corpus(model, corpus, args.iterations or cfg["topics"]["infer_iterations"], seed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id," + ",".join(f"topic-{k}" for k in range(model.n_topics)) + "\n")
        for r, row in zip(corpus.records, theta):
            fh.write(f"{r.source_id}/{r.doc_id}," + ",".join(fmt(v) for v in row) + "\n")
    return EXIT_OK


def topic_df_table(model, corpus: Corpus, mode: str, theta_threshold: float, iterations: int, seed: int) -> DfTable:
    from .topics import topic_document_frequency

    dfs = topic_document_frequency(model, corpus, mode, theta_threshold, iterations, seed)
    mode_tag = mode if mode == "dominant" else f"threshold:{theta_threshold:g}"
    return DfTable(
        taxonomy_name=f"topics:{model.vocabulary.checksum()[:12]}",
        corpus_side=corpus.side,
        threshold=None,
        entries={f"topic-{k}": v for k, v in dfs.items()},
        corpus_size=len(corpus),
        levels={f"topic-{k}": "topic" for k in dfs},
        mode=mode_tag,
    )


def cmd_topics_df(args, cfg) -> int:
    t = cfg["topics"]
    model = _model(args.model)
    corpus = _read_corpus(args.corpus)
    if len(corpus) == 0:
        raise DataError(f"{args.corpus}: corpus is empty")
    seed = args.seed if args.seed is not None else cfg["seed"]
    table = topic_df_table(
        model, corpus, args.mode or t["df_mode"], args.theta_threshold or t["theta_threshold"],
        args.iterations or t["infer_iterations"], seed,
    )
    emit_csv(table, args.out)
    return EXIT_OK


def cmd_gaps(args, cfg) -> int:
    demand, supply = _read_table(args.demand), _read_table(args.supply)
    labels = _taxonomy(args.taxonomy).labels if args.taxonomy else {}
    labels.update(_topic_labels(args.topic_labels))
    report = GapReport(tuple(compute_gaps(demand, supply, labels)))
    emit_csv(report, args.out)
    if args.priority_out:
        min_gap = args.min_gap if args.min_gap is not None else cfg["report"]["min_gap"]
        emit_csv(prioritize(report.entries, min_gap), args.priority_out)
    return EXIT_OK


def _level_filter(entries, taxonomy: Taxonomy | None, level: str | None):
    if taxonomy is None or not level:
        return list(entries)
    levels = taxonomy.levels
    return [e for e in entries if levels.get(e.skill_id) == level]


def cmd_report(args, cfg) -> int:
    if not Path(args.gaps).exists():
        raise DataError(f"gap table not found: {args.gaps}")
    report = read_gaps(args.gaps)
    taxonomy = _taxonomy(args.taxonomy) if args.taxonomy else None
    entries = _level_filter(report.entries, taxonomy, args.level or cfg["report"]["level"])
    kind = args.kind
    min_gap = args.min_gap if args.min_gap is not None else cfg["report"]["min_gap"]
    data = prioritize(entries, min_gap) if kind == "priority" else entries
    emit_chart(data, args.out, kind=kind, title=args.title)
    return EXIT_OK


def cmd_analyze(args, cfg) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lock = FileLock(str(out / ".skillgap.lock"))
    try:
        lock.acquire(timeout=0)
    except Timeout:
        raise DataError(f"{out} is locked by another skillgap run") from None
    try:
        return _analyze(args, cfg, out)
    finally:
        lock.release()


def _analyze(args, cfg, out: Path) -> int:
    taxonomy = _taxonomy(args.taxonomy, args.drop_stopwords)
    threshold = args.threshold if args.threshold is not None else cfg["match"]["threshold"]
    include_title = cfg["match"]["include_title"]
    target = cfg["match"]["target_language"]
    provider = _provider(cfg, args)
    cache = TranslationCache.from_env(provider.name)
    level = args.level or cfg["report"]["level"]
    tables = {}
    for side, path in (("demand", args.demand), ("supply", args.supply)):
        corpus, stats = dedup(_read_corpus(path, side))
        if side == "demand" and cfg["filter"]["apply_to_demand"]:
            corpus = _filter(cfg, corpus)
        write_corpus(corpus, out / f"{side}.clean.jsonl")
        translated, diags, _ = translate_if_needed(_read_corpus(out / f"{side}.clean.jsonl"), provider, target, cache)
        _emit_diagnostics(diags)
        write_corpus(translated, out / f"{side}.{target}.jsonl")
        corpus = _read_corpus(out / f"{side}.{target}.jsonl")
        if len(corpus) == 0:
            raise DataError(f"{side} corpus is empty after cleaning")
        emit_csv(document_frequency(corpus, taxonomy, threshold, include_title), out / f"df-{side}.csv")
        tables[side] = read_df_table(out / f"df-{side}.csv")
    report = GapReport(tuple(compute_gaps(tables["demand"], tables["supply"], taxonomy.labels)))
    emit_csv(report, out / "gaps.csv")
    report = read_gaps(out / "gaps.csv")
    entries = _level_filter(report.entries, taxonomy, level)
    points = prioritize(entries, cfg["report"]["min_gap"])
    emit_csv(points, out / "priority.csv")
    emit_chart(points, out / "priority.svg", kind="priority")
    emit_chart(points, out / "priority.json", kind="priority")
    emit_chart(entries, out / "bars.svg", kind="bars")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="TOML configuration file")
    parser.add_argument("--seed", type=int, default=default, help="random seed (64-bit)")
    parser.add_argument("--threshold", type=int, default=default, help="fuzzy match threshold 0-100 (strict >)")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _globals(common, suppress=True)

    p = _Parser(prog="skillgap", description="Skill-gap analysis of job-ad and curriculum corpora.")
    p.add_argument("--version", action="version", version=f"skillgap {__version__}")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    add("config", cmd_config, "print the effective configuration")

    sp = add("fetch", cmd_fetch, "crawl a portal (or fixture directory) into a corpus")
    sp.add_argument("--portal", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--fixture-dir")
    sp.add_argument("--keyword", action="append")
    sp.add_argument("--side", choices=["demand", "supply"], default="demand")

    sp = add("ingest", cmd_ingest, "validate raw JSON lines into a corpus")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--side", choices=["demand", "supply"], required=True)
    sp.add_argument("--out", required=True)

    sp = add("dedup", cmd_dedup, "remove id and content duplicates")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)

    sp = add("filter", cmd_filter, "keep security-relevant records")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--keyword")
    sp.add_argument("--min-body-count", type=int)

    sp = add("translate", cmd_translate, "translate records into the target language")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--provider", choices=["identity", "dictionary", "http"])
    sp.add_argument("--dictionary")
    sp.add_argument("--url")
    sp.add_argument("--target")

    sp = add("match", cmd_match, "document frequencies of taxonomy categories")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--taxonomy", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--body-only", action="store_true")
    sp.add_argument("--drop-stopwords", action="store_true")

    tp = add("topics", None, "topic modelling")
    tsub = tp.add_subparsers(dest="topics_command", metavar="ACTION", parser_class=_Parser)
    tsub.required = True

    def tadd(name, func, help_):
        sp = tsub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = tadd("train", cmd_topics_train, "train an LDA model")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--iterations", type=int)
    sp.add_argument("--labels")
    sp.add_argument("--top-words-out")
    sp.add_argument("--coherence-out")
    sp.add_argument("--check-invariants", action="store_true")

    sp = tadd("sweep", cmd_topics_sweep, "choose K by NPMI coherence")
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--k-min", type=int)
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--k-step", type=int)
    sp.add_argument("--iterations", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--model-out")

    sp = tadd("infer", cmd_topics_infer, "fold-in topic mixtures for a corpus")
    sp.add_argument("--model", required=True)
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--iterations", type=int)

    sp = tadd("df", cmd_topics_df, "topic document frequencies as a df table")
    sp.add_argument("--model", required=True)
    sp.add_argument("--corpus", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mode", choices=["dominant", "threshold"])
    sp.add_argument("--theta-threshold", type=float)
    sp.add_argument("--iterations", type=int)

    sp = add("gaps", cmd_gaps, "skill gaps from demand and supply df tables")
    sp.add_argument("--demand", required=True)
    sp.add_argument("--supply", required=True)
    sp.add_argument("--out", default="gaps.csv")
    sp.add_argument("--priority-out")
    sp.add_argument("--taxonomy")
    sp.add_argument("--topic-labels")
    sp.add_argument("--min-gap", type=float)

    sp = add("report", cmd_report, "render a gap table as a chart")
    sp.add_argument("--gaps", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--kind", choices=["priority", "bars"], default="priority")
    sp.add_argument("--taxonomy")
    sp.add_argument("--level", choices=["L1", "L2"])
    sp.add_argument("--min-gap", type=float)
    sp.add_argument("--title")

    sp = add("analyze", cmd_analyze, "full taxonomy pipeline from two corpora to gap CSV and charts")
    sp.add_argument("--demand", required=True)
    sp.add_argument("--supply", required=True)
    sp.add_argument("--taxonomy", required=True)
    sp.add_argument("--out-dir", default="skillgap-out")
    sp.add_argument("--level", choices=["L1", "L2"])
    sp.add_argument("--provider", choices=["identity", "dictionary", "http"])
    sp.add_argument("--dictionary")
    sp.add_argument("--url")
    sp.add_argument("--drop-stopwords", action="store_true")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    handler = _setup_logging()
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.threshold is not None:
            cfg["match"]["threshold"] = args.threshold
        return args.func(args, cfg)
    except (DataError, ConfigError, TaxonomyError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"kind": "error", "message": str(msg)}, ensure_ascii=False), file=sys.stderr)
        return EXIT_DATA
    finally:
        logging.getLogger("skillgap").removeHandler(handler)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
