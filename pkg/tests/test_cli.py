import json
import shutil

import pytest
from filelock import FileLock

from skillgap import cli
from skillgap.corpus import read_corpus

from conftest import FIXTURES

AN = FIXTURES / "analyze"
PORTAL = FIXTURES / "portal"


def run(*argv):
    return cli.run([str(a) for a in argv])


def test_help_and_version(capsys):
    assert run("--help") == 0
    assert "analyze" in capsys.readouterr().out
    assert run("--version") == 0


def test_usage_errors(capsys):
    assert run("frobnicate") == 1
    assert run("gaps", "--bogus-flag") == 1
    assert run() == 1
    assert "usage" in capsys.readouterr().err


def test_missing_input_is_data_error(capsys):
    assert run("gaps", "--demand", "missing.csv", "--supply", "missing2.csv") == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert json.loads(err)["kind"] == "error"


def test_config_dump_has_pinned_defaults(capsys):
    assert run("config") == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["match"]["threshold"] == 90
    assert cfg["filter"]["min_body_count"] == 3
    assert (cfg["topics"]["k_min"], cfg["topics"]["k_max"]) == (5, 50)
    assert cfg["topics"]["top_words"] == 30


def test_global_flags_after_subcommand(capsys, tmp_path):
    assert run("config", "--seed", "7", "--threshold", "80") == 0
    cfg = json.loads(capsys.readouterr().out)
    assert cfg["seed"] == 7 and cfg["match"]["threshold"] == 80


def test_bad_config_key(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[match]\nthreshhold = 3\n")
    assert run("--config", p, "config") == 2


def test_stage_by_stage_pipeline(tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    assert run("fetch", "--portal", "fx", "--out", raw, "--fixture-dir", PORTAL / "results", "--config", _portal_cfg(tmp_path)) == 0
    err = capsys.readouterr().err
    assert "extraction-failed" in err
    assert len(raw.read_text().splitlines()) == 7
    c = tmp_path / "c.jsonl"
    assert run("ingest", "--in", raw, "--side", "demand", "--out", c) == 0
    assert run("dedup", "--in", c, "--out", tmp_path / "d.jsonl") == 0
    assert run("filter", "--in", tmp_path / "d.jsonl", "--out", tmp_path / "f.jsonl") == 0
    assert len(read_corpus(tmp_path / "f.jsonl")) == 7
    assert run("translate", "--in", tmp_path / "f.jsonl", "--out", tmp_path / "t.jsonl") == 0
    assert run("match", "--corpus", tmp_path / "t.jsonl", "--taxonomy", AN / "mini.tax", "--out", tmp_path / "df.csv") == 0
    text = (tmp_path / "df.csv").read_text()
    assert "# threshold=90" in text and "# corpus_size=7" in text
    assert "network-security,L1,0.0000" in text  # no page names an L2 skill
    assert run("gaps", "--demand", tmp_path / "df.csv", "--supply", tmp_path / "df.csv", "--out", tmp_path / "g.csv",
               "--priority-out", tmp_path / "p.csv") == 0
    assert run("report", "--gaps", tmp_path / "g.csv", "--out", tmp_path / "r.svg") == 0
    assert (tmp_path / "r.svg").read_text().startswith("<?xml") or "<svg" in (tmp_path / "r.svg").read_text()


def _portal_cfg(tmp_path):
    p = tmp_path / "portal.toml"
    p.write_text(
        '[portals.fx]\nquery_url_template = "file:///nowhere/{keyword}.html"\nlink_selector = "a.job@href"\n'
        'politeness_delay = 0\n[portals.fx.selectors]\ndoc_id = "#job-id"\ntitle = "h1.title"\nbody = "div.desc"\n'
        '[portals.fx.defaults]\nlanguage = "en"\ncountry = "Germany"\n'
    )
    return p


def test_ingest_reports_bad_lines(tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    raw.write_text('{"source_id": "a", "doc_id": "1", "title": "t", "body": "b"}\nnot json\n')
    assert run("ingest", "--in", raw, "--side", "supply", "--out", tmp_path / "c.jsonl") == 0
    diag = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert diag["line"] == 2


def test_topics_commands(tmp_path):
    corpus = AN / "supply.jsonl"
    model = tmp_path / "m.sgtm"
    labels = tmp_path / "labels.tsv"
    labels.write_text("0\tcrypto\n")
    assert run("topics", "train", "--corpus", corpus, "--out", model, "--k", "3", "--iterations", "20",
               "--labels", labels, "--top-words-out", tmp_path / "top.tsv", "--coherence-out", tmp_path / "coh.csv",
               "--check-invariants") == 0
    assert (tmp_path / "coh.csv").read_text().startswith("topic,npmi,label\n0,")
    assert run("topics", "sweep", "--corpus", corpus, "--out", tmp_path / "curve.csv", "--k-min", "2", "--k-max", "3",
               "--k-step", "1", "--iterations", "10") == 0
    assert run("topics", "infer", "--model", model, "--corpus", AN / "demand.jsonl", "--out", tmp_path / "theta.csv",
               "--iterations", "5") == 0
    assert run("topics", "df", "--model", model, "--corpus", AN / "demand.jsonl", "--out", tmp_path / "tdf.csv",
               "--iterations", "5") == 0
    assert "topic-0,topic," in (tmp_path / "tdf.csv").read_text()


def test_analyze_refuses_locked_dir(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    with FileLock(str(out / ".skillgap.lock")):
        code = run("--config", AN / "analyze.toml", "analyze", "--demand", AN / "demand.jsonl", "--supply",
                   AN / "supply.jsonl", "--taxonomy", AN / "mini.tax", "--out-dir", out)
    assert code == 2


def test_analyze_matches_golden(tmp_path):
    out = tmp_path / "out"
    assert run("--config", AN / "analyze.toml", "analyze", "--demand", AN / "demand.jsonl", "--supply",
               AN / "supply.jsonl", "--taxonomy", AN / "mini.tax", "--out-dir", out) == 0
    golden = FIXTURES.parent / "golden"
    for name in ("gaps.csv", "priority.svg"):
        assert (out / name).read_bytes() == (golden / name).read_bytes()


def test_builtin_taxonomy_name_accepted(tmp_path):
    shutil.copy(AN / "supply.jsonl", tmp_path / "s.jsonl")
    shutil.copy(AN / "supply.jsonl.meta.json", tmp_path / "s.jsonl.meta.json")
    assert run("match", "--corpus", tmp_path / "s.jsonl", "--taxonomy", "acm-ccs", "--out", tmp_path / "df.csv") == 0
