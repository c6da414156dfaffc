import json
import subprocess
import sys

import pytest

from transmetrics.arpa import load_arpa, save_arpa
from transmetrics.cli import main
from transmetrics.poslm import NGramModel, perplexity, train

from conftest import TAGS, random_corpus, tag_seq, to_conllu, write_dataset


@pytest.fixture
def dataset_dir(tmp_path, rng):
    n = 30
    variants = [("HT", "NONE", "ht", random_corpus(rng, n_sent=n, min_len=1, max_len=12)),
                ("PE", "SMT", "s1", random_corpus(rng, n_sent=n, min_len=1, max_len=12)),
                ("PE", "RBMT", "r1", random_corpus(rng, n_sent=n, min_len=1, max_len=12)),
                ("MT", "SMT", "s1", random_corpus(rng, n_sent=n, min_len=1, max_len=12))]
    write_dataset(tmp_path, random_corpus(rng, n_sent=n, min_len=1, max_len=12), variants)
    save_arpa(train(random_corpus(rng, n_sent=50, tags=TAGS[:8]), 3), str(tmp_path / "sl.arpa"))
    save_arpa(train(random_corpus(rng, n_sent=50, tags=TAGS[4:]), 3), str(tmp_path / "tl.arpa"))
    return tmp_path


def test_train_lm_roundtrip(tmp_path, rng, capsys):
    corpus = random_corpus(rng, n_sent=40, min_len=1, tags=TAGS[:6])
    (tmp_path / "train.conllu").write_text(to_conllu(corpus))
    out = tmp_path / "lm.arpa"
    assert main(["train-lm", "--conllu", str(tmp_path / "train.conllu"), "--order", "6",
                 "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "vocabulary_size\t18" in text
    assert "sentences\t40" in text
    pp = float(text.split("self_perplexity\t")[1].split()[0])
    assert 1 < pp <= 18
    model = load_arpa(str(out))
    assert model.order == 6
    assert perplexity(model, corpus) == pytest.approx(pp, rel=1e-9)


def test_train_lm_order_zero_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["train-lm", "--conllu", "x", "--order", "0", "--out", str(tmp_path / "o")])
    assert err.value.code == 2


def test_train_lm_bad_data_exit_1(tmp_path, capsys):
    (tmp_path / "bad.conllu").write_text("1\tx\t_\tNOUNX\t_\t_\t0\tdep\t_\t_\n")
    assert main(["train-lm", "--conllu", str(tmp_path / "bad.conllu"),
                 "--out", str(tmp_path / "o.arpa")]) == 1
    assert "NOUNX" in capsys.readouterr().err


def test_perplexity_uniform(tmp_path, rng, capsys):
    save_arpa(NGramModel.uniform(1), str(tmp_path / "u.arpa"))
    (tmp_path / "in.conllu").write_text(to_conllu(random_corpus(rng, n_sent=5, min_len=1)))
    argv = ["perplexity", "--model", str(tmp_path / "u.arpa"), "--input", str(tmp_path / "in.conllu")]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert "perplexity\t18.0\n" in first
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_perplexity_hand_oracle(tmp_path, capsys):
    # bigram from "DET NOUN" x 5; corpus events give 4 x 571/648 and 1 x 31/648
    save_arpa(train([tag_seq("DET", "NOUN")] * 5, 2), str(tmp_path / "b.arpa"))
    (tmp_path / "in.conllu").write_text(to_conllu([tag_seq("DET", "NOUN"), tag_seq("NOUN")]))
    assert main(["perplexity", "--model", str(tmp_path / "b.arpa"),
                 "--input", str(tmp_path / "in.conllu"), "--per-sentence"]) == 0
    out = capsys.readouterr().out
    pp = float(out.split("perplexity\t")[1])
    assert pp == pytest.approx(((571 / 648) ** 4 * (31 / 648)) ** (-1 / 5), abs=1e-9)
    assert out.count("sentence\t") == 2


def test_analyze_ttr_only(dataset_dir, capsys):
    assert main(["analyze", "--manifest", str(dataset_dir / "manifest.json"), "--metrics", "ttr",
                 "--replicates", "200"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["run"]["config"]["replicates"] == 200
    assert doc["run"]["seed"] == doc["run"]["config"]["seed"]
    (table,) = doc["tables"]
    assert table["metric_id"] == "ttr"
    groups = [r["group"] for r in table["rows"]]
    assert groups == ["HT", "PE", "MT", "PE-SMT", "PE-RBMT", "SMT"]
    assert table["significance"] == "bootstrap_ci"


def test_analyze_all_metrics_from_config(dataset_dir, capsys):
    config = {"manifest": "manifest.json", "metrics": ["ttr", "density", "lenratio", "ppdiff"],
              "lm_source": "sl.arpa", "lm_target": "tl.arpa",
              "bootstrap": {"replicates": 100, "seed": 5}, "format": "json"}
    (dataset_dir / "config.json").write_text(json.dumps(config))
    assert main(["analyze", "--config", str(dataset_dir / "config.json")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [t["metric_id"] for t in doc["tables"]] == ["ttr", "lex_density", "length_ratio", "pp_diff"]
    lr = doc["tables"][2]
    assert lr["significance"] == "paired_t_test"
    assert all(v["p_value"] is not None for v in lr["variants"] if not v["key"].startswith("HT"))


def test_analyze_ppdiff_without_lms_is_usage_error(dataset_dir, capsys):
    assert main(["analyze", "--manifest", str(dataset_dir / "missing.json"),
                 "--metrics", "ttr,ppdiff"]) == 2
    assert "ppdiff" in capsys.readouterr().err


def test_analyze_data_error_names_variant(tmp_path, rng, capsys):
    src = random_corpus(rng, n_sent=4, min_len=1)
    plain = [random_corpus(rng, n_sent=4, min_len=1) for _ in range(2)]
    write_dataset(tmp_path, src, [("HT", "NONE", "ht", plain[0]), ("PE", "SMT", "s", plain[1])],
                  fmt="text")
    assert main(["analyze", "--manifest", str(tmp_path / "manifest.json"), "--metrics", "density"]) == 1
    err = capsys.readouterr().err
    assert "HT:ht" in err and "sentence 0" in err


def test_analyze_formats(dataset_dir, capsys):
    base = ["analyze", "--manifest", str(dataset_dir / "manifest.json"), "--metrics", "ttr,lenratio",
            "--replicates", "100"]
    assert main(base + ["--format", "tsv"]) == 0
    tsv = capsys.readouterr().out
    assert tsv.startswith("# run: {")
    assert tsv.count("# table:") == 2
    assert main(base + ["--format", "markdown"]) == 0
    md = capsys.readouterr().out
    assert md.startswith("<!-- run:") and "| HT |" in md


def test_replicates_env_override(dataset_dir, capsys, monkeypatch):
    monkeypatch.setenv("TRANSMETRICS_REPLICATES", "150")
    assert main(["analyze", "--manifest", str(dataset_dir / "manifest.json"), "--metrics", "ttr"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["run"]["config"]["replicates"] == 150
    assert doc["tables"][0]["rows"][0]["score"] > 0


def test_analyze_byte_identical(dataset_dir):
    out = dataset_dir / "report.json"
    outs = []
    for _ in range(2):
        assert main(["analyze", "--manifest", str(dataset_dir / "manifest.json"),
                     "--metrics", "ttr,density,lenratio,ppdiff", "--lm-source", str(dataset_dir / "sl.arpa"),
                     "--lm-target", str(dataset_dir / "tl.arpa"), "--replicates", "100", "--seed", "3",
                     "--output", str(out)]) == 0
        outs.append(out.read_bytes())
        out.unlink()
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "transmetrics", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "transmetrics" in proc.stdout
