import json
import random
from collections import defaultdict

import pytest

from transmetrics.corpus import PosTag, TaggedSentence, Token

TAGS = [t.value for t in PosTag]


def tagged(spec):
    """``"the/DET cat/NOUN"`` -> TaggedSentence."""
    pairs = [item.rsplit("/", 1) for item in spec.split()]
    return TaggedSentence.from_pairs(pairs)


def tag_seq(*tags):
    return TaggedSentence(tuple(Token(f"w{i}", PosTag(t)) for i, t in enumerate(tags)))


def random_corpus(rng, n_sent=None, max_len=20, n_words=30, tags=TAGS, min_len=0):
    n_sent = rng.randint(1, 50) if n_sent is None else n_sent
    words = [f"w{i}" for i in range(n_words)] + ["The", "the", "THE", ".", ","]
    out = []
    for _ in range(n_sent):
        k = rng.randint(min_len, max_len)
        out.append(TaggedSentence(tuple(Token(rng.choice(words), PosTag(rng.choice(tags)))
                                        for _ in range(k))))
    return out


def to_conllu(sentences):
    lines = []
    for s in sentences:
        for i, tok in enumerate(s.tokens, start=1):
            upos = "_" if tok.pos is None else tok.pos.value
            lines.append(f"{i}\t{tok.surface}\t_\t{upos}\t_\t_\t0\tdep\t_\t_")
        lines.append("")
    return "\n".join(lines) + "\n"


def write_dataset(dirpath, source, variants, name="toy", src="de", tgt="en", fmt="conllu"):
    """Write corpora + manifest; ``variants`` is a list of (kind, paradigm, system_id, sentences)."""
    ext = "conllu" if fmt == "conllu" else "txt"

    def dump(fname, sents):
        path = dirpath / fname
        if fmt == "conllu":
            path.write_text(to_conllu(sents), encoding="utf-8")
        else:
            path.write_text("".join(" ".join(s.surfaces) + "\n" for s in sents), encoding="utf-8")
        return fname

    manifest = {
        "name": name, "source_lang": src, "target_lang": tgt,
        "source": {"path": dump(f"source.{ext}", source), "format": fmt},
        "variants": [
            {"kind": k, "paradigm": p, "system_id": sid,
             "path": dump(f"{k}_{sid}.{ext}", sents), "format": fmt}
            for k, p, sid, sents in variants
        ],
    }
    mpath = dirpath / "manifest.json"
    mpath.write_text(json.dumps(manifest, indent=1), encoding="utf-8")
    return mpath


@pytest.fixture
def rng():
    return random.Random(20190819)


_criteria = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, description): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, desc = marker.args
    if call.excinfo is None:
        outcome = "PASS"
    elif call.excinfo.errisinstance(pytest.skip.Exception):
        outcome = "SKIP"
    else:
        outcome = "FAIL"
    _criteria[(number, desc)].append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, desc), outcomes in sorted(_criteria.items(), key=lambda kv: kv[0][0]):
        if "FAIL" in outcomes:
            verdict = "FAIL"
        elif "PASS" in outcomes:
            verdict = "PASS"
        else:
            verdict = "SKIP"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {desc}  ({len(outcomes)} check(s))")
