"""ARPA serialization of PoS n-gram models.

An interpolated Witten-Bell model is written in backoff form: every
observed m-gram carries its interpolated probability, and every history
with continuations carries the weight ``D(h) / (c(h .) + D(h))`` that the
interpolation assigns to the lower order. Read back with standard backoff
rules this reproduces the interpolated distribution exactly. All vocabulary
items appear as unigrams, and all-BOS contexts get placeholder entries so
their backoff weights have somewhere to live.
"""

import math
from typing import TextIO, Union

from .errors import ParseError
from .poslm import BOS, EOS, VOCABULARY, NGramModel

NO_PROB = -99.0


def _fmt(value: float) -> str:
    if value == NO_PROB:
        return "-99"
    return repr(value)


def _entries(model: NGramModel) -> list:
    """Per order, a sorted list of ``(gram, log10 prob, log10 bow or None)``."""
    counts = model.counts
    order = model.order
    by_order = [dict() for _ in range(order + 1)]

    def bow(gram):
        if len(gram) >= order:
            return None
        total = counts.totals.get(gram, 0)
        if total == 0:
            return None
        distinct = counts.distinct_followers[gram]
        return math.log10(distinct / (total + distinct))

    for sym in VOCABULARY:
        by_order[1][(sym,)] = math.log10(model._interp((), sym))
    for gram in counts.counts:
        if len(gram) > 1:
            by_order[len(gram)][gram] = math.log10(model._interp(gram[:-1], gram[-1]))
    for m in range(1, order):
        gram = (BOS,) * m
        if m == 1 or counts.totals.get(gram, 0) > 0:
            by_order[m][gram] = NO_PROB

    out = []
    for m in range(1, order + 1):
        rows = [(g, lp, bow(g)) for g, lp in by_order[m].items()]
        rows.sort(key=lambda r: r[0])
        out.append(rows)
    return out


def export_arpa(model: NGramModel, sink: TextIO):
    """Write ``model`` to ``sink`` in ARPA format (log10 values, tab-separated)."""
    entries = _entries(model)
    sink.write("\n\\data\\\n")
    for m, rows in enumerate(entries, start=1):
        sink.write(f"ngram {m}={len(rows)}\n")
    for m, rows in enumerate(entries, start=1):
        sink.write(f"\n\\{m}-grams:\n")
        for gram, lp, bw in rows:
            line = f"{_fmt(lp)}\t{' '.join(gram)}"
            if bw is not None:
                line += f"\t{_fmt(bw)}"
            sink.write(line + "\n")
    sink.write("\n\\end\\\n")


class ArpaModel:
    """Backoff scorer over an ARPA file, interchangeable with :class:`NGramModel`."""

    def __init__(self, order: int, logprobs: dict, backoffs: dict):
        self.order = order
        self.logprobs = logprobs
        self.backoffs = backoffs
        self.vocabulary = tuple(sorted(g[0] for g in logprobs if len(g) == 1 and g[0] not in (BOS, "<unk>")))
        self._cache = {}

    def _lp(self, history: tuple, symbol: str) -> float:
        key = (history, symbol)
        lp = self._cache.get(key)
        if lp is None:
            lp = self.logprobs.get(history + (symbol,))
            if lp is None:
                if not history:
                    lp = self.logprobs.get(("<unk>",), -math.inf)
                else:
                    lp = self.backoffs.get(history, 0.0) + self._lp(history[1:], symbol)
            self._cache[key] = lp
        return lp

    def logprob(self, history, next_symbol) -> float:
        symbol = str(getattr(next_symbol, "value", next_symbol))
        if symbol == BOS:
            raise ValueError("BOS is context-only and cannot be predicted")
        hist = tuple(str(getattr(h, "value", h)) for h in history)
        keep = self.order - 1
        hist = hist[len(hist) - keep:] if keep else ()
        return self._lp(hist, symbol)

    def prob(self, history, next_symbol) -> float:
        return 10.0 ** self.logprob(history, next_symbol)

    def event_prob(self, history: tuple, symbol: str) -> tuple:
        lp = self._lp(history, symbol)
        return 10.0 ** lp, lp


def import_arpa(source: Union[str, TextIO], name: str = None) -> ArpaModel:
    """Parse ARPA text, given as a stream or a string, into an :class:`ArpaModel`."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()

    declared = {}
    logprobs = {}
    backoffs = {}
    section = None  # None (preamble), "data", an int order, or "end"
    seen = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if section == "end":
            continue
        if line == "\\data\\":
            if section is not None:
                raise ParseError("duplicate \\data\\ header", lineno, name)
            section = "data"
            continue
        if section is None or not line:
            continue
        if line == "\\end\\":
            section = "end"
            continue
        if line.startswith("\\") and line.endswith("-grams:"):
            try:
                m = int(line[1:-len("-grams:")])
            except ValueError:
                raise ParseError(f"bad section header {line!r}", lineno, name) from None
            if m not in declared:
                raise ParseError(f"section {m}-grams not declared in \\data\\", lineno, name)
            section = m
            seen[m] = 0
            continue
        if section == "data":
            if not line.startswith("ngram "):
                raise ParseError(f"expected 'ngram N=count', got {line!r}", lineno, name)
            try:
                m, count = line[len("ngram "):].split("=")
                declared[int(m)] = int(count)
            except ValueError:
                raise ParseError(f"bad count line {line!r}", lineno, name) from None
            continue
        fields = line.split()
        m = section
        if len(fields) not in (m + 1, m + 2):
            raise ParseError(f"expected {m}-gram entry with probability, got {line!r}", lineno, name)
        try:
            lp = float(fields[0])
            bw = float(fields[m + 1]) if len(fields) == m + 2 else None
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", lineno, name) from None
        gram = tuple(fields[1:m + 1])
        logprobs[gram] = lp
        if bw is not None:
            backoffs[gram] = bw
        seen[m] += 1

    if section is None:
        raise ParseError("missing \\data\\ header", None, name)
    if section != "end":
        raise ParseError("missing \\end\\ marker", len(lines), name)
    for m, count in declared.items():
        if seen.get(m) != count:
            raise ParseError(f"\\data\\ declares {count} {m}-grams but {seen.get(m, 0)} were read",
                             None, name)
    if not declared:
        raise ParseError("\\data\\ section declares no n-grams", None, name)
    order = max(declared)
    if sorted(declared) != list(range(1, order + 1)):
        raise ParseError("n-gram orders must be contiguous from 1", None, name)
    return ArpaModel(order, logprobs, backoffs)


def load_arpa(path: str) -> ArpaModel:
    with open(path, encoding="utf-8") as f:
        return import_arpa(f, name=path)


def save_arpa(model: NGramModel, path: str):
    with open(path, "w", encoding="utf-8") as f:
        export_arpa(model, f)


__all__ = ["export_arpa", "import_arpa", "load_arpa", "save_arpa", "ArpaModel", "BOS", "EOS"]
