"""Interpolated Witten-Bell n-gram models over Universal PoS tag sequences.

The vocabulary is closed and shared by every model: the 17 UPOS tags plus
the end-of-sentence marker. Sentences are framed with ``order - 1``
begin-of-sentence markers, which only ever act as context.

The smoothed estimate for a tag ``t`` after history ``h`` is::

    p(t | h) = (c(h t) + D(h) * p(t | h')) / (c(h .) + D(h))

where ``D(h)`` is the number of distinct tags seen after ``h``, ``c(h .)``
the total count of continuations of ``h`` and ``h'`` the history without
its oldest tag. A history never seen in training defers to ``h'``; below
the unigram level sits the uniform distribution over the vocabulary.
"""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import PosTag, TaggedSentence
from .errors import ConfigurationError, EmptyCorpusError, MissingTagsError

BOS = "<s>"
EOS = "</s>"
TAGS = tuple(t.value for t in PosTag)
VOCABULARY = TAGS + (EOS,)
MAX_ORDER = 9


def _symbol(value) -> str:
    if isinstance(value, PosTag):
        return value.value
    return str(value)


def sentence_symbols(sentence: TaggedSentence, index: int = 0) -> list:
    tags = []
    for tok in sentence.tokens:
        if tok.pos is None:
            raise MissingTagsError(index)
        tags.append(tok.pos.value)
    return tags


@dataclass
class NGramCounts:
    """Raw counts of every m-gram (m <= order) ending at a scored position.

    ``followers[h]`` maps each tag seen after history ``h`` to its count;
    ``counts`` holds the same events keyed by the full tuple ``h + (t,)``.
    """

    order: int
    counts: dict = field(default_factory=dict)
    followers: dict = field(default_factory=dict)

    def __post_init__(self):
        self.totals = {h: sum(f.values()) for h, f in self.followers.items()}
        self.distinct_followers = {h: len(f) for h, f in self.followers.items()}

    @classmethod
    def from_sequences(cls, sequences: Iterable, order: int) -> "NGramCounts":
        top = Counter()
        pad = (BOS,) * (order - 1)
        for tags in sequences:
            frame = pad + tuple(tags) + (EOS,)
            for i in range(order - 1, len(frame)):
                top[frame[i - order + 1:i + 1]] += 1
        # every lower-order event is a suffix of exactly one top-order window
        counts = Counter()
        for gram, c in top.items():
            for m in range(1, order + 1):
                counts[gram[-m:]] += c
        followers = defaultdict(dict)
        for gram, c in counts.items():
            followers[gram[:-1]][gram[-1]] = c
        return cls(order, dict(counts), dict(followers))


class NGramModel:
    """A trained interpolated Witten-Bell model. Immutable after construction."""

    vocabulary = VOCABULARY

    def __init__(self, counts: NGramCounts, lang: str = "und", n_train_sentences: int = 0):
        self.order = counts.order
        self.counts = counts
        self.lang = lang
        self.n_train_sentences = n_train_sentences
        self._cache = {}

    @classmethod
    def uniform(cls, order: int = 1, lang: str = "und") -> "NGramModel":
        """A model with no training data; every event has probability 1/18."""
        _check_order(order)
        return cls(NGramCounts(order), lang, 0)

    def _interp(self, history: tuple, symbol: str) -> float:
        key = (history, symbol)
        p = self._cache.get(key)
        if p is not None:
            return p
        lower = self._interp(history[1:], symbol) if history else 1.0 / len(VOCABULARY)
        total = self.counts.totals.get(history, 0)
        if total == 0:
            p = lower
        else:
            distinct = self.counts.distinct_followers[history]
            seen = self.counts.followers[history].get(symbol, 0)
            p = (seen + distinct * lower) / (total + distinct)
        self._cache[key] = p
        return p

    def prob(self, history: Sequence, next_symbol) -> float:
        """Probability of ``next_symbol`` (a tag or EOS) after ``history``.

        Histories longer than ``order - 1`` keep only their most recent
        symbols.
        """
        symbol = _symbol(next_symbol)
        if symbol == BOS:
            raise ValueError("BOS is context-only and cannot be predicted")
        if symbol not in VOCABULARY:
            raise ValueError(f"{symbol!r} is not in the vocabulary")
        hist = tuple(_symbol(h) for h in history)
        for h in hist:
            if h != BOS and h not in VOCABULARY:
                raise ValueError(f"history symbol {h!r} is not in the vocabulary")
        keep = self.order - 1
        hist = hist[len(hist) - keep:] if keep else ()
        return self._interp(hist, symbol)

    def logprob(self, history: Sequence, next_symbol) -> float:
        return math.log10(self.prob(history, next_symbol))

    def event_prob(self, history: tuple, symbol: str) -> tuple:
        """Unchecked ``(p, log10 p)`` for an already-truncated history."""
        p = self._interp(history, symbol)
        return p, math.log10(p)


def _check_order(order):
    if not isinstance(order, int) or isinstance(order, bool) or not 1 <= order <= MAX_ORDER:
        raise ValueError(f"model order must be an integer in [1, {MAX_ORDER}], got {order!r}")


def train(corpus: Sequence[TaggedSentence], order: int, lang: str = "und") -> NGramModel:
    _check_order(order)
    if not corpus:
        raise EmptyCorpusError("cannot train a language model on an empty corpus")
    sequences = [sentence_symbols(s, i) for i, s in enumerate(corpus)]
    return NGramModel(NGramCounts.from_sequences(sequences, order), lang, len(corpus))


def prob(model, history: Sequence, next_symbol) -> float:
    return model.prob(history, next_symbol)


def _event_probs(model, sentence: TaggedSentence, index: int = 0):
    """Yield (probability, log10 probability) for every tag and the final EOS."""
    tags = sentence_symbols(sentence, index)
    keep = model.order - 1
    frame = [BOS] * keep + tags + [EOS]
    for i in range(keep, len(frame)):
        yield model.event_prob(tuple(frame[i - keep:i]), frame[i])


def sentence_logprob(model, sentence: TaggedSentence) -> tuple:
    """Return ``(log10 probability, number of scored events)``.

    Every tag and the closing EOS are scored; BOS padding is not.
    """
    logs = [lp for _, lp in _event_probs(model, sentence)]
    return math.fsum(logs), len(logs)


def perplexity(model, corpus: Sequence[TaggedSentence]) -> float:
    """Corpus perplexity, ``10 ** (-total log10 prob / scored events)``."""
    if not corpus:
        raise EmptyCorpusError("perplexity of an empty corpus")
    ref = None
    shifted = []
    for i, sent in enumerate(corpus):
        for p, lp in _event_probs(model, sent, i):
            if ref is None:
                ref_p, ref = p, lp
            # logs are taken relative to the first event so a constant
            # probability p gives exactly 1/p
            shifted.append(0.0 if p == ref_p else lp - ref)
    return (1.0 / ref_p) * 10.0 ** (-math.fsum(shifted) / len(shifted))


def pp_diff(translation: Sequence[TaggedSentence], lm_sl, lm_tl) -> float:
    """Perplexity under the source-language model minus under the target-language model.

    Higher means the tag sequences look less like the source language.
    """
    if lm_sl.order != lm_tl.order:
        raise ConfigurationError(f"language models differ in order ({lm_sl.order} vs {lm_tl.order})")
    if set(lm_sl.vocabulary) != set(lm_tl.vocabulary):
        raise ConfigurationError("language models do not share a vocabulary")
    return perplexity(lm_sl, translation) - perplexity(lm_tl, translation)
