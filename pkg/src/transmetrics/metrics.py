"""Surface metrics: type-token ratio, lexical density and length ratio."""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .corpus import PosTag, TaggedSentence, char_length
from .errors import AlignmentError, EmptyCorpusError, MissingTagsError, ZeroLengthSourceError

TTR = "ttr"
LEX_DENSITY = "lex_density"
LENGTH_RATIO = "length_ratio"
PP_DIFF = "pp_diff"

DEFAULT_CONTENT_TAGS = frozenset({PosTag.ADJ, PosTag.ADV, PosTag.NOUN, PosTag.VERB})
NON_WORD_TAGS = frozenset({PosTag.PUNCT, PosTag.SYM})

# Whether a larger score is the "better" (less post-editese-like) result.
HIGHER_IS_BETTER = {TTR: True, LEX_DENSITY: True, LENGTH_RATIO: False, PP_DIFF: True}


@dataclass(frozen=True)
class MetricResult:
    metric_id: str
    corpus_score: float
    n_sentences: int
    per_sentence: Optional[tuple] = None
    n_skipped: int = 0


def type_token_ratio(sentences: Sequence[TaggedSentence], fold_case: bool = False) -> MetricResult:
    """Distinct surfaces over total tokens, pooled over the whole corpus."""
    types = set()
    n_tokens = 0
    for sent in sentences:
        for tok in sent.tokens:
            types.add(tok.surface.lower() if fold_case else tok.surface)
            n_tokens += 1
    if n_tokens == 0:
        raise EmptyCorpusError("type-token ratio of a corpus without tokens")
    return MetricResult(TTR, len(types) / n_tokens, len(sentences))


def lexical_density(sentences: Sequence[TaggedSentence],
                    content_tags: Optional[Iterable] = None,
                    count_punct: bool = True) -> MetricResult:
    """Share of content-word tokens.

    With ``count_punct`` off, PUNCT and SYM tokens are dropped from both
    numerator and denominator.
    """
    content = DEFAULT_CONTENT_TAGS if content_tags is None else frozenset(PosTag(t) for t in content_tags)
    n_content = n_total = 0
    for i, sent in enumerate(sentences):
        for tok in sent.tokens:
            if tok.pos is None:
                raise MissingTagsError(i, f"sentence {i} has untagged tokens; lexical density needs UPOS tags")
            if not count_punct and tok.pos in NON_WORD_TAGS:
                continue
            n_total += 1
            if tok.pos in content:
                n_content += 1
    if n_total == 0:
        raise EmptyCorpusError("lexical density of a corpus without countable tokens")
    return MetricResult(LEX_DENSITY, n_content / n_total, len(sentences))


def length_ratio_sentence(st: TaggedSentence, tt: TaggedSentence, index: Optional[int] = None) -> float:
    """Absolute character-length difference normalised by the source length."""
    src_len = char_length(st)
    if src_len == 0:
        where = "" if index is None else f" (sentence {index})"
        raise ZeroLengthSourceError(f"source sentence has zero length{where}")
    return abs(src_len - char_length(tt)) / src_len


def length_ratio_corpus(source: Sequence[TaggedSentence],
                        translation: Sequence[TaggedSentence]) -> MetricResult:
    """Mean sentence-level length ratio; empty source sentences are skipped."""
    if len(source) != len(translation):
        raise AlignmentError(
            f"length ratio needs aligned corpora: {len(source)} source vs {len(translation)} translated sentences")
    ratios = []
    skipped = 0
    for i, (st, tt) in enumerate(zip(source, translation)):
        if char_length(st) == 0:
            skipped += 1
            continue
        ratios.append(length_ratio_sentence(st, tt, i))
    if not ratios:
        raise EmptyCorpusError("length ratio: no source sentence with positive length")
    return MetricResult(LENGTH_RATIO, math.fsum(ratios) / len(ratios), len(source),
                        per_sentence=tuple(ratios), n_skipped=skipped)
