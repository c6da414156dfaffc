import random

import pytest
from hypothesis import given, strategies as st

from transmetrics.corpus import PosTag, TaggedSentence, Token
from transmetrics.errors import (AlignmentError, EmptyCorpusError, MissingTagsError,
                                 ZeroLengthSourceError)
from transmetrics.metrics import (length_ratio_corpus, length_ratio_sentence, lexical_density,
                                  type_token_ratio)

from conftest import random_corpus, tagged


def text(*lines):
    return [TaggedSentence.from_text(l) for l in lines]


def brute_ttr(sentences):
    types = set()
    n = 0
    for s in sentences:
        for tok in s.tokens:
            types.add(tok.surface)
            n += 1
    return len(types) / n


def test_ttr_examples():
    assert type_token_ratio(text("a a a a")).corpus_score == 0.25
    assert type_token_ratio(text("the cat", "the dog")).corpus_score == 0.75


def test_ttr_fold_case():
    sents = text("The the THE cat")
    assert type_token_ratio(sents).corpus_score == 1.0
    assert type_token_ratio(sents, fold_case=True).corpus_score == 0.5


def test_ttr_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        type_token_ratio(text("", ""))
    with pytest.raises(EmptyCorpusError):
        type_token_ratio([])


def test_ttr_reorder_invariant_and_bounds(rng):
    for _ in range(50):
        sents = random_corpus(rng, min_len=1)
        score = type_token_ratio(sents).corpus_score
        shuffled = sents[:]
        rng.shuffle(shuffled)
        assert type_token_ratio(shuffled).corpus_score == score
        total = sum(len(s) for s in sents)
        assert 1 / total <= score <= 1


def test_ttr_decreases_when_adding_seen_types(rng):
    for _ in range(30):
        sents = random_corpus(rng, n_sent=5, min_len=1)
        before = type_token_ratio(sents).corpus_score
        seen = [t.surface for s in sents for t in s.tokens]
        extra = TaggedSentence.from_text(" ".join(rng.choice(seen) for _ in range(rng.randint(1, 4))))
        assert type_token_ratio(sents + [extra]).corpus_score < before


def test_density_examples():
    assert lexical_density([tagged("a/NOUN b/NOUN")]).corpus_score == 1.0
    assert lexical_density([tagged("the/DET cat/NOUN sleeps/VERB ./PUNCT")]).corpus_score == 0.5


def test_density_count_punct_off():
    sent = [tagged("the/DET cat/NOUN sleeps/VERB ./PUNCT $/SYM")]
    assert lexical_density(sent).corpus_score == 2 / 5
    assert lexical_density(sent, count_punct=False).corpus_score == 2 / 3


def test_density_aux_and_propn_are_not_content_by_default():
    sent = [tagged("Anna/PROPN has/AUX eaten/VERB")]
    assert lexical_density(sent).corpus_score == 1 / 3
    assert lexical_density(sent, content_tags={"PROPN", "VERB", "AUX"}).corpus_score == 1.0


def test_density_all_tags_is_one(rng):
    for _ in range(20):
        sents = random_corpus(rng, min_len=1)
        assert lexical_density(sents, content_tags=list(PosTag)).corpus_score == 1.0


def test_density_missing_tags_names_sentence():
    sents = [tagged("a/NOUN"), TaggedSentence.from_text("b c")]
    with pytest.raises(MissingTagsError) as err:
        lexical_density(sents)
    assert err.value.sentence_index == 1


def test_length_ratio_sentence():
    s5 = TaggedSentence.from_text("abcde")
    s8 = TaggedSentence.from_text("abc defg")
    assert length_ratio_sentence(s5, s5) == 0
    assert length_ratio_sentence(s5, s8) == 3 / 5
    assert length_ratio_sentence(TaggedSentence.from_text("abcdefghij"), TaggedSentence()) == 1.0
    with pytest.raises(ZeroLengthSourceError):
        length_ratio_sentence(TaggedSentence(), s5)


def test_length_ratio_corpus():
    src = text("aaaaa", "aaaaa")
    tgt = text("aaaa", "aaa")  # ratios 0.2 and 0.4
    res = length_ratio_corpus(src, tgt)
    assert res.per_sentence == (0.2, 0.4)
    assert res.corpus_score == pytest.approx(0.3, abs=1e-15)
    assert length_ratio_corpus(src, src).corpus_score == 0.0


def test_length_ratio_skips_empty_source():
    res = length_ratio_corpus(text("abcde", "", "ab"), text("abcde", "xyz", "a"))
    assert res.n_skipped == 1
    assert res.per_sentence == (0.0, 0.5)
    assert res.n_sentences == 3


def test_length_ratio_alignment():
    with pytest.raises(AlignmentError):
        length_ratio_corpus(text("a"), text("a", "b"))


def test_length_ratio_pair_reorder_invariant(rng):
    src = random_corpus(rng, n_sent=30, min_len=1)
    tgt = random_corpus(rng, n_sent=30)
    score = length_ratio_corpus(src, tgt).corpus_score
    pairs = list(zip(src, tgt))
    rng.shuffle(pairs)
    assert length_ratio_corpus([p[0] for p in pairs], [p[1] for p in pairs]).corpus_score \
        == pytest.approx(score, rel=1e-12)


@given(st.lists(st.text(alphabet="abc xyz", min_size=1, max_size=20), min_size=1, max_size=10))
def test_length_ratio_self_is_zero(lines):
    sents = [TaggedSentence.from_text(l) for l in lines]
    for s in sents:
        if s.char_length:
            assert length_ratio_sentence(s, s) == 0
