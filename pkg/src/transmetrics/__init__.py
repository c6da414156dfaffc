"""Corpus metrics for comparing human translations, post-edits and MT output.

Lexical variety (type-token ratio), lexical density, source/target length
ratio and PoS-sequence perplexity difference, together with bootstrap and
paired t-test significance and grouped report tables.
"""

__version__ = "0.1.0"

from .corpus import (AlignedDataset, MtParadigm, PosTag, TaggedSentence, Token,
                     TranslationVariant, VariantKind, char_length, load_manifest,
                     parse_conllu, parse_plaintext)
from .metrics import (MetricResult, length_ratio_corpus, length_ratio_sentence,
                      lexical_density, type_token_ratio)
from .poslm import NGramModel, perplexity, pp_diff, sentence_logprob, train
from .arpa import export_arpa, import_arpa
from .stats import (BootstrapCI, TTestResult, bootstrap_ci, ci_significance, paired_t_test,
                    relative_difference, significance_mark)
from .report import ScoreTable, build_table, render
