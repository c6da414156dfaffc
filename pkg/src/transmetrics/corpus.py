"""Corpus ingestion: CoNLL-U and plaintext readers, aligned datasets, manifests.

Every object here is immutable once built. A dataset ties one list of
source sentences to any number of translation variants (human translation,
post-edits, raw MT), each aligned 1:1 with the source.
"""

import enum
import io
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, TextIO, Union

from .errors import AlignmentError, ConfigurationError, DataError, MissingTagsError, ParseError


class PosTag(str, enum.Enum):
    """The 17 Universal Dependencies part-of-speech tags."""

    ADJ = "ADJ"
    ADP = "ADP"
    ADV = "ADV"
    AUX = "AUX"
    CCONJ = "CCONJ"
    DET = "DET"
    INTJ = "INTJ"
    NOUN = "NOUN"
    NUM = "NUM"
    PART = "PART"
    PRON = "PRON"
    PROPN = "PROPN"
    PUNCT = "PUNCT"
    SCONJ = "SCONJ"
    SYM = "SYM"
    VERB = "VERB"
    X = "X"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value: str) -> "PosTag":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown UPOS tag {value!r}") from None


class VariantKind(str, enum.Enum):
    HT = "HT"
    PE = "PE"
    MT = "MT"

    def __str__(self):
        return self.value


class MtParadigm(str, enum.Enum):
    RBMT = "RBMT"
    SMT = "SMT"
    NMT = "NMT"
    NONE = "NONE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Token:
    surface: str
    pos: Optional[PosTag] = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if any(ch.isspace() for ch in self.surface):
            raise ValueError(f"token surface {self.surface!r} contains whitespace")
        if self.pos is not None and not isinstance(self.pos, PosTag):
            object.__setattr__(self, "pos", PosTag.parse(self.pos))


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple = ()

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "TaggedSentence":
        """Build from ``(surface, tag)`` pairs; tag may be a string or None."""
        return cls(tuple(Token(s, None if t is None else PosTag.parse(t)) for s, t in pairs))

    @classmethod
    def from_text(cls, text: str) -> "TaggedSentence":
        return cls(tuple(Token(s) for s in text.split()))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def surfaces(self) -> tuple:
        return tuple(t.surface for t in self.tokens)

    @property
    def tags(self) -> tuple:
        return tuple(t.pos for t in self.tokens)

    @property
    def is_tagged(self) -> bool:
        return all(t.pos is not None for t in self.tokens)

    @cached_property
    def char_length(self) -> int:
        return char_length(self)


def char_length(sentence: TaggedSentence) -> int:
    """Characters in the sentence with surfaces joined by single spaces."""
    return len(" ".join(t.surface for t in sentence.tokens).strip())


@dataclass
class ValidationReport:
    """Non-fatal findings collected while reading a file."""

    empty_lines: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.empty_lines


def _as_stream(source: Union[str, TextIO]) -> TextIO:
    if isinstance(source, str):
        return io.StringIO(source)
    return source


def _is_word_id(value: str) -> bool:
    return value.isdigit()


def parse_conllu(source: Union[str, TextIO], name: Optional[str] = None) -> list:
    """Read CoNLL-U text into sentences.

    FORM becomes the token surface and UPOS its tag; ``_`` in the UPOS
    column leaves the token untagged. Comment lines, multiword-token ranges
    (``1-2``) and empty nodes (``1.1``) are skipped.
    """
    sentences = []
    tokens = []
    in_block = False
    for lineno, raw in enumerate(_as_stream(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if in_block:
                sentences.append(TaggedSentence(tuple(tokens)))
            tokens = []
            in_block = False
            continue
        if line.startswith("#"):
            continue
        in_block = True
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 tab-separated columns, found {len(cols)}",
                             line=lineno, source=name)
        tok_id, form, upos = cols[0], cols[1], cols[3]
        if not _is_word_id(tok_id):
            if "-" in tok_id or "." in tok_id:
                continue
            raise ParseError(f"invalid token ID {tok_id!r}", line=lineno, source=name)
        if not form:
            raise ParseError("empty FORM column", line=lineno, source=name)
        # FORM may legally contain spaces; they would break whitespace detokenization
        form = "".join("_" if ch.isspace() else ch for ch in form)
        if upos == "_":
            pos = None
        else:
            try:
                pos = PosTag.parse(upos)
            except ValueError:
                raise ParseError(f"unknown UPOS value {upos!r}", line=lineno, source=name) from None
        tokens.append(Token(form, pos))
    if in_block:
        sentences.append(TaggedSentence(tuple(tokens)))
    return sentences


def parse_plaintext(source: Union[str, TextIO], report: Optional[ValidationReport] = None) -> list:
    """One sentence per line, tokens split on Unicode whitespace, no tags.

    Empty lines yield empty sentences (keeping alignment intact) and are
    recorded in ``report`` when one is given.
    """
    text = _as_stream(source).read()
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    sentences = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r")
        sent = TaggedSentence.from_text(line)
        if not sent.tokens and report is not None:
            report.empty_lines.append(lineno)
        sentences.append(sent)
    return sentences


@dataclass(frozen=True)
class TranslationVariant:
    kind: VariantKind
    paradigm: MtParadigm
    system_id: str
    sentences: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", VariantKind(self.kind))
        object.__setattr__(self, "paradigm", MtParadigm(self.paradigm))
        if not isinstance(self.sentences, tuple):
            object.__setattr__(self, "sentences", tuple(self.sentences))
        if (self.kind is VariantKind.HT) != (self.paradigm is MtParadigm.NONE):
            raise ConfigurationError(
                f"variant {self.system_id!r}: paradigm NONE is reserved for HT "
                f"(got kind={self.kind}, paradigm={self.paradigm})")

    @property
    def key(self) -> str:
        """Unique identifier within a dataset, e.g. ``PE:smt1``."""
        return f"{self.kind}:{self.system_id}"


@dataclass(frozen=True)
class AlignedDataset:
    name: str
    source_lang: str
    target_lang: str
    source: tuple
    variants: tuple
    warnings: tuple = ()

    def __post_init__(self):
        if not isinstance(self.source, tuple):
            object.__setattr__(self, "source", tuple(self.source))
        if not isinstance(self.variants, tuple):
            object.__setattr__(self, "variants", tuple(self.variants))
        if self.source_lang == self.target_lang:
            raise ConfigurationError(
                f"dataset {self.name!r}: source and target language are both {self.source_lang!r}")
        if not self.variants:
            raise ConfigurationError(f"dataset {self.name!r} has no translation variants")
        seen = set()
        for v in self.variants:
            if v.key in seen:
                raise ConfigurationError(f"dataset {self.name!r}: duplicate variant {v.key!r}")
            seen.add(v.key)
            if len(v.sentences) != len(self.source):
                raise AlignmentError(
                    f"dataset {self.name!r}: variant {v.key!r} has {len(v.sentences)} "
                    f"sentences but the source has {len(self.source)}")

    @property
    def direction(self) -> str:
        return f"{self.source_lang}-{self.target_lang}"

    def variant(self, key: str) -> TranslationVariant:
        for v in self.variants:
            if v.key == key:
                return v
        raise KeyError(key)

    def by_kind(self, kind) -> list:
        kind = VariantKind(kind)
        return [v for v in self.variants if v.kind is kind]


FORMATS = ("conllu", "text")


def read_corpus(path: str, fmt: str, report: Optional[ValidationReport] = None) -> list:
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown corpus format {fmt!r} (expected one of {FORMATS})")
    with open(path, encoding="utf-8") as f:
        if fmt == "conllu":
            return parse_conllu(f, name=path)
        return parse_plaintext(f, report)


def _manifest_entry(entry, what, base):
    try:
        path, fmt = entry["path"], entry["format"]
    except (KeyError, TypeError):
        raise ConfigurationError(f"manifest {what} entry needs 'path' and 'format'") from None
    if not os.path.isabs(path):
        path = os.path.join(base, path)
    return path, fmt


def load_manifest(path: str) -> AlignedDataset:
    """Load a dataset described by a JSON manifest.

    Corpus paths are resolved relative to the manifest's directory.
    """
    with open(path, encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, source=path) from None
    base = os.path.dirname(os.path.abspath(path))
    try:
        name, src_lang, tgt_lang = doc["name"], doc["source_lang"], doc["target_lang"]
        variant_entries = doc["variants"]
        source_entry = doc["source"]
    except (KeyError, TypeError) as e:
        raise ConfigurationError(f"manifest {path}: missing field {e}") from None

    warnings = []

    def read(entry, what):
        file_path, fmt = _manifest_entry(entry, what, base)
        report = ValidationReport()
        sents = read_corpus(file_path, fmt, report)
        if report.empty_lines:
            warnings.append(f"{what}: empty lines {report.empty_lines}")
        return sents

    source = read(source_entry, "source")
    variants = []
    for i, entry in enumerate(variant_entries):
        try:
            kind, paradigm, system_id = entry["kind"], entry["paradigm"], entry["system_id"]
        except (KeyError, TypeError):
            raise ConfigurationError(
                f"manifest {path}: variant {i} needs 'kind', 'paradigm' and 'system_id'") from None
        try:
            kind, paradigm = VariantKind(kind), MtParadigm(paradigm)
        except ValueError as e:
            raise ConfigurationError(f"manifest {path}: variant {i}: {e}") from None
        sents = read(entry, f"{kind}:{system_id}")
        variants.append(TranslationVariant(kind, paradigm, str(system_id), tuple(sents)))
    return AlignedDataset(name, src_lang, tgt_lang, tuple(source), tuple(variants), tuple(warnings))


def require_tagged(sentences: Sequence[TaggedSentence]):
    for i, s in enumerate(sentences):
        if not s.is_tagged:
            raise MissingTagsError(i)


__all__ = [
    "PosTag", "VariantKind", "MtParadigm", "Token", "TaggedSentence", "TranslationVariant",
    "AlignedDataset", "ValidationReport", "parse_conllu", "parse_plaintext", "char_length",
    "load_manifest", "read_corpus", "require_tagged", "DataError",
]
