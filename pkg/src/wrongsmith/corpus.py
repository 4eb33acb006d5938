"""Tokenization, vocabulary management and corpus file formats.

A sentence is a sequence of surface-form word tokens. Two on-disk formats:

* parallel TSV: one ``source<TAB>target`` pair per line, UTF-8, LF endings;
* labeled two-column: ``token<TAB>label`` lines with label ``c`` or ``i``,
  a blank line terminating each sentence.

Both round-trip exactly. A UTF-8 BOM is rejected.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass

from .errors import ConfigError, EmptyInput, ParseError

PAD, UNK, BOS, EOS = 0, 1, 2, 3
RESERVED_TOKENS = ("<pad>", "<unk>", "<s>", "</s>")

_PUNCT = set(".,!?;:'\"()")


@dataclass(frozen=True)
class ParallelPair:
    """A clean sentence, its corrupted counterpart, and the decode score
    (joint log-probability in nats; None for human-produced pairs)."""

    source: tuple
    target: tuple
    score: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        if not self.source or not self.target:
            raise EmptyInput("parallel pair sides must be non-empty")


@dataclass(frozen=True)
class LabeledSentence:
    """Corrupted tokens with per-token labels: 'c' correct, 'i' incorrect."""

    tokens: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.tokens) != len(self.labels):
            raise ConfigError(
                f"{len(self.tokens)} tokens vs {len(self.labels)} labels"
            )
        bad = set(self.labels) - {"c", "i"}
        if bad:
            raise ConfigError(f"labels must be 'c' or 'i', got {sorted(bad)}")


def tokenize(text):
    """Split text into word tokens.

    Splits on Unicode whitespace, then peels leading/trailing punctuation
    characters off each chunk as separate tokens. Case is preserved: casing
    mistakes are real learner errors and must survive.
    """
    if not isinstance(text, str):
        raise TypeError("tokenize expects a string")
    if not text.strip():
        raise EmptyInput("cannot tokenize empty or whitespace-only text")
    tokens = []
    for chunk in text.split():
        head = []
        tail = []
        while chunk and chunk[0] in _PUNCT:
            head.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


class Vocabulary:
    """Bijective token<->id map with reserved ids 0..3 (PAD, UNK, BOS, EOS).

    Non-reserved ids are assigned by descending corpus frequency with ties
    broken lexicographically, so identical corpora always produce identical
    vocabularies.
    """

    def __init__(self, tokens=()):
        self.token_of = list(RESERVED_TOKENS)
        self.id_of = {t: i for i, t in enumerate(self.token_of)}
        for t in tokens:
            if t in self.id_of:
                raise ConfigError(f"duplicate or reserved token {t!r}")
            self.id_of[t] = len(self.token_of)
            self.token_of.append(t)

    @property
    def size(self):
        return len(self.token_of)

    def encode_token(self, token):
        return self.id_of.get(token, UNK)

    def encode(self, tokens):
        return [self.id_of.get(t, UNK) for t in tokens]

    def decode(self, ids):
        return [self.token_of[i] for i in ids]

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.token_of == other.token_of

    def __len__(self):
        return len(self.token_of)


def build_vocab(corpus, min_count=1):
    """Collect every token with frequency >= min_count into a Vocabulary."""
    if min_count < 1:
        raise ConfigError("min_count must be >= 1")
    if not corpus:
        raise EmptyInput("cannot build a vocabulary from an empty corpus")
    counts = collections.Counter()
    for sentence in corpus:
        counts.update(sentence)
    kept = [
        t
        for t, n in counts.items()
        if n >= min_count and t not in RESERVED_TOKENS
    ]
    kept.sort(key=lambda t: (-counts[t], t))
    return Vocabulary(kept)


def _read_lines(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw.startswith(b"\xef\xbb\xbf"):
        raise ParseError("UTF-8 BOM is not allowed", line=1)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from exc
    return [line.rstrip("\r") for line in text.split("\n")]


def read_parallel_tsv(path):
    """Read source<TAB>target lines into ParallelPairs (sides tokenized)."""
    pairs = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != 2:
            raise ParseError(
                f"expected exactly one TAB, found {len(cells) - 1}", line=lineno
            )
        try:
            source = tokenize(cells[0])
            target = tokenize(cells[1])
        except EmptyInput as exc:
            raise ParseError(str(exc), line=lineno) from exc
        pairs.append(ParallelPair(source, target))
    return pairs


def write_parallel_tsv(pairs, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(" ".join(pair.source) + "\t" + " ".join(pair.target) + "\n")


def read_labeled(path):
    """Read the two-column token<TAB>label format."""
    dataset = []
    tokens, labels = [], []
    lines = _read_lines(path)
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            if tokens:
                dataset.append(LabeledSentence(tokens, labels))
                tokens, labels = [], []
            continue
        cells = line.split("\t")
        if len(cells) != 2:
            raise ParseError(
                f"expected token<TAB>label, found {len(cells)} columns",
                line=lineno,
            )
        token, label = cells
        if label not in ("c", "i"):
            raise ParseError(f"unknown label {label!r}", line=lineno)
        tokens.append(token)
        labels.append(label)
    if tokens:
        dataset.append(LabeledSentence(tokens, labels))
    return dataset


def write_labeled(dataset, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sentence in dataset:
            for token, label in zip(sentence.tokens, sentence.labels):
                fh.write(f"{token}\t{label}\n")
            fh.write("\n")


def read_sentences(path):
    """Read plain text, one sentence per line, tokenized; blank lines skipped."""
    sentences = []
    for line in _read_lines(path):
        if line.strip():
            sentences.append(tokenize(line))
    return sentences


def write_sentences(sentences, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sentence in sentences:
            fh.write(" ".join(sentence) + "\n")
