"""Synthetic dataset construction: corrupt clean text, label, filter.

Per clean sentence the decoder produces k candidate corruptions (one for the
deterministic argmax strategy, k seeded samples for temperature sampling, the
k best beam outputs for beam search). Each (source, corruption) pair is
labelled by word alignment; exact duplicate labelled instances and instances
with more than max_errors incorrect tokens are dropped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .align import count_errors, label_tokens
from .corpus import ParallelPair
from .decode import (
    ARGMAX,
    BEAM,
    TEMPERATURE,
    DecodeConfig,
    beam_decode,
    greedy_decode,
    temperature_decode,
)
from .errors import ConfigError
from .rng import mix

log = logging.getLogger(__name__)


@dataclass
class BuildConfig:
    decode: DecodeConfig = field(default_factory=DecodeConfig)
    samples_per_source: int = 10
    max_errors: int = 5
    dedup: bool = True

    def validate(self):
        self.decode.validate()
        if self.samples_per_source < 1:
            raise ConfigError("samples_per_source must be >= 1")
        if self.max_errors < 0:
            raise ConfigError("max_errors must be >= 0")


def corrupt_corpus(model, clean, cfg):
    """Produce candidate corruptions for every clean sentence.

    Output is ordered by (source index, candidate rank) and carries decode
    scores. Sources whose decoder output is empty after EOS stripping are
    skipped with a warning.
    """
    cfg.validate()
    k = cfg.samples_per_source
    pairs = []
    for s_idx, source in enumerate(clean):
        if cfg.decode.strategy == ARGMAX:
            outputs = [greedy_decode(model, source, cfg.decode)]
        elif cfg.decode.strategy == TEMPERATURE:
            outputs = [
                temperature_decode(
                    model,
                    source,
                    replace(cfg.decode, seed=mix(cfg.decode.seed, s_idx, rank)),
                )
                for rank in range(k)
            ]
        elif cfg.decode.strategy == BEAM:
            width = max(cfg.decode.beam_width, k)
            nbest = beam_decode(model, source, replace(cfg.decode, beam_width=width))
            outputs = []
            seen = set()
            for sentence, score in nbest:
                key = tuple(sentence)
                if key in seen:
                    continue
                seen.add(key)
                outputs.append((sentence, score))
                if len(outputs) == k:
                    break
        else:
            raise ConfigError(f"unknown strategy {cfg.decode.strategy!r}")
        for sentence, score in outputs:
            if not sentence:
                log.warning("source %d decoded to an empty sentence; skipped", s_idx)
                continue
            pairs.append(ParallelPair(source, sentence, score))
    return pairs


def build_labeled(pairs, cfg):
    """Label pairs by alignment, then dedup and drop noisy instances.

    Keeps the first occurrence of each exact (tokens, labels) duplicate and
    drops instances with more than cfg.max_errors incorrect tokens; input
    order is preserved among survivors.
    """
    cfg.validate()
    survivors = []
    seen = set()
    for pair in pairs:
        labeled = label_tokens(pair.source, pair.target)
        if count_errors(labeled) > cfg.max_errors:
            continue
        if cfg.dedup:
            key = (labeled.tokens, labeled.labels)
            if key in seen:
                continue
            seen.add(key)
        survivors.append(labeled)
    return survivors


def write_corruption_sidecar(pairs, path):
    """Audit TSV of (source, corruption, score), one pair per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            score = "" if pair.score is None else repr(pair.score)
            fh.write(
                " ".join(pair.source) + "\t" + " ".join(pair.target) + "\t" + score + "\n"
            )
