"""Corruption-generation strategies: argmax, temperature sampling, beam search.

All decoders are pure given (model, source, config). They only need the
decoding protocol: ``model.start_state(source)``, ``model.step(state, token)``
returning a probability vector and a new state, plus ``vocab``, ``bos_id``,
``eos_id`` and ``vocab_size`` attributes, so tests can drive them with
hand-built table models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyInput
from .rng import Xoshiro256

ARGMAX = "am"
TEMPERATURE = "ts"
BEAM = "bs"
STRATEGIES = (ARGMAX, TEMPERATURE, BEAM)


@dataclass
class DecodeConfig:
    """Decoding knobs. tau applies to TS only, beam_width to BS only;
    max_len=None means 2*|source| + 5."""

    strategy: str = ARGMAX
    tau: float = 0.05
    beam_width: int = 11
    max_len: int | None = None
    seed: int = 0

    def validate(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.tau <= 0:
            raise ConfigError("tau must be > 0")
        if self.beam_width < 1:
            raise ConfigError("beam_width must be >= 1")
        if self.max_len is not None and self.max_len < 1:
            raise ConfigError("max_len must be >= 1")

    def resolve_max_len(self, source):
        return self.max_len if self.max_len is not None else 2 * len(source) + 5


@dataclass
class Hypothesis:
    """A (possibly finished) decoder prefix with its joint log-probability."""

    token_ids: tuple
    log_prob: float
    state: object
    last_token: int
    finished: bool


def apply_temperature(probs, tau):
    """Reshape a distribution: p_i^(1/tau) / sum_j p_j^(1/tau).

    Computed in log space so tiny tau (large exponents) cannot underflow.
    tau=1 is the identity; tau -> 0 approaches argmax.
    """
    if tau <= 0:
        raise ConfigError("tau must be > 0")
    p = np.asarray(probs, dtype=np.float64)
    with np.errstate(divide="ignore"):
        logp = np.log(p) / tau
    m = np.max(logp)
    shifted = np.exp(logp - m)
    return shifted / shifted.sum()


def _strip_eos(token_ids, eos_id):
    if token_ids and token_ids[-1] == eos_id:
        return token_ids[:-1]
    return token_ids


def _to_sentence(model, token_ids):
    return model.vocab.decode(_strip_eos(tuple(token_ids), model.eos_id))


def greedy_decode(model, source, config=None):
    """Argmax decoding; ties resolved toward the lowest token id."""
    config = config or DecodeConfig(strategy=ARGMAX)
    config.validate()
    if not source:
        raise EmptyInput("cannot decode an empty source sentence")
    max_len = config.resolve_max_len(source)
    state = model.start_state(source)
    prev = model.bos_id
    ids = []
    log_prob = 0.0
    for _ in range(max_len):
        probs, state = model.step(state, prev)
        tok = int(np.argmax(probs))
        log_prob += float(np.log(probs[tok]))
        ids.append(tok)
        if tok == model.eos_id:
            break
        prev = tok
    return _to_sentence(model, ids), log_prob


def temperature_decode(model, source, config):
    """Sample each step from apply_temperature(p, tau) by inverse CDF over
    ascending token ids; the seeded PRNG makes output reproducible."""
    config.validate()
    if not source:
        raise EmptyInput("cannot decode an empty source sentence")
    max_len = config.resolve_max_len(source)
    rng = Xoshiro256(config.seed)
    state = model.start_state(source)
    prev = model.bos_id
    ids = []
    log_prob = 0.0
    for _ in range(max_len):
        probs, state = model.step(state, prev)
        reshaped = apply_temperature(probs, config.tau)
        tok = rng.choice_from_probs(reshaped)
        log_prob += float(np.log(probs[tok]))
        ids.append(tok)
        if tok == model.eos_id:
            break
        prev = tok
    return _to_sentence(model, ids), log_prob


def beam_search(model, source, config):
    """Standard beam search over raw joint log-probability.

    Finished hypotheses stay in the beam and compete by score; each live
    hypothesis is expanded over the full vocabulary; the best `beam_width`
    candidates survive each step, ties preferring the lexicographically
    smaller token-id sequence. Returns finished hypotheses, best first.
    """
    config.validate()
    if not source:
        raise EmptyInput("cannot decode an empty source sentence")
    b = config.beam_width
    max_len = config.resolve_max_len(source)
    beam = [Hypothesis((), 0.0, model.start_state(source), model.bos_id, False)]
    for _ in range(max_len):
        if all(h.finished for h in beam):
            break
        candidates = []
        for hyp in beam:
            if hyp.finished:
                candidates.append(hyp)
                continue
            probs, new_state = model.step(hyp.state, hyp.last_token)
            with np.errstate(divide="ignore"):
                logp = np.log(probs)
            for tok in range(model.vocab_size):
                ids = hyp.token_ids + (tok,)
                candidates.append(
                    Hypothesis(
                        ids,
                        hyp.log_prob + float(logp[tok]),
                        new_state,
                        tok,
                        tok == model.eos_id or len(ids) == max_len,
                    )
                )
        candidates.sort(key=lambda h: (-h.log_prob, h.token_ids))
        beam = candidates[:b]
    beam.sort(key=lambda h: (-h.log_prob, h.token_ids))
    return beam


def beam_decode(model, source, config):
    """n-best corruptions as (sentence, log_prob), scores non-increasing."""
    return [
        (_to_sentence(model, hyp.token_ids), hyp.log_prob)
        for hyp in beam_search(model, source, config)
    ]
