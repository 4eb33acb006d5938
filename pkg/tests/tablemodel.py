"""Hand-built table-driven models implementing the decoding protocol, so
decoder behaviour can be pinned against known probability tables."""

import numpy as np


class IdVocab:
    """Maps token id i to the surface form 't<i>'."""

    def decode(self, ids):
        return [f"t{i}" for i in ids]


class TableModel:
    """Next-token distributions looked up by emitted prefix.

    table maps a prefix tuple (tokens emitted so far) to a probability
    vector over the vocabulary; missing prefixes fall back to uniform.
    """

    def __init__(self, vocab_size, table, eos_id, bos_id=-1):
        self.vocab_size = vocab_size
        self.table = {k: np.asarray(v, dtype=np.float64) for k, v in table.items()}
        self.eos_id = eos_id
        self.bos_id = bos_id
        self.vocab = IdVocab()

    def start_state(self, source):
        return ()

    def step(self, state, prev_token_id):
        prefix = state if prev_token_id == self.bos_id else state + (prev_token_id,)
        probs = self.table.get(prefix)
        if probs is None:
            probs = np.full(self.vocab_size, 1.0 / self.vocab_size)
        return probs, prefix
