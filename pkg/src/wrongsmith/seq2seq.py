"""Attentive encoder-decoder corruption model, built from scratch on numpy.

Single-layer unidirectional LSTM encoder, additive (MLP-scored) attention and
a single-layer LSTM decoder whose input is [previous-token embedding;
attention summary]. Trained with teacher forcing, plain SGD with gradient
clipping, and dev-loss early stopping. Backpropagation is exact and verified
against finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nn
from .corpus import BOS, EOS, Vocabulary
from .errors import ConfigError, EmptyInput, WrongsmithError
from .modelio import load_model, save_model
from .rng import Xoshiro256, mix

INIT_RANGE = 0.08
MAGIC = b"WSM1"

# Serialization and initialization order of the weight arrays.
ARRAY_FIELDS = (
    "emb_src",
    "emb_tgt",
    "enc_W",
    "enc_U",
    "enc_b",
    "dec_W",
    "dec_U",
    "dec_b",
    "att_ws",
    "att_wc",
    "att_v",
    "out_W",
    "out_b",
)


@dataclass
class Seq2SeqParams:
    """All weights of the corruption model plus its vocabulary."""

    vocab: Vocabulary
    emb_src: np.ndarray
    emb_tgt: np.ndarray
    enc_W: np.ndarray
    enc_U: np.ndarray
    enc_b: np.ndarray
    dec_W: np.ndarray
    dec_U: np.ndarray
    dec_b: np.ndarray
    att_ws: np.ndarray
    att_wc: np.ndarray
    att_v: np.ndarray
    out_W: np.ndarray
    out_b: np.ndarray

    @property
    def vocab_size(self):
        return self.emb_src.shape[0]

    @property
    def emb_size(self):
        return self.emb_src.shape[1]

    @property
    def cell_size(self):
        return self.enc_U.shape[1]

    @property
    def att_size(self):
        return self.att_v.shape[0]

    @property
    def bos_id(self):
        return BOS

    @property
    def eos_id(self):
        return EOS

    def arrays(self):
        return {name: getattr(self, name) for name in ARRAY_FIELDS}

    def copy(self):
        return Seq2SeqParams(
            self.vocab, **{k: v.copy() for k, v in self.arrays().items()}
        )

    # Decoding protocol (shared with the table models used in tests): a
    # decode state plus a step function returning the next-token distribution.
    def start_state(self, source):
        contexts, h, c, _ = _encode_ids(self, _source_ids(self, source))
        return DecodeState(h, c, contexts)

    def step(self, state, prev_token_id):
        _, summary = attend(self, state.h, state.contexts)
        probs, (h2, c2) = decoder_step(self, (state.h, state.c), prev_token_id, summary)
        return probs, DecodeState(h2, c2, state.contexts)


@dataclass
class DecodeState:
    h: np.ndarray
    c: np.ndarray
    contexts: np.ndarray


@dataclass
class TrainConfig:
    """Hyperparameters for SGD training with early stopping."""

    cell_size: int = 64
    emb_size: int = 32
    learning_rate: float = 0.5
    batch_size: int = 8
    patience: int = 20
    max_epochs: int = 100
    seed: int = 0
    clip_norm: float = 5.0

    def validate(self):
        if self.patience < 1:
            raise ConfigError("patience must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ConfigError("max_epochs must be >= 1")


def _shapes(vocab_size, emb_size, cell_size, att_size):
    v, e, h, a = vocab_size, emb_size, cell_size, att_size
    if min(v, e, h, a) <= 0:
        raise ConfigError("all model dimensions must be positive")
    return {
        "emb_src": (v, e),
        "emb_tgt": (v, e),
        "enc_W": (4 * h, e),
        "enc_U": (4 * h, h),
        "enc_b": (4 * h,),
        "dec_W": (4 * h, e + h),
        "dec_U": (4 * h, h),
        "dec_b": (4 * h,),
        "att_ws": (a, h),
        "att_wc": (a, h),
        "att_v": (a,),
        "out_W": (v, h),
        "out_b": (v,),
    }


def init_params(vocab, cell_size, emb_size, seed, att_size=None):
    """Fresh weights ~ Uniform(-0.08, 0.08) from the seeded xoshiro stream.

    The same seed always produces bit-identical parameters.
    """
    if att_size is None:
        att_size = cell_size
    shapes = _shapes(vocab.size, emb_size, cell_size, att_size)
    rng = Xoshiro256(seed)
    arrays = {
        name: rng.uniform_array(shapes[name], -INIT_RANGE, INIT_RANGE)
        for name in ARRAY_FIELDS
    }
    return Seq2SeqParams(vocab, **arrays)


def zero_grads(params):
    return {name: np.zeros_like(arr) for name, arr in params.arrays().items()}


def _source_ids(params, source):
    if not source:
        raise EmptyInput("cannot encode an empty sentence")
    return params.vocab.encode(source)


def _encode_ids(params, ids):
    h = np.zeros(params.cell_size)
    c = np.zeros(params.cell_size)
    contexts = np.empty((len(ids), params.cell_size))
    caches = []
    for j, tok in enumerate(ids):
        x = params.emb_src[tok]
        h, c, cache = nn.lstm_step(params.enc_W, params.enc_U, params.enc_b, x, h, c)
        contexts[j] = h
        caches.append(cache)
    return contexts, h, c, caches


def encode(params, source):
    """Context vectors, one per source token (OOV tokens become UNK)."""
    contexts, _, _, _ = _encode_ids(params, _source_ids(params, source))
    return contexts


def attend(params, decoder_state, contexts):
    """Additive attention: score_j = v . tanh(Ws @ state + Wc @ context_j).

    Returns (weights, summary) with weights summing to one.
    """
    ctx = np.asarray(contexts)
    if ctx.ndim != 2 or ctx.shape[0] == 0 or ctx.shape[1] != params.cell_size:
        raise ConfigError(f"contexts must be (n, {params.cell_size}), got {ctx.shape}")
    state = np.asarray(decoder_state)
    if state.shape != (params.cell_size,):
        raise ConfigError(
            f"decoder state must be ({params.cell_size},), got {state.shape}"
        )
    q = params.att_ws @ state
    pre = np.tanh(q + ctx @ params.att_wc.T)
    scores = pre @ params.att_v
    weights = nn.softmax(scores)
    summary = weights @ ctx
    return weights, summary


def decoder_step(params, state, prev_token_id, summary):
    """One decoder LSTM step on [embedding(prev token); summary].

    Returns (distribution over the vocabulary, new (h, c) state).
    """
    if not 0 <= prev_token_id < params.vocab_size:
        raise ConfigError(f"token id {prev_token_id} outside vocabulary")
    h, c = state
    x = np.concatenate([params.emb_tgt[prev_token_id], summary])
    h2, c2, _ = nn.lstm_step(params.dec_W, params.dec_U, params.dec_b, x, h, c)
    probs = nn.softmax(params.out_W @ h2 + params.out_b)
    return probs, (h2, c2)


def _forward_pair(params, src_ids, tgt_ids, need_cache=False):
    """Teacher-forced forward pass.

    Returns (mean NLL, per-step log-probs of the forced tokens, cache).
    """
    contexts, h, c, enc_caches = _encode_ids(params, src_ids)
    tgt_in = [BOS] + list(tgt_ids)
    tgt_out = list(tgt_ids) + [EOS]
    steps = []
    logps = []
    for t, (prev_tok, out_tok) in enumerate(zip(tgt_in, tgt_out)):
        h_prev, c_prev = h, c
        q = params.att_ws @ h_prev
        pre = np.tanh(q + contexts @ params.att_wc.T)
        scores = pre @ params.att_v
        weights = nn.softmax(scores)
        summary = weights @ contexts
        x = np.concatenate([params.emb_tgt[prev_tok], summary])
        h, c, lstm_cache = nn.lstm_step(params.dec_W, params.dec_U, params.dec_b, x, h, c)
        logits = params.out_W @ h + params.out_b
        probs = nn.softmax(logits)
        logps.append(float(np.log(probs[out_tok])))
        if need_cache:
            steps.append(
                (prev_tok, out_tok, h_prev, weights, pre, lstm_cache, h, probs)
            )
    loss_val = -sum(logps) / len(logps)
    cache = (src_ids, contexts, enc_caches, steps) if need_cache else None
    return loss_val, logps, cache


def _pair_ids(params, pair):
    return params.vocab.encode(pair.source), params.vocab.encode(pair.target)


def loss(params, pair):
    """Mean per-token negative log-likelihood with teacher forcing
    (BOS-prefixed input, EOS-terminated output)."""
    src_ids, tgt_ids = _pair_ids(params, pair)
    value, _, _ = _forward_pair(params, src_ids, tgt_ids)
    return value


def sequence_log_prob(params, source, target_ids, include_eos=True):
    """Joint log-probability (nats) of emitting target_ids after source.

    Teacher-forces the decoder over target_ids; the EOS step is included
    unless the sequence was cut off by a length limit.
    """
    src_ids = _source_ids(params, source)
    if include_eos:
        _, logps, _ = _forward_pair(params, src_ids, list(target_ids))
        return sum(logps)
    if not target_ids:
        return 0.0
    _, logps, _ = _forward_pair(params, src_ids, list(target_ids))
    return sum(logps[:-1])


def _backward_pair(params, cache, grads, scale=1.0):
    """Accumulate scale * d(mean NLL)/d(params) into grads."""
    src_ids, contexts, enc_caches, steps = cache
    n_steps = len(steps)
    hsize = params.cell_size
    esize = params.emb_size
    dctx = np.zeros_like(contexts)
    dh = np.zeros(hsize)
    dc = np.zeros(hsize)
    for prev_tok, out_tok, h_prev, weights, pre, lstm_cache, h_out, probs in reversed(steps):
        dlogits = probs * (scale / n_steps)
        dlogits[out_tok] -= scale / n_steps
        grads["out_W"] += np.outer(dlogits, h_out)
        grads["out_b"] += dlogits
        dh = dh + params.out_W.T @ dlogits
        dx, dh_prev, dc_prev = nn.lstm_step_backward(
            dh, dc, lstm_cache, params.dec_W, params.dec_U,
            grads["dec_W"], grads["dec_U"], grads["dec_b"],
        )
        grads["emb_tgt"][prev_tok] += dx[:esize]
        dsummary = dx[esize:]
        # attention backward: summary = weights @ contexts
        dweights = contexts @ dsummary
        dctx += np.outer(weights, dsummary)
        dscores = weights * (dweights - weights @ dweights)
        grads["att_v"] += pre.T @ dscores
        dpre = np.outer(dscores, params.att_v) * (1.0 - pre * pre)
        dq = dpre.sum(axis=0)
        grads["att_ws"] += np.outer(dq, h_prev)
        dh_prev = dh_prev + params.att_ws.T @ dq
        grads["att_wc"] += dpre.T @ contexts
        dctx += dpre @ params.att_wc
        dh, dc = dh_prev, dc_prev
    # dh, dc now sit on the decoder's initial state = the encoder final state
    for j in range(len(src_ids) - 1, -1, -1):
        dh_j = dctx[j] + dh
        dx, dh, dc = nn.lstm_step_backward(
            dh_j, dc, enc_caches[j], params.enc_W, params.enc_U,
            grads["enc_W"], grads["enc_U"], grads["enc_b"],
        )
        grads["emb_src"][src_ids[j]] += dx


def loss_and_grad(params, batch):
    """Mean loss over the batch and its exact gradient."""
    if not batch:
        raise EmptyInput("empty batch")
    grads = zero_grads(params)
    total = 0.0
    scale = 1.0 / len(batch)
    for pair in batch:
        src_ids, tgt_ids = _pair_ids(params, pair)
        value, _, cache = _forward_pair(params, src_ids, tgt_ids, need_cache=True)
        total += value
        _backward_pair(params, cache, grads, scale=scale)
    return total / len(batch), grads


def grad(params, batch):
    """Exact gradient of the mean batch loss, mirroring Seq2SeqParams."""
    _, grads = loss_and_grad(params, batch)
    return grads


def mean_dev_loss(params, dev_pairs):
    return sum(loss(params, pair) for pair in dev_pairs) / len(dev_pairs)


def train(params, train_pairs, dev_pairs, config):
    """SGD over shuffled batches with dev-loss early stopping.

    Keeps the parameters of the best dev epoch; stops once the dev score has
    not improved for `patience` consecutive epochs or max_epochs is reached.
    Returns (best_params, history).
    """
    config.validate()
    if not train_pairs:
        raise EmptyInput("empty training set")
    if not dev_pairs:
        raise EmptyInput("empty dev set")
    work = params.copy()
    rng = Xoshiro256(mix(config.seed, 0x5EED))
    best = work.copy()
    best_dev = float("inf")
    bad_epochs = 0
    history = []
    for epoch in range(1, config.max_epochs + 1):
        order = list(range(len(train_pairs)))
        rng.shuffle(order)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(order), config.batch_size):
            batch = [train_pairs[i] for i in order[start : start + config.batch_size]]
            value, grads = loss_and_grad(work, batch)
            nn.clip_gradients(grads, config.clip_norm)
            for name, g in grads.items():
                getattr(work, name)[...] -= config.learning_rate * g
            epoch_loss += value
            n_batches += 1
            if not nn.all_finite(work.arrays().values()):
                raise WrongsmithError(
                    f"non-finite parameter after epoch {epoch} batch {n_batches}"
                )
        dev = mean_dev_loss(work, dev_pairs)
        improved = dev < best_dev
        history.append(
            {
                "epoch": epoch,
                "train_loss": epoch_loss / max(n_batches, 1),
                "dev_loss": dev,
                "improved": improved,
            }
        )
        if improved:
            best_dev = dev
            best = work.copy()
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                break
    return best, history


def teacher_forced_accuracy(params, pairs):
    """Fraction of target tokens (incl. EOS) ranked first under teacher forcing."""
    hits = 0
    total = 0
    for pair in pairs:
        src_ids, tgt_ids = _pair_ids(params, pair)
        contexts, h, c, _ = _encode_ids(params, src_ids)
        state = DecodeState(h, c, contexts)
        for prev_tok, out_tok in zip([BOS] + tgt_ids, tgt_ids + [EOS]):
            probs, state = params.step(state, prev_tok)
            hits += int(np.argmax(probs) == out_tok)
            total += 1
    return hits / total


def save(params, path):
    dims = (params.vocab_size, params.emb_size, params.cell_size, params.att_size)
    arrays = [getattr(params, name) for name in ARRAY_FIELDS]
    save_model(path, MAGIC, dims, arrays, params.vocab)


def load(path):
    def shapes_from_dims(dims):
        if len(dims) != 4:
            raise ConfigError(f"expected 4 dims, found {len(dims)}")
        shapes = _shapes(*dims)
        return [shapes[name] for name in ARRAY_FIELDS]

    _, arrays, vocab = load_model(path, MAGIC, shapes_from_dims)
    return Seq2SeqParams(vocab, **dict(zip(ARRAY_FIELDS, arrays)))
