"""Vanilla BiLSTM token tagger for grammatical error detection.

Forward and backward LSTM passes are concatenated per token and projected to
the two classes {c, i}. Training supports the alternating protocol: epochs
switch between the real annotated set and the synthetic collection, which
keeps the model from overfitting either source. Early stopping monitors
token F_0.5 on a real dev set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nn
from .corpus import LabeledSentence, Vocabulary, build_vocab
from .errors import ConfigError, EmptyInput, WrongsmithError
from .metrics import prf
from .modelio import load_model, save_model
from .rng import Xoshiro256, mix
from .seq2seq import TrainConfig

INIT_RANGE = 0.08
MAGIC = b"WSD1"
LABEL_INDEX = {"c": 0, "i": 1}

ARRAY_FIELDS = (
    "emb",
    "fw_W",
    "fw_U",
    "fw_b",
    "bw_W",
    "bw_U",
    "bw_b",
    "out_W",
    "out_b",
)


@dataclass
class DetectorParams:
    vocab: Vocabulary
    emb: np.ndarray
    fw_W: np.ndarray
    fw_U: np.ndarray
    fw_b: np.ndarray
    bw_W: np.ndarray
    bw_U: np.ndarray
    bw_b: np.ndarray
    out_W: np.ndarray
    out_b: np.ndarray

    @property
    def vocab_size(self):
        return self.emb.shape[0]

    @property
    def emb_size(self):
        return self.emb.shape[1]

    @property
    def cell_size(self):
        return self.fw_U.shape[1]

    def arrays(self):
        return {name: getattr(self, name) for name in ARRAY_FIELDS}

    def copy(self):
        return DetectorParams(
            self.vocab, **{k: v.copy() for k, v in self.arrays().items()}
        )


@dataclass
class DetectorTrainConfig(TrainConfig):
    """TrainConfig plus the alternation protocol and the decision threshold."""

    alternation: str = "epoch"
    end_on_real: bool = True
    threshold: float = 0.5

    def validate(self):
        super().validate()
        if self.alternation not in ("none", "epoch"):
            raise ConfigError(f"unknown alternation {self.alternation!r}")
        if not 0 < self.threshold < 1:
            raise ConfigError("threshold must be in (0, 1)")


def _shapes(vocab_size, emb_size, cell_size):
    v, e, h = vocab_size, emb_size, cell_size
    if min(v, e, h) <= 0:
        raise ConfigError("all model dimensions must be positive")
    return {
        "emb": (v, e),
        "fw_W": (4 * h, e),
        "fw_U": (4 * h, h),
        "fw_b": (4 * h,),
        "bw_W": (4 * h, e),
        "bw_U": (4 * h, h),
        "bw_b": (4 * h,),
        "out_W": (2, 2 * h),
        "out_b": (2,),
    }


def init_detector(vocab, cell_size, emb_size, seed):
    shapes = _shapes(vocab.size, emb_size, cell_size)
    rng = Xoshiro256(seed)
    arrays = {
        name: rng.uniform_array(shapes[name], -INIT_RANGE, INIT_RANGE)
        for name in ARRAY_FIELDS
    }
    return DetectorParams(vocab, **arrays)


def zero_grads(params):
    return {name: np.zeros_like(arr) for name, arr in params.arrays().items()}


def _forward_ids(params, ids, need_cache=False):
    n = len(ids)
    hsize = params.cell_size
    fw_h = np.empty((n, hsize))
    bw_h = np.empty((n, hsize))
    fw_caches = [None] * n
    bw_caches = [None] * n
    h = np.zeros(hsize)
    c = np.zeros(hsize)
    for t in range(n):
        h, c, cache = nn.lstm_step(
            params.fw_W, params.fw_U, params.fw_b, params.emb[ids[t]], h, c
        )
        fw_h[t] = h
        if need_cache:
            fw_caches[t] = cache
    h = np.zeros(hsize)
    c = np.zeros(hsize)
    for t in range(n - 1, -1, -1):
        h, c, cache = nn.lstm_step(
            params.bw_W, params.bw_U, params.bw_b, params.emb[ids[t]], h, c
        )
        bw_h[t] = h
        if need_cache:
            bw_caches[t] = cache
    feats = np.concatenate([fw_h, bw_h], axis=1)
    logits = feats @ params.out_W.T + params.out_b
    logits -= logits.max(axis=1, keepdims=True)
    e = np.exp(logits)
    probs = e / e.sum(axis=1, keepdims=True)
    cache = (ids, feats, probs, fw_caches, bw_caches) if need_cache else None
    return probs, cache


def detector_forward(params, sentence):
    """Per-token probability that the token is incorrect."""
    if not sentence:
        raise EmptyInput("cannot tag an empty sentence")
    probs, _ = _forward_ids(params, params.vocab.encode(sentence))
    return probs[:, 1]


def predict_labels(params, sentence, threshold=0.5):
    """Label 'i' wherever p(i) >= threshold, else 'c'."""
    p_i = detector_forward(params, sentence)
    labels = tuple("i" if p >= threshold else "c" for p in p_i)
    return LabeledSentence(tuple(sentence), labels)


def _sentence_loss(params, ids, label_ids, need_cache=False):
    probs, cache = _forward_ids(params, ids, need_cache)
    picked = probs[np.arange(len(ids)), label_ids]
    value = -float(np.log(picked).sum()) / len(ids)
    return value, probs, cache


def _backward_sentence(params, label_ids, cache, grads, scale):
    ids, feats, probs, fw_caches, bw_caches = cache
    n = len(ids)
    hsize = params.cell_size
    dlogits = probs * (scale / n)
    dlogits[np.arange(n), label_ids] -= scale / n
    grads["out_W"] += dlogits.T @ feats
    grads["out_b"] += dlogits.sum(axis=0)
    dfeats = dlogits @ params.out_W
    dh = np.zeros(hsize)
    dc = np.zeros(hsize)
    for t in range(n - 1, -1, -1):
        dx, dh, dc = nn.lstm_step_backward(
            dfeats[t, :hsize] + dh, dc, fw_caches[t],
            params.fw_W, params.fw_U,
            grads["fw_W"], grads["fw_U"], grads["fw_b"],
        )
        grads["emb"][ids[t]] += dx
    dh = np.zeros(hsize)
    dc = np.zeros(hsize)
    for t in range(n):
        dx, dh, dc = nn.lstm_step_backward(
            dfeats[t, hsize:] + dh, dc, bw_caches[t],
            params.bw_W, params.bw_U,
            grads["bw_W"], grads["bw_U"], grads["bw_b"],
        )
        grads["emb"][ids[t]] += dx


def _encode_dataset(params, dataset):
    return [
        (
            params.vocab.encode(s.tokens),
            np.array([LABEL_INDEX[lab] for lab in s.labels]),
        )
        for s in dataset
    ]


def detector_loss(params, dataset):
    """Mean over sentences of the mean per-token cross-entropy."""
    if not dataset:
        raise EmptyInput("empty dataset")
    encoded = _encode_dataset(params, dataset)
    total = 0.0
    for ids, label_ids in encoded:
        value, _, _ = _sentence_loss(params, ids, label_ids)
        total += value
    return total / len(dataset)


def detector_grad(params, dataset):
    """Exact gradient of detector_loss, mirroring DetectorParams."""
    if not dataset:
        raise EmptyInput("empty dataset")
    grads = zero_grads(params)
    scale = 1.0 / len(dataset)
    for ids, label_ids in _encode_dataset(params, dataset):
        _, _, cache = _sentence_loss(params, ids, label_ids, need_cache=True)
        _backward_sentence(params, label_ids, cache, grads, scale)
    return grads


def evaluate(params, dataset, threshold=0.5, beta=0.5):
    """Predict every sentence and score against its gold labels."""
    preds = [predict_labels(params, s.tokens, threshold) for s in dataset]
    return prf(preds, dataset, beta=beta)


def _synthetic_shards(synthetic, shard_size):
    """Round-robin |real|-sized shards so alternation stays balanced as the
    synthetic volume grows; yields the whole set when it is small enough."""
    if len(synthetic) <= shard_size:
        while True:
            yield list(synthetic)
    pointer = 0
    while True:
        shard = [
            synthetic[(pointer + i) % len(synthetic)] for i in range(shard_size)
        ]
        pointer = (pointer + shard_size) % len(synthetic)
        yield shard


def train_detector(real, synthetic, dev, cfg):
    """Train with the alternating real/synthetic protocol.

    With alternation="epoch" and a non-empty synthetic set, epochs alternate
    full passes over the two sets; the epoch order within each cycle is
    chosen so the last trained epoch is on real data when cfg.end_on_real.
    With alternation="none" or no synthetic data this reduces to plain
    training on the real set. Early stopping tracks dev F_0.5 measured after
    real epochs, with cfg.patience consecutive non-improvements required to
    stop (checked at cycle boundaries). Returns (best_params, history) where
    history rows are {"epoch", "source", "dev_f05"}.
    """
    cfg.validate()
    if not real:
        raise EmptyInput("real training set is required")
    if not dev:
        raise EmptyInput("dev set is required")
    vocab = build_vocab([s.tokens for s in list(real) + list(synthetic or [])])
    params = init_detector(vocab, cfg.cell_size, cfg.emb_size, cfg.seed)
    rng = Xoshiro256(mix(cfg.seed, 0xDE7EC7))

    real = list(real)
    real_enc = _encode_dataset(params, real)
    alternating = cfg.alternation == "epoch" and synthetic
    if alternating:
        shards = _synthetic_shards(_encode_dataset(params, synthetic), len(real))
        if cfg.end_on_real:
            cycle = ["synthetic", "real"]
        else:
            cycle = ["real", "synthetic"]
    else:
        cycle = ["real"]

    best = params.copy()
    best_f = -1.0
    bad = 0
    epoch = 0
    history = []
    stop = False
    while not stop and epoch < cfg.max_epochs:
        for source in cycle:
            epoch += 1
            encoded = real_enc if source == "real" else next(shards)
            order = list(range(len(encoded)))
            rng.shuffle(order)
            for start in range(0, len(order), cfg.batch_size):
                batch = [encoded[i] for i in order[start : start + cfg.batch_size]]
                grads = zero_grads(params)
                scale = 1.0 / len(batch)
                for ids, label_ids in batch:
                    _, _, cache = _sentence_loss(params, ids, label_ids, need_cache=True)
                    _backward_sentence(params, label_ids, cache, grads, scale)
                nn.clip_gradients(grads, cfg.clip_norm)
                for name, g in grads.items():
                    getattr(params, name)[...] -= cfg.learning_rate * g
            if not nn.all_finite(params.arrays().values()):
                raise WrongsmithError(f"non-finite parameter after epoch {epoch}")
            dev_f = evaluate(params, dev, cfg.threshold).f
            history.append({"epoch": epoch, "source": source, "dev_f05": dev_f})
            if source == "real":
                if dev_f > best_f:
                    best_f = dev_f
                    best = params.copy()
                    bad = 0
                else:
                    bad += 1
        if bad >= cfg.patience:
            stop = True
    return best, history


def save(params, path):
    dims = (params.vocab_size, params.emb_size, params.cell_size)
    arrays = [getattr(params, name) for name in ARRAY_FIELDS]
    save_model(path, MAGIC, dims, arrays, params.vocab)


def load(path):
    def shapes_from_dims(dims):
        if len(dims) != 3:
            raise ConfigError(f"expected 3 dims, found {len(dims)}")
        shapes = _shapes(*dims)
        return [shapes[name] for name in ARRAY_FIELDS]

    _, arrays, vocab = load_model(path, MAGIC, shapes_from_dims)
    return DetectorParams(vocab, **dict(zip(ARRAY_FIELDS, arrays)))
