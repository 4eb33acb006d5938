import pytest

from wrongsmith import seq2seq
from wrongsmith.corpus import ParallelPair, build_vocab

OVERFIT_PAIRS = [
    ParallelPair("I wanted to go .".split(), "I wanted to goes .".split()),
    ParallelPair("She likes the park .".split(), "She like the park .".split()),
]


@pytest.fixture(scope="session")
def overfit_model():
    """Tiny corruptor memorizing a 2-pair corpus; shared by several suites."""
    vocab = build_vocab([p.source for p in OVERFIT_PAIRS] + [p.target for p in OVERFIT_PAIRS])
    params = seq2seq.init_params(vocab, cell_size=16, emb_size=8, seed=1)
    cfg = seq2seq.TrainConfig(
        cell_size=16,
        emb_size=8,
        learning_rate=2.0,
        batch_size=2,
        patience=10_000,
        max_epochs=1200,
        seed=1,
    )
    best, _ = seq2seq.train(params, OVERFIT_PAIRS, OVERFIT_PAIRS, cfg)
    return best


@pytest.fixture(scope="session")
def overfit_pairs():
    return OVERFIT_PAIRS
