"""Token-level detection metrics and Turing-test scoring.

F_beta with beta=0.5 is the headline detection score (precision weighted
twice as heavily as recall); the Turing-style human evaluation is scored as
plain F1 with the synthetic class as positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ShapeError


@dataclass(frozen=True)
class DetectionMetrics:
    precision: float
    recall: float
    f: float
    beta: float
    tp: int
    fp: int
    fn: int

    def to_dict(self):
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f": self.f,
            "beta": self.beta,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def as_percentages(self):
        """Human-readable P/R/F as percentages with two decimals."""
        return (
            f"P {self.precision * 100:.2f} / R {self.recall * 100:.2f}"
            f" / F{self.beta:g} {self.f * 100:.2f}"
        )


def _from_counts(tp, fp, fn, beta):
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    if precision + recall > 0:
        b2 = beta * beta
        f = (1 + b2) * precision * recall / (b2 * precision + recall)
    else:
        f = 0.0
    return DetectionMetrics(precision, recall, f, beta, tp, fp, fn)


def prf(pred, gold, beta=0.5):
    """Precision/recall/F_beta over all tokens, positive class 'i'.

    pred and gold must align sentence-by-sentence and token-by-token.
    """
    if len(pred) != len(gold):
        raise ShapeError(
            f"{len(pred)} predicted vs {len(gold)} gold sentences",
            index=min(len(pred), len(gold)),
        )
    tp = fp = fn = 0
    for idx, (p, g) in enumerate(zip(pred, gold)):
        if len(p.labels) != len(g.labels):
            raise ShapeError(
                f"{len(p.labels)} predicted vs {len(g.labels)} gold labels",
                index=idx,
            )
        for pl, gl in zip(p.labels, g.labels):
            if pl == "i" and gl == "i":
                tp += 1
            elif pl == "i":
                fp += 1
            elif gl == "i":
                fn += 1
    return _from_counts(tp, fp, fn, beta)


def score_turing(judgments, key):
    """Score human judgments against the synthetic/real answer key (F1).

    judgments: iterable of (item_id, human_says_synthetic); a later judgment
    for the same id overwrites an earlier one. Items never judged count as
    not flagged. key: iterable of (item_id, is_synthetic).
    """
    truth = dict(key)
    flagged = {}
    for item_id, says_synthetic in judgments:
        if item_id not in truth:
            raise KeyError(f"judged item {item_id!r} is not in the key")
        flagged[item_id] = bool(says_synthetic)
    tp = fp = fn = 0
    for item_id, is_synthetic in truth.items():
        hit = flagged.get(item_id, False)
        if hit and is_synthetic:
            tp += 1
        elif hit:
            fp += 1
        elif is_synthetic:
            fn += 1
    return _from_counts(tp, fp, fn, beta=1.0)
