"""Word-level Levenshtein alignment and c/i token labelling.

The corrupted sentence is aligned against its source with unit edit costs,
then every corrupted token is labelled incorrect when it is not aligned with
itself, when it immediately follows a deleted source word (a reader would
notice the gap), or when it ends the sentence without being aligned to the
source's last word (the sentence ends abruptly). Everything else is correct.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import LabeledSentence
from .errors import EmptyInput

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class EditOp:
    """One alignment step; i indexes the source, j the target (None = gap)."""

    kind: str
    i: int | None
    j: int | None


@dataclass(frozen=True)
class Alignment:
    ops: tuple
    cost: int


def word_align(source, target):
    """Minimal-cost word alignment (match 0, substitute/insert/delete 1).

    Token equality is exact, case-sensitive string equality. When several
    minimal alignments exist the backtrace prefers Match > Substitute >
    Delete > Insert, keeping words aligned with themselves where possible.
    """
    if not source or not target:
        raise EmptyInput("word_align needs non-empty sentences")
    m, n = len(source), len(target)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dist[i][0] = i
    for j in range(1, n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row = dist[i]
        prev = dist[i - 1]
        s_tok = source[i - 1]
        for j in range(1, n + 1):
            diag = prev[j - 1] + (0 if s_tok == target[j - 1] else 1)
            up = prev[j] + 1
            left = row[j - 1] + 1
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            row[j] = best

    ops = []
    i, j = m, n
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and j > 0 and source[i - 1] == target[j - 1] \
                and here == dist[i - 1][j - 1]:
            ops.append(EditOp(MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dist[i - 1][j - 1] + 1:
            ops.append(EditOp(SUBSTITUTE, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == dist[i - 1][j] + 1:
            ops.append(EditOp(DELETE, i - 1, None))
            i -= 1
        else:
            ops.append(EditOp(INSERT, None, j - 1))
            j -= 1
    ops.reverse()
    return Alignment(tuple(ops), dist[m][n])


def label_tokens(source, target):
    """Label each target token 'c' or 'i' from the minimal alignment."""
    alignment = word_align(source, target)
    ops = alignment.ops
    labels = [None] * len(target)
    for k, op in enumerate(ops):
        if op.j is None:
            continue
        if op.kind in (SUBSTITUTE, INSERT):
            labels[op.j] = "i"
        elif op.kind == MATCH and source[op.i] != target[op.j]:
            # unreachable under exact-equality matching; kept for safety
            labels[op.j] = "i"
        elif k > 0 and ops[k - 1].kind == DELETE:
            labels[op.j] = "i"
        elif op.j == len(target) - 1 and op.i != len(source) - 1:
            labels[op.j] = "i"
        else:
            labels[op.j] = "c"
    return LabeledSentence(tuple(target), tuple(labels))


def count_errors(labeled):
    """Number of tokens labelled incorrect."""
    return sum(1 for lab in labeled.labels if lab == "i")
