"""Independent oracles the implementation is checked against: a top-down
recursive edit distance and an exhaustive decode-tree enumeration."""

import numpy as np


def recursive_edit_distance(source, target):
    """Plain recursive Levenshtein over words (memoized on suffix indices);
    deliberately independent of the iterative DP in wrongsmith.align."""
    memo = {}

    def rec(i, j):
        if (i, j) in memo:
            return memo[(i, j)]
        if i == len(source):
            result = len(target) - j
        elif j == len(target):
            result = len(source) - i
        else:
            same = source[i] == target[j]
            result = min(
                rec(i + 1, j + 1) + (0 if same else 1),
                rec(i + 1, j) + 1,
                rec(i, j + 1) + 1,
            )
        memo[(i, j)] = result
        return result

    return rec(0, 0)


def enumerate_decodes(model, source, max_len):
    """Every complete decode of length <= max_len with its joint log-prob,
    sorted like beam search (score desc, then token ids ascending).

    A sequence is complete when it ends with EOS or reaches max_len.
    """
    results = []

    def rec(state, prev, ids, log_prob):
        probs, new_state = model.step(state, prev)
        with np.errstate(divide="ignore"):
            logs = np.log(probs)
        for tok in range(model.vocab_size):
            ids2 = ids + (tok,)
            lp2 = log_prob + float(logs[tok])
            if tok == model.eos_id or len(ids2) == max_len:
                results.append((ids2, lp2))
            else:
                rec(new_state, tok, ids2, lp2)

    rec(model.start_state(source), model.bos_id, (), 0.0)
    results.sort(key=lambda r: (-r[1], r[0]))
    return results
