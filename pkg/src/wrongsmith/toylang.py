"""A tiny PCFG English-like language with rule-injected learner errors.

Full-scale learner corpora are licensed, so the desk-scale experiments run
on this synthetic language instead: simple transitive sentences where every
subject is third-person singular, every location noun has one canonical
preposition, and correct text never contains base-form verbs. That
regularity makes the injected error classes detectable:

* word drop: a determiner or preposition disappears;
* substitution: a preposition is replaced by its confusion partner;
* inflection swap: a verb loses its -s.

Errors are injected independently per site with rates near one half, so a
corruption model trained on these pairs ends up with genuinely split
next-token distributions at error sites; that keeps low-temperature
sampling stochastic instead of collapsing to a copy of the input.
"""

from __future__ import annotations

from .align import label_tokens
from .corpus import ParallelPair
from .rng import Xoshiro256, mix

DETS = ("the", "a")
ADJS = ("big", "small", "old", "red", "happy", "young", "quiet", "strange")

# Two-tier lexicon: the common tier carries most of the probability mass;
# the rare tier is thin enough that a 300-sentence sample leaves coverage
# gaps, while the thousands of sentences seen by the corruption model and
# its corruption sources still cover it. That head/tail split is what makes
# synthetic data informative beyond the small annotated set.
COMMON_NOUNS = (
    "dog", "cat", "bird", "man", "woman", "child",
    "student", "apple", "ball", "book", "horse", "letter",
)
RARE_NOUNS = (
    "rabbit", "painter", "singer", "flower", "stone", "coat", "basket",
    "mirror", "ladder", "engine", "farmer", "nurse", "pilot", "clock",
    "wheel", "bottle", "carpet", "candle", "hammer", "kitten", "donkey",
    "sailor", "goose", "turtle", "wallet", "trumpet", "pillow", "lantern",
    "beetle", "falcon", "walnut", "otter", "ribbon", "shovel", "magnet",
    "parrot", "barrel", "helmet", "cabbage", "spider", "anchor", "violin",
    "puppet", "weasel", "marble", "feather", "bucket", "crayon",
    "saddle", "napkin", "turnip", "gander", "plough", "kettle", "drummer",
    "locket", "thimble", "sparrow", "radish", "goblet", "mitten", "acorn",
    "badger", "canoe", "dagger", "easel", "fiddle", "garlic", "hornet",
    "iguana", "jacket", "lizard",
)
NOUNS = COMMON_NOUNS + RARE_NOUNS

COMMON_VERBS = (
    "sees", "likes", "chases", "finds", "wants", "holds", "takes", "eats",
)
RARE_VERBS = (
    "visits", "follows", "carries", "watches", "draws", "pushes", "lifts",
    "cleans", "paints", "drops", "grabs", "kicks", "hides", "pulls",
    "shakes", "throws", "touches", "washes", "wraps", "bends", "counts",
    "guards", "hugs", "rubs", "spins", "taps", "trims", "peels", "stirs",
    "folds", "drags", "tosses",
)
VERBS = COMMON_VERBS + RARE_VERBS
VERB_BASE = {
    "sees": "see", "likes": "like", "chases": "chase", "finds": "find",
    "wants": "want", "holds": "hold", "takes": "take", "eats": "eat",
    "visits": "visit", "follows": "follow", "carries": "carry",
    "watches": "watch", "draws": "draw", "pushes": "push", "lifts": "lift",
    "cleans": "clean", "paints": "paint", "drops": "drop", "grabs": "grab",
    "kicks": "kick", "hides": "hide", "pulls": "pull", "shakes": "shake",
    "throws": "throw", "touches": "touch", "washes": "wash", "wraps": "wrap",
    "bends": "bend", "counts": "count", "guards": "guard", "hugs": "hug",
    "rubs": "rub", "spins": "spin", "taps": "tap", "trims": "trim",
    "peels": "peel", "stirs": "stir", "folds": "fold", "drags": "drag",
    "tosses": "toss",
}

# location noun -> its only correct preposition
COMMON_LOCS = {
    "park": "in", "garden": "in", "city": "in", "village": "in",
    "table": "on", "chair": "on", "roof": "on", "floor": "on",
    "river": "near", "school": "near", "bridge": "near", "station": "near",
    "friend": "with", "teacher": "with", "doctor": "with", "neighbour": "with",
}
RARE_LOCS = {
    "forest": "in", "valley": "in", "harbour": "in", "meadow": "in",
    "shelf": "on", "bench": "on", "balcony": "on", "stairs": "on",
    "tower": "near", "fountain": "near", "windmill": "near", "lighthouse": "near",
    "captain": "with", "tailor": "with", "juggler": "with", "shepherd": "with",
    "cave": "in", "desert": "in", "wagon": "on", "carriage": "on",
    "chapel": "near", "orchard": "near", "hunter": "with", "miller": "with",
}
CANON_PREP = {**COMMON_LOCS, **RARE_LOCS}
PREP_CONFUSION = {"in": "on", "on": "in", "near": "with", "with": "near"}
LOC_NOUNS = tuple(CANON_PREP)

RARE_NOUN_MASS = 0.25
RARE_VERB_MASS = 0.22
RARE_LOC_MASS = 0.33

VERB_ERROR_RATE = 0.5
PREP_ERROR_RATE = 0.5
DET_DROP_RATE = 0.25


def _pick(rng, options):
    return options[rng.randrange(len(options))]


def _tiered_pick(rng, common, rare, rare_mass):
    if rng.uniform() < rare_mass:
        return rare[rng.randrange(len(rare))]
    return common[rng.randrange(len(common))]


def sample_sentence(rng):
    """One clean sentence: NP V NP [PP] '.'"""

    def noun_phrase():
        tokens = [_pick(rng, DETS)]
        if rng.uniform() < 0.3:
            tokens.append(_pick(rng, ADJS))
        tokens.append(_tiered_pick(rng, COMMON_NOUNS, RARE_NOUNS, RARE_NOUN_MASS))
        return tokens

    tokens = noun_phrase()
    tokens.append(_tiered_pick(rng, COMMON_VERBS, RARE_VERBS, RARE_VERB_MASS))
    tokens.extend(noun_phrase())
    if rng.uniform() < 0.6:
        loc = _tiered_pick(
            rng, tuple(COMMON_LOCS), tuple(RARE_LOCS), RARE_LOC_MASS
        )
        tokens.extend([CANON_PREP[loc], _pick(rng, DETS), loc])
    tokens.append(".")
    return tokens


def inject_errors(tokens, rng):
    """Corrupt a clean sentence, deciding independently per error site.

    Verbs swap to their base form, prepositions are substituted or dropped,
    determiners are dropped. Sentences can come through unchanged; those are
    legitimate error-free negative examples.
    """
    out = []
    for tok in tokens:
        if tok in VERB_BASE:
            if rng.uniform() < VERB_ERROR_RATE:
                out.append(VERB_BASE[tok])
                continue
        elif tok in PREP_CONFUSION:
            if rng.uniform() < PREP_ERROR_RATE:
                if rng.uniform() < 0.5:
                    out.append(PREP_CONFUSION[tok])
                continue
        elif tok in DETS:
            if rng.uniform() < DET_DROP_RATE:
                continue
        out.append(tok)
    return out


def make_parallel(n, seed):
    """n (clean, corrupted) pairs with deterministic rule injection."""
    rng = Xoshiro256(mix(seed, 0x70F))
    pairs = []
    while len(pairs) < n:
        clean = sample_sentence(rng)
        bad = inject_errors(clean, rng)
        if bad:
            pairs.append(ParallelPair(clean, bad))
    return pairs


def make_labeled(n, seed):
    """n labelled erroneous sentences (labels from word alignment)."""
    return [label_tokens(p.source, p.target) for p in make_parallel(n, seed)]


def make_clean(n, seed):
    """n clean sentences for corruption sources."""
    rng = Xoshiro256(mix(seed, 0xC1EA4))
    return [sample_sentence(rng) for _ in range(n)]
