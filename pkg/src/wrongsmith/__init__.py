"""wrongsmith: learn human grammatical errors and smith new ones.

Trains a small attentive sequence-to-sequence model on a parallel corpus of
(correct, erroneous) sentence pairs, uses it to corrupt clean text, aligns
each corruption against its source to produce per-token c/i labels, and
trains/evaluates a BiLSTM error detector on real data augmented with the
synthetic instances.
"""

__version__ = "0.1.0"
