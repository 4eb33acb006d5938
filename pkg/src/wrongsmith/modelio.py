"""Binary model files: magic, dims header, row-major float64 weights,
then the vocabulary as length-prefixed UTF-8 tokens. Little-endian."""

from __future__ import annotations

import struct

import numpy as np

from .corpus import RESERVED_TOKENS, Vocabulary
from .errors import ParseError


def save_model(path, magic, dims, arrays, vocab):
    if len(magic) != 4:
        raise ValueError("magic must be 4 bytes")
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(struct.pack("<I", len(dims)))
        fh.write(struct.pack(f"<{len(dims)}I", *dims))
        for arr in arrays:
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
        tokens = vocab.token_of[len(RESERVED_TOKENS) :]
        fh.write(struct.pack("<I", len(tokens)))
        for token in tokens:
            raw = token.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)


def load_model(path, magic, shapes_from_dims):
    """Read a model file; shapes_from_dims maps the dims tuple to the
    expected array shapes (it should reject inconsistent dims)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != magic:
        raise ParseError(
            f"bad magic {data[:4]!r}, expected {magic!r} in {path}"
        )
    try:
        (ndims,) = struct.unpack_from("<I", data, 4)
        dims = struct.unpack_from(f"<{ndims}I", data, 8)
        offset = 8 + 4 * ndims
        shapes = shapes_from_dims(dims)
        arrays = []
        for shape in shapes:
            count = int(np.prod(shape))
            end = offset + 8 * count
            if end > len(data):
                raise ParseError(f"truncated weight data in {path}")
            arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
            arrays.append(arr.reshape(shape).copy())
            offset = end
        (ntokens,) = struct.unpack_from("<I", data, offset)
        offset += 4
        tokens = []
        for _ in range(ntokens):
            (length,) = struct.unpack_from("<I", data, offset)
            offset += 4
            tokens.append(data[offset : offset + length].decode("utf-8"))
            offset += length
    except (struct.error, UnicodeDecodeError) as exc:
        raise ParseError(f"corrupt model file {path}: {exc}") from exc
    if offset != len(data):
        raise ParseError(f"{len(data) - offset} trailing bytes in {path}")
    vocab = Vocabulary(tokens)
    if vocab.size != dims[0]:
        raise ParseError(
            f"vocabulary size {vocab.size} does not match dims header {dims[0]}"
        )
    return dims, arrays, vocab
