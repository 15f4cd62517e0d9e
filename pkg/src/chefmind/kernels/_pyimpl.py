"""Pure-Python twin of the compiled feature-hashing kernel.

Must stay bit-identical to ``_native``: same FNV-1a 64-bit hash over the
UTF-8 bytes of each character n-gram, same bucket and sign rule. Parity is
enforced by tests whenever the extension is available.
"""

from __future__ import annotations

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF

PAD_START = "\x02"
PAD_END = "\x03"


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def ngram_bucket_counts(text: str, dim: int, ngram_sizes: tuple = (2, 3)) -> np.ndarray:
    """Signed character-n-gram counts hashed into ``dim`` buckets.

    Counts are integers, so both backends produce identical arrays.
    Empty text yields all zeros; the caller decides the fallback vector.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    counts = np.zeros(dim, dtype=np.int64)
    if not text:
        return counts
    padded = PAD_START + text + PAD_END
    nchars = len(padded)
    for n in ngram_sizes:
        if nchars < n:
            continue
        for i in range(nchars - n + 1):
            h = fnv1a64(padded[i : i + n].encode("utf-8"))
            bucket = h % dim
            if h >> 63 == 0:
                counts[bucket] += 1
            else:
                counts[bucket] -= 1
    return counts
