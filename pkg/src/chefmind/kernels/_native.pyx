# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled feature-hashing kernel.

Bit-identical twin of ``_pyimpl``: FNV-1a 64-bit over the UTF-8 bytes of
each character n-gram, bucket = hash mod dim, sign from the top hash bit.
"""

import numpy as np

cdef unsigned long long FNV_OFFSET = 14695981039346656037ULL
cdef unsigned long long FNV_PRIME = 1099511628211ULL

PAD_START = "\x02"
PAD_END = "\x03"


def fnv1a64(bytes data):
    cdef const unsigned char[:] view = data
    cdef unsigned long long h = FNV_OFFSET
    cdef Py_ssize_t i
    for i in range(view.shape[0]):
        h = (h ^ view[i]) * FNV_PRIME
    return h


def ngram_bucket_counts(str text, int dim, tuple ngram_sizes=(2, 3)):
    if dim < 1:
        raise ValueError("dim must be >= 1")
    counts = np.zeros(dim, dtype=np.int64)
    if not text:
        return counts

    cdef bytes data = (PAD_START + text + PAD_END).encode("utf-8")
    cdef const unsigned char[:] buf = data
    cdef Py_ssize_t nbytes = buf.shape[0]

    # Character boundaries: a UTF-8 byte starts a character unless it is a
    # continuation byte (0b10xxxxxx).
    offsets_arr = np.zeros(nbytes + 1, dtype=np.int64)
    cdef long long[:] offsets = offsets_arr
    cdef Py_ssize_t nchars = 0
    cdef Py_ssize_t b
    for b in range(nbytes):
        if (buf[b] & 0xC0) != 0x80:
            offsets[nchars] = b
            nchars += 1
    offsets[nchars] = nbytes

    cdef long long[:] out = counts
    cdef unsigned long long h, udim = <unsigned long long> dim
    cdef Py_ssize_t n, i, start, end, size_idx
    cdef long long bucket
    for size_idx in range(len(ngram_sizes)):
        n = ngram_sizes[size_idx]
        if nchars < n:
            continue
        for i in range(nchars - n + 1):
            start = offsets[i]
            end = offsets[i + n]
            h = FNV_OFFSET
            for b in range(start, end):
                h = (h ^ buf[b]) * FNV_PRIME
            bucket = <long long> (h % udim)
            if (h >> 63) == 0:
                out[bucket] += 1
            else:
                out[bucket] -= 1
    return counts
