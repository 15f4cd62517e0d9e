"""Dense-vector retrieval over recipe fragments.

Every vector is unit-normalized at construction, so cosine similarity and
the inner product are the same number and scoring a query against the whole
index is a single matrix-vector product. The default embedder is
deterministic character-n-gram feature hashing, which keeps the pipeline
and tests fully offline; a remote HTTP embedder offers the same interface.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

import numpy as np

from chefmind import kernels
from chefmind.corpus import Fragment, normalize_text
from chefmind.errors import DimensionMismatch, DuplicateId, EmbedderUnavailable

DEFAULT_DIMENSION = 768
_SNAPSHOT_VERSION = 1


def unit_vector(values: np.ndarray) -> np.ndarray:
    """L2-normalize to float64; an all-zero input maps to the basis vector e1."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        out = np.zeros(v.shape[0], dtype=np.float64)
        out[0] = 1.0
        return out
    return v / norm


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; equals the plain inner product for unit vectors."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(a.shape[0], b.shape[0])
    denom = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if denom == 0.0:
        return 0.0
    return float(np.dot(a, b) / denom)


class Embedder(Protocol):
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


class HashEmbedder:
    """Deterministic embedder: character n-grams feature-hashed into D buckets.

    Identical text always maps to an identical unit vector, on every platform
    and in both kernel backends, because bucket counts are accumulated as
    integers before normalization.
    """

    def __init__(self, dimension: int = DEFAULT_DIMENSION, ngram_sizes: tuple[int, ...] = (2, 3)):
        if dimension < 8:
            raise ValueError("dimension must be >= 8")
        self.dimension = dimension
        self.ngram_sizes = ngram_sizes

    def embed(self, text: str) -> np.ndarray:
        counts = kernels.ngram_bucket_counts(normalize_text(text), self.dimension, self.ngram_sizes)
        return unit_vector(counts.astype(np.float64))


class RemoteEmbedder:
    """HTTP embedder speaking an embeddings-style JSON contract.

    POSTs {"model": ..., "input": [text]} and expects
    {"data": [{"embedding": [...]}]}. Any transport failure, non-200 status,
    or malformed body raises EmbedderUnavailable; a vector of the wrong
    length raises DimensionMismatch.
    """

    def __init__(self, endpoint: str, model: str, dimension: int, *, timeout: float = 10.0, client=None):
        import httpx

        self.endpoint = endpoint
        self.model = model
        self.dimension = dimension
        self._client = client or httpx.Client(timeout=timeout)

    def embed(self, text: str) -> np.ndarray:
        import httpx

        try:
            resp = self._client.post(self.endpoint, json={"model": self.model, "input": [text]})
        except httpx.HTTPError as e:
            raise EmbedderUnavailable(str(e)) from e
        if resp.status_code != 200:
            raise EmbedderUnavailable(f"embedding endpoint returned {resp.status_code}")
        try:
            values = resp.json()["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise EmbedderUnavailable(f"malformed embedding response: {e}") from e
        v = np.asarray(values, dtype=np.float64).reshape(-1)
        if v.shape[0] != self.dimension:
            raise DimensionMismatch(self.dimension, v.shape[0])
        return unit_vector(v)


def embed_fragments(fragments: Iterable[Fragment], embedder: Embedder) -> list[Fragment]:
    return [f.with_vector(embedder.embed(f.text)) for f in fragments]


@dataclass(frozen=True)
class VectorIndex:
    """Immutable exact-scan index; rows are unit vectors sorted by fragment id."""

    dimension: int
    matrix: np.ndarray
    fragments: tuple[Fragment, ...]

    def __len__(self) -> int:
        return len(self.fragments)


def index_fragments(fragments: Sequence[Fragment], dimension: Optional[int] = None) -> VectorIndex:
    """Build an index from embedded fragments.

    Fragments are stored sorted by fragment_id, which makes query results
    independent of insertion order. Mixed dimensions raise DimensionMismatch
    and repeated fragment ids raise DuplicateId.
    """
    seen: set[str] = set()
    for f in fragments:
        if f.fragment_id in seen:
            raise DuplicateId(f.fragment_id)
        seen.add(f.fragment_id)
        if f.vector is None:
            raise ValueError(f"fragment {f.fragment_id} has no vector; embed first")
    ordered = sorted(fragments, key=lambda f: f.fragment_id)
    if not ordered:
        dim = dimension or DEFAULT_DIMENSION
        return VectorIndex(dimension=dim, matrix=np.zeros((0, dim), dtype=np.float64), fragments=())
    dim = ordered[0].vector.shape[0]
    if dimension is not None and dim != dimension:
        raise DimensionMismatch(dimension, dim)
    for f in ordered:
        if f.vector.shape[0] != dim:
            raise DimensionMismatch(dim, f.vector.shape[0])
    matrix = np.stack([np.asarray(f.vector, dtype=np.float64) for f in ordered])
    return VectorIndex(dimension=dim, matrix=matrix, fragments=tuple(ordered))


def search_topk(
    index: VectorIndex,
    query_vec: np.ndarray,
    k: int,
    recipe_filter: Optional[frozenset[str] | set[str]] = None,
) -> list[tuple[Fragment, float]]:
    """Exact top-k scan: score desc, ties broken by fragment id ascending.

    With a recipe filter only fragments of those recipes are eligible, which
    is how graph screening constrains vector retrieval in the hybrid path.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query_vec, dtype=np.float64).reshape(-1)
    if q.shape[0] != index.dimension:
        raise DimensionMismatch(index.dimension, q.shape[0])
    if len(index) == 0:
        return []

    if recipe_filter is not None:
        rows = [i for i, f in enumerate(index.fragments) if f.recipe_id in recipe_filter]
        if not rows:
            return []
        scores = np.einsum("ij,j->i", index.matrix[rows], q)
        # rows are in fragment_id order already, so a stable sort on negated
        # scores yields the required tie-break for free
        order = np.argsort(-scores, kind="stable")[:k]
        return [(index.fragments[rows[i]], float(scores[i])) for i in order]

    # einsum reduces every row with the same accumulation order, unlike BLAS
    # gemv whose blocked kernels can round identical rows differently by
    # position; identical vectors must tie exactly for the id tie-break
    scores = np.einsum("ij,j->i", index.matrix, q)
    order = np.argsort(-scores, kind="stable")[:k]
    return [(index.fragments[i], float(scores[i])) for i in order]


def save_index(index: VectorIndex, path: str | Path) -> None:
    """Snapshot layout: version byte, u32 dim, u32 count, f32 rows, u32 meta length, meta JSON."""
    meta = json.dumps(
        [
            {
                "fragment_id": f.fragment_id,
                "recipe_id": f.recipe_id,
                "text": f.text,
                "steps": list(f.steps),
                "step_start": f.step_start,
            }
            for f in index.fragments
        ],
        ensure_ascii=False,
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<BII", _SNAPSHOT_VERSION, index.dimension, len(index.fragments)))
        fh.write(index.matrix.astype(np.float32).tobytes(order="C"))
        fh.write(struct.pack("<I", len(meta)))
        fh.write(meta)


def load_index(path: str | Path) -> VectorIndex:
    with open(path, "rb") as fh:
        version, dim, count = struct.unpack("<BII", fh.read(9))
        if version != _SNAPSHOT_VERSION:
            raise ValueError(f"unsupported index snapshot version {version}")
        raw = fh.read(4 * dim * count)
        (meta_len,) = struct.unpack("<I", fh.read(4))
        meta = json.loads(fh.read(meta_len).decode("utf-8"))
    matrix = np.frombuffer(raw, dtype=np.float32).reshape(count, dim).astype(np.float64)
    fragments = []
    for i, m in enumerate(meta):
        # restore the unit-norm invariant lost to 32-bit rounding
        vec = unit_vector(matrix[i]) if count else None
        fragments.append(
            Fragment(
                fragment_id=m["fragment_id"],
                recipe_id=m["recipe_id"],
                text=m["text"],
                steps=tuple(m["steps"]),
                step_start=m["step_start"],
                vector=vec,
            )
        )
    return index_fragments(fragments, dimension=dim)
