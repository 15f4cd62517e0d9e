"""Throughput comparison of the compiled hashing kernel and its Python twin.

Feeds both backends the same recipe texts from the packaged corpus, checks
they produce identical arrays, then reports embeddings per second. Run as:

    python3 benchmarks/bench_kernels.py [--dim 768] [--repeats 200]
"""

import argparse
import time

import numpy as np

from chefmind.corpus import load_corpus
from chefmind.service import ServiceConfig
from chefmind.kernels import _pyimpl

try:
    from chefmind.kernels import _native
except ImportError:
    _native = None


def corpus_texts() -> list[str]:
    config = ServiceConfig()
    corpus = load_corpus(config.corpus_path, aliases_path=config.aliases_path)
    texts = []
    for recipe in corpus.recipes.values():
        texts.append(recipe.name)
        texts.extend(recipe.steps)
    return texts


def run_backend(impl, texts: list[str], dim: int, repeats: int) -> tuple[float, list[np.ndarray]]:
    outputs = [impl.ngram_bucket_counts(t, dim) for t in texts]  # warm pass, kept for parity
    started = time.perf_counter()
    for _ in range(repeats):
        for t in texts:
            impl.ngram_bucket_counts(t, dim)
    return time.perf_counter() - started, outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=768)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    texts = corpus_texts()
    hashes = args.repeats * len(texts)
    print(f"{len(texts)} texts from the packaged corpus, dim={args.dim}, {args.repeats} repeats")

    py_time, py_out = run_backend(_pyimpl, texts, args.dim, args.repeats)
    print(f"python:  {py_time:8.3f}s  {hashes / py_time:10.0f} texts/s")

    if _native is None:
        print("native:  extension not built; install with `pip install -e . --no-build-isolation`")
        return 1

    nat_time, nat_out = run_backend(_native, texts, args.dim, args.repeats)
    print(f"native:  {nat_time:8.3f}s  {hashes / nat_time:10.0f} texts/s")
    print(f"speedup: {py_time / nat_time:7.1f}x")

    mismatches = sum(not np.array_equal(a, b) for a, b in zip(py_out, nat_out))
    print(f"parity:  {mismatches} mismatching arrays out of {len(texts)}")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
