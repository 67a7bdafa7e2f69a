"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--events 20000] [--vocab 400] [--repeat 3]

Both backends run on the same packed stream and their results are compared
before any timing is reported.
"""

import argparse
import sys
import timeit

import numpy as np

from chancekit import kernels
from chancekit.ingest import Event


def make_stream(n_events: int, n_vocab: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    # Zipf-ish item popularity, like words or products
    weights = 1.0 / np.arange(1, n_vocab + 1)
    weights /= weights.sum()
    vocab = [f"w{i:04d}" for i in range(n_vocab)]
    events = []
    for k in range(n_events):
        size = int(rng.integers(2, 12))
        ids = rng.choice(n_vocab, size=size, p=weights)
        items = {}
        for i in ids:
            items[vocab[i]] = items.get(vocab[i], 0) + 1
        events.append(Event(k, items))
    return events


def islands_of(vocab, n_islands: int = 8, size: int = 4):
    return [list(vocab[g * size:(g + 1) * size]) for g in range(n_islands)]


def cases(packed, nodes, islands):
    n = len(packed.indptr) - 1
    return {
        "pair_weights": lambda b: kernels.pair_weights(packed, nodes, backend=b),
        "column_mass": lambda b: kernels.column_mass(packed, islands, backend=b),
        "cluster_hits": lambda b: kernels.cluster_hits(packed, islands, False, backend=b),
        "presence_counts": lambda b: kernels.presence_counts(packed, 0, n, backend=b),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--events", type=int, default=20000)
    ap.add_argument("--vocab", type=int, default=400)
    ap.add_argument("--nodes", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        kernels.backend_module("cython")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
        return 1

    events = make_stream(args.events, args.vocab)
    packed = kernels.pack(events)
    nodes = sorted(packed.vocab, key=lambda w: int(w[1:]))[:args.nodes]
    islands = islands_of(nodes)
    print(f"{args.events} events, {len(packed.vocab)} items, {len(packed.ids)} entries")
    print(f"{'kernel':<16} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in cases(packed, nodes, islands).items():
        if not np.array_equal(fn("python"), fn("cython")):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        py = min(timeit.repeat(lambda: fn("python"), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn("cython"), number=1, repeat=args.repeat))
        print(f"{name:<16} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
