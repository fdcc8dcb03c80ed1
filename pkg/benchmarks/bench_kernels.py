"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py --atoms 18 --heads 6 --repeat 5
"""
import argparse
import time

import numpy as np

from choice_aft import _kernels
from choice_aft.generate import random_atom, signature
from choice_aft.syntax import compile_atoms


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation for numba
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(args, rng):
    sig = signature(args.atoms)
    heads = [random_atom(rng, sig, max_dom=args.atoms) for _ in range(args.heads)]
    table = compile_atoms(heads)
    which = np.arange(len(heads), dtype=np.int64)
    full = sig.full_mask
    fams = [np.unique(rng.integers(0, 1 << args.atoms, size=args.family)).astype(np.int64)
            for _ in range(args.families)]
    flat, off = _kernels.pack_families(fams)
    deltas = rng.integers(1, 1 << args.atoms, size=args.heads).astype(np.int64)
    return {
        "submasks": lambda k: k.submasks(full),
        "filter_all": lambda k: k.filter_all(k.submasks(full), which, *table.args()),
        "smyth_matrix": lambda k: k.smyth_matrix(flat, off),
        "hoare_matrix": lambda k: k.hoare_matrix(flat, off),
        "hitting": lambda k: k.hitting(k.submasks(full), deltas),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=16, help="signature size")
    ap.add_argument("--heads", type=int, default=6, help="atoms in the filtered head set")
    ap.add_argument("--families", type=int, default=60, help="families in the order matrices")
    ap.add_argument("--family", type=int, default=64, help="sets drawn per family")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = [b for b in ("numpy", "numba") if b in _kernels.BACKENDS]
    work = cases(args, np.random.default_rng(args.seed))
    print(f"{'kernel':<14}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in work.items():
        secs = [best_of(lambda: fn(_kernels.BACKENDS[b]), args.repeat) for b in backends]
        outs = [fn(_kernels.BACKENDS[b]) for b in backends]
        assert all(np.array_equal(outs[0], o) for o in outs[1:]), name
        speed = f"{secs[0] / secs[-1]:>9.1f}x" if len(secs) > 1 else ""
        print(f"{name:<14}" + "".join(f"{t * 1e3:>10.2f}ms" for t in secs) + speed)


if __name__ == "__main__":
    main()
