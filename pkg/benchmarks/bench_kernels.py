"""Compiled vs pure-Python kernel timings.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]

Micro-benchmarks call both kernel modules directly on the same inputs. The
end-to-end run times ``eulerkit verify --identity thm1`` in a subprocess
once per backend, forcing the fallback with EULERKIT_PURE_PYTHON=1.
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from eulerkit import _pykernels as py

try:
    from eulerkit import _kernels as cy
except ImportError:
    cy = None


def grid(rng, rows, cols, bits):
    return [[rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(cols)] for _ in range(rows)]


def cases(rng):
    A, B = grid(rng, 24, 24, 64), grid(rng, 24, 24, 64)
    P, Q = grid(rng, 20, 12, 48), grid(rng, 2, 2, 16)
    S = grid(rng, 30, 30, 64)
    return {
        "bmul 24x24": lambda m: m.bmul(A, B),
        "bcompose deg 19": lambda m: m.bcompose(P, Q, 7),
        "ashift 30x30": lambda m: m.ashift(S, -1, 1),
        "normalize 30x30": lambda m: m.normalize(S, 6),
    }


def micro(repeat):
    rng = random.Random(1)
    print(f"{'kernel':<18} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat)) * 1e3
        if cy is None:
            print(f"{name:<18} {t_py:>10.2f} {'n/a':>10} {'':>8}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=repeat)) * 1e3
        print(f"{name:<18} {t_py:>10.2f} {t_cy:>10.2f} {t_py / t_cy:>7.2f}x")


def end_to_end():
    cmd = [sys.executable, "-m", "eulerkit", "verify", "--identity", "thm1", "--max", "5"]
    print(f"\nend to end: {' '.join(cmd[2:])}")
    for label, pure in (("python", "1"), ("cython", "0")):
        env = dict(os.environ, EULERKIT_PURE_PYTHON=pure)
        start = time.perf_counter()
        res = subprocess.run(cmd, env=env, capture_output=True, text=True)
        took = time.perf_counter() - start
        last = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr.strip()
        print(f"{label:<8} {took:>7.2f} s  exit {res.returncode}  {last}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()
    micro(args.repeat)
    if not args.skip_e2e:
        end_to_end()


if __name__ == "__main__":
    main()
