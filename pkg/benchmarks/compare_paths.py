"""Time decide end to end with the compiled kernels and with the Python fallback.

Each path runs in its own interpreter since the flag is read at import time.

    python3 benchmarks/compare_paths.py --sizes 1000,10000,100000
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = """
import json, sys, time
from pebblemotion import decide, generate_instance
from pebblemotion._jit import JIT_ENABLED
sizes, reps = json.loads(sys.argv[1]), int(sys.argv[2])
decide(generate_instance(64, 32, "random_connected", 0))  # compile outside the timings
out = {}
for n in sizes:
    best = float("inf")
    for seed in range(reps):
        inst = generate_instance(n, n // 2, "random_connected", seed)
        t0 = time.perf_counter()
        decide(inst)
        best = min(best, time.perf_counter() - t0)
    out[n] = best
print(json.dumps({"jit": JIT_ENABLED, "best_s": out}))
"""


def run(flag: str, sizes: list[int], reps: int) -> dict:
    env = dict(os.environ, PEBBLEMOTION_JIT=flag)
    res = subprocess.run(
        [sys.executable, "-c", CHILD, json.dumps(sizes), str(reps)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    fast = run("1", sizes, args.reps)
    slow = run("0", sizes, args.reps)
    if not fast["jit"]:
        print("numba unavailable: both columns use the fallback", file=sys.stderr)
    print(f"{'n':>9} {'compiled ms':>12} {'fallback ms':>12} {'speedup':>8}")
    for n in sizes:
        a, b = fast["best_s"][str(n)], slow["best_s"][str(n)]
        print(f"{n:>9} {a * 1e3:>12.2f} {b * 1e3:>12.2f} {b / a:>8.1f}")


if __name__ == "__main__":
    main()
