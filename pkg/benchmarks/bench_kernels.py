"""Compare the compiled and pure-Python kernels on typical workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Each workload is timed in a fresh interpreter so the kernel choice made at
import is honored.
"""

import argparse
import os
import subprocess
import sys

WORKLOADS = {
    "rref 40x40 rationals": """
import random
from fractions import Fraction
from q2 import kernels
rng = random.Random(7)
rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(40)] for _ in range(40)]
def run():
    kernels.rref([list(r) for r in rows])
""",
    "matmul 40x40 rationals": """
import random
from fractions import Fraction
from q2 import kernels
rng = random.Random(8)
a = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(40)] for _ in range(40)]
def run():
    kernels.matmul(a, a)
""",
    "simple top L(V(3,1)), depth 10": """
from q2.qmod import highest_weight_simple
from q2.scalars import Weight
def run():
    highest_weight_simple(Weight(3, 1), 10)
""",
    "intertwiners L(V(1,0)) -> Pi L(V(1,0))": """
from q2.modules import intertwiners, parity_flip
from q2.qmod import highest_weight_simple
from q2.scalars import Weight
n = highest_weight_simple(Weight(1, 0), 8)
p = parity_flip(n)
def run():
    intertwiners(n, p)
""",
}

TIMER = """
import time
{setup}
from q2 import kernels
best = None
for _ in range({repeat}):
    t = time.perf_counter()
    run()
    dt = time.perf_counter() - t
    best = dt if best is None else min(best, dt)
print(kernels.COMPILED, best)
"""


def time_workload(code, repeat, pure):
    env = dict(os.environ)
    if pure:
        env["Q2_PURE_PYTHON"] = "1"
    else:
        env.pop("Q2_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", TIMER.format(setup=code, repeat=repeat)],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.split()
    return out[0] == "True", float(out[1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'workload':<42} {'python':>9} {'compiled':>9} {'speedup':>8}")
    for name, code in WORKLOADS.items():
        _, t_py = time_workload(code, args.repeat, pure=True)
        compiled, t_c = time_workload(code, args.repeat, pure=False)
        if not compiled:
            print(f"{name:<42} {t_py:9.3f} {'n/a':>9} {'':>8}")
            continue
        print(f"{name:<42} {t_py:9.3f} {t_c:9.3f} {t_py / t_c:7.2f}x")


if __name__ == "__main__":
    main()
