"""Time the interpreted kernel against the compiled extension.

Each backend runs in its own subprocess (ZZMORSE_PURE=1 forces the
interpreted one) over the same three workloads; stream generation happens
outside the timed region, so the numbers isolate the engine.  Run from the
repository root after ``python3 setup.py build_ext --inplace``::

    python3 benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import time

from zzmorse.generators import (blocks_to_stream, circle_points, even_levels,
                                fourier_image, levelset_stream,
                                oscillating_rips_stream, random_block_stream)
from zzmorse.kernel import backend, run_stream

report = {"backend": backend(), "times": {}}

def bench(label, fn, repeat=3):
    best = min(_timed(fn) for _ in range(repeat))
    report["times"][label] = best

def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0

blocks, _ = oscillating_rips_stream(circle_points(150, seed=7), 4.0, 6.0,
                                    max_dim=2)
bench("circle rips, 150 points", lambda: run_stream(blocks, p=2))

image = fourier_image((17, 17, 17), seed=11, terms=3)
lblocks, _ = levelset_stream(image, even_levels(image, 0.2))
bench("levelset, 17^3 image", lambda: run_stream(lblocks, p=2))

streams = [blocks_to_stream(random_block_stream(s, p=5)) for s in range(300)]
bench("300 random streams, p=5",
      lambda: [run_stream(b, p=5) for b in streams])

# matrix-only traffic: a random graph grown then torn down, no Morse layer
import random

from zzmorse._backend import core

rng = random.Random(4)
NV, NE = 1500, 5000
edges = [rng.sample(range(NV), 2) for _ in range(NE)]
teardown = rng.sample(range(NE), NE)

def graph_traffic():
    m = core.HomologyMatrix(5)
    clock = 0
    for v in range(NV):
        clock += 1
        m.forward_insert(("v", v), 0, {}, (True, clock, 0), clock)
    for e, (a, b) in enumerate(edges):
        clock += 1
        m.forward_insert(("e", e), 1, {("v", a): 1, ("v", b): 4},
                         (True, clock, 0), clock)
    for e in teardown:
        clock += 1
        m.backward_remove(("e", e), (False, clock, 0))
    for v in range(NV):
        clock += 1
        m.backward_remove(("v", v), (False, clock, 0))

bench("column kernel only, %d-edge graph" % NE, graph_traffic)

print(json.dumps(report))
"""


def measure(pure):
    env = dict(os.environ)
    env.pop("ZZMORSE_PURE", None)
    if pure:
        env["ZZMORSE_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.splitlines()[-1])


def main():
    pure = measure(pure=True)
    compiled = measure(pure=False)
    assert pure["backend"] == "pure"
    if compiled["backend"] != "compiled":
        print("extension not built; both runs used the interpreted kernel")
    width = max(len(k) for k in pure["times"])
    print("%-*s  %9s  %9s  %7s" % (width, "workload", "pure", "compiled",
                                   "speedup"))
    for label, base in pure["times"].items():
        fast = compiled["times"][label]
        print("%-*s  %8.3fs  %8.3fs  %6.2fx" % (width, label, base, fast,
                                                base / fast))


if __name__ == "__main__":
    main()
