"""The interpreted kernel stays available and equivalent once the extension builds."""

import json
import os
import subprocess
import sys

from zzmorse.generators import blocks_to_stream, random_block_stream
from zzmorse.kernel import backend, run_stream

SCRIPT = r"""
import json
from zzmorse.generators import blocks_to_stream, random_block_stream
from zzmorse.kernel import backend, run_stream

diagrams = []
for seed in range(40):
    p = 2 if seed % 2 == 0 else 5
    ivs, _ = run_stream(blocks_to_stream(random_block_stream(seed, p=p)), p=p)
    diagrams.append([list(iv) for iv in sorted(ivs)])
print(json.dumps({"backend": backend(), "diagrams": diagrams}))
"""


def test_backend_reports_a_known_flavor():
    assert backend() in ("pure", "compiled")


def test_forced_pure_backend_matches_loaded_backend():
    env = dict(os.environ)
    env["ZZMORSE_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env,
                         capture_output=True, text=True, check=True)
    got = json.loads(out.stdout.splitlines()[-1])
    assert got["backend"] == "pure"
    for seed, pure_diagram in zip(range(40), got["diagrams"]):
        p = 2 if seed % 2 == 0 else 5
        ivs, _ = run_stream(blocks_to_stream(random_block_stream(seed, p=p)),
                            p=p)
        assert [list(iv) for iv in sorted(ivs)] == pure_diagram
