"""Time the numba and pure-numpy backends on the same workloads.

Each backend runs in its own subprocess because the choice is fixed at import.

    python3 benchmarks/bench_backends.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from skewlat import BACKEND
from skewlat.corpus import builtin, direct_product, op_dual, transpose_dual
from skewlat.properties import full_report
from skewlat.search import SearchConstraint, enumerate_models

repeat = int(sys.argv[1])
s9 = builtin("spinks9")
big = direct_product(s9, transpose_dual(op_dual(s9)))

def timed(fn):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best

def fresh(a):
    return type(a)(a.meet.copy(), a.join.copy(), a.name)

rows = {
    "full report spinks9": timed(lambda: full_report(fresh(s9))),
    "full report u2": timed(lambda: full_report(fresh(builtin("u2")))),
    "full report 81-element product": timed(lambda: full_report(fresh(big))),
    "search order 6": timed(lambda: enumerate_models(SearchConstraint(6), timeout=None)),
    "search order 7 left-handed": timed(
        lambda: enumerate_models(SearchConstraint(7, handedness="left"), timeout=None)),
}
print(json.dumps({"backend": BACKEND, "rows": rows}))
"""


def run(backend, repeat):
    env = {k: v for k, v in os.environ.items() if k not in ("SKEWLAT_BACKEND", "SKEWLAT_DISABLE_NUMBA")}
    env["SKEWLAT_BACKEND"] = backend
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run("numba", args.repeat), run("numpy", args.repeat)
    print(f"{'workload':34} {fast['backend']:>10} {slow['backend']:>10} {'ratio':>7}")
    for name, t in fast["rows"].items():
        u = slow["rows"][name]
        print(f"{name:34} {t:10.3f} {u:10.3f} {u / t if t else float('nan'):7.1f}")


if __name__ == "__main__":
    main()
