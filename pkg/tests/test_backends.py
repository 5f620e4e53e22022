import json
import os
import subprocess
import sys

import numpy as np
import pytest

from skewlat import kernels
from skewlat.corpus import builtin

PROBE = r"""
import json
from skewlat import BACKEND
from skewlat.canonical import canonical_form
from skewlat.corpus import builtin
from skewlat.properties import full_report
from skewlat.search import SearchConstraint, enumerate_models
out = {"backend": BACKEND, "profiles": {}, "counts": {}}
for name in ("spinks9", "u2", "m3"):
    out["profiles"][name] = [
        [r.property.value, r.verdict, None if r.witness is None else repr(r.witness)]
        for r in full_report(builtin(name))]
for n in (2, 3, 4):
    hits = enumerate_models(SearchConstraint(n), timeout=None).hits
    out["counts"][str(n)] = sorted(canonical_form(h).hex() for h in hits)
hits = enumerate_models(SearchConstraint(5, handedness="left"), timeout=None).hits
out["counts"]["5L"] = sorted(canonical_form(h).hex() for h in hits)
print(json.dumps(out))
"""


def _probe(**env):
    full = {k: v for k, v in os.environ.items()
            if k not in ("SKEWLAT_BACKEND", "SKEWLAT_DISABLE_NUMBA")}
    full.update(env)
    proc = subprocess.run([sys.executable, "-c", PROBE], env=full, capture_output=True,
                          text=True, timeout=1200)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout.strip().splitlines()[-1])


@pytest.fixture(scope="module")
def numba_run():
    return _probe()


def test_numpy_backend_matches_numba(numba_run):
    plain = _probe(SKEWLAT_BACKEND="numpy")
    assert numba_run["backend"] == "numba" and plain["backend"] == "numpy"
    assert plain["profiles"] == numba_run["profiles"]
    assert plain["counts"] == numba_run["counts"]
    assert [len(plain["counts"][k]) for k in ("2", "3", "4")] == [3, 7, 21]


def test_disable_flag_selects_numpy():
    assert _probe(SKEWLAT_DISABLE_NUMBA="1")["backend"] == "numpy"


def test_kernel_paths_agree_in_process():
    s = builtin("spinks9")
    for t in (s.meet, s.join):
        assert kernels._assoc_np(t) == kernels._assoc_nb(t) == -1
    rng = np.random.default_rng(7)
    for _ in range(20):
        bad = s.meet.copy()
        bad[rng.integers(9), rng.integers(9)] = rng.integers(9)
        assert kernels._assoc_np(bad) == int(kernels._assoc_nb(bad))
    from skewlat.identities import MEET_DIST
    from skewlat.algebra import holds
    assert not holds(s, MEET_DIST)


def test_unravel_row_major():
    assert kernels.unravel(0, 9, 3) == (0, 0, 0)
    assert kernels.unravel(int(np.ravel_multi_index((2, 3, 8), (9, 9, 9))), 9, 3) == (2, 3, 8)
