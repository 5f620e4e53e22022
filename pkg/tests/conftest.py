import os
import sys
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from skewlat.corpus import builtin, corpus, direct_product, op_dual, transpose_dual  # noqa: E402
from skewlat.harness import enumerated_algebras  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@lru_cache(maxsize=None)
def pool():
    """Corpus algebras plus every enumerated small algebra."""
    return tuple(corpus()) + tuple(enumerated_algebras())


@lru_cache(maxsize=None)
def small_pool():
    return tuple(a for a in pool() if a.order <= 9)


@st.composite
def algebras(draw, max_order=24):
    """Validated algebras: pool members, their duals, small products, relabelled."""
    base = small_pool()
    a = draw(st.sampled_from(base))
    kind = draw(st.sampled_from(["plain", "op", "transpose", "product"]))
    if kind == "op":
        a = op_dual(a)
    elif kind == "transpose":
        a = transpose_dual(a)
    elif kind == "product":
        b = draw(st.sampled_from([x for x in base if x.order * a.order <= max_order] or [base[0]]))
        if a.order * b.order <= max_order:
            a = direct_product(a, b)
    perm = draw(st.permutations(range(a.order)))
    return a.relabel(np.array(perm))


@pytest.fixture(scope="session")
def spinks9():
    return builtin("spinks9")


@pytest.fixture(scope="session")
def u2():
    return builtin("u2")


@pytest.fixture(scope="session")
def v2():
    return builtin("v2")


@pytest.fixture(scope="session")
def m3():
    return builtin("m3")


@pytest.fixture(scope="session")
def n5():
    return builtin("n5")
