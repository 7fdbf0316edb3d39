import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from gkm14 import _kernels_py as py
from gkm14 import kernels

compiled = pytest.importorskip("gkm14._kernels")

ints = st.integers(-50, 50)


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from gkm14 import kernels; print(kernels.BACKEND)"],
        env={"GKM14_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@given(st.lists(ints, max_size=20), st.lists(ints, max_size=20), st.integers(0, 30))
def test_conv_trunc(a, b, n):
    expect = [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
              for k in range(n)]
    assert py.conv_trunc(a, b, n) == expect
    assert compiled.conv_trunc(a, b, n) == expect


@given(st.dictionaries(st.integers(-5, 20), ints, max_size=8),
       st.dictionaries(st.integers(-5, 20), ints, max_size=8), st.integers(-5, 30))
def test_sparse_mul_trunc(da, db, limit):
    ea, eb = sorted(da), sorted(db)
    ca, cb = [da[e] for e in ea], [db[e] for e in eb]
    expect = {}
    for x in ea:
        for y in eb:
            if x + y < limit:
                expect[x + y] = expect.get(x + y, 0) + da[x] * db[y]
    assert py.sparse_mul_trunc(ea, ca, eb, cb, limit) == expect
    assert compiled.sparse_mul_trunc(ea, ca, eb, cb, limit) == expect


@given(st.integers(-30, 30), st.integers(0, 25))
def test_eta_power(e, n):
    # oracle: multiply out prod (1 - q^k)^e naively
    out = [1] + [0] * max(n - 1, 0)
    for k in range(1, n):
        for _ in range(abs(e)):
            if e > 0:
                for i in range(n - 1, k - 1, -1):
                    out[i] -= out[i - k]
            else:
                for i in range(k, n):
                    out[i] += out[i - k]
    expect = out[:n]
    assert py.eta_power(e, n) == expect
    assert compiled.eta_power(e, n) == expect


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(1, 4), st.integers(0, 60))
def test_enum_coset(cnum, den, limit):
    gram = [[4, 2, 0], [2, 4, 2], [0, 2, 6]]
    a = py.enum_coset(gram, cnum, den, limit, True)
    b = compiled.enum_coset(gram, cnum, den, limit, True)
    assert a[0] == b[0]
    assert sorted(a[1]) == sorted(b[1])
    # brute force over a box
    hist = {}
    r = range(-8, 9)
    for z in ((i, j, k) for i in r for j in r for k in r):
        v = [c + den * t for c, t in zip(cnum, z)]
        n = sum(v[i] * gram[i][j] * v[j] for i in range(3) for j in range(3))
        if n <= limit:
            hist[n] = hist.get(n, 0) + 1
    assert a[0] == hist
