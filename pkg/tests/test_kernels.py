"""The numba kernels and their fallbacks must agree exactly."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indexcode import _kernels as K
from indexcode.gf import gf

needs_numba = pytest.mark.skipif(K.numba is None, reason="numba not installed")


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 7, 8, 16]), st.integers(1, 7), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_rref_paths_agree(q, rows, cols, seed):
    f = gf(q)
    a = np.random.default_rng(seed).integers(0, q, size=(rows, cols)).astype(np.int64)
    a1, a2 = a.copy(), a.copy()
    r1, p1 = K._rref_numba(a1, f.p, f.mul_t, f.inv_t, cols)
    r2, p2 = K._rref_numpy(a2, f.p, f.mul_t, f.inv_t, cols)
    assert r1 == r2
    assert np.array_equal(np.asarray(p1)[:r1], np.asarray(p2)[:r2])
    assert np.array_equal(a1, a2)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 5, 4, 8]), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_matmul_paths_agree(q, n, k, m, seed):
    f = gf(q)
    rng = np.random.default_rng(seed)
    a = rng.integers(0, q, size=(n, k)).astype(np.int64)
    b = rng.integers(0, q, size=(k, m)).astype(np.int64)
    assert np.array_equal(K._matmul_numba(a, b, f.p, f.mul_t), K._matmul_numpy(a, b, f.p, f.mul_t))


@needs_numba
@pytest.mark.parametrize("seed", range(10))
def test_deficits_and_dp_paths_agree(seed):
    rng = np.random.default_rng(seed)
    n = 8
    req = rng.integers(0, 5, size=n).astype(np.int64)
    side = rng.integers(0, 32, size=n).astype(np.int64) & ~(np.int64(1) << req)
    d1 = K._deficits_numba(req, side, n)
    d2 = K._deficits_numpy(req, side, n)
    assert np.array_equal(d1, d2)
    dp1, c1 = K._partition_dp_numba(d1, n)
    dp2, c2 = K._partition_dp_loops(d1, n)
    assert np.array_equal(dp1, dp2) and np.array_equal(c1, c2)


def test_partition_dp_small_by_hand():
    # costs on 2 items: {0}=1, {1}=1, {0,1}=3 -> best is two singletons
    dp, choice = K.partition_dp(np.array([0, 1, 1, 3]), 2)
    assert dp[3] == 2 and choice[3] == 1


@needs_numba
@pytest.mark.parametrize("n, seed", list(itertools.product([4, 5, 6], range(4))))
def test_gf2_search_paths_agree(n, seed):
    rng = np.random.default_rng(seed)
    free = np.array([int(rng.integers(0, 1 << n)) & ~(1 << i) for i in range(n)], dtype=np.int64)
    for k in range(1, n + 1):
        o1, o2 = np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64)
        assert K._gf2_search_numba(free, n, k, o1) == K._gf2_search_loops(free, n, k, o2)
        assert np.array_equal(o1, o2)


def test_env_flag_selects_fallback():
    code = "import indexcode._kernels as K; print(K.USE_NUMBA)"
    env = dict(os.environ, INDEXCODE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
