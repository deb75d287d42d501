import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from indexcode.gf import FieldTooSmall, default_field, gf, smallest_prime_at_least

FIELDS = [2, 3, 4, 5, 7, 8, 13, 16, 256]


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms_sampled(q):
    f = gf(q)
    rng = np.random.default_rng(q)
    for a, b, c in rng.integers(0, q, size=(300, 3)):
        a, b, c = int(a), int(b), int(c)
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(a, f.neg(a)) == 0
        assert f.sub(f.add(a, b), b) == a
        if a:
            assert f.mul(a, f.inv(a)) == 1


@pytest.mark.parametrize("q", [4, 8, 16])
def test_extension_matches_independent_multiplication(q):
    f = gf(q)
    add, mul, _ = oracles.field_ops(q, f.poly)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.mul(a, b) == mul(a, b)
        assert f.add(a, b) == add(a, b)


def test_unsupported_fields():
    for q in (1, 6, 9, 2048):
        with pytest.raises(ValueError):
            gf(q)
    with pytest.raises(ZeroDivisionError):
        gf(7).inv(0)


def test_default_field():
    assert default_field(7).q == 7
    assert default_field(8).q == 11
    assert smallest_prime_at_least(0) == 2


@pytest.mark.parametrize("q", [2, 5, 8])
def test_rank_and_solve_left(q):
    f = gf(q)
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.integers(0, q, size=(4, 6))
        x = rng.integers(0, q, size=4)
        b = f.matmul(x, a)
        sol = f.solve_left(a, b)[0]
        assert sol is not None and np.array_equal(f.matmul(sol, a), b)
        assert f.rank(a) == f.rank(a.T) <= 4
    # a target outside the row space
    a = np.array([[1, 0, 0], [0, 1, 0]])
    assert f.solve_left(a, np.array([0, 0, 1]))[0] is None


def test_rank_against_determinant_oracle():
    f = gf(7)
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.integers(0, 7, size=(4, 4))
        assert (f.rank(a) == 4) == (oracles.gauss_det(a, 7) != 0)


def test_matmul_matches_integer_product():
    f = gf(13)
    rng = np.random.default_rng(2)
    a = rng.integers(0, 13, size=(5, 7))
    b = rng.integers(0, 13, size=(7, 3))
    assert np.array_equal(f.matmul(a, b), (a @ b) % 13)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 8, 11]), st.integers(1, 5), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_row_basis_spans_rows(q, rows, cols, seed):
    f = gf(q)
    a = np.random.default_rng(seed).integers(0, q, size=(rows, cols))
    basis = f.row_basis(a)
    assert basis.shape[0] == f.rank(a)
    assert all(x is not None for x in f.solve_left(basis, a)) if basis.shape[0] else not a.any()


def test_field_too_small_carries_minimum():
    from indexcode.codes import mds_generator

    with pytest.raises(FieldTooSmall) as err:
        mds_generator(6, 4, gf(5))
    assert err.value.minimum == 6
