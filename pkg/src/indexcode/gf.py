"""Finite fields GF(p) and GF(2^k), plus the linear algebra the codes need."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels

# x^k + ... irreducible over GF(2), bit i = coefficient of x^i
_IRREDUCIBLE = {
    2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011,
    7: 0b10001001, 8: 0b100011011, 9: 0b1000010001, 10: 0b10000001001,
}
MAX_PRIME = 1 << 20


class FieldTooSmall(ValueError):
    def __init__(self, message: str, minimum: int):
        super().__init__(message)
        self.minimum = minimum


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def smallest_prime_at_least(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def _clmul_mod(a: int, b: int, poly: int, k: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= poly
    return out


@dataclass(frozen=True, eq=False)
class FieldContext:
    """GF(q). Elements are ints in ``range(q)``; arrays are int64."""

    q: int
    p: int  # prime modulus, or 0 for GF(2^k)
    poly: int = 0
    mul_t: np.ndarray = field(repr=False, default=None)
    inv_t: np.ndarray = field(repr=False, default=None)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.q == other.q and self.poly == other.poly

    def __hash__(self):
        return hash((self.q, self.poly))

    @property
    def characteristic(self) -> int:
        return self.p if self.p else 2

    def describe(self) -> dict:
        doc = {"q": self.q, "characteristic": self.characteristic}
        if self.poly:
            doc["modulus_poly"] = bin(self.poly)
        return doc

    # -- scalars ----------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p if self.p else a ^ b

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p if self.p else a ^ b

    def neg(self, a: int) -> int:
        return (-a) % self.p if self.p else a

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p if self.p else int(self.mul_t[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.inv_t[a])

    def power(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    # -- arrays -----------------------------------------------------------
    def asarray(self, a) -> np.ndarray:
        return np.ascontiguousarray(np.asarray(a, dtype=np.int64))

    def add_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p if self.p else a ^ b

    def sub_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a - b) % self.p if self.p else a ^ b

    def matmul(self, a, b) -> np.ndarray:
        a = self.asarray(a)
        b = self.asarray(b)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        lead = a.ndim == 1
        if lead:
            a = a[None, :]
        out = _kernels.matmul(np.ascontiguousarray(a), np.ascontiguousarray(b), self.p, self.mul_t)
        if vec:
            out = out[:, 0]
        if lead:
            out = out[0]
        return out

    def rref(self, a, ncols: int | None = None) -> tuple[np.ndarray, int, np.ndarray]:
        mat = np.array(a, dtype=np.int64, copy=True)
        if mat.ndim != 2:
            raise ValueError("need a 2-d matrix")
        if mat.size == 0:
            return mat, 0, np.zeros(0, dtype=np.int64)
        rank, piv = _kernels.rref(mat, self.p, self.mul_t, self.inv_t, ncols)
        return mat, int(rank), piv

    def rank(self, a) -> int:
        return self.rref(a)[1]

    def row_basis(self, a) -> np.ndarray:
        mat, rank, _ = self.rref(a)
        return mat[:rank]

    def solve_left(self, a, targets) -> list[np.ndarray | None]:
        """For each row b of ``targets`` find x with ``x @ a == b`` (or None)."""
        a = self.asarray(a)
        targets = np.atleast_2d(self.asarray(targets))
        rows, cols = a.shape
        k = targets.shape[0]
        if rows == 0:
            return [np.zeros(0, dtype=np.int64) if not t.any() else None for t in targets]
        aug = np.concatenate([a.T, targets.T], axis=1)  # cols x (rows + k)
        mat, rank, piv = self.rref(aug, ncols=rows)
        out: list[np.ndarray | None] = []
        for j in range(k):
            rhs = mat[:, rows + j]
            if rhs[rank:].any():
                out.append(None)
                continue
            x = np.zeros(rows, dtype=np.int64)
            for i in range(rank):
                x[piv[i]] = rhs[i]
            out.append(x)
        return out


@lru_cache(maxsize=64)
def gf(q: int) -> FieldContext:
    """The field with ``q`` elements: a prime, or a power of two up to 2^10."""
    if is_prime(q):
        if q > MAX_PRIME:
            raise ValueError(f"prime fields are limited to q <= {MAX_PRIME}")
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = pow(a, q - 2, q)
        return FieldContext(q=q, p=q, mul_t=np.zeros((1, 1), dtype=np.int64), inv_t=inv)
    k = q.bit_length() - 1
    if q == 1 << k and k in _IRREDUCIBLE:
        poly = _IRREDUCIBLE[k]
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = _clmul_mod(a, b, poly, k)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return FieldContext(q=q, p=0, poly=poly, mul_t=mul, inv_t=inv)
    raise ValueError(f"unsupported field size {q}: use a prime or 2^k with 2 <= k <= 10")


def default_field(minimum: int) -> FieldContext:
    """Smallest prime field with at least ``minimum`` elements."""
    return gf(smallest_prime_at_least(minimum))
