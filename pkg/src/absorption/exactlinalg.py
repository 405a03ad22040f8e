"""Exact dense linear algebra over F_p and F_p[t]/(t^N).

Arrays are numpy int64 with entries reduced into [0, p).  The array-level
helpers (``rref``, ``rank_mod``, ``nullspace``, ...) take the modulus as an
explicit argument and are what the rest of the package uses; ``Matrix``,
``FieldElem`` and ``TruncPoly`` are small value types that carry their
modulus and refuse to mix with a different one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ModulusMismatch, NoSolution

DEFAULT_PRIME = 10007

# products of two residues must fit in int64
_MAX_PRIME = 2**31


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


def _check_modulus(p: int) -> None:
    if not is_prime(p) or p >= _MAX_PRIME:
        raise ValueError(f"modulus must be a prime below 2**31, got {p}")


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


# ----------------------------------------------------------------------------
# array-level routines


def as_array(a, p: int) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    return np.mod(arr, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (R, pivot columns).

    ``R`` keeps the input shape, zero rows last.
    """
    a = np.mod(np.array(a, dtype=np.int64), p)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = inv_mod(int(a[r, c]), p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (rows) of the row space of ``a``; shape (rank, cols)."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    r, piv = rref(a, p)
    return r[: len(piv)]


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel {x : a x = 0}, returned as columns."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def left_kernel(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows, RREF) of {x : x a = 0}."""
    a = np.asarray(a, dtype=np.int64)
    k = nullspace(a.T, p).T
    if k.shape[0] == 0:
        return k
    return row_basis(k, p)


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Some X with a X = b (mod p); raises NoSolution if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("row count mismatch")
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if piv and piv[-1] >= n:
        raise NoSolution("inconsistent system")
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = r[i, n:]
    return x.ravel() if vec else x


def solve_left(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Some X with X a = b."""
    x = solve(np.asarray(a).T, np.asarray(b).T, p)
    return x.T


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return a.copy()
    r, piv = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise NoSolution("singular matrix")
    return r[:, n:]


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return not np.any(np.mod(v, p))
    return rank_mod(np.vstack([basis, v]), p) == rank_mod(basis, p)


def coords_in_rref(basis: np.ndarray, pivots: Sequence[int], v: np.ndarray) -> np.ndarray:
    """Coordinates of vectors ``v`` (rows) in an RREF basis, read off at pivots."""
    v = np.asarray(v)
    return v[..., list(pivots)]


def mat_pow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    base = np.mod(a, p)
    while k:
        if k & 1:
            out = out @ base % p
        base = base @ base % p
        k >>= 1
    return out


# ----------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class FieldElem:
    residue: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
            return other.residue
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.residue + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.residue - self._other(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._other(other) - self.residue, self.p)

    def __mul__(self, other):
        return FieldElem(self.residue * self._other(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.residue, self.p)

    def inverse(self) -> "FieldElem":
        return FieldElem(inv_mod(self.residue, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._other(other), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElem(pow(self.residue, k, self.p), self.p)

    def __int__(self):
        return self.residue


@dataclass(frozen=True)
class TruncPoly:
    """Element of F_p[t]/(t^N); ``coeffs[e]`` is the coefficient of t^e."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("truncation order must be positive")

    @classmethod
    def monomial(cls, e: int, N: int, p: int, c: int = 1) -> "TruncPoly":
        coeffs = [0] * N
        if 0 <= e < N:
            coeffs[e] = c
        return cls(tuple(coeffs), p)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "TruncPoly"):
        if other.p != self.p:
            raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")
        if other.N != self.N:
            raise ValueError("truncation orders differ")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return TruncPoly(tuple(c * int(other) for c in self.coeffs), self.p)
        self._check(other)
        a = np.array(self.coeffs, dtype=np.int64)
        b = np.array(other.coeffs, dtype=np.int64)
        prod = np.convolve(a, b)[: self.N] % self.p
        return TruncPoly(tuple(int(c) for c in prod), self.p)

    __rmul__ = __mul__

    def at_zero(self) -> FieldElem:
        return FieldElem(self.coeffs[0], self.p)

    def valuation(self) -> int | None:
        for e, c in enumerate(self.coeffs):
            if c:
                return e
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense matrix over F_p (row-major int64 array plus modulus)."""

    entries: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        _check_modulus(self.p)
        arr = np.mod(np.array(self.entries, dtype=np.int64), self.p)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_elems(cls, rows: Sequence[Sequence[FieldElem]]) -> "Matrix":
        """Build from nested FieldElem rows, which must share one modulus."""
        moduli = {x.p for row in rows for x in row}
        if len(moduli) != 1:
            raise ModulusMismatch(f"entries over {sorted(moduli)}")
        return cls(np.array([[x.residue for x in row] for row in rows], dtype=np.int64), moduli.pop())

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def _same(self, other: "Matrix"):
        if self.p != other.p:
            raise ModulusMismatch(f"F_{self.p} vs F_{other.p}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix(self.entries @ other.entries % self.p, self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix(self.entries + other.entries, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix(self.entries - other.entries, self.p)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __getitem__(self, idx):
        return FieldElem(int(self.entries[idx]), self.p)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def rank(m: Matrix) -> int:
    return rank_mod(m.entries, m.p)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the right kernel of ``m``."""
    return Matrix(nullspace(m.entries, m.p), m.p)


def solve_right(a: Matrix, b: Matrix) -> Matrix:
    """X with a X = b; raises NoSolution when rank([a|b]) > rank(a)."""
    if a.p != b.p:
        raise ModulusMismatch(f"F_{a.p} vs F_{b.p}")
    if a.rows != b.rows:
        raise ValueError("a and b must have the same number of rows")
    return Matrix(np.asarray(solve(a.entries, b.entries, a.p)).reshape(a.cols, b.cols), a.p)
