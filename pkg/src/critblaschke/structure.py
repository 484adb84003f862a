"""Data-independent combinatorics of the degree-ordered Wronskian.

For the normalised Ansatz

    B(z) = (a_1 z + ... + a_n z^n + z^(n+1)) / (1 + conj(a_n) z + ... + conj(a_1) z^n)

the Wronskian ``W = p'q - pq'`` has ``n**2 + n`` coefficient-dependent terms.
They are grouped by degree ``d = 0..2n``; inside each group the terms carry an
integer weight ``w`` and a monomial ``a_I * conj(a_Ibar)`` (index 0 stands for
the constant 1).  Positions into the variable vector ``x`` are 1-based, the
way the model is usually written down; arrays themselves are 0-based.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poly

__all__ = [
    "DegreeLayout",
    "IndexTables",
    "degree_layout",
    "weight_block",
    "weight_vectors",
    "index_block",
    "index_vectors",
    "coeff_positions",
    "validate_points",
    "reflected_points",
    "dense_system",
    "build_x",
    "wronskian_from_coeffs",
    "wronskian_from_tables",
]


@dataclass(frozen=True)
class DegreeLayout:
    """Sizes and 1-based offsets of the per-degree blocks of ``x``."""

    n: int
    sizes: tuple
    offsets: tuple

    @property
    def m(self):
        return self.n * self.n // 2

    @property
    def p(self):
        return self.n * self.n // 2 + self.n

    @property
    def length(self):
        return self.n * self.n + self.n

    def block_size(self, d):
        return self.sizes[d]

    def block_offset(self, d):
        return self.offsets[d]

    def block_slice(self, d):
        """0-based slice of degree ``d`` inside ``x``."""
        start = self.offsets[d] - 1
        return slice(start, start + self.sizes[d])


@dataclass(frozen=True)
class IndexTables:
    n: int
    I: np.ndarray
    Ibar: np.ndarray
    J: np.ndarray


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _frozen(a):
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def degree_layout(n):
    n = _check_n(n)
    sizes = []
    for d in range(2 * n + 1):
        e = min(d, 2 * n - d)
        sizes.append(2 * (n // 2) if e == n else 2 * (e // 2) + 1)
    offsets = tuple(int(v) + 1 for v in np.concatenate([[0], np.cumsum(sizes)[:-1]]))
    return DegreeLayout(n, tuple(sizes), offsets)


def weight_block(n, d):
    """Integer weights ``w^d`` of the degree-``d`` terms."""
    n = _check_n(n)
    if not 0 <= d <= 2 * n:
        raise ValueError(f"degree {d} outside 0..{2 * n}")
    if d > n:
        return weight_block(n, 2 * n - d)[::-1].copy()
    if d == n:
        return np.array([2 * i - n - 1 for i in range(1, n + 1) if 2 * i != n + 1], dtype=np.int64)
    quad = [2 * i - d - 1 for i in range(1, d + 1) if 2 * i != d + 1]
    return np.array([d + 1] + quad, dtype=np.int64)


@lru_cache(maxsize=None)
def weight_vectors(n):
    """Concatenated weights ``w = (w^0, ..., w^{2n})`` and the block layout."""
    n = _check_n(n)
    w = np.concatenate([weight_block(n, d) for d in range(2 * n + 1)])
    return _frozen(w), degree_layout(n)


def index_block(n, d):
    """``(I^d, Ibar^d)``: indices of ``a`` and of ``conj(a)`` in degree ``d``."""
    n = _check_n(n)
    if not 0 <= d <= 2 * n:
        raise ValueError(f"degree {d} outside 0..{2 * n}")
    if d > n:
        lo, lo_bar = index_block(n, 2 * n - d)
        return lo_bar[::-1].copy(), lo[::-1].copy()
    if d == n:
        idx = np.array([i for i in range(1, n + 1) if 2 * i != n + 1], dtype=np.int64)
        return idx, idx.copy()
    pairs = [(i, n - d + i) for i in range(1, d + 1) if 2 * i != d + 1]
    I = np.array([d + 1] + [i for i, _ in pairs], dtype=np.int64)
    Ibar = np.array([0] + [k for _, k in pairs], dtype=np.int64)
    return I, Ibar


@lru_cache(maxsize=None)
def index_vectors(n):
    n = _check_n(n)
    blocks = [index_block(n, d) for d in range(2 * n + 1)]
    I = np.concatenate([b[0] for b in blocks])
    Ibar = np.concatenate([b[1] for b in blocks])
    return IndexTables(n, _frozen(I), _frozen(Ibar), _frozen(coeff_positions(n)))


def coeff_positions(n):
    """``J`` with ``J[0] = 0`` and ``J[i]`` the 1-based position of ``a_i`` in ``x``."""
    n = _check_n(n)
    i = np.arange(n + 1)
    J = (i - 1) ** 2 // 2 + ((i - 1) ** 2) % 2 + 1
    J[0] = 0
    return J


def validate_points(points, allow_zero=False):
    """Coerce critical points to a complex array and check the preconditions."""
    z = np.asarray(points, dtype=np.complex128).ravel()
    if z.size == 0:
        raise ValueError("at least one critical point is required")
    if not np.all(np.isfinite(z)):
        raise ValueError("critical points must be finite")
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("critical points must lie in the open unit disk")
    if not allow_zero and np.any(z == 0):
        raise ValueError("zero critical point (transform the data first)")
    if z.size > 1:
        gaps = np.abs(z[:, None] - z[None, :]) + np.eye(z.size)
        if np.any(gaps == 0.0):
            raise ValueError("duplicate critical points")
    return z


def reflected_points(points):
    """``(z_1, ..., z_n, 1/conj(z_1), ..., 1/conj(z_n))``."""
    z = np.asarray(points, dtype=np.complex128)
    return np.concatenate([z, 1.0 / np.conj(z)])


def dense_system(n, points):
    """The dense relaxed system ``A x = b`` (``2n x (n^2+n)``).

    Badly conditioned by construction (high powers of the points); it is only
    meant as a reference for checking the sparse model at small ``n``.
    """
    n = _check_n(n)
    z = validate_points(points)
    if z.size != n:
        raise ValueError(f"expected {n} points, got {z.size}")
    zz = reflected_points(z)
    w, layout = weight_vectors(n)
    degrees = np.repeat(np.arange(2 * n + 1), layout.sizes)
    A = w[None, :] * zz[:, None] ** degrees[None, :]
    b = -(n + 1) * zz**n
    return A, b


def build_x(a, tables):
    """Variable vector ``x_i = a_{I_i} * conj(a_{Ibar_i})`` with ``a_0 = 1``."""
    ext = np.concatenate([[1.0 + 0j], np.asarray(a, dtype=np.complex128)])
    if ext.size != tables.n + 1:
        raise ValueError(f"expected {tables.n} coefficients, got {ext.size - 1}")
    return ext[tables.I] * np.conj(ext[tables.Ibar])


def ansatz_polys(a):
    """Numerator and denominator of the normalised Ansatz for coefficients ``a``."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    num = np.concatenate([[0], a, [1]]).astype(np.complex128)
    den = np.concatenate([[1], np.conj(a[::-1]), [0]]).astype(np.complex128)
    return num, den


def wronskian_from_coeffs(a):
    """``p'q - pq'`` of the Ansatz, by polynomial arithmetic (degree ``2n``)."""
    p, q = ansatz_polys(a)
    W = poly.add(poly.mul(poly.derivative(p), q), -poly.mul(p, poly.derivative(q)))
    n = p.size - 2
    return W[: 2 * n + 1]


def wronskian_from_tables(a):
    """``sum_d W^d + (n+1) z^n`` assembled from weight and index tables."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    n = a.size
    tables = index_vectors(n)
    w, layout = weight_vectors(n)
    terms = w * build_x(a, tables)
    W = np.array([terms[layout.block_slice(d)].sum() for d in range(2 * n + 1)])
    W[n] += n + 1
    return W
