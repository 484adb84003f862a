"""Affine description of the relaxed Wronskian system.

Every solution of the relaxed system is ``x = alpha + C t + beta t_beta``:
``C`` is assembled from integer null-space blocks of the per-degree weight
vectors and carries no data, while ``alpha`` (a particular solution) and
``beta`` (the one data-dependent null direction) come out of a single FFT of
``prod (z - z_j)(z - 1/conj(z_j))``.  Only degrees ``0..n`` are kept (the
*reduced* vectors); the upper half follows by flip-conjugation.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import poly
from .structure import (
    DegreeLayout,
    coeff_positions,
    degree_layout,
    reflected_points,
    validate_points,
    weight_vectors,
)

__all__ = [
    "ReducedAffine",
    "null_block",
    "null_block_full",
    "assemble_reduced_C",
    "assemble_full_C",
    "scaled_wronskian",
    "particular_solution",
    "data_null_vector",
    "reduced_affine",
    "expand_full",
]


@dataclass(frozen=True)
class ReducedAffine:
    alpha_hat: np.ndarray
    beta_hat: np.ndarray
    C_hat: sp.csr_matrix
    layout: DegreeLayout

    @property
    def n(self):
        return self.layout.n

    def point(self, t, t_beta):
        """``alpha_hat + C_hat t + beta_hat t_beta``."""
        return self.alpha_hat + self.C_hat @ np.asarray(t) + self.beta_hat * t_beta


def _pair(size, k, top, bottom):
    v = np.zeros(size, dtype=np.int64)
    v[k - 1], v[k] = top, bottom
    return v


def null_block(n, d):
    """Integer basis ``C^d`` of the null space of ``w^d`` for ``2 <= d <= n``.

    Each column has two adjacent nonzeros (row positions below are 1-based).
    """
    if not 2 <= d <= n:
        raise ValueError(f"null blocks of the reduced model need 2 <= d <= n, got d={d}, n={n}")
    cols = []
    if d < n and d % 2 == 0:
        size = d + 1
        cols.append(_pair(size, 1, d - 1, d + 1))
        cols += [_pair(size, k, 2 * k - d - 1, d - 2 * k + 3) for k in range(2, d + 1)]
    elif d < n:
        size = d
        cols.append(_pair(size, 1, d - 1, d + 1))
        for k in range(2, d):
            if 2 * k < d + 1:
                cols.append(_pair(size, k, 2 * k - d - 1, d - 2 * k + 3))
            elif 2 * k == d + 1:
                cols.append(_pair(size, k, 1, 1))
            else:
                cols.append(_pair(size, k, 2 * k - d + 1, d - 2 * k + 1))
    elif n % 2 == 0:
        size = n
        cols += [_pair(size, k - 1, 2 * k - n - 1, n - 2 * k + 3) for k in range(2, n + 1)]
    else:
        size = n - 1
        for k in range(2, n):
            if 2 * k < n + 1:
                cols.append(_pair(size, k - 1, 2 * k - n - 1, n - 2 * k + 3))
            elif 2 * k == n + 1:
                cols.append(_pair(size, k - 1, 1, 1))
            else:
                cols.append(_pair(size, k - 1, 2 * k - n + 1, n - 2 * k + 1))
    if not cols:
        return np.zeros((size, 0), dtype=np.int64)
    return np.column_stack(cols)


def null_block_full(n, d):
    """``C^d`` for any ``2 <= d <= 2n-2``; the upper degrees mirror the lower ones."""
    if d <= n:
        return null_block(n, d)
    if d > 2 * n - 2:
        raise ValueError(f"degree {d} has no null block")
    return null_block(n, 2 * n - d)[::-1, ::-1].copy()


def _block_diag(n, degrees, rows):
    layout = degree_layout(n)
    blocks = [null_block_full(n, d) for d in degrees]
    ncols = sum(b.shape[1] for b in blocks)
    r, c, v = [], [], []
    col = 0
    for d, blk in zip(degrees, blocks):
        bi, bj = np.nonzero(blk)
        r.append(bi + layout.offsets[d] - 1)
        c.append(bj + col)
        v.append(blk[bi, bj])
        col += blk.shape[1]
    if not r:
        return sp.csr_matrix((rows, 0), dtype=np.float64)
    return sp.csr_matrix(
        (np.concatenate(v).astype(np.float64), (np.concatenate(r), np.concatenate(c))),
        shape=(rows, ncols),
    )


@lru_cache(maxsize=None)
def _reduced_C_sparse(n):
    layout = degree_layout(n)
    C = _block_diag(n, range(2, n + 1), layout.p)
    C.data.setflags(write=False)
    return C


def assemble_reduced_C(n, sparse=False):
    """Block matrix ``C_hat`` (``p x (m-1)``) holding ``C^2, ..., C^n``.

    Block ``C^d`` has its top-left corner at row ``ceil(d^2/2) + 1`` and column
    ``floor((d-1)^2/2) + 1`` (1-based).
    """
    C = _reduced_C_sparse(n)
    return C.copy() if sparse else C.toarray()


def assemble_full_C(n, sparse=False):
    """Null basis ``C`` of the full relaxed system, blocks for degrees ``2..2n-2``."""
    layout = degree_layout(n)
    C = _block_diag(n, range(2, 2 * n - 1), layout.length)
    return C if sparse else C.toarray()


def scaled_wronskian(points, l=None):
    """Coefficients of ``W_1``: the monic ``prod (z - z_j)(z - 1/conj z_j)``
    rescaled so that the coefficient of ``z^n`` equals ``n + 1``."""
    z = np.asarray(points, dtype=np.complex128)
    n = z.size
    b = poly.coeffs_from_roots(reflected_points(z), l)
    if abs(b[n]) < 1e-300:
        raise ValueError("middle Wronskian coefficient vanishes; cannot normalise")
    return (n + 1) * b / b[n]


def _linear_seed(points, l):
    z = validate_points(points)
    n = z.size
    c = scaled_wronskian(z, l)
    a = c[:n] / np.arange(1, n + 1)
    layout = degree_layout(n)
    x = np.zeros(layout.p, dtype=np.complex128)
    x[coeff_positions(n)[1:] - 1] = a
    return x, layout


def particular_solution(points, l=None):
    """Reduced particular solution ``alpha_hat``: linear slots filled from ``W_1``,
    every quadratic slot zero."""
    return _linear_seed(points, l)[0]


def degree_n_null_entries(n):
    """Values put on the ``|a_i|^2`` slots of degree ``n`` in ``beta``."""
    keep = [i for i in range(1, n + 1) if 2 * i != n + 1]
    vals = {}
    for i in range(1, n // 2 + 1):
        vals[i] = -3.0 * (n + 1 - 2 * i) / (n * (n - 1))
    for i in range(-(-n // 2) + 1, n + 1):
        vals[i] = -vals[n + 1 - i]
    return np.array([vals[i] for i in keep])


def data_null_vector(points, l=None):
    """Reduced data-dependent null direction ``beta_hat`` (needs ``n >= 2``)."""
    x, layout = _linear_seed(points, l)
    n = layout.n
    if n < 2:
        raise ValueError("beta is only defined for n >= 2")
    x[layout.block_slice(n)] = degree_n_null_entries(n)
    return x


def reduced_affine(points, l=None):
    """All pieces of ``x_hat = alpha_hat + C_hat t + beta_hat t_beta``."""
    x, layout = _linear_seed(points, l)
    n = layout.n
    beta = x.copy()
    if n >= 2:
        beta[layout.block_slice(n)] = degree_n_null_entries(n)
    return ReducedAffine(x, beta, _reduced_C_sparse(n), layout)


def expand_full(x_hat, layout):
    """Append degrees ``n+1..2n`` as flipped conjugates of degrees ``n-1..0``.

    Works column-wise on 2-D input.
    """
    x_hat = np.asarray(x_hat)
    n = layout.n
    if x_hat.shape[0] != layout.p:
        raise ValueError(f"reduced vector needs {layout.p} rows, got {x_hat.shape[0]}")
    upper = [np.conj(x_hat[layout.block_slice(2 * n - d)][::-1]) for d in range(n + 1, 2 * n + 1)]
    return np.concatenate([x_hat] + upper)
