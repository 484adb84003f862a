"""Complex polynomial helpers.

Polynomials are 1-D ``complex128`` arrays in *ascending* order, ``c[j]`` being
the coefficient of ``z**j``.  Arithmetic never trims trailing coefficients;
only :func:`roots` does.
"""

import math

import numpy as np

__all__ = [
    "as_poly",
    "evaluate",
    "derivative",
    "mul",
    "add",
    "scale",
    "coeffs_from_roots",
    "fft_exponent",
    "roots",
    "is_self_inversive",
]


def as_poly(coeffs):
    c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("a polynomial needs a nonempty 1-D coefficient vector")
    return c


def evaluate(poly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = as_poly(poly)
    z = np.asarray(z, dtype=np.complex128)
    out = np.full(z.shape, c[-1], dtype=np.complex128)
    for cj in c[-2::-1]:
        out = out * z + cj
    return out[()] if out.ndim == 0 else out


def derivative(poly):
    c = as_poly(poly)
    if c.size == 1:
        return np.zeros(1, dtype=np.complex128)
    return c[1:] * np.arange(1, c.size)


def mul(pa, pb):
    return np.convolve(as_poly(pa), as_poly(pb))


def add(pa, pb):
    a, b = as_poly(pa), as_poly(pb)
    out = np.zeros(max(a.size, b.size), dtype=np.complex128)
    out[: a.size] += a
    out[: b.size] += b
    return out


def scale(pa, s):
    return as_poly(pa) * complex(s)


def fft_exponent(degree):
    """Smallest ``l`` with ``2**l >= 4 * (degree + 1)``."""
    return max(1, math.ceil(math.log2(4 * (degree + 1))))


def coeffs_from_roots(roots, l=None, radius=None):
    """Monic polynomial with the given roots, recovered from ``2**l`` samples.

    The product of linear factors is evaluated at ``2**l`` equispaced points
    on the circle ``|z| = radius`` and the coefficients are read off with one
    FFT.  ``2**l`` must exceed the degree, otherwise the coefficients alias.

    By default the radius is the geometric mean of the root moduli, which
    balances the coefficient magnitudes; for sets closed under reflection in
    the unit circle this is exactly the unit circle.
    """
    r = np.asarray(roots, dtype=np.complex128).ravel()
    deg = r.size
    if l is None:
        l = fft_exponent(deg)
    size = 1 << int(l)
    if size <= deg:
        raise ValueError(f"2**{l} = {size} samples cannot resolve degree {deg} (aliasing)")
    if radius is None:
        mod = np.abs(r[r != 0])
        log_rho = float(np.mean(np.log(mod))) if mod.size else 0.0
        radius = 1.0 if abs(log_rho) < 1e-12 else math.exp(log_rho)
    w = radius * np.exp(2j * np.pi * np.arange(size) / size)
    f = np.prod(w[:, None] - r[None, :], axis=1) if deg else np.ones(size, dtype=np.complex128)
    c = np.fft.fft(f)[: deg + 1] / size
    if radius != 1.0:
        c = c / radius ** np.arange(deg + 1)
    return c


def roots(poly, tol=1e-13, polish=True):
    """All complex roots (with multiplicity) from companion-matrix eigenvalues.

    Leading coefficients with modulus ``<= tol * max|c|`` are trimmed first.
    With ``polish`` every root gets Newton refinement on the untrimmed
    polynomial; a correction is kept only while it lowers ``|p(root)|``.
    """
    c = as_poly(poly)
    big = np.max(np.abs(c))
    if big == 0.0:
        raise ValueError("the zero polynomial has no finite root set")
    keep = np.nonzero(np.abs(c) > tol * big)[0]
    top = keep[-1]
    if top == 0:
        return np.zeros(0, dtype=np.complex128)
    trimmed = c[: top + 1]
    # np.roots wants descending order and builds the companion matrix itself
    z = np.roots(trimmed[::-1]).astype(np.complex128)
    if polish and z.size:
        z = _newton_polish(trimmed, z)
    return z


def _newton_polish(c, z, steps=3):
    dc = derivative(c)
    val = np.abs(evaluate(c, z))
    for _ in range(steps):
        d = evaluate(dc, z)
        ok = d != 0
        if not ok.any():
            break
        step = np.zeros_like(z)
        step[ok] = evaluate(c, z[ok]) / d[ok]
        cand = z - step
        cval = np.abs(evaluate(c, cand))
        better = cval < val
        if not better.any():
            break
        z = np.where(better, cand, z)
        val = np.where(better, cval, val)
    return z


def is_self_inversive(poly, tol=1e-9):
    """True if ``c == lam * conj(c[::-1])`` for some unimodular ``lam``.

    ``lam`` is the least-squares fit; both ``| |lam| - 1 |`` and the relative
    mismatch must stay below ``tol``.  The nominal degree is ``len(c) - 1``.
    """
    c = as_poly(poly)
    ref = np.conj(c[::-1])
    denom = np.vdot(ref, ref).real
    if denom == 0.0:
        return True
    lam = np.vdot(ref, c) / denom
    if abs(abs(lam) - 1.0) > tol:
        return False
    return bool(np.linalg.norm(c - lam * ref) <= tol * np.linalg.norm(c))
