"""Disk automorphisms used to centre the data before solving.

The points are moved by ``b(z) = (z - z*)/(1 - conj(z*) z)`` with ``z*`` their
mean, the centred problem is solved, and the product is pulled back and
post-composed with a second automorphism so that it is in normalised form
again (``B(0) = 0``, monic numerator, denominator constant term 1).
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from . import poly
from .blaschke import BlaschkeProduct

__all__ = [
    "DiskAutomorphism",
    "centering",
    "forward",
    "inverse",
    "compose_with_automorphism",
    "normalized_pullback",
    "postcompose_and_pullback",
]

COLLISION_TOL = 1e-12
PERTURBATION = 1e-3
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class DiskAutomorphism:
    z_star: complex

    def __post_init__(self):
        z = complex(self.z_star)
        if not abs(z) < 1.0:
            raise ValueError(f"automorphism centre {z} is not inside the unit disk")
        object.__setattr__(self, "z_star", z)

    @property
    def pole(self):
        if self.z_star == 0:
            return np.inf
        with np.errstate(over="ignore"):
            return 1.0 / np.conj(self.z_star)


def centering(points, seed=0):
    """Automorphism sending the mean of ``points`` to the origin.

    If the mean (nearly) coincides with one of the points it is nudged by a
    seeded uniform offset of modulus at most ``1e-3``; up to 100 tries.
    """
    z = np.asarray(points, dtype=np.complex128).ravel()
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("critical points must lie in the open unit disk")
    centre = z.mean()
    rng = None
    for _ in range(MAX_ATTEMPTS + 1):
        if abs(centre) < 1.0 and np.min(np.abs(z - centre)) > COLLISION_TOL:
            return DiskAutomorphism(centre)
        if rng is None:
            rng = np.random.default_rng(seed)
        rad = PERTURBATION * np.sqrt(rng.uniform())
        centre = z.mean() + rad * np.exp(2j * np.pi * rng.uniform())
    raise ValueError("no admissible centre found for the automorphism")


def _check_pole(aut, z):
    if aut.z_star != 0 and np.any(np.isclose(z, aut.pole, rtol=0, atol=1e-15)):
        raise ZeroDivisionError("evaluation at the pole of the automorphism")


def forward(aut, z):
    z = np.asarray(z, dtype=np.complex128)
    with np.errstate(over="ignore"):
        _check_pole(aut, z)
    s = aut.z_star
    out = (z - s) / (1 - np.conj(s) * z)
    return out[()] if out.ndim == 0 else out


def inverse(aut, w):
    w = np.asarray(w, dtype=np.complex128)
    s = aut.z_star
    with np.errstate(over="ignore"):
        at_pole = s != 0 and np.any(np.isclose(w, -1.0 / np.conj(s), rtol=0, atol=1e-15))
    if at_pole:
        raise ZeroDivisionError("evaluation at the pole of the inverse automorphism")
    out = (w + s) / (1 + np.conj(s) * w)
    return out[()] if out.ndim == 0 else out


def _binomial_poly(c0, c1, k):
    """Coefficients of ``(c0 + c1 z)**k``."""
    j = np.arange(k + 1)
    binom = np.array([comb(k, int(i)) for i in j], dtype=np.float64)
    return binom * complex(c0) ** (k - j) * complex(c1) ** j


def compose_with_automorphism(coeffs, aut, total_degree):
    """``(1 - conj(z*) z)**D * f(b(z))`` in coefficient space, ``D = total_degree``."""
    c = poly.as_poly(coeffs)
    s = aut.z_star
    out = np.zeros(total_degree + 1, dtype=np.complex128)
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        term = poly.mul(_binomial_poly(-s, 1.0, k), _binomial_poly(1.0, -np.conj(s), total_degree - k))
        out += ck * term
    return out


def normalized_pullback(B_tilde, aut, pivot_tol=1e-13):
    """Numerator and denominator of ``b_p o B_tilde o b``, rotated so that the
    numerator is monic and the denominator starts with 1."""
    deg = B_tilde.degree
    P = compose_with_automorphism(B_tilde.numerator, aut, deg)
    Q = compose_with_automorphism(B_tilde.denominator, aut, deg)
    c = B_tilde(-aut.z_star)
    N = P - c * Q
    D = Q - np.conj(c) * P
    scale = max(np.max(np.abs(N)), np.max(np.abs(D)))
    lead, const = N[deg], D[0]
    if abs(lead) <= pivot_tol * scale or abs(const) <= pivot_tol * scale:
        raise ValueError("degenerate composition: normalisation pivot vanishes")
    return N / lead, D / const


def postcompose_and_pullback(B_tilde, aut, pivot_tol=1e-13):
    """Normalised form of ``b_p o B_tilde o b``.

    ``b_p`` moves ``B_tilde(b(0))`` back to the origin; a final unimodular
    rotation makes the numerator monic with the denominator starting at 1.
    Critical points move as ``b^{-1}`` of those of ``B_tilde``.
    """
    num, _ = normalized_pullback(B_tilde, aut, pivot_tol)
    return BlaschkeProduct(num[1:-1])
