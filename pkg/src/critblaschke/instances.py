"""Seeded random critical-point sets: uniform disk, off-centre cluster, jittered circle."""

from dataclasses import dataclass

import numpy as np

__all__ = ["FAMILIES", "InstanceSpec", "gen_disk", "gen_cluster", "gen_circle", "generate"]

FAMILIES = ("disk", "cluster", "circle")
DUP_TOL = 1e-10
CLUSTER_CENTRE = (1 + 1j) / 3
CLUSTER_SCALE = 0.25


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    r: float = 0.99
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.family == "disk" and not 0 < self.r <= 1:
            raise ValueError("disk radius must lie in (0, 1]")
        if self.family == "circle" and not 0 < self.r < 1:
            raise ValueError("circle radius must lie in (0, 1)")

    def points(self):
        return generate(self.family, self.n, self.r, self.seed)


def _admissible(z, pts):
    if z == 0 or abs(z) >= 1:
        return False
    return all(abs(z - w) > DUP_TOL for w in pts)


def _draw(n, sample):
    pts = []
    while len(pts) < n:
        z = sample()
        if _admissible(z, pts):
            pts.append(z)
    return np.array(pts, dtype=np.complex128)


def gen_disk(n, r, seed=0):
    """``n`` points uniform by area in ``|z| < r`` (``r = 1`` is the unit disk)."""
    if not 0 < r <= 1:
        raise ValueError("disk radius must lie in (0, 1]")
    rng = np.random.default_rng(seed)

    def sample():
        rad, ang = rng.uniform(size=2)
        return complex(r * np.sqrt(rad) * np.exp(2j * np.pi * ang))

    return _draw(n, sample)


def gen_cluster(n, seed=0):
    """Gaussian cluster around ``(1+i)/3`` (std ``1/4`` per component), rejected to the disk."""
    rng = np.random.default_rng(seed)

    def sample():
        x, y = rng.standard_normal(2)
        return complex(CLUSTER_CENTRE + CLUSTER_SCALE * (x + 1j * y))

    return _draw(n, sample)


def gen_circle(n, r, seed=0, jitter=True):
    """Points on ``|z| = r`` at angles ``2 pi k / n`` plus ``U(-pi/(4n), pi/(4n))``."""
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    ang = 2 * np.pi * np.arange(n) / n
    if jitter:
        ang = ang + rng.uniform(-np.pi / (4 * n), np.pi / (4 * n), size=n)
    return r * np.exp(1j * ang)


def generate(family, n, r=0.99, seed=0):
    if family == "disk":
        return gen_disk(n, r, seed)
    if family == "cluster":
        return gen_cluster(n, seed)
    if family == "circle":
        return gen_circle(n, r, seed)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
