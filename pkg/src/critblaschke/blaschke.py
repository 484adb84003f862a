from dataclasses import dataclass

import numpy as np

from . import poly
from .structure import ansatz_polys, wronskian_from_coeffs

__all__ = ["BlaschkeProduct"]


@dataclass(frozen=True)
class BlaschkeProduct:
    """Degree ``n+1`` rational function normalised as

        (a_1 z + ... + a_n z^n + z^(n+1)) / (1 + conj(a_n) z + ... + conj(a_1) z^n)

    so that ``B(0) = 0`` and the denominator is the conjugate reversal of the
    numerator divided by ``z``.  A zero of the numerator outside the disk makes
    it a Blaschke *form* rather than a product.
    """

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return self.a.size

    @property
    def degree(self):
        return self.a.size + 1

    @property
    def numerator(self):
        return ansatz_polys(self.a)[0]

    @property
    def denominator(self):
        return ansatz_polys(self.a)[1][:-1]

    def __call__(self, z):
        return poly.evaluate(self.numerator, z) / poly.evaluate(self.denominator, z)

    def wronskian(self):
        return wronskian_from_coeffs(self.a)

    def derivative(self, z):
        q = poly.evaluate(self.denominator, z)
        return poly.evaluate(self.wronskian(), z) / q**2

    def zeros(self):
        """Zeros of the numerator, including the one at the origin."""
        inner = self.numerator[1:]
        return np.concatenate([[0j], poly.roots(inner)])
