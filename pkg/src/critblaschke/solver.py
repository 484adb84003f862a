"""Sparse quadratic model and its least-squares solve.

Unknowns are the null-space weights ``t`` (complex, ``m-1`` of them) and the
real weight ``t_beta``.  With ``x_hat = alpha_hat + C_hat t + beta_hat t_beta``
the residuals are the ``m`` conjugate-quadratic constraints

    x_i - x_j * conj(x_k),     i not a coefficient slot,

split into real and imaginary parts: ``2m`` real equations in ``2m - 1`` real
unknowns.  The system is consistent, so the least-squares minimum is a root.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import poly
from .affine import ReducedAffine, reduced_affine
from .blaschke import BlaschkeProduct
from .mobius import DiskAutomorphism, centering, forward, postcompose_and_pullback
from .structure import coeff_positions, degree_layout, index_vectors, validate_points

log = logging.getLogger(__name__)

__all__ = [
    "QuadraticConstraint",
    "SolveOptions",
    "SolveResult",
    "SparseModel",
    "build_constraints",
    "residual",
    "jacobian",
    "levenberg_marquardt",
    "classify",
    "solve",
]

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
SINGULAR = "singular"

PRODUCT = "blaschke_product"
FORM = "blaschke_form"

STEP_TOL = 1e-12
CIRCLE_TOL = 1e-10


class QuadraticConstraint(NamedTuple):
    """``x_i = x_j * conj(x_k)``; 1-based positions, 0 is the constant 1."""

    i: int
    j: int
    k: int


@dataclass(frozen=True)
class SolveOptions:
    residual_tol: float = 1e-12
    max_iterations: int = 5000
    transform_enabled: bool = True
    rng_seed: int = 0

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class SolveResult:
    a: np.ndarray
    status: str
    iterations: int
    final_residual_norm: float
    classification: str
    residual_bound: float
    a_transformed: np.ndarray
    automorphism: DiskAutomorphism | None = None
    warnings: tuple = field(default=())

    @property
    def converged(self):
        return self.status == CONVERGED

    @property
    def product(self):
        return BlaschkeProduct(self.a)

    @property
    def transformed_product(self):
        return BlaschkeProduct(self.a_transformed)


def build_constraints(tables, layout=None):
    """One constraint per non-coefficient slot of ``x_hat``, in increasing ``i``."""
    n = tables.n
    layout = layout or degree_layout(n)
    J = tables.J
    linear = set(int(v) for v in J[1:])
    out = []
    for i in range(1, layout.p + 1):
        if i in linear:
            continue
        out.append(QuadraticConstraint(i, int(J[tables.I[i - 1]]), int(J[tables.Ibar[i - 1]])))
    return out


class SparseModel:
    """Residual and Jacobian of the quadratic system for one data set.

    Unknowns are packed as ``u = (Re t, Im t, t_beta)``.
    """

    def __init__(self, aff: ReducedAffine, constraints=None):
        n = aff.n
        if n < 2:
            raise ValueError("the quadratic model needs n >= 2")
        self.aff = aff
        cons = constraints if constraints is not None else build_constraints(index_vectors(n), aff.layout)
        idx = np.array(cons, dtype=np.int64).reshape(-1, 3)
        self.i, self.j, self.k = idx[:, 0], idx[:, 1], idx[:, 2]
        self.m = len(cons)
        C = aff.C_hat
        self.nt = C.shape[1]
        # d x_hat / d u, with a zero row on top for the constant slot x_0 = 1
        G = sp.hstack(
            [C.astype(np.complex128), 1j * C, sp.csr_matrix(aff.beta_hat.reshape(-1, 1))],
            format="csr",
        )
        G = sp.vstack([sp.csr_matrix((1, G.shape[1]), dtype=np.complex128), G], format="csr")
        self.Gi, self.Gj, self.Gk = G[self.i], G[self.j], G[self.k]
        self.Gk_conj = self.Gk.conj()

    @property
    def size(self):
        return 2 * self.nt + 1

    def split(self, u):
        u = np.asarray(u, dtype=np.float64)
        t = u[: self.nt] + 1j * u[self.nt : 2 * self.nt]
        return t, u[-1]

    def pack(self, t, t_beta):
        t = np.asarray(t, dtype=np.complex128)
        return np.concatenate([t.real, t.imag, [float(t_beta)]])

    def x_ext(self, u):
        t, tb = self.split(u)
        return np.concatenate([[1.0 + 0j], self.aff.point(t, tb)])

    def complex_residual(self, u):
        x = self.x_ext(u)
        return x[self.i] - x[self.j] * np.conj(x[self.k])

    def residual(self, u):
        r = self.complex_residual(u)
        return np.concatenate([r.real, r.imag])

    def jacobian(self, u):
        x = self.x_ext(u)
        Jc = self.Gi - sp.diags(np.conj(x[self.k])) @ self.Gj - sp.diags(x[self.j]) @ self.Gk_conj
        return sp.vstack([Jc.real, Jc.imag], format="csr")

    def coefficients(self, u):
        """``a_i = x_{J_i}``."""
        x = self.x_ext(u)
        return x[coeff_positions(self.aff.n)[1:]]


def residual(t, t_beta, aff, cons):
    model = SparseModel(aff, cons)
    return model.residual(model.pack(t, t_beta))


def jacobian(t, t_beta, aff, cons):
    """Real ``2m x (2m-1)`` Jacobian (sparse) w.r.t. ``(Re t, Im t, t_beta)``."""
    model = SparseModel(aff, cons)
    return model.jacobian(model.pack(t, t_beta))


@dataclass
class LMOutcome:
    u: np.ndarray
    status: str
    iterations: int
    residual_norm: float


def _damped_step(JtJ, g, lam, scale):
    M = (JtJ + sp.diags(lam * scale)).tocsc()
    # normal matrix is SPD; a symmetric fill-reducing order keeps the factors small
    lu = spla.splu(M, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                   options={"SymmetricMode": True})
    return lu.solve(-g)


def levenberg_marquardt(fun, jac, u0, residual_bound, max_iterations, step_tol=STEP_TOL,
                        initial_damping=1e-9):
    """Levenberg-Marquardt with Marquardt scaling and gain-ratio damping updates.

    ``jac`` returns a sparse Jacobian.  The damping matrix is the running
    maximum of ``diag(J^T J)``; after a step with gain ratio ``rho > 0`` the
    damping shrinks by ``max(1/3, 1 - (2 rho - 1)^3)``, otherwise it grows
    geometrically.  Stops as converged once ``||r|| <= residual_bound`` and
    the proposed step is below ``step_tol * (1 + ||u||)``.
    """
    u = np.array(u0, dtype=np.float64)
    r = fun(u)
    cost = 0.5 * r @ r
    J = jac(u)
    JtJ = (J.T @ J).tocsc()
    g = J.T @ r
    diag = JtJ.diagonal()
    scale = np.maximum(diag, 1e-12 * max(diag.max(), 1e-300))
    lam = initial_damping
    nu = 2.0
    it = 0
    while True:
        rnorm = math.sqrt(2.0 * cost)
        if rnorm == 0.0:
            return LMOutcome(u, CONVERGED, it, 0.0)
        try:
            step = _damped_step(JtJ, g, lam, scale)
        except RuntimeError:
            return LMOutcome(u, SINGULAR, it, rnorm)
        if not np.all(np.isfinite(step)):
            return LMOutcome(u, SINGULAR, it, rnorm)
        if rnorm <= residual_bound and np.linalg.norm(step) <= step_tol * (1.0 + np.linalg.norm(u)):
            return LMOutcome(u, CONVERGED, it, rnorm)
        if it >= max_iterations:
            return LMOutcome(u, MAX_ITERATIONS, it, rnorm)
        it += 1
        u_new = u + step
        r_new = fun(u_new)
        cost_new = 0.5 * r_new @ r_new
        predicted = 0.5 * step @ (lam * scale * step - g)
        rho = (cost - cost_new) / predicted if predicted > 0 else -1.0
        if rho > 0 and np.isfinite(cost_new):
            u, r, cost = u_new, r_new, cost_new
            J = jac(u)
            JtJ = (J.T @ J).tocsc()
            g = J.T @ r
            scale = np.maximum(scale, JtJ.diagonal())
            lam *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
            nu = 2.0
        else:
            lam *= nu
            nu *= 2.0
            if not lam < 1e300:
                # no step reduces the residual any more
                status = CONVERGED if rnorm <= residual_bound else SINGULAR
                return LMOutcome(u, status, it, rnorm)


def classify(a, circle_tol=CIRCLE_TOL):
    """``(classification, warnings)`` from the numerator zeros."""
    a = np.asarray(a, dtype=np.complex128)
    inner = np.concatenate([a, [1.0]])
    zeros = poly.roots(inner)
    mod = np.abs(zeros)
    notes = []
    if np.any(np.abs(mod - 1.0) < circle_tol):
        notes.append("numerator zero within 1e-10 of the unit circle")
    kind = PRODUCT if np.all(mod < 1.0 - circle_tol) else FORM
    return kind, tuple(notes)


def solve(points, opts=None):
    """Blaschke product of degree ``n+1`` whose critical points are ``points``."""
    opts = opts or SolveOptions()
    z = validate_points(points, allow_zero=opts.transform_enabled)
    aut = None
    if opts.transform_enabled:
        aut = centering(z, seed=opts.rng_seed)
        z = validate_points(forward(aut, z))
    aff = reduced_affine(z)
    n = aff.n
    bound = opts.residual_tol * (1.0 + np.linalg.norm(aff.alpha_hat))
    if n == 1:
        a_t = aff.alpha_hat.copy()
        outcome = LMOutcome(np.zeros(1), CONVERGED, 0, 0.0)
    else:
        model = SparseModel(aff)
        outcome = levenberg_marquardt(
            model.residual, model.jacobian, np.zeros(model.size), bound, opts.max_iterations
        )
        a_t = model.coefficients(outcome.u)
    B = BlaschkeProduct(a_t)
    if aut is not None:
        B = postcompose_and_pullback(B, aut)
    kind, notes = classify(B.a)
    log.debug("n=%d status=%s iterations=%d residual=%.3e", n, outcome.status, outcome.iterations,
              outcome.residual_norm)
    return SolveResult(
        a=B.a,
        status=outcome.status,
        iterations=outcome.iterations,
        final_residual_norm=outcome.residual_norm,
        classification=kind,
        residual_bound=bound,
        a_transformed=np.asarray(a_t),
        automorphism=aut,
        warnings=notes,
    )
