"""Checking a computed product against the prescribed critical points."""

from dataclasses import dataclass

import numpy as np

from . import poly
from .blaschke import BlaschkeProduct
from .mobius import inverse
from .solver import CONVERGED

__all__ = [
    "ACCURACY",
    "AssignmentResult",
    "VerificationReport",
    "computed_critical_points",
    "max_bipartite_matching",
    "bottleneck_assign",
    "report",
]

ACCURACY = 0.5e-4
DISK_TOL = 1e-12


@dataclass(frozen=True)
class AssignmentResult:
    pairing: np.ndarray  # row i is matched with column pairing[i]
    max_distance: float
    distance_matrix: np.ndarray


@dataclass(frozen=True)
class VerificationReport:
    computed_points: np.ndarray
    pairing: np.ndarray
    max_error: float
    max_abs_derivative: float
    accurately_solved: bool
    classification: str
    status: str
    iterations: int
    residual_norm: float
    message: str = ""

    def as_dict(self):
        return {
            "computed_points": [[float(z.real), float(z.imag)] for z in self.computed_points],
            "pairing": [int(v) for v in self.pairing],
            "max_error": float(self.max_error),
            "max_abs_derivative": float(self.max_abs_derivative),
            "accurately_solved": bool(self.accurately_solved),
            "classification": self.classification,
            "status": self.status,
            "iterations": int(self.iterations),
            "residual_norm": float(self.residual_norm),
            "message": self.message,
        }


def computed_critical_points(B):
    """The ``n`` zeros of the Wronskian of ``B`` inside the unit disk.

    Raises ``ValueError`` when the count is not ``n`` (a form, a multiple zero
    at the origin, or roots too close to the circle to tell).
    """
    if not isinstance(B, BlaschkeProduct):
        B = BlaschkeProduct(B)
    W = B.wronskian()
    if np.all(W[: B.n] == 0) and np.all(W[B.n + 1 :] == 0):
        raise ValueError("Wronskian is a monomial; critical points are not distinct")
    z = poly.roots(W)
    mod = np.abs(z)
    inside = z[mod < 1.0 - DISK_TOL]
    if inside.size != B.n or np.any(np.abs(mod - 1.0) <= DISK_TOL):
        raise ValueError(f"found {inside.size} Wronskian zeros inside the disk, expected {B.n}")
    return inside


def max_bipartite_matching(adj, nrows, ncols):
    """Kuhn's augmenting-path matching; ``adj[i]`` lists admissible columns of row ``i``.

    Returns ``match_col`` with ``match_col[j]`` the row matched to column ``j`` or -1.
    """
    match_col = np.full(ncols, -1, dtype=np.int64)

    def augment(i, seen):
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_col[j] < 0 or augment(match_col[j], seen):
                match_col[j] = i
                return True
        return False

    for i in range(nrows):
        augment(i, np.zeros(ncols, dtype=bool))
    return match_col


def _perfect_matching(D, thr):
    n = D.shape[0]
    adj = [np.nonzero(D[i] <= thr)[0] for i in range(n)]
    if any(a.size == 0 for a in adj):
        return None
    match_col = max_bipartite_matching(adj, n, n)
    if np.any(match_col < 0):
        return None
    pairing = np.empty(n, dtype=np.int64)
    pairing[match_col] = np.arange(n)
    return pairing


def bottleneck_assign(D):
    """Bijection minimising the largest matched entry of ``D``.

    Binary search over the distinct entries, testing each threshold for a
    perfect matching.
    """
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.all(np.isfinite(D)):
        raise ValueError("distance matrix must be finite")
    n = D.shape[0]
    if n == 0:
        return AssignmentResult(np.zeros(0, dtype=np.int64), 0.0, D)
    values = np.unique(D)
    # the optimum is at least the largest row/column minimum
    floor = max(D.min(axis=1).max(), D.min(axis=0).max())
    lo = int(np.searchsorted(values, floor))
    hi = values.size - 1
    best = _perfect_matching(D, values[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        pairing = _perfect_matching(D, values[mid])
        if pairing is None:
            lo = mid + 1
        else:
            hi, best = mid, pairing
    if best is None or D[np.arange(n), best].max() > values[hi]:
        best = _perfect_matching(D, values[hi])
    return AssignmentResult(best, float(D[np.arange(n), best].max()), D)


def _critical_points_of(result):
    aut = result.automorphism
    if aut is None:
        return computed_critical_points(result.product)
    return inverse(aut, computed_critical_points(result.transformed_product))


def report(prescribed, result):
    """Accuracy report for a :class:`~critblaschke.solver.SolveResult`.

    With a transformed solve the computed points are the pulled-back critical
    points of the centred product.  The instance counts as accurately solved
    only if the solver converged, met its residual bound, and every prescribed
    point has a computed partner closer than ``0.5e-4``.
    """
    z = np.asarray(prescribed, dtype=np.complex128).ravel()
    B = result.product
    message = ""
    try:
        zc = np.atleast_1d(_critical_points_of(result))
    except ValueError as exc:
        zc = np.zeros(0, dtype=np.complex128)
        message = str(exc)
    if zc.size == z.size:
        assign = bottleneck_assign(np.abs(z[:, None] - zc[None, :]))
        pairing, max_error = assign.pairing, assign.max_distance
        max_der = float(np.max(np.abs(B.derivative(zc))))
    else:
        pairing, max_error, max_der = np.zeros(0, dtype=np.int64), float("inf"), float("nan")
    ok = (
        result.status == CONVERGED
        and result.final_residual_norm <= result.residual_bound
        and max_error < ACCURACY
    )
    return VerificationReport(
        computed_points=zc,
        pairing=pairing,
        max_error=max_error,
        max_abs_derivative=max_der,
        accurately_solved=bool(ok),
        classification=result.classification,
        status=result.status,
        iterations=result.iterations,
        residual_norm=result.final_residual_norm,
        message=message,
    )
