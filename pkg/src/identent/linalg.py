"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Storage
and elementwise arithmetic come from numpy; the Hermitian eigensolver is a
cyclic complex Jacobi iteration written out here (its sweep compiled with
numba) so that eigenvector phases and the ordering of degenerate eigenvalues
are fully deterministic.
"""
from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from .errors import ConvergenceError, DimensionError, ValidationError

#: Default relative tolerance for :func:`hermitian_eig`.
EIG_TOL = 1e-12
#: Off-diagonal Frobenius norm, relative to ``||H||_F``, at which Jacobi stops.
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a finite two-dimensional complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValidationError(f"{name} must be a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return m


def as_vector(x, name="vector"):
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-d array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return v


def frobenius_norm(a):
    a = np.asarray(a).ravel()
    return float(np.sqrt(np.vdot(a, a).real))


def mat_mul(a, b):
    """Matrix product ``a @ b`` with an explicit shape contract."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    """Conjugate transpose."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValidationError(f"adjoint needs a 2-d array, got shape {a.shape}")
    return np.ascontiguousarray(np.conj(a).T)


def unitarity_defect(u):
    """``||U^dagger U - I||_F``."""
    u = np.asarray(u)
    return frobenius_norm(adjoint(u) @ u - np.eye(u.shape[1]))


def hermiticity_defect(h):
    h = np.asarray(h)
    return frobenius_norm(h - np.conj(h).T)


@dataclass(frozen=True)
class HermitianEig:
    """Eigenpairs of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray of float
        Sorted in descending order; equal values keep their diagonal order.
    eigenvectors : ndarray of complex
        Orthonormal eigenvectors stored as columns, matching ``eigenvalues``.
    sweeps : int
        Number of Jacobi sweeps performed.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def residual(self, h):
        """``||H V - V diag(lambda)||_F``."""
        v = self.eigenvectors
        return frobenius_norm(np.asarray(h) @ v - v * self.eigenvalues)


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, j].real ** 2 + a[i, j].imag ** 2
    return math.sqrt(total)


@njit(cache=True)
def _jacobi_sweep(a, v, negligible):
    # one cyclic sweep over the strict upper triangle, row-major; a <- W^H a W, v <- v W
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            mag = abs(apq)
            if mag <= negligible:
                continue
            phase = apq / mag
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (aqq - app) / (2.0 * mag)
            if abs(tau) > 1e150:
                t = 0.5 / tau
            else:
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            sp = s * phase
            spc = sp.conjugate()
            for k in range(n):
                x = a[k, p]
                y = a[k, q]
                a[k, p] = c * x - spc * y
                a[k, q] = sp * x + c * y
            for k in range(n):
                x = a[p, k]
                y = a[q, k]
                a[p, k] = c * x - sp * y
                a[q, k] = spc * x + c * y
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = app - t * mag
            a[q, q] = aqq + t * mag
            for k in range(n):
                x = v[k, p]
                y = v[k, q]
                v[k, p] = c * x - spc * y
                v[k, q] = sp * x + c * y


def hermitian_eig(h, eig_tol=EIG_TOL, *, max_sweeps=JACOBI_MAX_SWEEPS,
                  off_tol=JACOBI_OFF_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each sweep visits the strict upper triangle in row-major order and
    annihilates ``h[p, q]`` with the unitary rotation
    ``[[c, s*e^{i phi}], [-s*e^{-i phi}, c]]`` acting on columns ``p, q``.

    Parameters
    ----------
    h : (n, n) array_like
        Hermitian up to ``||h - h^dagger||_F <= eig_tol * ||h||_F``.
    eig_tol : float
        Admissible relative Hermiticity defect of the input.
    max_sweeps : int
    off_tol : float
        Stop once the off-diagonal Frobenius norm is at most
        ``off_tol * ||h||_F``.

    Returns
    -------
    HermitianEig

    Raises
    ------
    ValidationError
        Non-square or non-Hermitian input.
    ConvergenceError
        The off-diagonal mass did not fall below threshold in ``max_sweeps``.
    """
    h = as_matrix(h, "h")
    n, m = h.shape
    if n != m:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {h.shape}")
    norm = frobenius_norm(h)
    if norm == 0.0:
        return HermitianEig(np.zeros(n), np.eye(n, dtype=np.complex128), 0)
    if hermiticity_defect(h) > eig_tol * norm:
        raise ValidationError("matrix is not Hermitian within tolerance")

    a = 0.5 * (h + np.conj(h).T)
    v = np.eye(n, dtype=np.complex128)
    threshold = off_tol * norm
    # entries this small cannot affect convergence and may be subnormal
    negligible = 1e-18 * norm
    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})")
        sweeps += 1
        _jacobi_sweep(a, v, negligible)

    w = np.diagonal(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return HermitianEig(w[order], np.ascontiguousarray(v[:, order]), sweeps)
