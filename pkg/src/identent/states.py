"""Pure states of two identical particles.

A state ``|psi> = sum_ij c_ij |i>_1 |j>_2`` is stored through its coefficient
matrix ``C``, antisymmetric for fermions and symmetric for bosons. With this
convention the one-particle reduced density operator is ``C C^dagger`` and the
Youla/Takagi canonical forms of ``C`` are the Slater/Schmidt decompositions.
"""
from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .decompositions import FACT_TOL, RANK_TOL, count_nonzero, takagi, youla
from .errors import DegenerateInputError, DimensionError, ValidationError
from .linalg import as_matrix, as_vector, frobenius_norm, hermitian_eig, hermiticity_defect

SYMMETRY_TOL = 1e-10
NORM_TOL = 1e-10
#: matrices whose norm is this close to one are silently rescaled
RENORMALIZE_WINDOW = 1e-6
VECTOR_NORM_TOL = 1e-9
DENSITY_TOL = 1e-10


class Statistics(enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"

    @property
    def sign(self):
        """Exchange sign: ``C^T = sign * C``."""
        return -1 if self is Statistics.FERMION else 1


def _statistics(value):
    if isinstance(value, Statistics):
        return value
    try:
        return Statistics(str(value).lower())
    except ValueError:
        raise ValidationError(f"unknown statistics {value!r}; expected 'fermion' or 'boson'") from None


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TwoParticleState:
    """Normalized two-particle state with definite exchange symmetry.

    Use :func:`from_coefficients` or the product constructors rather than
    building one directly; the constructor only checks invariants.
    """

    dim: int
    statistics: Statistics
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = _frozen(self.coeffs)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "statistics", _statistics(self.statistics))
        if c.shape != (self.dim, self.dim):
            raise DimensionError(f"coefficients have shape {c.shape}, expected {(self.dim, self.dim)}")
        if frobenius_norm(c - self.statistics.sign * c.T) > SYMMETRY_TOL:
            raise ValidationError(f"coefficients lack {self.statistics.value} exchange symmetry")
        if abs(frobenius_norm(c) - 1.0) > NORM_TOL:
            raise ValidationError("state is not normalized")

    def vector(self):
        """Amplitudes on the product basis ``|i>|j>`` in row-major order."""
        return self.coeffs.reshape(-1).copy()

    def overlap(self, other):
        """``|<self|other>|``; equals one for states equal up to a global phase."""
        if self.dim != other.dim:
            raise DimensionError("states live in different dimensions")
        return abs(np.vdot(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"TwoParticleState(dim={self.dim}, statistics={self.statistics.value})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"density matrix has shape {m.shape}, expected {(self.dim, self.dim)}")
        if hermiticity_defect(m) > DENSITY_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > DENSITY_TOL:
            raise ValidationError("density matrix does not have unit trace")

    @classmethod
    def from_matrix(cls, matrix):
        """Validate an arbitrary matrix, including positivity."""
        m = as_matrix(matrix, "rho")
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        rho = cls(m.shape[0], m)
        if hermitian_eig(rho.matrix).eigenvalues[-1] < -DENSITY_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        return rho


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Slater (fermions) or bosonic Schmidt decomposition of a state.

    Attributes
    ----------
    statistics : Statistics
    coefficients : ndarray
        Descending. Fermions: ``|a_i| = sqrt(2) z_i``, one per pair of basis
        vectors. Bosons: ``b_i``, one per basis vector.
    basis : ndarray
        The Youla or Takagi unitary; its columns are the single-particle basis.
    count : int
        Slater number or Schmidt number.
    residual, unitarity_defect : float
        Certified errors of the underlying factorization.
    """

    statistics: Statistics
    coefficients: np.ndarray
    basis: np.ndarray = field(repr=False)
    count: int
    residual: float = 0.0
    unitarity_defect: float = 0.0


def from_coefficients(matrix, statistics, tol=SYMMETRY_TOL):
    """Build a state from a coefficient matrix.

    A matrix whose Frobenius norm is within ``1e-6`` of one is rescaled, and
    an exchange-symmetry defect ``||C -+ C^T||_F <= tol`` is projected away.

    Raises
    ------
    ValidationError
        Symmetry defect above ``tol`` or norm off by more than ``1e-6``.
    """
    stats = _statistics(statistics)
    c = as_matrix(matrix, "coefficients")
    if c.shape[0] != c.shape[1]:
        raise DimensionError(f"coefficient matrix must be square, got {c.shape}")
    defect = frobenius_norm(c - stats.sign * c.T)
    if defect > tol:
        raise ValidationError(
            f"coefficient matrix is not {'anti' if stats.sign < 0 else ''}symmetric "
            f"(defect {defect:.3e} > {tol:.1e})")
    c = 0.5 * (c + stats.sign * c.T)
    norm = frobenius_norm(c)
    if abs(norm - 1.0) > RENORMALIZE_WINDOW:
        raise ValidationError(f"coefficient matrix has norm {norm:.12g}, expected 1")
    return TwoParticleState(c.shape[0], stats, c / norm)


def _product_inputs(phi, chi):
    phi = as_vector(phi, "phi")
    chi = as_vector(chi, "chi")
    if phi.shape != chi.shape:
        raise DimensionError(f"phi and chi differ in dimension ({phi.size} vs {chi.size})")
    for name, v in (("phi", phi), ("chi", chi)):
        if abs(np.linalg.norm(v) - 1.0) > VECTOR_NORM_TOL:
            raise ValidationError(f"{name} is not normalized")
    return phi, chi


def antisymmetrize_product(phi, chi):
    """Fermion state obtained by antisymmetrizing ``|phi>|chi>``.

    Raises
    ------
    DegenerateInputError
        ``phi`` and ``chi`` are parallel, so the antisymmetric part vanishes.
    """
    phi, chi = _product_inputs(phi, chi)
    m = np.outer(phi, chi) - np.outer(chi, phi)
    norm = frobenius_norm(m)
    if norm <= 1e-12:
        raise DegenerateInputError("cannot antisymmetrize two parallel single-particle states")
    return TwoParticleState(phi.size, Statistics.FERMION, m / norm)


def symmetrize_product(phi, chi):
    """Boson state obtained by symmetrizing ``|phi>|chi>``.

    The norm of ``phi chi^T + chi phi^T`` is ``sqrt(2 (1 + |<chi|phi>|^2))``;
    for ``phi == chi`` the result is the product state ``|phi>|phi>``.
    """
    phi, chi = _product_inputs(phi, chi)
    m = np.outer(phi, chi) + np.outer(chi, phi)
    norm = frobenius_norm(m)
    if norm == 0.0:
        raise DegenerateInputError("symmetrized product vanishes")
    return TwoParticleState(phi.size, Statistics.BOSON, m / norm)


def reduced_density(state):
    """One-particle reduced density operator ``C C^dagger`` (same for both particles)."""
    c = state.coeffs
    rho = c @ np.conj(c).T
    return DensityOperator(state.dim, 0.5 * (rho + np.conj(rho).T))


def von_neumann_entropy(rho):
    """Entropy ``-sum lambda log2 lambda`` in bits.

    Eigenvalues in ``[-1e-10, 0]`` are treated as zero.

    Raises
    ------
    ValidationError
        An eigenvalue is below ``-1e-10``.
    """
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator.from_matrix(rho)
    lam = hermitian_eig(rho.matrix).eigenvalues
    if lam[-1] < -DENSITY_TOL:
        raise ValidationError(f"density operator has negative eigenvalue {lam[-1]:.3e}")
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log2(lam))) + 0.0


def schmidt_data(state, *, fact_tol=FACT_TOL, rank_tol=RANK_TOL):
    """Slater decomposition (fermions) or bosonic Schmidt decomposition."""
    if state.statistics is Statistics.FERMION:
        fact = youla(state.coeffs, fact_tol)
        coefficients = math.sqrt(2.0) * fact.z
        count = count_nonzero(fact.z, rank_tol)
    else:
        fact = takagi(state.coeffs, fact_tol)
        coefficients = fact.sigma.copy()
        count = count_nonzero(fact.sigma, rank_tol)
    return SchmidtData(state.statistics, coefficients, fact.u, count,
                       fact.residual, fact.unitarity_defect)


def state_from_schmidt(data):
    """Rebuild the state described by ``data``.

    Fermions: ``sum_i a_i (|2i-1>|2i> - |2i>|2i-1>) / sqrt(2)``.
    Bosons: ``sum_i b_i |i>|i>``.
    """
    u = np.asarray(data.basis)
    coef = np.asarray(data.coefficients, dtype=float)
    if data.statistics is Statistics.FERMION:
        c = np.zeros_like(u)
        for k, ak in enumerate(coef):
            x, y = u[:, 2 * k], u[:, 2 * k + 1]
            c = c + ak / math.sqrt(2.0) * (np.outer(x, y) - np.outer(y, x))
    else:
        c = (u[:, :coef.size] * coef) @ u[:, :coef.size].T
    return from_coefficients(c, data.statistics, tol=1e-9)


def predicted_schmidt_coefficients(overlap_modulus):
    """Closed-form Schmidt coefficients of a symmetrized non-orthogonal pair.

    For ``s = |<chi|phi>|`` the pair gives ``|b|^2 = (1 - s^2) / (1 + s^2)``
    and coefficients ``sqrt((1 +- sqrt(1 - |b|^4)) / 2)``.

    Returns
    -------
    (float, float)
        Larger coefficient first.
    """
    s = float(overlap_modulus)
    if not 0.0 <= s < 1.0:
        raise ValidationError(f"overlap modulus must lie in [0, 1), got {s}")
    b2 = (1.0 - s * s) / (1.0 + s * s)
    root = math.sqrt(1.0 - b2 * b2)
    hi = math.sqrt((1.0 + root) / 2.0)
    # 1 - sqrt(1 - x) = x / (1 + sqrt(1 - x)) avoids cancellation near s -> 1
    lo = math.sqrt(b2 * b2 / (1.0 + root) / 2.0)
    return hi, lo
