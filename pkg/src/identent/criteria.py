"""Entanglement classification of two identical particles.

Fermions are non-entangled exactly when the Slater number is one (entropy of
the reduced state equal to one bit). Bosons are non-entangled when the
Schmidt number is one (both particles in the same state), or when it is two
with equal coefficients (a symmetrized pair of orthogonal states, entropy one
bit). A non-entangled verdict comes with a witness pair of single-particle
states whose (anti)symmetrized product is the state.
"""
from dataclasses import dataclass
import enum
import math
from typing import Optional, Tuple

import numpy as np

from .decompositions import FACT_TOL, RANK_TOL
from .errors import DimensionError, ValidationError
from .linalg import as_vector, hermitian_eig
from .states import (
    SchmidtData,
    Statistics,
    reduced_density,
    schmidt_data,
    von_neumann_entropy,
)

CLASSIFY_TOL = 1e-8
#: relative eigenvalue threshold of the spectral cross-check (singular values ~1e-6)
SPECTRAL_RANK_TOL = 1e-12


class Verdict(enum.Enum):
    NON_ENTANGLED = "non-entangled"
    ENTANGLED = "entangled"


class Subcase(enum.Enum):
    FERMION_SLATER_ONE = "fermion-slater-one"
    FERMION_SLATER_MANY = "fermion-slater-many"
    BOSON_PRODUCT = "boson-product"
    BOSON_ORTHOGONAL_PAIR = "boson-orthogonal-pair"
    BOSON_NON_ORTHOGONAL_PAIR = "boson-non-orthogonal-pair"
    BOSON_RANK_THREE_PLUS = "boson-rank-three-plus"

    @property
    def verdict(self):
        if self in _NON_ENTANGLED:
            return Verdict.NON_ENTANGLED
        return Verdict.ENTANGLED


_NON_ENTANGLED = frozenset(
    {Subcase.FERMION_SLATER_ONE, Subcase.BOSON_PRODUCT, Subcase.BOSON_ORTHOGONAL_PAIR})


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle; :meth:`scaled` moves all three together."""

    fact_tol: float = FACT_TOL
    rank_tol: float = RANK_TOL
    classify_tol: float = CLASSIFY_TOL

    @classmethod
    def scaled(cls, classify_tol):
        factor = classify_tol / CLASSIFY_TOL
        return cls(FACT_TOL * factor, RANK_TOL * factor, classify_tol)


@dataclass(frozen=True, eq=False)
class Classification:
    verdict: Verdict
    subcase: Subcase
    slater_or_schmidt_number: int
    entropy: float
    witness: Optional[Tuple[np.ndarray, np.ndarray]]
    schmidt: SchmidtData

    @property
    def entangled(self):
        return self.verdict is Verdict.ENTANGLED


@dataclass(frozen=True, eq=False)
class PropertyReport:
    """Expectation of the "at least one particle in state p" operator.

    ``e_p_value`` is the probability of finding at least one particle in
    ``projector_state``; ``pp_value`` that of finding both there.
    """

    projector_state: np.ndarray
    e_p_value: float
    pp_value: float


def expectation_E_P(state, p, exclusive=False):
    """Evaluate ``<psi| P(x)(I-P) + (I-P)(x)P + P(x)P |psi>`` for ``P = |p><p|``.

    Expanded in the coefficient matrix this is ``2 <p|rho|p> - |w|^2`` with
    ``w = p^dagger C conj(p)`` and ``|w|^2 = <P (x) P>``.

    Parameters
    ----------
    state : TwoParticleState
    p : array_like
        Unit vector spanning the projector.
    exclusive : bool
        Drop the ``P (x) P`` term, giving the probability of exactly one
        particle in ``p`` (``e_p_value - pp_value``).
    """
    p = as_vector(p, "p")
    if p.size != state.dim:
        raise DimensionError(f"projector has dimension {p.size}, state has {state.dim}")
    if abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise ValidationError("projector state is not normalized")
    rho = reduced_density(state).matrix
    single = float(np.vdot(p, rho @ p).real)
    w = np.conj(p) @ state.coeffs @ np.conj(p)
    pp = float(abs(w) ** 2)
    e_p = 2.0 * single - pp
    if exclusive:
        e_p -= pp
    return PropertyReport(p, e_p, pp)


def classify(state, tol=CLASSIFY_TOL, *, fact_tol=FACT_TOL, rank_tol=RANK_TOL):
    """Decide whether ``state`` is entangled.

    Parameters
    ----------
    state : TwoParticleState
    tol : float
        Bosons of Schmidt number two count as a symmetrized orthogonal pair
        when ``|b1 - b2| <= tol``.
    fact_tol, rank_tol : float
        Passed to the canonical-form computation.

    Returns
    -------
    Classification
    """
    data = schmidt_data(state, fact_tol=fact_tol, rank_tol=rank_tol)
    entropy = von_neumann_entropy(reduced_density(state))
    u = data.basis
    n = data.count
    witness = None
    if state.statistics is Statistics.FERMION:
        if n == 1:
            subcase = Subcase.FERMION_SLATER_ONE
            witness = (u[:, 0].copy(), u[:, 1].copy())
        else:
            subcase = Subcase.FERMION_SLATER_MANY
    elif n == 1:
        subcase = Subcase.BOSON_PRODUCT
        witness = (u[:, 0].copy(), u[:, 0].copy())
    elif n == 2:
        b1, b2 = data.coefficients[:2]
        if abs(b1 - b2) <= tol:
            subcase = Subcase.BOSON_ORTHOGONAL_PAIR
            witness = ((u[:, 0] - 1j * u[:, 1]) / math.sqrt(2.0),
                       (u[:, 0] + 1j * u[:, 1]) / math.sqrt(2.0))
        else:
            subcase = Subcase.BOSON_NON_ORTHOGONAL_PAIR
    else:
        subcase = Subcase.BOSON_RANK_THREE_PLUS
    return Classification(subcase.verdict, subcase, n, entropy, witness, data)


def attribute_properties(state, tol=CLASSIFY_TOL):
    """Pair of single-particle states possessed by the two particles, or ``None``.

    For a non-entangled state each returned vector ``p`` satisfies
    ``expectation_E_P(state, p).e_p_value == 1`` within ``tol``.
    """
    return classify(state, tol).witness


def classify_spectral(state, tol=CLASSIFY_TOL, rank_tol=SPECTRAL_RANK_TOL):
    """Verdict from the spectrum of ``C C^dagger`` alone.

    Independent of the Takagi/Youla constructions and meant as a cross-check
    of :func:`classify`. Fermion spectra come in equal pairs ``|a_i|^2 / 2``;
    boson spectra are ``b_i^2``.

    Returns
    -------
    (Verdict, Subcase, int)
    """
    lam = hermitian_eig(reduced_density(state).matrix).eigenvalues
    rank = int(np.count_nonzero(lam > rank_tol * lam[0]))
    if state.statistics is Statistics.FERMION:
        n = (rank + 1) // 2
        subcase = Subcase.FERMION_SLATER_ONE if n == 1 else Subcase.FERMION_SLATER_MANY
    elif rank == 1:
        n, subcase = 1, Subcase.BOSON_PRODUCT
    elif rank == 2:
        n = 2
        b1, b2 = np.sqrt(np.maximum(lam[:2], 0.0))
        subcase = (Subcase.BOSON_ORTHOGONAL_PAIR if abs(b1 - b2) <= tol
                   else Subcase.BOSON_NON_ORTHOGONAL_PAIR)
    else:
        n, subcase = rank, Subcase.BOSON_RANK_THREE_PLUS
    return subcase.verdict, subcase, n
