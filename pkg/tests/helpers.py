"""Random generators and independent oracles shared by the test modules.

The oracles rely on numpy's LAPACK routines or on explicit operator
assembly, never on the package's own eigensolver or factorizations.
"""
import math

import numpy as np

from identent import Statistics, TwoParticleState


def random_unitary(n, rng):
    """Haar unitary: QR of a complex Gaussian with the R-diagonal phases removed."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unit_vector(n, rng):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_weights(k, rng, floor=0.05):
    """``k`` positive weights summing to one, each at least ``floor / k``."""
    w = rng.dirichlet(np.ones(k))
    return (1.0 - floor) * w + floor / k


def slater_state(u, a):
    """``sum_k a_k (|u_2k>|u_2k+1> - |u_2k+1>|u_2k>) / sqrt(2)``."""
    n = u.shape[0]
    c = np.zeros((n, n), dtype=np.complex128)
    for k, ak in enumerate(a):
        x, y = u[:, 2 * k], u[:, 2 * k + 1]
        c += ak / math.sqrt(2.0) * (np.outer(x, y) - np.outer(y, x))
    return c


def schmidt_state(u, b):
    """``sum_k b_k |u_k>|u_k>``."""
    return (u[:, :len(b)] * np.asarray(b)) @ u[:, :len(b)].T


def random_fermion_coeffs(n, rng, slater_number=None):
    """Coefficient matrix of a random fermion state.

    With ``slater_number`` set, the Slater rank is exactly that, with all
    weights bounded away from zero. Otherwise a generic Gaussian
    antisymmetric matrix is drawn (full Slater rank ``n // 2``).
    """
    if slater_number is None:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c = g - g.T
    else:
        w = random_weights(slater_number, rng)
        phases = np.exp(2j * np.pi * rng.random(slater_number))
        c = slater_state(random_unitary(n, rng), np.sqrt(w) * phases)
    return c / np.linalg.norm(c)


def random_boson_coeffs(n, rng, schmidt_number=None):
    if schmidt_number is None:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c = g + g.T
    else:
        w = random_weights(schmidt_number, rng)
        c = schmidt_state(random_unitary(n, rng), np.sqrt(w))
    return c / np.linalg.norm(c)


def random_state(rng, dims=range(2, 9)):
    """A fermion or boson state with a random dimension and canonical rank.

    Returns the state and the rank it was built with (``None`` for generic).
    """
    n = int(rng.choice(list(dims)))
    if rng.random() < 0.5:
        top = n // 2
        rank = None if rng.random() < 0.25 else int(rng.integers(1, top + 1))
        c = random_fermion_coeffs(n, rng, rank)
        stats = Statistics.FERMION
    else:
        rank = None if rng.random() < 0.25 else int(rng.integers(1, n + 1))
        c = random_boson_coeffs(n, rng, rank)
        stats = Statistics.BOSON
    c = 0.5 * (c + stats.sign * c.T)
    return TwoParticleState(n, stats, c / np.linalg.norm(c)), rank


def entropy_oracle(rho):
    lam = np.linalg.eigvalsh(np.asarray(rho))
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def e_p_operator(p):
    """``P(x)(I-P) + (I-P)(x)P + P(x)P`` assembled as a ``d^2 x d^2`` matrix."""
    p = np.asarray(p, dtype=np.complex128)
    proj = np.outer(p, np.conj(p))
    eye = np.eye(p.size)
    return np.kron(proj, eye - proj) + np.kron(eye - proj, proj) + np.kron(proj, proj)


def expectation(op, psi):
    return complex(np.vdot(psi, op @ psi))


def matmul_oracle(a, b):
    """Triple-loop matrix product."""
    n, k = len(a), len(a[0])
    m = len(b[0])
    out = [[0j] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            s = 0j
            for t in range(k):
                s += a[i][t] * b[t][j]
            out[i][j] = s
    return np.array(out)
