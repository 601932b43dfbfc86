"""Unitary-congruence canonical forms of complex (anti)symmetric matrices.

``takagi`` factors a complex symmetric ``B`` as ``U diag(sigma) U^T`` and
``youla`` brings a complex antisymmetric ``A`` to ``U Z U^T`` with ``Z`` a
direct sum of ``[[0, z], [-z, 0]]`` blocks and a null block. Both start from
the Hermitian eigendecomposition of ``M M^dagger`` and then fix phases (Takagi)
or pair eigenvectors (Youla) inside each eigenvalue cluster.
"""
from dataclasses import dataclass

import numpy as np

from .errors import CertificationError, ConsistencyError, DimensionError, ValidationError
from .linalg import (
    adjoint,
    as_matrix,
    frobenius_norm,
    hermitian_eig,
    unitarity_defect,
)

FACT_TOL = 1e-10
#: eigenvalues of ``M M^dagger`` closer than this (relative to the largest) form one cluster
CLUSTER_TOL = 1e-8
#: canonical values at most this fraction of the largest one count as zero
#: when ranks (Slater/Schmidt numbers) are taken
RANK_TOL = 1e-9
#: Youla values at most this fraction of the largest are numerically zero and
#: go to the null block; anything larger is kept as a (possibly tiny) block so
#: the reconstruction stays exact
NULL_TOL = 1e-13
#: Jacobi stopping point for the internal eigenproblems; eigenvector errors
#: scale like this over the spectral gap and enter the pairing through
#: complex conjugation, so the loose default of ``hermitian_eig`` is not enough
_EIG_OFF_TOL = 1e-16
#: neighbouring eigenvalues of ``M M^dagger`` closer than this (relative to the
#: largest) are factorized together even when they are not degenerate
GROUP_TOL = 1e-4


@dataclass(frozen=True)
class TakagiResult:
    """``B = u @ diag(sigma) @ u.T`` with ``u`` unitary, ``sigma`` descending."""

    u: np.ndarray
    sigma: np.ndarray
    residual: float
    unitarity_defect: float

    def reconstruct(self):
        return (self.u * self.sigma) @ self.u.T

    def rank(self, rank_tol=RANK_TOL):
        return count_nonzero(self.sigma, rank_tol)


@dataclass(frozen=True)
class YoulaResult:
    """``A = u @ Z @ u.T`` where ``Z`` is built by :meth:`canonical_matrix`.

    Column pairs ``(u[:, 2k], u[:, 2k+1])`` carry the block with value
    ``z[k]``; the trailing ``null_dim`` columns span the kernel.
    """

    u: np.ndarray
    z: np.ndarray
    null_dim: int
    residual: float
    unitarity_defect: float

    def canonical_matrix(self):
        return youla_block_matrix(self.z, self.null_dim)

    def reconstruct(self):
        return self.u @ self.canonical_matrix() @ self.u.T

    def rank(self, rank_tol=RANK_TOL):
        """Number of blocks with a nonzero value (the Slater number for states)."""
        return count_nonzero(self.z, rank_tol)


def youla_block_matrix(z, null_dim):
    z = np.asarray(z, dtype=float)
    n = 2 * z.size + null_dim
    out = np.zeros((n, n), dtype=np.complex128)
    for k, zk in enumerate(z):
        out[2 * k, 2 * k + 1] = zk
        out[2 * k + 1, 2 * k] = -zk
    return out


def count_nonzero(values, rank_tol=RANK_TOL):
    """Count entries above ``rank_tol`` times the largest entry."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    top = float(np.max(values))
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(values > rank_tol * top))


def _clusters(eigenvalues, indices, cluster_tol, scale):
    """Split ``indices`` (descending eigenvalue order) into runs whose
    eigenvalues lie within ``cluster_tol * scale`` of the run's first member."""
    groups = []
    for i in indices:
        if groups and eigenvalues[groups[-1][0]] - eigenvalues[i] <= cluster_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _groups(eigenvalues, indices, group_tol, scale):
    """Split ``indices`` (descending order) wherever two consecutive
    eigenvalues differ by more than ``group_tol * scale``."""
    groups = []
    prev = None
    for i in indices:
        if groups and eigenvalues[prev] - eigenvalues[i] <= group_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
        prev = i
    return groups


def _hermitian_part(m):
    return 0.5 * (m + adjoint(m))


def _eig(h):
    return hermitian_eig(_hermitian_part(h), off_tol=_EIG_OFF_TOL)


def _square(m, name):
    m = as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got {m.shape}")
    return m


def _takagi_gram(s):
    """Takagi factorization of a small symmetric block by real embedding.

    For ``S = X + iY`` the real symmetric matrix ``[[X, -Y], [-Y, -X]]`` has
    eigenvalues ``+-sigma_k``; an eigenvector ``[a; b]`` for ``+sigma`` gives a
    Takagi vector ``a - i b`` with ``S conj(u) = sigma u``. Vectors are taken
    in descending eigenvalue order and kept when linearly independent of the
    ones already chosen, which sorts out the kernel of ``S``.
    """
    m = s.shape[0]
    s = 0.5 * (s + s.T)
    x, y = s.real, s.imag
    embed = np.block([[x, -y], [-y, -x]]).astype(np.complex128)
    eig = _eig(embed)
    chosen = []
    values = []
    for k in range(2 * m):
        vec = eig.eigenvectors[:, k].real
        u = vec[:m] - 1j * vec[m:]
        for prev in chosen:
            u = u - prev * np.vdot(prev, u)
        norm = np.linalg.norm(u)
        if norm < 0.5:
            continue
        chosen.append(u / norm)
        values.append(max(eig.eigenvalues[k], 0.0))
        if len(chosen) == m:
            break
    if len(chosen) != m:
        raise ConsistencyError("real embedding did not yield a full Takagi basis")
    return np.column_stack(chosen), np.array(values)


def _youla_gram(s, cut):
    """Youla form of a small antisymmetric block.

    ``x -> S conj(x)`` is real-linear; on ``[Re x; Im x]`` it acts as the real
    antisymmetric ``K = [[X, Y], [Y, -X]]`` (``S = X + iY``). An eigenvector
    ``(e + i f) / sqrt(2)`` of the Hermitian ``iK`` for ``+z`` has
    ``K e = z f``, which read back as complex vectors ``x ~ e`` and
    ``w ~ -f`` is a canonical pair with ``S conj(x) = -z w``. Each pair shows
    up twice among the positive eigenvalues; the repeat is recognized by its
    overlap with the pairs already chosen. Values at most ``cut`` are zero and
    their directions complete the basis as the null block.

    Returns
    -------
    (ndarray, ndarray, ndarray)
        Pair columns ``x_1, w_1, x_2, w_2, ...``, the block values, and the
        null columns.
    """
    m = s.shape[0]
    s = 0.5 * (s - s.T)
    x, y = s.real, s.imag
    eig = _eig(1j * np.block([[x, y], [y, -x]]))
    chosen = []
    values = []
    for k in range(2 * m):
        if 2 * len(values) >= m - 1 or eig.eigenvalues[k] <= cut:
            break
        vec = eig.eigenvectors[:, k]
        e, f = vec.real, vec.imag
        pair = []
        for part, sign in ((e, 1.0), (f, -1.0)):
            c = sign * (part[:m] + 1j * part[m:])
            for prev in chosen + pair:
                c = c - prev * np.vdot(prev, c)
            pair.append(c)
        if min(np.linalg.norm(c) for c in pair) * np.sqrt(2.0) < 0.5:
            continue
        for c in pair:
            chosen.append(c / np.linalg.norm(c))
        values.append(eig.eigenvalues[k])
    p = len(chosen)
    pairs = np.column_stack(chosen) if chosen else np.zeros((m, 0), dtype=np.complex128)
    if p == m:
        return pairs, np.array(values), np.zeros((m, 0), dtype=np.complex128)
    complement = np.eye(m) - pairs @ adjoint(pairs) if p else np.eye(m, dtype=np.complex128)
    basis = _eig(complement)
    return pairs, np.array(values), basis.eigenvectors[:, :m - p]


def _certify(kind, residual, defect, fact_tol, scale):
    bound = fact_tol * max(1.0, scale)
    if residual > bound or defect > fact_tol:
        raise CertificationError(
            f"{kind}: residual {residual:.3e}, unitarity defect {defect:.3e} "
            f"exceed tolerance {bound:.1e}")


def takagi(b, fact_tol=FACT_TOL, *, cluster_tol=CLUSTER_TOL, group_tol=GROUP_TOL):
    """Takagi factorization ``B = U diag(sigma) U^T`` of a complex symmetric matrix.

    The columns of ``U`` are eigenvectors of ``B B^dagger``. An isolated
    eigenvector only needs its phase fixed. Eigenvalues that are degenerate
    or merely close are handled together: with ``V`` spanning their
    eigenvectors, ``S = V^dagger B conj(V)`` is symmetric with
    ``B conj(V) = V S``, and the Takagi factorization of ``S`` from
    :func:`_takagi_gram` rotates ``V``. The invariant subspace is accurate
    even when the individual eigenvectors inside it are not.

    Parameters
    ----------
    b : (n, n) array_like
        Symmetric up to ``||b - b^T||_F <= fact_tol * ||b||_F``.
    fact_tol : float
        Certification bound for the reconstruction residual (scaled by
        ``max(1, ||b||_F)``) and for the unitarity defect of ``U``.
    cluster_tol, group_tol : float
        Relative gaps below which eigenvalues of ``B B^dagger`` are treated
        together; the larger of the two applies.

    Returns
    -------
    TakagiResult

    Raises
    ------
    ValidationError
        ``b`` is not symmetric.
    CertificationError
        The constructed factors miss ``fact_tol``.
    """
    b = _square(b, "b")
    n = b.shape[0]
    norm = frobenius_norm(b)
    if frobenius_norm(b - b.T) > fact_tol * norm:
        raise ValidationError("matrix is not symmetric within tolerance")
    if norm == 0.0:
        return TakagiResult(np.eye(n, dtype=np.complex128), np.zeros(n), 0.0, 0.0)
    bs = 0.5 * (b + b.T)

    eig = _eig(bs @ adjoint(bs))
    lam, vecs = eig.eigenvalues, eig.eigenvectors
    columns, sigma = [], []
    for group in _groups(lam, range(n), max(cluster_tol, group_tol), lam[0]):
        v = vecs[:, group]
        gram = adjoint(v) @ bs @ np.conj(v)
        if len(group) == 1:
            c = gram[0, 0]
            mag = abs(c)
            col = v[:, 0] * np.sqrt(c / mag) if mag > 0.0 else v[:, 0]
            columns.append(col[:, None])
            sigma.append(mag)
        else:
            q, values = _takagi_gram(gram)
            columns.append(v @ q)
            sigma.extend(values)

    u = np.hstack(columns)
    sigma = np.asarray(sigma)
    order = np.argsort(-sigma, kind="stable")
    u = np.ascontiguousarray(u[:, order])
    sigma = sigma[order]

    residual = frobenius_norm(b - (u * sigma) @ u.T)
    defect = unitarity_defect(u)
    _certify("takagi", residual, defect, fact_tol, norm)
    return TakagiResult(u, sigma, residual, defect)


def youla(a, fact_tol=FACT_TOL, *, cluster_tol=CLUSTER_TOL, null_tol=NULL_TOL,
          group_tol=GROUP_TOL):
    """Youla canonical form ``A = U Z U^T`` of a complex antisymmetric matrix.

    Eigenvectors ``v`` of ``A A^dagger`` whose image ``A conj(v)`` vanishes
    (at most ``null_tol`` times the largest) span the null block. An isolated
    eigenvalue cluster is consumed pairwise: ``x`` is the leading eigenvector
    of ``A A^dagger`` restricted to what is left of the cluster,
    ``z = ||A conj(x)||`` and ``w = -A conj(x) / z`` complete the pair
    ``(x, w)``, and ``span{x, w}`` is removed before the next step.

    Clusters closer than ``group_tol`` (relative) to a neighbour, and groups
    mixing null and non-null directions, are handled together through the
    block ``Q^dagger A conj(Q)`` and :func:`_youla_gram`. There the individual
    eigenvectors of ``A A^dagger`` are not reliable (tiny singular values are
    squared below rounding level), but their span is.

    Small nonzero values are kept as blocks; ranks are decided afterwards
    by :meth:`YoulaResult.rank`.

    Raises
    ------
    ValidationError
        ``a`` is not antisymmetric.
    ConsistencyError
        A nonzero singular value appears with odd multiplicity.
    CertificationError
        The constructed factors miss ``fact_tol``.
    """
    a = _square(a, "a")
    n = a.shape[0]
    norm = frobenius_norm(a)
    if frobenius_norm(a + a.T) > fact_tol * norm:
        raise ValidationError("matrix is not antisymmetric within tolerance")
    if norm == 0.0:
        return YoulaResult(np.eye(n, dtype=np.complex128), np.zeros(0), n, 0.0, 0.0)
    aa = 0.5 * (a - a.T)

    h = _hermitian_part(aa @ adjoint(aa))
    eig = _eig(h)
    lam, vecs = eig.eigenvalues, eig.eigenvectors
    images = np.linalg.norm(aa @ np.conj(vecs), axis=0)
    cut = null_tol * images.max()
    live = images > cut

    blocks = []
    null_columns = []
    for group in _groups(lam, range(n), max(cluster_tol, group_tol), lam[0]):
        q = vecs[:, group]
        single = len(_clusters(lam, group, cluster_tol, lam[0])) == 1
        if single and not live[group].any():
            null_columns.extend(q.T)
            continue
        # a cluster within cluster_tol of zero cannot be told apart from it
        separated = lam[group[-1]] > cluster_tol * lam[0]
        if not (single and separated and live[group].all()):
            cols, values, nulls = _youla_gram(adjoint(q) @ aa @ np.conj(q), cut)
            cols = q @ cols
            blocks.extend((float(values[k]), cols[:, 2 * k], cols[:, 2 * k + 1])
                          for k in range(values.size))
            null_columns.extend((q @ nulls).T)
            continue
        if len(group) % 2:
            raise ConsistencyError(
                f"singular value {np.sqrt(max(lam[group[0]], 0.0)):.6g} of an "
                f"antisymmetric matrix has odd multiplicity {len(group)}")
        while True:
            local = _eig(adjoint(q) @ h @ q)
            x = q @ local.eigenvectors[:, 0]
            y = aa @ np.conj(x)
            z = float(np.linalg.norm(y))
            # exact arithmetic keeps -y/z inside span(q) and orthogonal to x;
            # enforce both so that rounding of order eps*||A||/z does not leak
            w = q @ (adjoint(q) @ (-y / z))
            w = w - x * np.vdot(x, w)
            w = w / np.linalg.norm(w)
            blocks.append((z, x, w))
            k = q.shape[1] - 2
            if k == 0:
                break
            rest = q - np.outer(x, np.conj(x) @ q) - np.outer(w, np.conj(w) @ q)
            basis = _eig(adjoint(rest) @ rest)
            q = (rest @ basis.eigenvectors[:, :k]) / np.sqrt(basis.eigenvalues[:k])

    blocks.sort(key=lambda blk: -blk[0])
    columns = []
    for _, x, w in blocks:
        columns.extend((x, w))
    columns.extend(null_columns)
    u = np.column_stack(columns)
    z = np.array([blk[0] for blk in blocks])
    null_dim = len(null_columns)

    residual = frobenius_norm(a - u @ youla_block_matrix(z, null_dim) @ u.T)
    defect = unitarity_defect(u)
    _certify("youla", residual, defect, fact_tol, norm)
    return YoulaResult(u, z, null_dim, residual, defect)
