"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` complex arrays. The eigensolver is written
out here rather than delegated to LAPACK so that every spectrum used by the
library comes from one deterministic, inspectable routine.

The sweep uses the round-robin (tournament) ordering: each sweep visits
every off-diagonal pair exactly once, grouped into ``n - 1`` rounds of
disjoint pairs. Rotations inside a round commute, so a whole round is
applied with vectorised row/column updates.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import NoConvergence, NotHermitian

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-12
RESIDUAL_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with big-endian index ordering.

    Entry ``[i*b.rows + k, j*b.cols + l]`` equals ``a[i, j] * b[k, l]``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def tensor_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = tensor_product(out, m)
    return out


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Partition all pairs of ``range(n)`` into rounds of disjoint pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            p, q = players[i], players[size - 1 - i]
            if p < 0 or q < 0:
                continue
            ps.append(min(p, q))
            qs.append(max(p, q))
        rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate_rows(m: np.ndarray, p, q, c, gpq, gqp) -> None:
    """In place ``m <- G^H m`` for the block rotation on rows ``p``/``q``."""
    row_p = m[p, :]
    row_q = m[q, :]
    m[p, :] = c[:, None] * row_p + gqp.conj()[:, None] * row_q
    m[q, :] = gpq.conj()[:, None] * row_p + c[:, None] * row_q


def _jacobi_round(a: np.ndarray, wh: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Apply one round of disjoint rotations; returns the rotated matrix.

    ``wh`` accumulates ``V^H`` so that only row updates are needed; for a
    Hermitian ``a`` the two-sided update is ``G^H (G^H a)^H``.
    """
    apq = a[p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    if not np.any(active):
        return a
    p, q, apq, mag = p[active], q[active], apq[active], mag[active]
    app = a[p, p].real
    aqq = a[q, q].real
    theta = (aqq - app) / (2.0 * mag)
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    # |theta| large: t ~ 1/(2 theta), avoids overflow of theta**2
    big = np.abs(theta) > 1e150
    safe = np.where(big, 0.0, theta)
    t = np.where(big, 0.5 / np.where(big, theta, 1.0), sign / (np.abs(safe) + np.sqrt(safe * safe + 1.0)))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    phase = apq / mag
    # 2x2 block [[c, s e^{i phi}], [-s e^{-i phi}, c]]
    gpq = s * phase
    gqp = -s * phase.conj()

    _rotate_rows(wh, p, q, c, gpq, gqp)
    _rotate_rows(a, p, q, c, gpq, gqp)
    a = np.ascontiguousarray(a.conj().T)
    _rotate_rows(a, p, q, c, gpq, gqp)
    a[p, q] = 0.0
    a[q, p] = 0.0
    return a


def _canonical_order(w: np.ndarray, v: np.ndarray, scale: float):
    """Ascending eigenvalues; ties broken by the first differing eigenvector
    magnitude (larger first). Each eigenvector gets a fixed global phase."""
    n = len(w)
    mags = np.abs(v)
    for j in range(n):
        lead = int(np.argmax(mags[:, j] > 1e-8))
        ph = v[lead, j] / abs(v[lead, j])
        v[:, j] = v[:, j] / ph
    order = list(np.argsort(w, kind="stable"))
    tie = 1e-10 * max(scale, 1.0)
    out: list[int] = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and w[order[j]] - w[order[j - 1]] <= tie:
            j += 1
        cluster = order[i:j]
        if len(cluster) > 1:
            cluster.sort(key=lambda k: tuple(-np.round(mags[:, k], 9)))
        out.extend(cluster)
        i = j
    idx = np.array(out, dtype=int)
    return w[idx], v[:, idx]


def _range_basis(m: np.ndarray, max_rank: int, rtol: float = 1e-13):
    """Orthonormal basis of the column space of ``m`` by pivoted modified
    Gram-Schmidt (with one reorthogonalisation pass per vector).

    Returns ``None`` when the numerical rank exceeds ``max_rank``.
    """
    x = m.copy()
    norms2 = np.sum(np.abs(x) ** 2, axis=0)
    drop = (rtol * max(float(np.sqrt(norms2.sum())), 1e-300)) ** 2
    basis: list[np.ndarray] = []
    while True:
        j = int(np.argmax(norms2))
        if norms2[j] <= drop:
            break
        if len(basis) == max_rank:
            return None
        q = x[:, j] / np.sqrt(norms2[j])
        if basis:
            qm = np.stack(basis, axis=1)
            q = q - qm @ (qm.conj().T @ q)
            q = q / np.linalg.norm(q)
        x -= np.outer(q, q.conj() @ x)
        norms2 = np.sum(np.abs(x) ** 2, axis=0)
        basis.append(q)
    n = m.shape[0]
    if not basis:
        return np.zeros((n, 0), dtype=np.complex128)
    return np.stack(basis, axis=1)


def _complete_basis(q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``range(q)``."""
    n, r = q.shape
    proj = np.eye(n, dtype=np.complex128) - q @ q.conj().T
    comp = _range_basis(proj, n - r, rtol=1e-8)
    if comp is None or comp.shape[1] != n - r:
        raise NoConvergence("could not complete the null-space basis")
    # one more pass against q to scrub residual overlap
    comp = comp - q @ (q.conj().T @ comp)
    for j in range(comp.shape[1]):
        if j:
            comp[:, j] -= comp[:, :j] @ (comp[:, :j].conj().T @ comp[:, j])
        comp[:, j] /= np.linalg.norm(comp[:, j])
    return comp


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    wh = np.eye(n, dtype=np.complex128)
    target = OFF_DIAGONAL_RTOL * float(np.linalg.norm(a))
    rounds = _round_robin(n)
    off = _off_norm(a)
    sweeps = 0
    while off > target:
        if sweeps == MAX_SWEEPS:
            raise NoConvergence(f"off-diagonal norm {off:.3e} after {MAX_SWEEPS} sweeps")
        for p, q in rounds:
            a = _jacobi_round(a, wh, p, q)
        off = _off_norm(a)
        sweeps += 1
    return np.diag(a).real.copy(), wh.conj().T.copy()


# matrices at least this large are first compressed onto their range
REDUCE_MIN_DIM = 8


def _check(m, tol: float) -> np.ndarray:
    m = as_matrix(m)
    n, k = m.shape
    if n != k:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"max |m - m^H| = {err:.3e} exceeds tol {tol:.1e}")
    return m


def _spectral(a: np.ndarray, vectors: bool):
    n = a.shape[0]
    q = _range_basis(a, n // 2) if n >= REDUCE_MIN_DIM else None
    if q is None:
        return _jacobi(a)
    r = q.shape[1]
    b = q.conj().T @ a @ q
    b = 0.5 * (b + b.conj().T)
    w_r, y = _jacobi(b) if r else (np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    w = np.concatenate([w_r, np.zeros(n - r)])
    if not vectors:
        return w, None
    v = np.concatenate([q @ y, _complete_basis(q)], axis=1)
    return w, v


def hermitian_eig(m, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Large low-rank inputs are first compressed to ``Q^H m Q`` on an
    orthonormal basis ``Q`` of their range; the rotations then act on the
    small compressed block and the null space contributes exact zeros.

    Args:
        m: square complex matrix, Hermitian within ``tol``.
        tol: largest allowed ``|m - m^H|`` entry.

    Returns:
        ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
        eigenvectors as the columns of a unitary matrix, so that
        ``m @ V == V @ diag(eigenvalues)``.

    Raises:
        NotHermitian: if ``m`` is not square or not Hermitian within ``tol``.
        NoConvergence: if 100 sweeps do not reduce the off-diagonal norm to
            ``1e-12 * ||m||_F`` or the reconstruction residual exceeds 1e-10.
    """
    m = _check(m, tol)
    n = m.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    a = 0.5 * (m + m.conj().T)
    scale = float(np.linalg.norm(a))
    w, v = _spectral(a, vectors=True)
    w, v = _canonical_order(w, v, scale)
    resid = float(np.max(np.abs(m @ v - v * w)))
    if resid > RESIDUAL_TOL * max(scale, 1.0):
        raise NoConvergence(f"reconstruction residual {resid:.3e}")
    return w, v


def hermitian_eigvals(m, tol: float = 1e-9) -> np.ndarray:
    """Ascending eigenvalues only.

    A 2x2 block is diagonalised by exactly one Jacobi rotation, whose
    result has the closed form used here. Larger matrices share the
    rotation sweep of :func:`hermitian_eig` but skip eigenvector
    bookkeeping for the null space.
    """
    m = _check(m, tol)
    if m.shape == (2, 2):
        a, d = m[0, 0].real, m[1, 1].real
        b = 0.5 * (m[0, 1] + m[1, 0].conjugate())
        mean = 0.5 * (a + d)
        rad = math.hypot(0.5 * (a - d), abs(b))
        return np.array([mean - rad, mean + rad])
    if m.shape[0] == 0:
        return np.zeros(0)
    w, _ = _spectral(0.5 * (m + m.conj().T), vectors=False)
    return np.sort(w)
