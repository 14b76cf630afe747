"""Brute-force Moore-Penrose oracle built on a one-sided Jacobi SVD.

Nothing here knows about measure spaces or weights; the closed-form
reciprocals in :mod:`wco_reciprocal.reciprocal` are checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import DEFAULT_TOL, VerificationReport

EPS = np.finfo(float).eps
DEFAULT_RANK_TOL = 1e-10
MAX_DIM = 4096


class SvdConvergenceError(RuntimeError):
    def __init__(self, sweeps: int, residual: float):
        super().__init__(f"Jacobi SVD did not converge after {sweeps} sweeps (off-diagonal {residual:.3e})")
        self.sweeps = sweeps
        self.residual = residual


@dataclass(frozen=True)
class SvdResult:
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u, s, v = self.left_vectors, self.singular_values, self.right_vectors
        k = s.size
        return (u[:, :k] * s) @ v[:, :k].conj().T


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings of 0..n-1 into rounds of disjoint pairs covering every pair once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_tall(a: np.ndarray, max_sweeps: int | None) -> SvdResult:
    m, n = a.shape
    work = a.astype(complex, copy=True)
    v = np.eye(n, dtype=complex)
    cap = 10 * n * n if max_sweeps is None else max_sweeps
    rounds = _round_robin(n)
    threshold = max(1.0, np.sqrt(m)) * EPS
    # columns below this squared norm only carry rounding noise
    negligible = (EPS * float(np.linalg.norm(work))) ** 2
    off = 0.0
    converged = n < 2
    sweeps = 0
    while not converged and sweeps < cap:
        sweeps += 1
        off = 0.0
        rotated = False
        for p, q in rounds:
            ap, aq = work[:, p], work[:, q]
            alpha = np.sum(np.abs(ap) ** 2, axis=0)
            beta = np.sum(np.abs(aq) ** 2, axis=0)
            gamma = np.sum(ap.conj() * aq, axis=0)
            g = np.abs(gamma)
            scale = np.sqrt(alpha * beta)
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.where(scale > 0, g / scale, 0.0)
            off = max(off, float(rel.max(initial=0.0)))
            act = (rel > threshold) & (np.minimum(alpha, beta) > negligible)
            if not np.any(act):
                continue
            rotated = True
            p, q = p[act], q[act]
            alpha, beta, gamma, g = alpha[act], beta[act], gamma[act], g[act]
            phase = gamma / g
            zeta = (beta - alpha) / (2.0 * g)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for mat in (work, v):
                xp = mat[:, p]
                xq = mat[:, q] * phase.conj()
                mat[:, p] = c * xp - s * xq
                mat[:, q] = s * xp + c * xq
        converged = not rotated
    if not converged:
        raise SvdConvergenceError(sweeps, off)

    sigma = np.sqrt(np.sum(np.abs(work) ** 2, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma, work, v = sigma[order], work[:, order], v[:, order]
    smax = sigma[0] if sigma.size else 0.0
    good = sigma > max(m, n) * EPS * smax if smax > 0 else np.zeros(n, dtype=bool)
    k = int(np.count_nonzero(good))
    u = np.zeros((m, m), dtype=complex)
    u[:, :k] = work[:, :k] / sigma[:k]
    if k < m:
        # complete to a unitary basis; the complement only multiplies (near-)zero values
        q_full, _ = np.linalg.qr(np.hstack([u[:, :k], np.eye(m, dtype=complex)]))
        u[:, k:] = q_full[:, k:m]
    return SvdResult(u, sigma, v)


def svd(matrix, max_sweeps: int | None = None) -> SvdResult:
    """Singular value decomposition ``A = U diag(s) V*`` by one-sided Jacobi.

    Singular values come back nonincreasing.  ``max_sweeps`` defaults to
    ``10 n^2``; exceeding it raises :class:`SvdConvergenceError`.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2:
        raise ValueError("svd expects a 2-d matrix")
    if max(a.shape) > MAX_DIM:
        raise ValueError(f"matrix dimension capped at {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    m, n = a.shape
    if m >= n:
        return _jacobi_tall(a, max_sweeps)
    res = _jacobi_tall(a.conj().T, max_sweeps)
    return SvdResult(res.right_vectors, res.singular_values, res.left_vectors)


def pseudoinverse(matrix, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """A^+ = V diag(1/s) U*, dropping singular values at or below rank_tol * s_max."""
    res = svd(matrix)
    s = res.singular_values
    smax = s[0] if s.size else 0.0
    keep = s > rank_tol * smax if smax > 0 else np.zeros(s.size, dtype=bool)
    u = res.left_vectors[:, : s.size][:, keep]
    v = res.right_vectors[:, : s.size][:, keep]
    return (v / s[keep]) @ u.conj().T


def rank(matrix, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    s = svd(matrix).singular_values
    if not s.size or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))


def range_projector(matrix, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projector onto ran A, as A A^+."""
    a = np.asarray(matrix, dtype=complex)
    return a @ pseudoinverse(a, rank_tol)


def relative_residual(diff: np.ndarray, reference: np.ndarray) -> float:
    """||diff||_F / ||reference||_F, or the plain norm when the reference is zero."""
    r = float(np.linalg.norm(diff))
    scale = float(np.linalg.norm(reference))
    return r / scale if scale > 0 else r


def penrose_report(a, b, tol: float = DEFAULT_TOL, scenario_id: str = "penrose") -> VerificationReport:
    """Residuals of the four Penrose equations for the candidate inverse ``b`` of ``a``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.shape != a.shape[::-1]:
        raise ValueError(f"shapes {a.shape} and {b.shape} are not compatible")
    ab, ba = a @ b, b @ a
    rep = VerificationReport(scenario_id)
    rep.add("penrose_aba_eq_a", relative_residual(ab @ a - a, a), tol)
    rep.add("penrose_bab_eq_b", relative_residual(ba @ b - b, b), tol)
    rep.add("penrose_ab_hermitian", relative_residual(ab.conj().T - ab, ab), tol)
    rep.add("penrose_ba_hermitian", relative_residual(ba.conj().T - ba, ba), tol)
    return rep
