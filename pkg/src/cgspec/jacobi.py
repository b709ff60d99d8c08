"""Eigenvalues of dense real symmetric matrices by Jacobi rotations.

Each sweep visits every off-diagonal pair once using the round-robin
(tournament) ordering: ``n - 1`` rounds of ``n // 2`` disjoint pairs.  The
rotations of one round commute, so a round is applied as a single
vectorized row update followed by a column update.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence

DEFAULT_TOL = 1e-9
DEFAULT_SWEEPS = 100
# pairs already this far below the tolerance are left alone within a sweep
SKIP_FRACTION = 1e-2


def round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint-pair schedule covering every pair ``p < q`` exactly once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def off_diagonal_max(A: np.ndarray) -> float:
    if A.shape[0] < 2:
        return 0.0
    off = np.abs(A - np.diag(np.diag(A)))
    return float(off.max())


def numeric_spectrum(L, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_SWEEPS) -> list[float]:
    """All eigenvalues of the symmetric matrix ``L``, ascending.

    Iterates until every off-diagonal entry is below ``tol`` in magnitude.
    """
    A = np.array(getattr(L, "entries", L), dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=0):
        raise ValueError("matrix must be symmetric")
    schedule = round_robin(n)
    for _ in range(max_sweeps):
        if off_diagonal_max(A) < tol:
            return sorted(float(x) for x in np.diag(A))
        for p, q in schedule:
            _rotate(A, p, q, tol * SKIP_FRACTION)
    if off_diagonal_max(A) < tol:
        return sorted(float(x) for x in np.diag(A))
    raise NoConvergence(f"off-diagonal mass still {off_diagonal_max(A):.3e} after {max_sweeps} sweeps")


def _rotate(A: np.ndarray, p: np.ndarray, q: np.ndarray, skip: float) -> None:
    apq = A[p, q]
    active = np.abs(apq) > skip
    if not active.any():
        return
    p, q, apq = p[active], q[active], apq[active]
    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
    t = np.where(theta < 0.0, -1.0, 1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c

    rp, rq = A[p, :].copy(), A[q, :].copy()
    A[p, :] = c[:, None] * rp - s[:, None] * rq
    A[q, :] = s[:, None] * rp + c[:, None] * rq
    cp, cq = A[:, p].copy(), A[:, q].copy()
    A[:, p] = cp * c - cq * s
    A[:, q] = cp * s + cq * c
    A[p, q] = 0.0
    A[q, p] = 0.0
