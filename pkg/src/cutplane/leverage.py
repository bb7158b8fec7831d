"""Randomized leverage machinery: JL-sketched scores and the unbiased
estimator for the change in leverage between two row weightings.

Sketch entries are +-1/sqrt(k).  Everything is a pure function of
(inputs, seed) so repeated calls with the same seed are bitwise identical.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated
from .linalg import cholesky_jittered

_U_CAP = 60  # 2**u overflows usefulness long before float64 does


@dataclass(frozen=True)
class SketchConfig:
    eps: float = 0.1
    rows_constant: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.eps <= 0.5):
            raise PreconditionViolated("sketch eps must be in (0, 0.5]")
        if self.rows_constant < 1:
            raise PreconditionViolated("rows_constant must be >= 1")

    def num_rows(self, m):
        return int(np.ceil(self.rows_constant * self.eps ** -2 * np.log(max(m, 2))))


def _jl(rng, k, m):
    """k x m sketch with entries +-1/sqrt(k)."""
    return (rng.integers(0, 2, size=(k, m)) * 2.0 - 1.0) / np.sqrt(k)


def sketch_leverage(A, s, lam, cfg):
    """Approximate regularized leverage scores.

    psi_i = b_i^T G^-1 (B^T B + lam I) G^-1 b_i with b_i = a_i / s_i and
    G = B^T B + lam I, so each score splits into two squared norms that a
    JL sketch estimates separately.
    """
    A = np.asarray(A, dtype=float)
    s = np.asarray(s, dtype=float)
    m, n = A.shape
    B = A / s[:, None]
    G = B.T @ B + lam * np.eye(n)
    L, _ = cholesky_jittered(G)
    # G^-1 b_i for all rows at once
    Ginv_Bt = np.linalg.solve(L.T, np.linalg.solve(L, B.T))  # n x m

    rng = np.random.default_rng(cfg.seed)
    k = cfg.num_rows(m)
    Q1 = _jl(rng, k, m)
    T1 = (Q1 @ B) @ Ginv_Bt  # k x m
    tau = np.einsum("ij,ij->j", T1, T1)
    if lam > 0:
        Q2 = _jl(rng, k, n)
        T2 = Q2 @ Ginv_Bt
        tau = tau + lam * np.einsum("ij,ij->j", T2, T2)
    return tau


@dataclass(frozen=True)
class LeverageChangeQuery:
    A: np.ndarray
    v: np.ndarray
    w: np.ndarray
    eps: float
    seed: int = 0

    @property
    def alpha(self):
        return float(np.linalg.norm((self.v - self.w) / self.v))

    def validate(self):
        if self.alpha > 0.1 + 1e-12:
            raise PreconditionViolated(
                "||V^-1 (v - w)||_2 = %g exceeds 1/10" % self.alpha
            )
        if not (0.0 < self.eps < 0.5):
            raise PreconditionViolated("eps must be in (0, 0.5)")


def _col_sq_norms(M):
    return np.einsum("ij,ij->j", M, M)


def leverage_change(q):
    """Unbiased estimate of sigma(w) - sigma(v) for row weightings v, w.

    sigma(v)_i = v_i a_i^T (A^T V A)^-1 a_i.  The direct term uses the w
    weighting; the correction is a truncated Neumann series in
    A^T (V - W) A with a geometric tail index u making the truncation
    unbiased (the 2^u reweighting cancels Pr[u] = 2^-u).
    """
    q.validate()
    A = np.asarray(q.A, dtype=float)
    v = np.asarray(q.v, dtype=float)
    w = np.asarray(q.w, dtype=float)
    m, n = A.shape
    rng = np.random.default_rng(q.seed)

    k = int(np.ceil(4.0 * q.eps ** -2 * np.log(max(m, 2))))
    t = int(np.ceil(2.0 * np.log2(1.0 / q.eps)))

    AtWA = A.T @ (w[:, None] * A)
    AtVA = A.T @ (v[:, None] * A)
    AtDA = A.T @ ((v - w)[:, None] * A)
    Lw, _ = cholesky_jittered(AtWA)
    Lv, _ = cholesky_jittered(AtVA)

    def solve_w(X):
        return np.linalg.solve(Lw.T, np.linalg.solve(Lw, X))

    def solve_v(X):
        return np.linalg.solve(Lv.T, np.linalg.solve(Lv, X))

    # direct term: d_i = a_i^T (A^T W A)^-1 a_i, sketched
    Qd = _jl(rng, k, m)
    d_hat = _col_sq_norms((Qd @ (np.sqrt(w)[:, None] * A)) @ solve_w(A.T))

    Qf = _jl(rng, k, m)
    # geometric tail index, capped; a cap hit is recorded as a resample
    u = int(rng.geometric(0.5))
    while u > _U_CAP:
        u = int(rng.geometric(0.5))

    dpos = np.maximum(v - w, 0.0)
    dneg = np.maximum(w - v, 0.0)
    QfVA = Qf @ (np.sqrt(v)[:, None] * A)
    QfPA = Qf @ (np.sqrt(dpos)[:, None] * A)
    QfNA = Qf @ (np.sqrt(dneg)[:, None] * A)

    # S_p = [(A^T V A)^-1 A^T Delta A]^p (A^T V A)^-1 A^T, built iteratively
    S = solve_v(A.T)
    max_pow = (t + u) // 2
    powers = {0: S}
    for p in range(1, max_pow + 1):
        S = solve_v(AtDA @ S)
        powers[p] = S

    f_hat = np.zeros(m)
    for j in list(range(1, t + 1)) + [t + u]:
        if j % 2 == 0:
            term = _col_sq_norms(QfVA @ powers[j // 2])
        else:
            Sp = powers[(j - 1) // 2]
            term = _col_sq_norms(QfPA @ Sp) - _col_sq_norms(QfNA @ Sp)
        if j == t + u:
            f_hat += (2.0 ** u) * term
        else:
            f_hat += term

    return (w - v) * d_hat + v * f_hat


def sigma_exact(A, v):
    """sigma(v)_i = v_i a_i^T (A^T V A)^-1 a_i, the test-side reference."""
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    G = A.T @ (v[:, None] * A)
    L, _ = cholesky_jittered(G)
    W = np.linalg.solve(L, A.T)
    return v * np.einsum("ij,ij->j", W, W)
