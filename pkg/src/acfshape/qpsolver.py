"""Small dense convex solvers for pulse design, built on numpy.

Two problem shapes are covered, both with box-interval linear constraints
lo <= M x <= up:

  solve_box_qp        minimize 1/2 x^T P x + q^T x
  solve_minimax       minimize max_k |A_k x + b_k|^2   (complex rows A_k)

Both use scaled-dual ADMM with a single factorization of the normal
matrix.  They are meant for the modest sizes that arise here (tens to a
few hundred variables), where running many cheap iterations to tight
residuals is no burden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QpResult", "MinimaxResult", "solve_box_qp", "solve_minimax"]


@dataclass(frozen=True)
class QpResult:
    x: np.ndarray
    y: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool


@dataclass(frozen=True)
class MinimaxResult:
    x: np.ndarray
    value: float
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool


def solve_box_qp(
    p_mat: np.ndarray,
    q: np.ndarray,
    m_mat: np.ndarray,
    lo: np.ndarray,
    up: np.ndarray,
    *,
    x0: np.ndarray | None = None,
    eps: float = 1e-11,
    max_iter: int = 200_000,
    sigma: float = 1e-6,
    relax: float = 1.6,
) -> QpResult:
    """ADMM for a box-constrained QP, following the operator-splitting
    scheme popularized by OSQP: alternate a regularized equality solve
    with a clip onto the constraint interval, plus over-relaxation and
    occasional penalty rescaling."""
    n = q.size
    rows = m_mat.shape[0]
    if lo.shape != (rows,) or up.shape != (rows,):
        raise ValueError("constraint bounds do not match the matrix rows")
    if np.any(lo > up):
        raise ValueError("constraint interval is empty (lo > up)")
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    z = m_mat @ x
    y = np.zeros(rows)
    rho = 0.1

    def factor(rho_val):
        kkt = p_mat + sigma * np.eye(n) + rho_val * (m_mat.T @ m_mat)
        return kkt, np.linalg.inv(kkt)

    kkt, kkt_inv = factor(rho)
    r_prim = r_dual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        rhs = sigma * x - q + m_mat.T @ (rho * z - y)
        x_half = kkt_inv @ rhs
        # one refinement step keeps the cached inverse honest
        x_half += kkt_inv @ (rhs - kkt @ x_half)
        z_half = m_mat @ x_half
        x = relax * x_half + (1.0 - relax) * x
        z_relaxed = relax * z_half + (1.0 - relax) * z
        z = np.clip(z_relaxed + y / rho, lo, up)
        y = y + rho * (z_relaxed - z)
        if it % 50 == 0 or it == max_iter:
            r_prim = np.abs(m_mat @ x - z).max(initial=0.0)
            r_dual = np.abs(p_mat @ x + q + m_mat.T @ y).max(initial=0.0)
            if r_prim < eps and r_dual < eps:
                return QpResult(x, y, it, r_prim, r_dual, True)
            if it % 2000 == 0 and r_dual > 0:
                scale = np.sqrt(r_prim / r_dual)
                if scale > 5.0 or scale < 0.2:
                    rho = float(np.clip(rho * scale, 1e-6, 1e6))
                    kkt, kkt_inv = factor(rho)
    return QpResult(x, y, it, r_prim, r_dual, False)


def _project_paraboloid(z_re: np.ndarray, z_im: np.ndarray, s: np.ndarray):
    """Euclidean projection of points onto {(z, s): |z|^2 <= s}.

    Points already inside stay put.  For the rest the projection lands on
    the boundary s = r^2 with the phase of z preserved, and the radius is
    the unique nonnegative root of 2 r^3 + (1 - 2 s0) r - r0 = 0, found
    by bisection (the derivative of the squared distance along the
    boundary has a single sign change there).
    """
    r0 = np.hypot(z_re, z_im)
    inside = r0**2 <= s
    lo = np.zeros_like(r0)
    hi = np.maximum(r0, np.sqrt(np.maximum(s, 0.0))) + 1.0
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        val = 2.0 * mid**3 + (1.0 - 2.0 * s) * mid - r0
        lo = np.where(val < 0.0, mid, lo)
        hi = np.where(val < 0.0, hi, mid)
    r = 0.5 * (lo + hi)
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = np.where(r0 > 0.0, r / np.where(r0 > 0.0, r0, 1.0), 0.0)
    out_re = np.where(inside, z_re, z_re * scale)
    out_im = np.where(inside, z_im, z_im * scale)
    out_s = np.where(inside, s, r**2)
    return out_re, out_im, out_s


def solve_minimax(
    a_rows: np.ndarray,
    b: np.ndarray,
    m_mat: np.ndarray,
    lo: np.ndarray,
    up: np.ndarray,
    *,
    x0: np.ndarray | None = None,
    eps: float = 1e-10,
    max_iter: int = 400_000,
    sigma: float = 1e-9,
) -> MinimaxResult:
    """ADMM for min_x max_k |a_k^T x + b_k|^2 with lo <= M x <= up.

    Epigraph form: minimize t subject to every squared magnitude lying
    below t.  Each magnitude/level pair gets a consensus copy projected
    onto the paraboloid, the linear constraints get a clipped copy, and
    the x update is a single cached least-squares solve.
    """
    a_rows = np.asarray(a_rows, dtype=complex)
    k, n = a_rows.shape
    ar = np.vstack([a_rows.real, a_rows.imag])  # (2k, n) stacked real rows
    br = np.concatenate([b.real, b.imag])
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    img = ar @ x + br
    t = float(np.max(img[:k] ** 2 + img[k:] ** 2))
    z_lin = m_mat @ x
    z = img.copy()
    s = np.full(k, t)
    u_lin = np.zeros(m_mat.shape[0])
    u = np.zeros(2 * k)
    v = np.zeros(k)
    rho = 1.0

    gram = m_mat.T @ m_mat + ar.T @ ar + sigma * np.eye(n)
    gram_inv = np.linalg.inv(gram)
    r_prim = r_dual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        rhs = m_mat.T @ (z_lin - u_lin) + ar.T @ (z - u - br)
        x = gram_inv @ rhs
        x += gram_inv @ (rhs - gram @ x)
        t = float(np.mean(s - v)) - 1.0 / (rho * k)
        lin_img = m_mat @ x
        img = ar @ x + br
        z_lin_prev, z_prev, s_prev = z_lin, z, s
        z_lin = np.clip(lin_img + u_lin, lo, up)
        zr, zi, s = _project_paraboloid(
            img[:k] + u[:k], img[k:] + u[k:], t + v
        )
        z = np.concatenate([zr, zi])
        u_lin = u_lin + lin_img - z_lin
        u = u + img - z
        v = v + t - s
        if it % 50 == 0 or it == max_iter:
            r_prim = max(
                np.abs(lin_img - z_lin).max(initial=0.0),
                np.abs(img - z).max(initial=0.0),
                np.abs(t - s).max(initial=0.0),
            )
            r_dual = rho * max(
                np.abs(z_lin - z_lin_prev).max(initial=0.0),
                np.abs(z - z_prev).max(initial=0.0),
                np.abs(s - s_prev).max(initial=0.0),
            )
            if r_prim < eps and r_dual < eps:
                break
    img = ar @ x + br
    value = float(np.max(img[:k] ** 2 + img[k:] ** 2))
    done = r_prim < eps and r_dual < eps
    return MinimaxResult(x, value, it, r_prim, r_dual, done)
