"""Brute-force reference solver for the soft-margin SVM dual.

Projected-gradient ascent with exact line search on the box-constrained dual;
the single equality constraint is handled by exact projection (bisection on
its multiplier). Deliberately simple, deterministic, and fully independent of
the SMO trainer so the two can be cross-checked on small problems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, OracleError, SizeLimitError
from .kernels import Kernel

MAX_ORACLE_SIZE = 12


@dataclass
class DualSolution:
    """Solution of the dual problem: full-length multipliers, objective, bias."""

    alphas: np.ndarray
    objective: float
    bias: float


def _project_box_hyperplane(v: np.ndarray, y: np.ndarray, c: float) -> np.ndarray:
    """Euclidean projection of v onto {a : 0 <= a <= c, y . a = 0}.

    The projection is clip(v - lam * y, 0, c) for the multiplier lam solving
    g(lam) = y . clip(v - lam * y, 0, c) = 0. g is piecewise linear and
    nonincreasing with breakpoints where coordinates enter or leave the box,
    so the root is found exactly by bracketing it between breakpoints and
    interpolating on the linear segment.
    """
    breakpoints = np.sort(np.concatenate([y * v, y * (v - c)]))
    values = y @ np.clip(v[np.newaxis, :] - np.outer(breakpoints, y), 0.0, c).T
    above = np.flatnonzero(values > 0.0)
    below = np.flatnonzero(values <= 0.0)
    if above.size == 0:
        lam = breakpoints[0]
    elif below.size == 0:
        lam = breakpoints[-1]
    else:
        i, j = above[-1], below[0]
        g_lo, g_hi = values[i], values[j]
        if g_hi == g_lo:
            lam = breakpoints[i]
        else:
            lam = breakpoints[i] + g_lo * (breakpoints[j] - breakpoints[i]) / (g_lo - g_hi)
    return np.clip(v - lam * y, 0.0, c)


def _bias_from_multipliers(K: np.ndarray, y: np.ndarray, alphas: np.ndarray, c: float, eps: float = 1e-8) -> float:
    """Bias as the mean over free vectors; midpoint of the feasible interval otherwise."""
    g = (alphas * y) @ K
    resid = y - g
    free = (alphas > eps) & (alphas < c - eps)
    if free.any():
        return float(resid[free].mean())
    at_zero = alphas <= eps
    at_c = alphas >= c - eps
    pos = y > 0
    lower = resid[(at_zero & pos) | (at_c & ~pos)]
    upper = resid[(at_zero & ~pos) | (at_c & pos)]
    if lower.size and upper.size:
        return float(0.5 * (lower.max() + upper.min()))
    if lower.size:
        return float(lower.max())
    return float(upper.min())


def solve_dual_qp(X, y, kernel: Kernel, c: float, *, max_iter: int = 50_000, tol: float = 1e-12) -> DualSolution:
    """Solve the dual of the soft-margin problem by projected-gradient ascent.

    Accepts at most MAX_ORACLE_SIZE samples; this is a dense reference solver,
    not a trainer. Raises OracleError if the iterate has not become stationary
    within ``max_iter`` steps.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise InvalidInputError(f"inconsistent shapes: X {X.shape}, y {y.shape}")
    m = X.shape[0]
    if m > MAX_ORACLE_SIZE:
        raise SizeLimitError(f"reference solver accepts at most {MAX_ORACLE_SIZE} samples, got {m}")
    if not c > 0:
        raise InvalidInputError(f"penalty must be > 0, got {c}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise InvalidInputError("labels must be -1 or +1")

    K = kernel.matrix(X)
    Q = (y[:, np.newaxis] * y[np.newaxis, :]) * K
    lam_max = float(np.max(np.linalg.eigvalsh(Q))) if m else 0.0
    step = 1.0 / max(lam_max, 1e-12)

    def objective_at(a):
        return float(a.sum() - 0.5 * a @ Q @ a)

    alphas = np.zeros(m)
    converged = False
    for _ in range(max_iter):
        grad = 1.0 - Q @ alphas
        probe = _project_box_hyperplane(alphas + step * grad, y, c)
        direction = probe - alphas
        if float(np.max(np.abs(direction))) <= tol * (1.0 + float(np.max(np.abs(alphas)))):
            alphas = probe  # exactly feasible to projection precision
            converged = True
            break
        # Exact line search along the probe direction, then re-project so the
        # equality error of each iterate stays at projection precision instead
        # of compounding through extrapolated steps.
        curvature = float(direction @ Q @ direction)
        if curvature > 0:
            t = float(direction @ grad) / curvature
            candidate = _project_box_hyperplane(alphas + t * direction, y, c)
            # overshooting plus re-projection is a heuristic; keep the plain
            # projected step whenever it scores at least as well
            if objective_at(candidate) >= objective_at(probe):
                alphas = candidate
            else:
                alphas = probe
        else:
            alphas = probe
    if not converged:
        raise OracleError(f"projected-gradient ascent not stationary after {max_iter} iterations")

    objective = float(alphas.sum() - 0.5 * alphas @ Q @ alphas)
    bias = _bias_from_multipliers(K, y, alphas, c)
    return DualSolution(alphas=alphas, objective=objective, bias=bias)


def decision_values(solution: DualSolution, X, y, kernel: Kernel, probes) -> np.ndarray:
    """Decision values at probe points implied by a dual solution."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    probes = np.asarray(probes, dtype=np.float64)
    if probes.ndim == 1:
        probes = probes[np.newaxis, :]
    return kernel.matrix(probes, X) @ (solution.alphas * y) + solution.bias
