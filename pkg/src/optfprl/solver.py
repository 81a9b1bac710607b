"""Inner first-order solver for the regularized prediction objective

    F(x) = <p, x> + (sigma/2)||x||^2 + prediction(x)

used when the prediction is not linear and no closed form applies.
"""

from __future__ import annotations

import numpy as np

from .oracles import CostSpec, evaluate, subgradient

MOVE_TOL = 1e-8
MAX_ITER = 10_000


class InnerSolverError(RuntimeError):
    """The inner solver did not reach the movement tolerance."""


def regularized_objective(p, sigma, prediction: CostSpec):
    p = np.asarray(p, dtype=float)

    def value(x):
        return float(p @ x) + 0.5 * sigma * float(x @ x) + evaluate(prediction, x)

    def grad(x):
        return p + sigma * x + subgradient(prediction, x)

    return value, grad


def minimize(p, sigma: float, prediction: CostSpec, feasible_set=None, x0=None,
             tol: float = MOVE_TOL, max_iter: int = MAX_ITER):
    """Minimize F over R^d (``feasible_set=None``) or over the set.

    Projected (sub)gradient steps with backtracking on the quadratic upper
    model; stops when an accepted step moves the iterate by at most ``tol``.
    Returns None for the unconstrained problem when F has no curvature
    (sigma = 0 and the prediction declares none), because no minimizer need
    exist. Raises InnerSolverError when ``max_iter`` is exhausted.
    """
    modulus = sigma + prediction.curvature
    if feasible_set is None and modulus <= 0:
        return None
    value, grad = regularized_objective(p, sigma, prediction)
    proj = feasible_set.project if feasible_set is not None else (lambda y: y)
    x = proj(np.zeros(prediction.dim) if x0 is None else np.asarray(x0, dtype=float))
    step = 1.0 / modulus if modulus > 0 else 1.0
    fx = value(x)
    for _ in range(max_iter):
        g = grad(x)
        while True:
            y = proj(x - step * g)
            d = y - x
            fy = value(y)
            if fy <= fx + float(g @ d) + float(d @ d) / (2 * step) + 1e-15 * (1 + abs(fx)):
                break
            step *= 0.5
            if step < 1e-30:
                return x
        move = float(np.linalg.norm(d))
        x, fx = y, fy
        if move <= tol:
            return x
        step *= 1.5
    raise InnerSolverError(f"no convergence within {max_iter} iterations (last move {move:.3g})")
