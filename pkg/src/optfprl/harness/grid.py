"""Brute-force grid oracle for the per-slot update objective (d <= 2)."""

from __future__ import annotations

import math

import numpy as np

from ..geometry import FeasibleSet
from ..oracles import CostSpec, evaluate_batch

MIN_FEASIBLE_POINTS = 10
CHUNK = 1_000_000


def update_objective(p_cum, sigma_cum: float, prediction: CostSpec):
    """Batch evaluator of <p, x> + (sigma/2)||x||^2 + prediction(x) over rows of X."""
    p = np.asarray(p_cum, dtype=float)

    def objective(X):
        return X @ p + 0.5 * sigma_cum * np.einsum("ij,ij->i", X, X) + evaluate_batch(prediction, X)

    return objective


def grid_argmin_oracle(objective, feasible_set: FeasibleSet, resolution: float = 1e-3) -> np.ndarray:
    """Best point of a dense grid over the set's bounding box.

    Grid points inside the set are kept as they are; points outside are
    replaced by their projection, so the boundary is sampled as finely as
    the interior instead of as a staircase.
    """
    d = feasible_set.dim
    if d > 2:
        raise ValueError("the grid oracle is limited to d <= 2")
    lo, hi = feasible_set.bounding_box()
    axes = [np.linspace(lo[i], hi[i], int(math.ceil((hi[i] - lo[i]) / resolution)) + 1) for i in range(d)]
    n_inside = 0
    best_val, best_x = math.inf, None
    first = axes[0]
    step = max(1, CHUNK // (len(axes[1]) if d == 2 else 1))
    for start in range(0, len(first), step):
        block = first[start:start + step]
        if d == 1:
            X = block[:, None]
        else:
            A, B = np.meshgrid(block, axes[1], indexing="ij")
            X = np.column_stack([A.ravel(), B.ravel()])
        X = _snap_to_set(X, feasible_set)
        n_inside += int(np.count_nonzero(_inside(X, feasible_set)))
        vals = objective(X)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_x = float(vals[i]), X[i].copy()
    if n_inside < MIN_FEASIBLE_POINTS:
        raise ValueError(f"resolution {resolution} leaves only {n_inside} feasible grid points")
    return best_x


def _inside(X, feasible_set):
    if feasible_set.kind == "euclidean-ball":
        return np.linalg.norm(X, axis=1) <= feasible_set.radius + feasible_set.tol
    return np.all(np.abs(X) <= feasible_set.half_widths + feasible_set.tol, axis=1)


def _snap_to_set(X, feasible_set):
    if feasible_set.kind == "euclidean-ball":
        n = np.linalg.norm(X, axis=1)
        out = n > feasible_set.radius
        X = X.copy()
        X[out] *= (feasible_set.radius / n[out])[:, None]
        return X
    return np.clip(X, -feasible_set.half_widths, feasible_set.half_widths)
