"""First-order oracles for per-slot costs and their predictions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .geometry import DimensionError


class OracleError(RuntimeError):
    """A user oracle returned something inconsistent with its declaration."""


@dataclass(frozen=True)
class CostSpec:
    """A convex loss, either linear <c, x> or given by value/subgradient callables.

    ``curvature`` is a lower bound on the strong-convexity modulus of a general
    loss; the learner uses it to decide whether an unconstrained minimizer
    exists when no regularization has accumulated yet.
    """

    dim: int
    coef: Optional[np.ndarray] = None
    value_fn: Optional[Callable[[np.ndarray], float]] = None
    grad_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lipschitz: Optional[float] = None
    curvature: float = 0.0

    @classmethod
    def linear(cls, coef, lipschitz=None) -> "CostSpec":
        c = np.array(coef, dtype=float).reshape(-1)
        if lipschitz is not None and np.linalg.norm(c) > lipschitz * (1 + 1e-12):
            raise OracleError(f"coefficient norm {np.linalg.norm(c):.6g} exceeds declared Lipschitz bound {lipschitz}")
        c.setflags(write=False)
        return cls(dim=c.size, coef=c, lipschitz=lipschitz)

    @classmethod
    def zero(cls, dim: int) -> "CostSpec":
        return cls.linear(np.zeros(dim))

    @classmethod
    def general(cls, value_fn, grad_fn, dim: int, lipschitz=None, curvature: float = 0.0) -> "CostSpec":
        return cls(dim=dim, value_fn=value_fn, grad_fn=grad_fn, lipschitz=lipschitz, curvature=curvature)

    @property
    def is_linear(self) -> bool:
        return self.coef is not None


# predictions share the exact shape of costs
PredictionSpec = CostSpec


def quadratic(center, weight: float = 1.0) -> CostSpec:
    """(weight/2)||x - center||^2; the value oracle also accepts a batch of rows."""
    a = np.array(center, dtype=float).reshape(-1)
    return CostSpec.general(
        lambda x: 0.5 * weight * np.sum((x - a) ** 2, axis=-1),
        lambda x: weight * (x - a),
        dim=a.size,
        curvature=weight,
    )


def absolute_value() -> CostSpec:
    """|x| on the real line; the subgradient at the kink is the midpoint 0."""
    return CostSpec.general(
        lambda x: float(abs(x[0])),
        lambda x: np.sign(x).astype(float),
        dim=1,
        lipschitz=1.0,
    )


def _check(spec: CostSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dim,):
        raise DimensionError(f"expected a vector of dimension {spec.dim}, got shape {x.shape}")
    return x


def evaluate(spec: CostSpec, x) -> float:
    x = _check(spec, x)
    if spec.is_linear:
        return float(spec.coef @ x)
    return float(spec.value_fn(x))


def evaluate_batch(spec: CostSpec, X) -> np.ndarray:
    """Values at the rows of X; general oracles that reject batches are looped."""
    X = np.asarray(X, dtype=float)
    if spec.is_linear:
        return X @ spec.coef
    try:
        v = np.asarray(spec.value_fn(X), dtype=float)
        if v.shape == (len(X),):
            return v
    except (TypeError, ValueError):
        pass
    return np.array([float(spec.value_fn(x)) for x in X])


def subgradient(spec: CostSpec, x) -> np.ndarray:
    x = _check(spec, x)
    if spec.is_linear:
        return spec.coef
    g = np.asarray(spec.grad_fn(x), dtype=float).reshape(-1)
    if g.shape != (spec.dim,):
        raise OracleError(f"subgradient oracle returned shape {g.shape}, expected ({spec.dim},)")
    if spec.lipschitz is not None and np.linalg.norm(g) > spec.lipschitz * (1 + 1e-12):
        raise OracleError(f"subgradient norm {np.linalg.norm(g):.6g} exceeds declared Lipschitz bound {spec.lipschitz}")
    return g


def prediction_error(g, g_pred) -> float:
    g = np.asarray(g, dtype=float)
    g_pred = np.asarray(g_pred, dtype=float)
    if g.shape != g_pred.shape:
        raise DimensionError(f"gradient shapes differ: {g.shape} vs {g_pred.shape}")
    return float(np.linalg.norm(g - g_pred))
