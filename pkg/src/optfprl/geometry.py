"""Compact convex feasible sets: projection, membership and closed-form minimizers."""

from __future__ import annotations

import numpy as np

BOUNDARY_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when a vector does not match the dimension of the set."""


class FeasibleSet:
    """Base class for the compact convex sets a learner plays on.

    Subclasses provide the Euclidean projection and the two closed-form
    minimizers used by the learners:

        linear_argmin(c)                 argmin_x <c, x>
        linear_quadratic_argmin(c, s)    argmin_x <c, x> + (s/2)||x||^2
    """

    kind: str = ""
    dim: int

    def __init__(self, dim: int, tol: float = BOUNDARY_TOL):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        self.dim = int(dim)
        self.tol = float(tol)

    # circumscribed radius: ||x|| <= radius for every member x
    @property
    def radius(self) -> float:
        raise NotImplementedError

    def _check(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.dim,):
            raise DimensionError(f"expected a vector of dimension {self.dim}, got shape {y.shape}")
        return y

    def project(self, y) -> np.ndarray:
        raise NotImplementedError

    def contains(self, y) -> bool:
        raise NotImplementedError

    def linear_argmin(self, c) -> np.ndarray:
        raise NotImplementedError

    def linear_quadratic_argmin(self, c, s: float) -> np.ndarray:
        raise NotImplementedError

    def support(self, g) -> float:
        """max_{y in set} <g, y>."""
        g = self._check(g)
        return float(g @ self.linear_argmin(-g))

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def normal_cone_gap(self, g, x) -> float:
        """max_{y in set} <g, y - x>; nonpositive iff g is in the normal cone at x."""
        g = self._check(g)
        x = self._check(x)
        return self.support(g) - float(g @ x)


class Ball(FeasibleSet):
    """Centered Euclidean ball {x : ||x|| <= R}."""

    kind = "euclidean-ball"

    def __init__(self, radius: float, dim: int, tol: float = BOUNDARY_TOL):
        super().__init__(dim, tol)
        if not radius > 0:
            raise ValueError(f"radius must be positive, got {radius}")
        self.R = float(radius)

    @property
    def radius(self) -> float:
        return self.R

    def __repr__(self):
        return f"Ball(radius={self.R}, dim={self.dim})"

    def project(self, y) -> np.ndarray:
        y = self._check(y)
        n = np.linalg.norm(y)
        # shares the membership slack so that project() is exactly idempotent
        if n <= self.R + self.tol:
            return y.copy()
        return (self.R / n) * y

    def contains(self, y) -> bool:
        y = self._check(y)
        return bool(np.linalg.norm(y) <= self.R + self.tol)

    def linear_argmin(self, c) -> np.ndarray:
        c = self._check(c)
        m = np.max(np.abs(c))
        if m == 0.0:
            return np.zeros(self.dim)
        # rescale first: squaring tiny entries underflows and spoils the norm
        u = c / m
        return (-self.R / np.linalg.norm(u)) * u

    def linear_quadratic_argmin(self, c, s: float) -> np.ndarray:
        c = self._check(c)
        if s < 0:
            raise ValueError(f"quadratic weight must be nonnegative, got {s}")
        if s == 0.0:
            return self.linear_argmin(c)
        # compare before dividing so a tiny s cannot overflow
        if np.linalg.norm(c) <= s * self.R:
            return -c / s
        return self.linear_argmin(c)

    def bounding_box(self):
        return np.full(self.dim, -self.R), np.full(self.dim, self.R)


class Box(FeasibleSet):
    """Centered axis-aligned box {x : |x_i| <= h_i}."""

    kind = "axis-box"

    def __init__(self, half_widths, tol: float = BOUNDARY_TOL):
        h = np.atleast_1d(np.asarray(half_widths, dtype=float))
        if h.ndim != 1 or np.any(h <= 0):
            raise ValueError("half-widths must be a vector of positive reals")
        super().__init__(h.size, tol)
        self.half_widths = h

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.half_widths))

    def __repr__(self):
        return f"Box(half_widths={self.half_widths.tolist()})"

    def project(self, y) -> np.ndarray:
        y = self._check(y)
        return np.clip(y, -self.half_widths, self.half_widths)

    def contains(self, y) -> bool:
        y = self._check(y)
        return bool(np.all(np.abs(y) <= self.half_widths + self.tol))

    def linear_argmin(self, c) -> np.ndarray:
        c = self._check(c)
        return -self.half_widths * np.sign(c)

    def linear_quadratic_argmin(self, c, s: float) -> np.ndarray:
        c = self._check(c)
        if s < 0:
            raise ValueError(f"quadratic weight must be nonnegative, got {s}")
        if s == 0.0:
            return self.linear_argmin(c)
        with np.errstate(over="ignore"):
            return np.clip(-c / s, -self.half_widths, self.half_widths)

    def bounding_box(self):
        return -self.half_widths.copy(), self.half_widths.copy()

