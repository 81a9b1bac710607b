"""Strong-convexity schedules sigma_t for the four regularization strategies.

Each schedule is a pure function of the running quantities the learner
accumulates (prediction-error energy E_t, augmented observed path P'_t,
regularized-loss gap delta_t), so each formula can be checked in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

AGNOSTIC = "agnostic"
KNOWN_PATH = "known-path"
OBSERVED_PATH = "observed-path"
RECURSIVE = "recursive"
STRATEGIES = (AGNOSTIC, KNOWN_PATH, OBSERVED_PATH, RECURSIVE)


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    radius: float
    path_budget: float = 0.0

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}; choose one of {STRATEGIES}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.path_budget < 0:
            raise ValueError("path budget must be nonnegative")

    @property
    def base(self) -> float:
        """The constant sigma multiplying every increment."""
        R = self.radius
        if self.kind == AGNOSTIC:
            return 1.0 / (4.0 * R)
        if self.kind == KNOWN_PATH:
            return known_path_base(R, self.path_budget)
        if self.kind == OBSERVED_PATH:
            return 1.0 / (2.0 * math.sqrt(2.0 * R))
        return 1.0 / (8.0 * R * R)


def known_path_base(R: float, path_budget: float) -> float:
    return 1.0 / (2.0 * math.sqrt(2.0 * R * (2.0 * R + path_budget)))


def _sqrt_increment(eps_t: float, E_prev: float) -> float:
    # sqrt(E_prev + eps^2) - sqrt(E_prev), written to avoid cancellation
    e2 = eps_t * eps_t
    if e2 == 0.0:
        return 0.0
    return e2 / (math.sqrt(E_prev + e2) + math.sqrt(E_prev))


def sigma_agnostic(eps_t: float, E_prev: float, R: float, t: int) -> float:
    sigma = 1.0 / (4.0 * R)
    if t == 1:
        return sigma * eps_t
    return sigma * _sqrt_increment(eps_t, E_prev)


def sigma_known_path(eps_t: float, E_prev: float, R: float, path_budget: float, t: int) -> float:
    sigma = known_path_base(R, path_budget)
    if t == 1:
        return sigma * eps_t
    return sigma * _sqrt_increment(eps_t, E_prev)


def sigma_observed_path(eps_t: float, E_t: float, E_prev: float, ppath_t: float, ppath_prev: float,
                        R: float, t: int) -> float:
    if ppath_t < ppath_prev:
        raise ValueError(f"augmented path must be non-decreasing ({ppath_prev} -> {ppath_t})")
    sigma = 1.0 / (2.0 * math.sqrt(2.0 * R))
    if t == 1:
        return sigma * eps_t / math.sqrt(ppath_t)
    return sigma * max(0.0, math.sqrt(E_t / ppath_t) - math.sqrt(E_prev / ppath_prev))


def sigma_recursive(delta_t: float, R: float) -> float:
    return delta_t / (8.0 * R * R)
