"""Core domain types and the elementary reward/probability formulas.

Alternatives and voter preference weights are plain 1-D float64 numpy
arrays validated through :func:`feature_vector`. A voter's reward for an
alternative is the inner product of the preference weights with the
alternative's features; pairwise labels follow the Bradley-Terry noise
model on reward differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = [
    "feature_vector",
    "VoterParams",
    "ComparisonRecord",
    "RewardModel",
    "reward",
    "proxy_reward",
    "btl_prob",
    "SCHEME_TRUE",
    "SCHEME_PROXY",
]

SCHEME_TRUE = "true-reward"
SCHEME_PROXY = "proxy"


def feature_vector(coords) -> np.ndarray:
    """Validate and freeze a point in R^d (d >= 1, all finite).

    Returns a read-only float64 array; the same helper validates
    preference vectors and per-feature weight vectors, which live in the
    same space.
    """
    arr = np.array(coords, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise InputError(f"feature vector must be 1-D with d >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("feature vector has non-finite coordinates")
    arr.setflags(write=False)
    return arr


def _check_dims(*arrays: np.ndarray) -> int:
    d = arrays[0].shape[0]
    for a in arrays[1:]:
        if a.shape[0] != d:
            raise InputError(f"dimension mismatch: {d} vs {a.shape[0]}")
    return d


@dataclass(frozen=True)
class VoterParams:
    """A voter's preference weights over features."""

    voter_id: int
    theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta", feature_vector(self.theta))


@dataclass(frozen=True, eq=False)
class ComparisonRecord:
    """One pairwise annotation: label=1 means a1 was preferred.

    ``scheme`` records which reward generated the label: "true-reward",
    or "proxy" with the per-feature weight vector stored in ``w``.
    """

    voter_id: int
    a0: np.ndarray
    a1: np.ndarray
    label: int
    scheme: str = SCHEME_TRUE
    w: np.ndarray | None = None

    def __eq__(self, other):
        if not isinstance(other, ComparisonRecord):
            return NotImplemented
        return (
            self.voter_id == other.voter_id
            and self.label == other.label
            and self.scheme == other.scheme
            and np.array_equal(self.a0, other.a0)
            and np.array_equal(self.a1, other.a1)
            and (
                (self.w is None and other.w is None)
                or (self.w is not None and other.w is not None and np.array_equal(self.w, other.w))
            )
        )

    def __post_init__(self):
        object.__setattr__(self, "a0", feature_vector(self.a0))
        object.__setattr__(self, "a1", feature_vector(self.a1))
        _check_dims(self.a0, self.a1)
        if self.label not in (0, 1):
            raise InputError(f"label must be 0 or 1, got {self.label}")
        if self.scheme not in (SCHEME_TRUE, SCHEME_PROXY):
            raise InputError(f"unknown annotation scheme {self.scheme!r}")
        if self.scheme == SCHEME_PROXY:
            if self.w is None:
                raise InputError("proxy scheme requires a weight vector")
            object.__setattr__(self, "w", feature_vector(self.w))
            _check_dims(self.a0, self.w)


@dataclass(frozen=True)
class RewardModel:
    """Fitted preference-modeling voting rule f(a) = <theta_hat, a>."""

    theta_hat: np.ndarray
    lam: float
    final_nll: float
    converged: bool
    iterations: int
    diagnostic: str = ""
    nll_history: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "theta_hat", feature_vector(self.theta_hat))
        if self.lam < 0:
            raise InputError("regularization strength must be >= 0")


def reward(theta: np.ndarray, a: np.ndarray) -> float:
    """Voter reward for an alternative: the inner product <theta, a>."""
    theta = np.asarray(theta, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    _check_dims(theta, a)
    return float(theta @ a)


def proxy_reward(theta: np.ndarray, w: np.ndarray, a: np.ndarray) -> float:
    """Bias-distorted annotation reward: sum_j theta_j * w_j * a_j."""
    theta = np.asarray(theta, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    _check_dims(theta, w, a)
    return float((theta * w) @ a)


def btl_prob(r_a: float, r_b: float) -> float:
    """Probability that the alternative with reward r_a beats r_b.

    Computed as the logistic sigmoid of the reward difference; never via
    two raw exponentials, so it stays finite for |r| well beyond 700.
    """
    if not (math.isfinite(r_a) and math.isfinite(r_b)):
        raise InputError("btl_prob requires finite rewards")
    d = r_a - r_b
    if d >= 0:
        return 1.0 / (1.0 + math.exp(-d))
    e = math.exp(d)
    return e / (1.0 + e)
