"""Pairwise annotation generation under the Bradley-Terry noise model.

Labels are drawn from btl_prob of the reward gap, where the generating
reward is either the voter's true reward or a per-feature-weighted proxy
reward modeling labeling bias. Pairs are unordered during generation and
slot order is randomized, so no position artifact enters the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ConfigError, InputError
from .model import (
    SCHEME_PROXY,
    SCHEME_TRUE,
    ComparisonRecord,
    VoterParams,
    btl_prob,
    feature_vector,
    proxy_reward,
    reward,
)

__all__ = [
    "TrueRewardLabels",
    "ProxyLabels",
    "UniformRandomPairs",
    "RoundRobin",
    "EACH_PAIR_RANDOM_VOTER",
    "PARTITION_BY_VOTER",
    "sample_label",
    "generate_dataset",
]

EACH_PAIR_RANDOM_VOTER = "each-pair-random-voter"
PARTITION_BY_VOTER = "partition-by-voter"


@dataclass(frozen=True)
class TrueRewardLabels:
    kind: str = SCHEME_TRUE


@dataclass(frozen=True)
class ProxyLabels:
    w: np.ndarray
    kind: str = SCHEME_PROXY

    def __post_init__(self):
        object.__setattr__(self, "w", feature_vector(self.w))


@dataclass(frozen=True)
class UniformRandomPairs:
    count: int


@dataclass(frozen=True)
class RoundRobin:
    repeats: int = 1


def sample_label(theta_voter: VoterParams, a0, a1, scheme, rng) -> int:
    """Draw one BTL label: 1 with probability btl_prob(r(a1), r(a0))."""
    theta = theta_voter.theta
    if isinstance(scheme, ProxyLabels):
        r0 = proxy_reward(theta, scheme.w, a0)
        r1 = proxy_reward(theta, scheme.w, a1)
    elif isinstance(scheme, TrueRewardLabels):
        r0 = reward(theta, a0)
        r1 = reward(theta, a1)
    else:
        raise InputError(f"unknown label scheme {scheme!r}")
    p1 = btl_prob(r1, r0)
    return int(rng.random() < p1)


def _pair_indices(pair_scheme, n_alts: int, rng) -> list[tuple[int, int]]:
    if isinstance(pair_scheme, RoundRobin):
        base = list(combinations(range(n_alts), 2))
        return base * pair_scheme.repeats
    if isinstance(pair_scheme, UniformRandomPairs):
        pairs = []
        for _ in range(pair_scheme.count):
            i = int(rng.integers(0, n_alts))
            j = int(rng.integers(0, n_alts - 1))
            if j >= i:
                j += 1
            pairs.append((i, j) if i < j else (j, i))
        return pairs
    raise ConfigError(f"unknown pair scheme {pair_scheme!r}")


def generate_dataset(
    voters: list[VoterParams],
    alts: list,
    pair_scheme,
    assignment: str,
    label_scheme,
    seed: int,
) -> list[ComparisonRecord]:
    """Generate a pairwise-comparison dataset, deterministic given seed."""
    if len(alts) < 2:
        raise ConfigError("dataset generation needs at least 2 alternatives")
    if not voters:
        raise ConfigError("dataset generation needs at least 1 voter")
    if assignment not in (EACH_PAIR_RANDOM_VOTER, PARTITION_BY_VOTER):
        raise ConfigError(f"unknown assignment scheme {assignment!r}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    pairs = _pair_indices(pair_scheme, len(alts), rng)
    records = []
    for k, (i, j) in enumerate(pairs):
        if rng.random() < 0.5:
            i, j = j, i
        if assignment == EACH_PAIR_RANDOM_VOTER:
            voter = voters[int(rng.integers(0, len(voters)))]
        else:
            voter = voters[k % len(voters)]
        label = sample_label(voter, alts[i], alts[j], label_scheme, rng)
        if isinstance(label_scheme, ProxyLabels):
            rec = ComparisonRecord(
                voter_id=voter.voter_id,
                a0=alts[i],
                a1=alts[j],
                label=label,
                scheme=SCHEME_PROXY,
                w=label_scheme.w,
            )
        else:
            rec = ComparisonRecord(
                voter_id=voter.voter_id, a0=alts[i], a1=alts[j], label=label
            )
        records.append(rec)
    return records
