"""Seeded random generators for experiments, priors, rules and losses.

Used by the built-in stochastic checks and by the test suite; everything
draws from a caller-supplied ``numpy.random.Generator`` so results are
reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from .core import Distribution, LabeledSet, Transition
from .loss import LossMatrix


def labeled(prefix: str, n: int) -> LabeledSet:
    return LabeledSet(tuple(f"{prefix}{i}" for i in range(n)))


def random_distribution(rng: np.random.Generator, space: LabeledSet) -> Distribution:
    return Distribution(space, rng.dirichlet(np.ones(len(space))))


def random_markov(
    rng: np.random.Generator, source: LabeledSet, target: LabeledSet
) -> Transition:
    cols = rng.dirichlet(np.ones(len(target)), size=len(source))
    return Transition(source, target, cols.T)


def random_loss(
    rng: np.random.Generator,
    unknowns: LabeledSet,
    n_actions: int,
    low: float = -1.0,
    high: float = 1.0,
) -> LossMatrix:
    vals = rng.uniform(low, high, size=(len(unknowns), n_actions))
    return LossMatrix(unknowns, labeled("a", n_actions), vals)
