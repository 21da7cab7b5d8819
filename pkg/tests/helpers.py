"""Shared generators and oracles for the test suite."""

from itertools import product as iter_product

import numpy as np

from expcompare import LabeledSet, LossMatrix, Transition, bayes_risk, is_achievable
from expcompare._samplers import labeled, random_distribution, random_loss, random_markov


def deterministic_rules(obs: LabeledSet, actions: LabeledSet):
    """All deterministic rules from observations to actions."""
    for g in iter_product(range(len(actions)), repeat=len(obs)):
        m = np.zeros((len(actions), len(obs)))
        for z, a in enumerate(g):
            m[a, z] = 1.0
        yield g, Transition(obs, actions, m)


def brute_force_min_bayes_risk(L, e, pi):
    """Oracle: enumerate every deterministic rule and take the best."""
    return min(
        bayes_risk(L, e, rule, pi) for _, rule in deterministic_rules(e.target, L.actions)
    )


def rule_from_assignment(obs: LabeledSet, actions: LabeledSet, assignment) -> Transition:
    m = np.zeros((len(actions), len(obs)))
    for z, a in enumerate(assignment):
        m[a, z] = 1.0
    return Transition(obs, actions, m)


def random_canonical_setup(rng, n_unknowns=2, n_obs=2, n_actions=3):
    """Random loss/experiment/deterministic-rule triple whose rule only
    selects Bayes-achievable actions (so canonical coordinates exist)."""
    while True:
        unknowns = labeled("t", n_unknowns)
        L = random_loss(rng, unknowns, n_actions)
        achievable = [
            i for i, a in enumerate(L.actions.labels) if is_achievable(L, a)
        ]
        if not achievable:
            continue
        e = random_markov(rng, unknowns, labeled("z", n_obs))
        assignment = [achievable[int(rng.integers(len(achievable)))] for _ in range(n_obs)]
        d = rule_from_assignment(e.target, L.actions, assignment)
        return L, e, d


def random_experiment(rng, n_unknowns, n_obs):
    return random_markov(rng, labeled("t", n_unknowns), labeled("z", n_obs))


def grid_oracle_2x2(e, e2, pi, step=0.01):
    """Exhaustive search over 2x2 stochastic post-processings.

    Parameterizes F by its top row (f1, f2); since all columns are
    stochastic the prior-averaged variation reduces to a single absolute
    difference per unknown.
    """
    grid = np.arange(0.0, 1.0 + 1e-12, step)
    f1, f2 = np.meshgrid(grid, grid, indexing="ij")
    total = np.zeros_like(f1)
    for j in range(2):
        a_j = f1 * e.matrix[0, j] + f2 * e.matrix[1, j]
        total += pi.weights[j] * np.abs(a_j - e2.matrix[0, j])
    return float(total.min())
