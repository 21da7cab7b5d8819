"""Risk functionals for experiment/rule pairs.

An experiment ``e`` maps unknowns to observations, a decision rule ``d``
maps observations to actions; the risk of the pair at unknown ``theta``
is the expected loss of the composed strategy ``d after e``.  On top of
the pointwise profile this module provides Bayesian and worst-case
aggregates, the posterior reversal of an experiment, exact optimal rules
(Bayes via the reversal, minimax via an LP with the least favorable
prior read off the duals), a bias/variance split of the pointwise risk
in canonical coordinates, and admissibility checks with supporting-prior
extraction for the deterministic rules of a finite instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import NamedTuple

import numpy as np

from . import lp
from .core import Distribution, LabeledSet, Transition, compose
from .errors import ArgumentError, ShapeError, SolverError
from .loss import LossMatrix, canonical_loss, is_achievable, psi, zero_sum_part

#: Observations with marginal mass below this are outside the reversal support.
SUPPORT_CUTOFF = 1e-12

#: Deterministic-rule enumeration cap for the complete-class report.
ENUMERATION_CAP = 4096


@dataclass(frozen=True)
class RiskProfile:
    """Pointwise risk, one value per unknown."""

    unknowns: LabeledSet
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.shape != (len(self.unknowns),):
            raise ShapeError("risk profile length does not match unknowns")
        if not np.all(np.isfinite(vals)):
            raise ArgumentError("risk profile contains non-finite entries")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, theta: str) -> float:
        return float(self.values[self.unknowns.index(theta)])


@dataclass(frozen=True)
class BayesReversal:
    """Posterior transition and observation marginal of an experiment.

    ``posterior`` maps observations back to unknowns.  Columns for
    observations outside ``support`` (marginal mass below the cutoff)
    are filled with the prior itself; they never receive weight in any
    Bayes-risk sum.
    """

    marginal: Distribution
    posterior: Transition
    support: tuple[str, ...]


class MinBayesResult(NamedTuple):
    value: float
    rule: Transition


class MinimaxResult(NamedTuple):
    value: float
    rule: Transition
    least_favorable_prior: Distribution


class BiasVariance(NamedTuple):
    bias: float
    variance: float


def _check_pair(L: LossMatrix, e: Transition, d: Transition) -> None:
    if e.source != L.unknowns:
        raise ShapeError("experiment source does not match loss unknowns")
    if d.source != e.target:
        raise ShapeError("rule source does not match experiment target")
    if d.target != L.actions:
        raise ShapeError("rule target does not match loss actions")


def risk_profile(L: LossMatrix, e: Transition, d: Transition) -> RiskProfile:
    """Expected loss of the strategy ``d after e`` at every unknown."""
    _check_pair(L, e, d)
    strategy = compose(d, e)
    vals = np.einsum("at,ta->t", strategy.matrix, L.values)
    return RiskProfile(L.unknowns, vals)


def bayes_risk(L: LossMatrix, e: Transition, d: Transition, pi: Distribution) -> float:
    """Prior-weighted average of the risk profile."""
    if pi.space != L.unknowns:
        raise ShapeError("prior space does not match loss unknowns")
    return float(pi.weights @ risk_profile(L, e, d).values)


def max_risk(L: LossMatrix, e: Transition, d: Transition) -> float:
    """Worst-case entry of the risk profile."""
    return float(risk_profile(L, e, d).values.max())


def reverse(e: Transition, pi: Distribution, cutoff: float = SUPPORT_CUTOFF) -> BayesReversal:
    """Posterior over unknowns given each observation, with the marginal.

    Observations with marginal mass at most ``cutoff`` are excluded from
    the support and never divided by.
    """
    if pi.space != e.source:
        raise ShapeError("prior space does not match experiment source")
    joint = e.matrix * pi.weights[None, :]  # joint[z, theta]
    marginal_w = joint.sum(axis=1)
    post = np.tile(pi.weights[:, None], (1, len(e.target)))
    support = []
    for z, mass in enumerate(marginal_w):
        if mass > cutoff:
            support.append(e.target.labels[z])
            post[:, z] = joint[z, :] / mass
    return BayesReversal(
        marginal=Distribution(e.target, marginal_w),
        posterior=Transition(e.target, e.source, post),
        support=tuple(support),
    )


def sufficiency_reduction(e: Transition, tol: float = 1e-9) -> Transition:
    """Deterministic merge of observations that carry the same evidence.

    Observations whose likelihood columns are proportional (equivalently:
    equal posteriors under every full-support prior) are mapped to one
    merged label; all-zero columns are merged together since they never
    occur.  Composing the reduction after ``e`` yields an experiment
    mutually divisible with ``e``, so no risk changes for any loss or
    prior.  This is the reversal viewed as a statistic rather than as a
    stochastic transition: sampling an unknown from the posterior does
    lose information, merging equal posteriors does not.
    """
    classes: list[list[int]] = []
    reps: list[np.ndarray] = []
    for z in range(len(e.target)):
        lik = e.matrix[z, :]  # likelihood of observation z across unknowns
        mass = lik.sum()
        key = lik / mass if mass > 0.0 else lik
        for k, rep in enumerate(reps):
            if np.abs(key - rep).max() <= tol:
                classes[k].append(z)
                break
        else:
            classes.append([z])
            reps.append(key)
    merged = LabeledSet(
        tuple("|".join(e.target.labels[z] for z in members) for members in classes)
    )
    m = np.zeros((len(classes), len(e.target)))
    for k, members in enumerate(classes):
        for z in members:
            m[k, z] = 1.0
    return Transition(e.target, merged, m)


def min_bayes_risk(L: LossMatrix, e: Transition, pi: Distribution) -> MinBayesResult:
    """Smallest Bayes risk over all rules, with an optimal deterministic rule.

    The optimal rule infers the posterior of each supported observation
    and picks its lowest-index Bayes action; observations outside the
    support are mapped to action index 0.
    """
    if e.source != L.unknowns:
        raise ShapeError("experiment source does not match loss unknowns")
    if pi.space != L.unknowns:
        raise ShapeError("prior space does not match loss unknowns")
    rev = reverse(e, pi)
    scores = L.values.T @ rev.posterior.matrix  # scores[a, z]
    n_act, n_obs = scores.shape
    rule = np.zeros((n_act, n_obs))
    value = 0.0
    support = set(rev.support)
    for z, lbl in enumerate(e.target.labels):
        if lbl in support:
            a = int(np.argmin(scores[:, z]))
            value += rev.marginal.weights[z] * scores[a, z]
        else:
            a = 0
        rule[a, z] = 1.0
    return MinBayesResult(float(value), Transition(e.target, L.actions, rule))


def minimax_risk(L: LossMatrix, e: Transition) -> MinimaxResult:
    """Rule minimizing the worst-case risk, by linear programming.

    Variables are the rule entries plus an epigraph level; the least
    favorable prior is the (negated, normalized) dual vector of the
    per-unknown level constraints.  Its Bayes risk equals the minimax
    value up to solver tolerance.
    """
    if e.source != L.unknowns:
        raise ShapeError("experiment source does not match loss unknowns")
    n_t, n_z, n_a = len(L.unknowns), len(e.target), len(L.actions)
    n_d = n_z * n_a
    # coefficient of d(a|z) in the risk at theta: e[z, theta] * L[theta, a]
    coef = np.einsum("zt,ta->tza", e.matrix, L.values).reshape(n_t, n_d)
    a_ub = np.hstack([coef, -np.ones((n_t, 1))])
    a_eq = np.zeros((n_z, n_d + 1))
    for z in range(n_z):
        a_eq[z, z * n_a : (z + 1) * n_a] = 1.0
    c = np.zeros(n_d + 1)
    c[n_d] = 1.0
    free = np.zeros(n_d + 1, dtype=bool)
    free[n_d] = True
    res = lp.solve(
        lp.LinearProgram(
            c, a_ub=a_ub, b_ub=np.zeros(n_t), a_eq=a_eq, b_eq=np.ones(n_z), free=free
        )
    )
    if not res.is_optimal:
        raise SolverError(f"minimax program did not solve: {res.status}")
    rule = Transition(
        e.target, L.actions, res.primal[:n_d].reshape(n_z, n_a).T
    )
    prior_w = np.maximum(-res.dual_ub, 0.0)
    total = prior_w.sum()
    if total <= 0.0:  # constant-risk degenerate case; any prior is extremal
        prior = Distribution(L.unknowns, np.full(n_t, 1.0 / n_t))
    else:
        prior = Distribution(L.unknowns, prior_w / total)
    return MinimaxResult(float(res.value), rule, prior)


def _selected_actions(d: Transition) -> list[int]:
    """Indices of the action chosen at each observation; rejects randomized rules."""
    sel = []
    for z, lbl in enumerate(d.source.labels):
        col = d.matrix[:, z]
        a = int(np.argmax(col))
        if col[a] < 1.0 - 1e-9:
            raise ArgumentError(
                f"rule is randomized at observation '{lbl}'; "
                "decompose it into deterministic rules first"
            )
        sel.append(a)
    return sel


def bias_variance(L: LossMatrix, e: Transition, d: Transition, theta: str) -> BiasVariance:
    """Split the pointwise risk of a deterministic rule at ``theta``.

    In zero-sum coordinates the selected columns average to a single
    coordinate; the bias is the canonical loss of that average and the
    variance is the Jensen gap of the height function, so
    ``bias + variance`` equals the risk at ``theta`` and the variance is
    nonnegative.  Every selected action must be Bayes-achievable (else it
    has no canonical coordinate and the split is undefined).
    """
    _check_pair(L, e, d)
    ti = L.unknowns.index(theta)
    sel = _selected_actions(d)
    weights = e.matrix[:, ti]
    heights: dict[int, float] = {}
    parts: dict[int, np.ndarray] = {}
    for a in set(sel):
        label = L.actions.labels[a]
        if not is_achievable(L, label):
            raise ArgumentError(
                f"action '{label}' is never Bayes; it has no canonical coordinate"
            )
        parts[a] = zero_sum_part(L.values[:, a])
        heights[a] = psi(L, parts[a])
    avg = np.zeros(len(L.unknowns))
    expected_height = 0.0
    for z, a in enumerate(sel):
        avg += weights[z] * parts[a]
        expected_height += weights[z] * heights[a]
    bias = canonical_loss(L, theta, -avg)
    variance = expected_height - psi(L, avg)
    return BiasVariance(float(bias), float(variance))


def _best_dominating(L: LossMatrix, e: Transition, target: np.ndarray):
    """Maximize total pointwise improvement over ``target`` among all rules.

    Returns ``(total_slack, rule_matrix)`` where the rule weakly beats the
    target profile everywhere and by ``total_slack`` in aggregate.
    """
    n_t, n_z, n_a = len(L.unknowns), len(e.target), len(L.actions)
    n_d = n_z * n_a
    coef = np.einsum("zt,ta->tza", e.matrix, L.values).reshape(n_t, n_d)
    a_ub = np.hstack([coef, np.eye(n_t)])
    a_eq = np.zeros((n_z, n_d + n_t))
    for z in range(n_z):
        a_eq[z, z * n_a : (z + 1) * n_a] = 1.0
    c = np.concatenate([np.zeros(n_d), -np.ones(n_t)])
    res = lp.solve(
        lp.LinearProgram(c, a_ub=a_ub, b_ub=target, a_eq=a_eq, b_eq=np.ones(n_z))
    )
    if not res.is_optimal:
        raise SolverError(f"domination program did not solve: {res.status}")
    return -float(res.value), res.primal[:n_d].reshape(n_z, n_a).T


def is_admissible(L: LossMatrix, e: Transition, d: Transition) -> bool:
    """Whether no rule weakly improves the profile of ``d`` with strict gain.

    Solved as an LP over all (randomized) rules maximizing the summed
    slack; admissible means the optimum is at most the solver tolerance.
    """
    _check_pair(L, e, d)
    slack, _ = _best_dominating(L, e, risk_profile(L, e, d).values)
    return slack <= lp.FEAS_TOL


@dataclass(frozen=True)
class RuleReport:
    """One deterministic rule in a complete-class report."""

    actions: tuple[str, ...]  # chosen action label per observation
    risk: np.ndarray
    admissible: bool
    prior: Distribution | None  # a prior for which the rule is Bayes, if any
    dominated: bool


@dataclass(frozen=True)
class CompleteClassReport:
    rules: tuple[RuleReport, ...]
    every_admissible_has_prior: bool
    every_priorless_dominated: bool

    @property
    def ok(self) -> bool:
        return self.every_admissible_has_prior and self.every_priorless_dominated


def complete_class_check(
    L: LossMatrix, e: Transition, cap: int = ENUMERATION_CAP
) -> CompleteClassReport:
    """Enumerate deterministic rules and pair each admissible one with a prior.

    For every deterministic rule the report records its risk profile,
    whether any rule dominates it, and a supporting prior (a prior making
    it Bayes among deterministic rules) found by LP feasibility.  The
    check passes when every admissible rule has a prior and every rule
    without one is confirmed dominated.
    """
    if e.source != L.unknowns:
        raise ShapeError("experiment source does not match loss unknowns")
    n_t, n_z, n_a = len(L.unknowns), len(e.target), len(L.actions)
    n_rules = n_a**n_z
    if n_rules > cap:
        raise ArgumentError(f"{n_rules} deterministic rules exceed the cap {cap}")

    assignments = list(iter_product(range(n_a), repeat=n_z))
    profiles = np.empty((n_rules, n_t))
    for k, g in enumerate(assignments):
        profiles[k] = sum(e.matrix[z, :] * L.values[:, g[z]] for z in range(n_z))

    reports = []
    for k, g in enumerate(assignments):
        slack, _ = _best_dominating(L, e, profiles[k])
        admissible = slack <= lp.FEAS_TOL
        diffs = np.delete(profiles - profiles[k][None, :], k, axis=0)
        prior = _supporting_prior(L.unknowns, diffs)
        reports.append(
            RuleReport(
                actions=tuple(L.actions.labels[a] for a in g),
                risk=profiles[k],
                admissible=admissible,
                prior=prior,
                dominated=slack > lp.FEAS_TOL,
            )
        )
    return CompleteClassReport(
        rules=tuple(reports),
        every_admissible_has_prior=all(
            (not r.admissible) or r.prior is not None for r in reports
        ),
        every_priorless_dominated=all(
            r.prior is not None or r.dominated for r in reports
        ),
    )


def _supporting_prior(unknowns: LabeledSet, diffs: np.ndarray) -> Distribution | None:
    """A prior under which the rule beats all alternatives, if one exists.

    ``diffs`` holds ``profile(other) - profile(rule)`` per row; we need a
    simplex point with ``diffs @ pi >= 0`` for every row.
    """
    n = len(unknowns)
    uniq = np.unique(-diffs, axis=0) if diffs.size else np.zeros((0, n))
    res = lp.solve(
        lp.LinearProgram(
            np.zeros(n),
            a_ub=uniq,
            b_ub=np.zeros(uniq.shape[0]),
            a_eq=np.ones((1, n)),
            b_eq=[1.0],
        )
    )
    if not res.is_optimal:
        return None
    return Distribution(unknowns, res.primal)
