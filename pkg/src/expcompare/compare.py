"""Ordering and distance between experiments over a common unknown set.

An experiment ``e`` *divides* ``e2`` when some Markov post-processing of
``e`` reproduces ``e2`` exactly; then ``e`` is at least as informative
for every loss and prior.  The *directed deficiency* relaxes this to a
degree: the smallest prior-averaged total-variation distance between a
post-processing of ``e`` and ``e2``, computed exactly by a linear
program over the post-processing matrix.  Its symmetrized maximum, the
*deficiency*, is a metric on experiments modulo mutual divisibility and
bounds every normalized Bayes-risk gap.

The module also provides empirical verifiers for those facts
(:func:`randomization_check`, :func:`metric_check`) and the generic
strategy-set data-processing comparison :func:`generalized_dpi`.

The total-variation convention is ``V = 0.5 * l1`` throughout; the LP
objective is the prior-weighted ``l1`` gap, so reported deficiencies are
half the raw optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product as iter_product
from typing import Callable, NamedTuple

import numpy as np

from . import lp
from ._samplers import random_loss
from .core import Distribution, LabeledSet, Transition, compose, uniform
from .errors import ArgumentError, ShapeError, SolverError
from .loss import LossMatrix
from .risk import ENUMERATION_CAP, min_bayes_risk

#: Divisibility / sufficiency threshold on deficiency values.
DIVIDES_TOL = 1e-7


@dataclass(frozen=True)
class DeficiencyResult:
    """Directed deficiency value with the optimal post-processing witness."""

    value: float
    witness: Transition
    lp_status: str


def _check_same_source(e: Transition, e2: Transition) -> None:
    if e.source != e2.source:
        raise ShapeError("experiments must share their source set")


def directed_deficiency(e: Transition, e2: Transition, pi: Distribution) -> DeficiencyResult:
    """Smallest prior-averaged variational gap ``V(f.e(theta), e2(theta))``.

    Solved as an LP in the post-processing ``F`` and per-entry absolute
    bounds ``M``; the optimum of ``sum(M)`` is the prior-weighted ``l1``
    gap, reported halved to match the ``V = 0.5 * l1`` convention.  Zero
    (up to tolerance) exactly when ``e`` divides ``e2``.
    """
    _check_same_source(e, e2)
    if pi.space != e.source:
        raise ShapeError("prior space does not match experiment source")
    e_mat, e2_mat, pw = e.matrix, e2.matrix, pi.weights
    n_t = len(e.source)
    n_o = len(e.target)
    n_o2 = len(e2.target)
    n_m = n_o2 * n_t
    n_f = n_o2 * n_o
    n_vars = n_m + n_f

    # rows: for each (i, j) both signs of  pi_j * ([F E]_ij - E2_ij) <= M_ij
    a_ub = np.zeros((2 * n_m, n_vars))
    b_ub = np.zeros(2 * n_m)
    r = 0
    for i in range(n_o2):
        for j in range(n_t):
            m_col = i * n_t + j
            coeffs = pw[j] * e_mat[:, j]  # over k in the observation set of e
            f_cols = n_m + i * n_o + np.arange(n_o)
            a_ub[r, f_cols] = coeffs
            a_ub[r, m_col] = -1.0
            b_ub[r] = pw[j] * e2_mat[i, j]
            a_ub[r + 1, f_cols] = -coeffs
            a_ub[r + 1, m_col] = -1.0
            b_ub[r + 1] = -pw[j] * e2_mat[i, j]
            r += 2
    a_eq = np.zeros((n_o, n_vars))
    for k in range(n_o):
        a_eq[k, n_m + k + n_o * np.arange(n_o2)] = 1.0
    c = np.concatenate([np.ones(n_m), np.zeros(n_f)])
    res = lp.solve(
        lp.LinearProgram(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=np.ones(n_o))
    )
    if not res.is_optimal:
        raise SolverError(f"deficiency program did not solve: {res.status}")
    witness = Transition(
        e.target, e2.target, res.primal[n_m:].reshape(n_o2, n_o)
    )
    return DeficiencyResult(0.5 * float(res.value), witness, res.status)


def divides(
    e: Transition, e2: Transition, tol: float = DIVIDES_TOL
) -> tuple[bool, Transition | None]:
    """Whether some post-processing of ``e`` reproduces ``e2`` exactly.

    Decided by the directed deficiency under the uniform prior (full
    support, so zero deficiency is equivalent to exact factorization);
    on success the optimal post-processing is returned as witness.
    """
    _check_same_source(e, e2)
    res = directed_deficiency(e, e2, uniform(e.source))
    if res.value <= tol:
        return True, res.witness
    return False, None


def deficiency(e: Transition, e2: Transition, pi: Distribution) -> float:
    """Symmetrized deficiency: the larger of the two directed values."""
    return max(
        directed_deficiency(e, e2, pi).value,
        directed_deficiency(e2, e, pi).value,
    )


def is_sufficient(e: Transition, f: Transition, pi: Distribution) -> bool:
    """Whether post-processing by ``f`` loses none of the information in ``e``."""
    if f.source != e.target:
        raise ShapeError("post-processing source does not match experiment target")
    return deficiency(e, compose(f, e), pi) <= DIVIDES_TOL


@dataclass(frozen=True)
class RandomizationReport:
    """Outcome of a randomized risk-gap audit of the deficiency bound."""

    trials: int
    seed: int
    epsilon: float  # directed deficiency from e to e2
    deficiency: float  # symmetrized value
    violations: int  # count of sampled losses breaking the directed bound
    max_directed_gap: float  # max (risk(e) - risk(e2)) / diam(L)
    max_abs_gap: float  # max |risk(e) - risk(e2)| / diam(L)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def randomization_check(
    e: Transition,
    e2: Transition,
    pi: Distribution,
    trials: int = 200,
    seed: int = 0,
) -> RandomizationReport:
    """Audit the deficiency/risk correspondence on random bounded losses.

    Constants, explicitly: with the ``V = 0.5 * l1`` convention the
    pairing bound is ``|<p - q, l>| <= 2 V(p, q) * sup|l|`` (tight when
    the loss spans ``[-sup, sup]``), so the risk bound certified by the
    directed deficiency ``eps`` is

        risk(e) <= risk(e2) + eps * diam(L),   diam(L) = 2 * sup|L|.

    Every sampled loss is checked against that bound at slack 1e-7, and
    gaps are reported normalized by ``diam(L)``; the largest normalized
    absolute gap is then a lower bound for the symmetrized deficiency.
    Losses are drawn with entries uniform in [-1, 1] over 2 to 4 actions,
    reproducibly from ``seed``.
    """
    _check_same_source(e, e2)
    eps = directed_deficiency(e, e2, pi).value
    other = directed_deficiency(e2, e, pi).value
    xi_max = max(eps, other)
    rng = np.random.default_rng(seed)
    violations = 0
    max_directed = -np.inf
    max_abs = 0.0
    for _ in range(trials):
        n_actions = int(rng.integers(2, 5))
        L = random_loss(rng, e.source, n_actions)
        r1 = min_bayes_risk(L, e, pi).value
        r2 = min_bayes_risk(L, e2, pi).value
        diam = 2.0 * L.sup_norm
        if r1 > r2 + eps * diam + 1e-7:
            violations += 1
        if diam > 0.0:
            max_directed = max(max_directed, (r1 - r2) / diam)
            max_abs = max(max_abs, abs(r1 - r2) / diam)
    return RandomizationReport(
        trials=trials,
        seed=seed,
        epsilon=eps,
        deficiency=xi_max,
        violations=violations,
        max_directed_gap=float(max_directed),
        max_abs_gap=float(max_abs),
    )


@dataclass(frozen=True)
class MetricReport:
    """Self-distances, symmetry and triangle inequalities over a family."""

    directed: np.ndarray  # directed deficiency matrix, entry [i, j]
    symmetrized: np.ndarray
    triangles_checked: int
    max_triangle_violation: float
    max_self_deficiency: float

    @property
    def ok(self) -> bool:
        return (
            self.max_triangle_violation <= DIVIDES_TOL
            and self.max_self_deficiency <= DIVIDES_TOL
        )


def metric_check(
    experiments: list[Transition] | tuple[Transition, ...],
    pi: Distribution,
    trials: int | None = None,
) -> MetricReport:
    """Verify metric behaviour of deficiency over a family of experiments.

    Computes all directed deficiencies, then checks that self-distances
    vanish and that every ordered triple of distinct experiments obeys
    the directed triangle inequality (``trials`` caps how many triples
    are examined, in deterministic order).
    """
    if len(experiments) < 1:
        raise ArgumentError("need at least one experiment")
    for other in experiments[1:]:
        _check_same_source(experiments[0], other)
    n = len(experiments)
    directed = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            directed[i, j] = directed_deficiency(experiments[i], experiments[j], pi).value
    symmetrized = np.maximum(directed, directed.T)
    worst = 0.0
    checked = 0
    for i, j, k in permutations(range(n), 3):
        if trials is not None and checked >= trials:
            break
        worst = max(worst, directed[i, k] - directed[i, j] - directed[j, k])
        checked += 1
    return MetricReport(
        directed=directed,
        symmetrized=symmetrized,
        triangles_checked=checked,
        max_triangle_violation=float(worst),
        max_self_deficiency=float(np.diag(symmetrized).max()),
    )


class DpiValues(NamedTuple):
    value_e: float
    value_e2: float


def _deterministic_rules(obs: LabeledSet, actions: LabeledSet, cap: int):
    n_rules = len(actions) ** len(obs)
    if n_rules > cap:
        raise ArgumentError(f"{n_rules} deterministic rules exceed the cap {cap}")
    for g in iter_product(range(len(actions)), repeat=len(obs)):
        m = np.zeros((len(actions), len(obs)))
        for z, a in enumerate(g):
            m[a, z] = 1.0
        yield Transition(obs, actions, m)


def generalized_dpi(
    rho: Callable[[Transition], float],
    e: Transition,
    e2: Transition,
    actions: LabeledSet,
    witness: Transition,
    cap: int = ENUMERATION_CAP,
) -> DpiValues:
    """Compare an arbitrary strategy functional across a divisibility pair.

    ``rho`` scores strategies (transitions from the unknowns to
    ``actions``); each experiment is scored by the best strategy it can
    realize with a deterministic rule.  The caller supplies the
    post-processing ``witness`` with ``witness . e == e2`` (checked to
    1e-7); every rule available to ``e2`` is then also run through the
    witness on the ``e`` side, which makes the strategy sets nested and
    guarantees ``value_e <= value_e2`` up to the witness tolerance.
    """
    _check_same_source(e, e2)
    reproduced = compose(witness, e)
    if reproduced.target != e2.target or np.abs(
        reproduced.matrix - e2.matrix
    ).max() > 1e-7:
        raise ArgumentError("witness does not reproduce the second experiment")
    value_e2 = np.inf
    value_e = np.inf
    for d2 in _deterministic_rules(e2.target, actions, cap):
        value_e2 = min(value_e2, float(rho(compose(d2, e2))))
        value_e = min(value_e, float(rho(compose(compose(d2, witness), e))))
    for d in _deterministic_rules(e.target, actions, cap):
        value_e = min(value_e, float(rho(compose(d, e))))
    return DpiValues(float(value_e), float(value_e2))
