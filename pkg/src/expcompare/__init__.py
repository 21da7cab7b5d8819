"""Toolkit for representing and comparing finite statistical experiments.

Experiments are column-stochastic matrices between labeled finite sets.
The package computes risks and optimal rules, the loss/entropy calculus
with canonical coordinates, divisibility and deficiency between
experiments via linear programming, divergences and their data
processing behaviour, all exactly at desk scale.
"""

from .core import (
    Distribution,
    LabeledSet,
    Transition,
    UnnormalizedMeasure,
    binary_symmetric,
    compose,
    expect,
    from_function,
    identity,
    point_mass,
    product,
    product_set,
    push,
    replicate,
    terminal,
    uniform,
)
from .errors import ArgumentError, LabelError, ShapeError, SolverError, ToolkitError
from .loss import (
    CanonicalPoint,
    LossMatrix,
    action_coordinate,
    bayes_actions,
    canonical_loss,
    canonical_point,
    entropy,
    euler_check,
    in_super_prediction_set,
    is_achievable,
    is_supergradient,
    log_loss_grid,
    loss_from_entropy,
    psi,
    zero_one_loss,
    zero_sum_part,
)
from .risk import (
    BayesReversal,
    RiskProfile,
    bayes_risk,
    bias_variance,
    complete_class_check,
    is_admissible,
    max_risk,
    min_bayes_risk,
    minimax_risk,
    reverse,
    risk_profile,
    sufficiency_reduction,
)
from .compare import (
    DeficiencyResult,
    deficiency,
    directed_deficiency,
    divides,
    generalized_dpi,
    is_sufficient,
    metric_check,
    randomization_check,
)
from .divergence import (
    PhiSpec,
    dpi_check,
    mutual_information,
    phi_divergence,
    risk_gap,
    shannon_entropy,
    variational,
)
from .lp import LinearProgram, LPResult, feasible, solve

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BayesReversal",
    "CanonicalPoint",
    "DeficiencyResult",
    "Distribution",
    "LPResult",
    "LabelError",
    "LabeledSet",
    "LinearProgram",
    "LossMatrix",
    "PhiSpec",
    "RiskProfile",
    "ShapeError",
    "SolverError",
    "ToolkitError",
    "Transition",
    "UnnormalizedMeasure",
    "action_coordinate",
    "bayes_actions",
    "bayes_risk",
    "bias_variance",
    "binary_symmetric",
    "canonical_loss",
    "canonical_point",
    "complete_class_check",
    "compose",
    "deficiency",
    "directed_deficiency",
    "divides",
    "dpi_check",
    "entropy",
    "euler_check",
    "expect",
    "feasible",
    "from_function",
    "generalized_dpi",
    "identity",
    "in_super_prediction_set",
    "is_achievable",
    "is_admissible",
    "is_sufficient",
    "is_supergradient",
    "log_loss_grid",
    "loss_from_entropy",
    "max_risk",
    "metric_check",
    "min_bayes_risk",
    "minimax_risk",
    "mutual_information",
    "phi_divergence",
    "point_mass",
    "product",
    "product_set",
    "psi",
    "push",
    "randomization_check",
    "replicate",
    "reverse",
    "risk_gap",
    "risk_profile",
    "shannon_entropy",
    "solve",
    "sufficiency_reduction",
    "terminal",
    "uniform",
    "variational",
    "zero_one_loss",
    "zero_sum_part",
]
