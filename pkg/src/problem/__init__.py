from .losses import BaseLoss, LogisticLoss, SquaredLoss, get_loss
from .model import (
    Dataset,
    GapArguments,
    Problem,
    component_gradient,
    component_gradients,
    compute_smoothness,
    constraint_violation,
    full_gradient,
    gap,
    lasso_objective,
    lf_conventions,
    loss_value,
    margins,
    objective,
    residual,
    smoothness_constants,
)

__all__ = [
    "BaseLoss",
    "LogisticLoss",
    "SquaredLoss",
    "get_loss",
    "Dataset",
    "GapArguments",
    "Problem",
    "component_gradient",
    "component_gradients",
    "compute_smoothness",
    "constraint_violation",
    "full_gradient",
    "gap",
    "lasso_objective",
    "lf_conventions",
    "loss_value",
    "margins",
    "objective",
    "residual",
    "smoothness_constants",
]
