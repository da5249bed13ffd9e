"""Risk-estimator based semi-supervised anomaly detection."""

from ._core import (
    LabeledDataset,
    LinearModel,
    MlpModel,
    SemiSupSplit,
    aggregate,
    auc,
    bias_bound,
    check_condition_constants,
    check_structural,
    condition_grid,
    data_norm_constants,
    eval_loss,
    gaussian_bayes_auc,
    grad_loss,
    lambda_min_l1,
    lambda_min_l2,
    load_csv,
    load_linear_model,
    load_mlp_model,
    loss_by_name,
    loss_names,
    make_ad_setup,
    make_trial_split,
    partial_mean,
    risk,
    save_csv,
    save_linear_model,
    save_mlp_model,
    synth_gaussian,
    train_deep,
    train_shallow,
)

__all__ = [
    "LabeledDataset",
    "LinearModel",
    "MlpModel",
    "SemiSupSplit",
    "aggregate",
    "auc",
    "bias_bound",
    "check_condition_constants",
    "check_structural",
    "condition_grid",
    "data_norm_constants",
    "eval_loss",
    "gaussian_bayes_auc",
    "grad_loss",
    "lambda_min_l1",
    "lambda_min_l2",
    "load_csv",
    "load_linear_model",
    "load_mlp_model",
    "loss_by_name",
    "loss_names",
    "make_ad_setup",
    "make_trial_split",
    "partial_mean",
    "risk",
    "save_csv",
    "save_linear_model",
    "save_mlp_model",
    "synth_gaussian",
    "train_deep",
    "train_shallow",
]
