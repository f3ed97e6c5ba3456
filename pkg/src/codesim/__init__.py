"""Code clone detection via an ensemble of unsupervised similarity measures."""

__version__ = "0.1.0"

from codesim.code_model import CodeFragment
from codesim.measures import MISSING, compute_vector
from codesim.ensemble import (
    EnsembleModel,
    classify,
    fit_bagging,
    fit_boosting,
    fit_linear,
    load_model,
    predict,
    save_model,
)

__all__ = [
    "CodeFragment",
    "MISSING",
    "compute_vector",
    "EnsembleModel",
    "fit_linear",
    "fit_bagging",
    "fit_boosting",
    "predict",
    "classify",
    "save_model",
    "load_model",
]
