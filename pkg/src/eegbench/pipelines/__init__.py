"""Classification pipelines and the catalog addressing them by name."""

from ..dsp import Epochs
from .base import (
    CspClassifier,
    FbcspClassifier,
    FeatureClassifier,
    PipelineSpec,
)
from .catalog import (
    CATALOG,
    PARADIGM_BANDS,
    CatalogEntry,
    lookup,
    make_pipeline,
    pipeline_names,
    reduced_acm_grid,
)
from .csp import SpatialFilterBank, csp_fit, logvar_features, mutual_information, trcsp_fit
from .erp import erp_cov, xdawn_fit
from .heads import LdaHead, LinearMarginHead, LogRegHead, softmax
from .riemann import (
    AugmentedCov,
    FgMdmClassifier,
    MdmClassifier,
    PlainCov,
    TangentSpaceClassifier,
)
from .ssvep import (
    CcaClassifier,
    SsvepBandCov,
    TrcaClassifier,
    canonical_correlation,
    cca_references,
)


def fit(spec: PipelineSpec | str, train: Epochs, hyper: dict | None = None, seed: int = 0):
    """Train a catalog pipeline on the given epochs.

    ``spec`` may be a :class:`PipelineSpec` or a bare catalog name.  The
    result is a fitted estimator exposing ``predict_proba`` and
    ``classes_``; given the same spec, data, hyperparameters, and seed the
    fit is bit-for-bit deterministic.
    """
    name = spec.name if isinstance(spec, PipelineSpec) else spec
    return make_pipeline(name, hyper, seed).fit(train)


def predict_proba(model, test: Epochs):
    """Per-trial class probabilities from a fitted pipeline."""
    return model.predict_proba(test)


__all__ = [
    "CATALOG",
    "PARADIGM_BANDS",
    "AugmentedCov",
    "CatalogEntry",
    "CcaClassifier",
    "CspClassifier",
    "FbcspClassifier",
    "FeatureClassifier",
    "FgMdmClassifier",
    "LdaHead",
    "LinearMarginHead",
    "LogRegHead",
    "MdmClassifier",
    "PipelineSpec",
    "PlainCov",
    "SpatialFilterBank",
    "SsvepBandCov",
    "TangentSpaceClassifier",
    "TrcaClassifier",
    "canonical_correlation",
    "cca_references",
    "csp_fit",
    "erp_cov",
    "fit",
    "logvar_features",
    "lookup",
    "make_pipeline",
    "mutual_information",
    "pipeline_names",
    "predict_proba",
    "reduced_acm_grid",
    "softmax",
    "trcsp_fit",
    "xdawn_fit",
]
