"""The pipeline catalog: every benchmarked classifier, addressable by name.

Names follow the convention ``Stage+Stage+Head``; lookup tolerates spacing
variants ("ACM + TS + SVM") and hyphen/space swaps ("SSVEP-MDM").  Each
entry declares the hyperparameter grid searched in nested cross-validation;
pipelines run with their defaults when no grid is requested.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from ..errors import InvalidHyper, NotFound
from .base import (
    CspClassifier,
    FbcspClassifier,
    FeatureClassifier,
    PipelineSpec,
    make_logvar_classifier,
)
from .csp import default_filter_bank, logvar_features
from .erp import ErpSuperTrialCov, XdawnLdaClassifier, XdawnSuperTrialCov
from .heads import LdaHead, LinearMarginHead, LogRegHead
from .riemann import (
    AugmentedCov,
    FgMdmClassifier,
    MdmClassifier,
    TangentSpaceClassifier,
)
from .ssvep import CcaClassifier, SsvepBandCov, TrcaClassifier

MI_BAND = (8.0, 32.0)
ERP_BAND = (1.0, 24.0)
SSVEP_BAND = (7.0, 45.0)

PARADIGM_BANDS = {"mi": MI_BAND, "erp": ERP_BAND, "ssvep": SSVEP_BAND}

# Grids searched in the nested inner loop (values in declaration order).
_CSP_NFILTER = tuple(range(2, 9))
_SVC_C = (0.5, 1.0, 1.5)
_LOGVAR_C = (0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0)
_EL_L1_RATIO = (0.20, 0.30, 0.45, 0.65, 0.75)
_ACM_ORDER = tuple(range(1, 11))
_ACM_LAG = tuple(range(1, 11))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    paradigm: str
    builder: Callable
    grid: dict

    def spec(self, grid: dict | None = None) -> PipelineSpec:
        chosen = self.grid if grid is None else grid
        return PipelineSpec(self.name, self.paradigm, dict(chosen))


def _h(hyper: dict | None, key: str, default):
    if hyper is None:
        return default
    return hyper.get(key, default)


def _int_hyper(hyper, key, default):
    value = _h(hyper, key, default)
    if int(value) != value:
        raise InvalidHyper(f"{key} must be an integer, got {value!r}")
    return int(value)


def _margin(hyper, seed):
    return LinearMarginHead(c=float(_h(hyper, "svc_C", 1.0)), seed=seed)


def _logreg(hyper, l1_default=0.0):
    return LogRegHead(
        strength=float(_h(hyper, "strength", 0.01)),
        l1_ratio=float(_h(hyper, "l1_ratio", l1_default)),
    )


def _build_logvar_lda(hyper, seed):
    return make_logvar_classifier(LdaHead())


def _build_logvar_svm(hyper, seed):
    return FeatureClassifier(logvar_features, _margin(hyper, seed))


def _build_csp_lda(hyper, seed):
    return CspClassifier(LdaHead, nfilter=_int_hyper(hyper, "csp_nfilter", 4))


def _build_csp_svm(hyper, seed):
    return CspClassifier(
        lambda: _margin(hyper, seed), nfilter=_int_hyper(hyper, "csp_nfilter", 4)
    )


def _build_trcsp_lda(hyper, seed):
    return CspClassifier(
        LdaHead,
        nfilter=_int_hyper(hyper, "csp_nfilter", 4),
        alpha=float(_h(hyper, "alpha", 0.1)),
    )


def _build_dlcspauto_shlda(hyper, seed):
    return CspClassifier(
        lambda: LdaHead(shrinkage="lw"),
        nfilter=_int_hyper(hyper, "csp_nfilter", 4),
    )


def _build_fbcsp_svm(hyper, seed):
    return FbcspClassifier(
        lambda: _margin(hyper, seed),
        bands=default_filter_bank(*MI_BAND),
        nfilter_per_band=_int_hyper(hyper, "nfilter_per_band", 4),
        k_features=_int_hyper(hyper, "k_features", 8),
    )


def _build_mdm(hyper, seed):
    return MdmClassifier()


def _build_fgmdm(hyper, seed):
    return FgMdmClassifier()


def _build_ts_lr(hyper, seed):
    return TangentSpaceClassifier(_logreg(hyper, l1_default=0.0))


def _build_ts_el(hyper, seed):
    return TangentSpaceClassifier(_logreg(hyper, l1_default=0.5))


def _build_ts_svm(hyper, seed):
    return TangentSpaceClassifier(_margin(hyper, seed))


def _build_acm_ts_svm(hyper, seed):
    return TangentSpaceClassifier(
        _margin(hyper, seed),
        AugmentedCov(
            order=_int_hyper(hyper, "order", 2), lag=_int_hyper(hyper, "lag", 2)
        ),
    )


def _build_xdawn_lda(hyper, seed):
    return XdawnLdaClassifier(nfilter=_int_hyper(hyper, "nfilter", 4))


def _build_xdawncov_mdm(hyper, seed):
    return MdmClassifier(XdawnSuperTrialCov(nfilter=_int_hyper(hyper, "nfilter", 4)))


def _build_xdawncov_ts_svm(hyper, seed):
    return TangentSpaceClassifier(
        _margin(hyper, seed), XdawnSuperTrialCov(nfilter=_int_hyper(hyper, "nfilter", 4))
    )


def _build_xdawncov_ts_lr(hyper, seed):
    return TangentSpaceClassifier(
        _logreg(hyper), XdawnSuperTrialCov(nfilter=_int_hyper(hyper, "nfilter", 4))
    )


def _build_erpcov_mdm(hyper, seed):
    return MdmClassifier(ErpSuperTrialCov(svd_n=None))


def _build_erpcov_svd_mdm(hyper, seed):
    return MdmClassifier(ErpSuperTrialCov(svd_n=_int_hyper(hyper, "svd_n", 4)))


def _build_cca(hyper, seed):
    return CcaClassifier(n_harmonics=_int_hyper(hyper, "n_harmonics", 3))


def _build_trca(hyper, seed):
    return TrcaClassifier()


def _build_ssvep_mdm(hyper, seed):
    return MdmClassifier(SsvepBandCov(halfwidth=float(_h(hyper, "halfwidth", 0.5))))


def _build_ssvep_ts_lr(hyper, seed):
    return TangentSpaceClassifier(
        _logreg(hyper), SsvepBandCov(halfwidth=float(_h(hyper, "halfwidth", 0.5)))
    )


def _build_ssvep_ts_svm(hyper, seed):
    return TangentSpaceClassifier(
        _margin(hyper, seed), SsvepBandCov(halfwidth=float(_h(hyper, "halfwidth", 0.5)))
    )


_ENTRIES = [
    CatalogEntry("LogVar+LDA", "mi", _build_logvar_lda, {}),
    CatalogEntry("LogVar+SVM", "mi", _build_logvar_svm, {"svc_C": _LOGVAR_C}),
    CatalogEntry("CSP+LDA", "mi", _build_csp_lda, {}),
    CatalogEntry(
        "CSP+SVM", "mi", _build_csp_svm,
        {"csp_nfilter": _CSP_NFILTER, "svc_C": _SVC_C},
    ),
    CatalogEntry("TRCSP+LDA", "mi", _build_trcsp_lda, {}),
    CatalogEntry("DLCSPauto+shLDA", "mi", _build_dlcspauto_shlda, {}),
    CatalogEntry("FBCSP+SVM", "mi", _build_fbcsp_svm, {}),
    CatalogEntry("MDM", "mi", _build_mdm, {}),
    CatalogEntry("FgMDM", "mi", _build_fgmdm, {}),
    CatalogEntry("TS+LR", "mi", _build_ts_lr, {}),
    CatalogEntry("TS+EL", "mi", _build_ts_el, {"l1_ratio": _EL_L1_RATIO}),
    CatalogEntry("TS+SVM", "mi", _build_ts_svm, {"svc_C": _SVC_C}),
    CatalogEntry(
        "ACM+TS+SVM", "mi", _build_acm_ts_svm,
        {"order": _ACM_ORDER, "lag": _ACM_LAG, "svc_C": _SVC_C},
    ),
    CatalogEntry("XDAWN+LDA", "erp", _build_xdawn_lda, {}),
    CatalogEntry("XDAWNCov+MDM", "erp", _build_xdawncov_mdm, {}),
    CatalogEntry(
        "XDAWNCov+TS+SVM", "erp", _build_xdawncov_ts_svm, {"svc_C": _SVC_C}
    ),
    CatalogEntry("XDAWNCov+TS+LR", "erp", _build_xdawncov_ts_lr, {}),
    CatalogEntry("ERPCov+MDM", "erp", _build_erpcov_mdm, {}),
    CatalogEntry("ERPCov(svd_n=4)+MDM", "erp", _build_erpcov_svd_mdm, {}),
    CatalogEntry("CCA", "ssvep", _build_cca, {}),
    CatalogEntry("TRCA", "ssvep", _build_trca, {}),
    CatalogEntry("SSVEP MDM", "ssvep", _build_ssvep_mdm, {}),
    CatalogEntry("SSVEP TS+LR", "ssvep", _build_ssvep_ts_lr, {}),
    CatalogEntry("SSVEP TS+SVM", "ssvep", _build_ssvep_ts_svm, {"svc_C": _SVC_C}),
]

CATALOG = {e.name: e for e in _ENTRIES}


def _normalize(name: str) -> str:
    s = re.sub(r"\s*\+\s*", "+", name.strip())
    s = re.sub(r"\s+", " ", s)
    return s


def lookup(name: str) -> CatalogEntry:
    """Resolve a pipeline name, tolerating spacing and hyphen variants."""
    for candidate in (name, _normalize(name), _normalize(name.replace("-", " "))):
        if candidate in CATALOG:
            return CATALOG[candidate]
    raise NotFound(f"no pipeline named {name!r} in the catalog")


def pipeline_names(paradigm: str | None = None) -> list[str]:
    if paradigm is None:
        return [e.name for e in _ENTRIES]
    return [e.name for e in _ENTRIES if e.paradigm == paradigm]


def make_pipeline(name: str, hyper: dict | None = None, seed: int = 0):
    """Instantiate a catalog pipeline with the given hyperparameters."""
    return lookup(name).builder(hyper, seed)


def reduced_acm_grid(n_channels: int) -> dict:
    """The augmented-covariance grid, shrunk for high channel counts."""
    if n_channels > 100:
        span = tuple(range(1, 4))
    elif n_channels > 60:
        span = tuple(range(1, 6))
    else:
        span = _ACM_ORDER
    return {"order": span, "lag": span, "svc_C": _SVC_C}
