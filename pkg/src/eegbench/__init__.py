"""eegbench: reproducible benchmarking of EEG decoding pipelines.

The package covers the full loop: synthetic paradigm data, signal
conditioning, manifold-aware classification pipelines, cross-validated
evaluation with resource metering, meta-analysis across datasets, and a
``bench`` command line for configuration-driven runs.

Module map:

* :mod:`eegbench.spd`: symmetric positive definite matrix geometry;
* :mod:`eegbench.dsp`: filtering, resampling, epoching, covariances;
* :mod:`eegbench.datasets`: in-memory dataset containers;
* :mod:`eegbench.pipelines`: the named pipeline catalog;
* :mod:`eegbench.evaluation`: splits, grid search, scoring, metering;
* :mod:`eegbench.stats`: paired tests and evidence combination;
* :mod:`eegbench.synth`: synthetic recordings per paradigm;
* :mod:`eegbench.registry`: published corpus metadata;
* :mod:`eegbench.bundle`: the on-disk epoch-bundle format;
* :mod:`eegbench.reporting`: CSV canonicalization and summaries;
* :mod:`eegbench.config` / :mod:`eegbench.runner`: benchmark runs;
* :mod:`eegbench.cli`: the ``bench`` entry point.
"""

__version__ = "0.1.0"
