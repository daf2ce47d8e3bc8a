"""Trend clustering of daily time series via coarse wavelet coefficients.

Pipeline: z-score each series, run a zero-padded pyramidal DWT, keep the
coarsest coefficient bands (c0, d0, d1), cluster them with k-means
(k-means++ seeding), then diagnose the result through cross-wavelet
co-occurrence, PCA biplots and coefficient-level reconstructions.
"""

from __future__ import annotations

import numpy as np

from . import dwt, filterbank
from .dwt import CoefficientIndex, CoefficientSet, decompose, max_level, reconstruct, select_coarse
from .errors import TrendletError
from .filterbank import WaveletFilter, get_filter, list_filters
from .kmeans import ClusterModel, adjusted_rand_index, kmeans_fit, kmeanspp_seed
from .pca import PcaModel, biplot_data, pca_fit
from .pipeline import (
    CoOccurrenceMatrix,
    SyntheticSpec,
    TrendRunConfig,
    co_occurrence,
    generate_synthetic,
    run_single,
)
from .preprocess import TimeSeriesPanel, ingest_csv, normalize

__version__ = "0.1.0"


def _startup_selfcheck() -> None:
    """One cheap invertibility probe per registered filter.

    The algebraic identities are asserted when the registry is built; this
    adds a decompose/reconstruct round trip so a corrupted constant cannot
    survive import.
    """
    probe = np.sin(np.arange(16, dtype=np.float64)) + 0.25 * np.arange(16)
    for name in filterbank.WAVELET_ORDER:
        coeffs = dwt.decompose(probe, name)
        if np.max(np.abs(dwt.reconstruct(coeffs) - probe)) > 1e-8:
            raise AssertionError(f"filter {name} failed the reconstruction self-check")


_startup_selfcheck()
