"""End-to-end trend clustering runs and the synthetic panel generator.

A run takes a normalized panel, computes each row's coarse wavelet
coefficients (c0, d0, d1), clusters them with k-means, and optionally names
the clusters through anchor entities.  Running several wavelets yields a
co-occurrence matrix: the fraction of wavelets that place two entities in
the same cluster.

Per-wavelet k-means sub-seeds derive from (seed, registry index of the
wavelet), so adding or removing wavelets from a run never changes the
result of the others.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

from . import dwt, filterbank
from .errors import AnchorCollision, InvalidInput
from .kmeans import ClusterModel, kmeans_fit
from .preprocess import TimeSeriesPanel

__all__ = [
    "TrendRunConfig",
    "SyntheticSpec",
    "CoOccurrenceMatrix",
    "WaveletRun",
    "ARCHETYPES",
    "wavelet_seed",
    "run_single",
    "align_labels",
    "co_occurrence",
    "generate_synthetic",
]

ARCHETYPES = ("increasing", "stagnating", "seasonal")


@dataclass(frozen=True)
class TrendRunConfig:
    """Parameters shared by every wavelet run in one experiment."""

    wavelet_names: tuple[str, ...] = filterbank.WAVELET_ORDER
    k: int = 3
    anchors: dict[str, str] | None = None  # cluster name -> entity id
    seed: int = 42
    n_restarts: int = 10
    max_iter: int = 300
    tol: float = 1e-4
    levels_kept: int = 2  # bands c0, d0, d1

    def __post_init__(self):
        object.__setattr__(self, "wavelet_names", tuple(self.wavelet_names))
        for name in self.wavelet_names:
            filterbank.get_filter(name)
        if self.k < 2:
            raise InvalidInput(f"k must be >= 2, got {self.k}")
        if self.anchors:
            entities = list(self.anchors.values())
            if len(set(entities)) != len(entities):
                raise InvalidInput(f"anchor entities not distinct: {entities}")


@dataclass(frozen=True, eq=False)
class CoOccurrenceMatrix:
    """Entity x entity fraction of wavelets agreeing on co-membership.

    ``values`` equals ``pair_counts / n_wavelets`` entry for entry, so every
    value is an exact multiple of 1/W; the diagonal is exactly 1.
    """

    entity_ids: tuple[str, ...]
    values: np.ndarray
    pair_counts: np.ndarray
    n_wavelets: int


@dataclass(frozen=True, eq=False)
class WaveletRun:
    """One wavelet's clustering inside a multi-wavelet experiment."""

    wavelet_name: str
    model: ClusterModel
    named_labels: tuple[str, ...] | None
    anchor_collision: bool
    feature_length: int


def wavelet_seed(seed: int, wavelet_name: str) -> int:
    """Stable per-wavelet sub-seed from the base seed and registry index."""
    index = filterbank.WAVELET_ORDER.index(filterbank.get_filter(wavelet_name).name)
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def features_for(panel: TimeSeriesPanel, wavelet_name: str) -> np.ndarray:
    """Coarse coefficient matrix, one row of (c0, d0, d1) per entity."""
    if not panel.normalized:
        raise InvalidInput("panel must be normalized before feature extraction")
    wf = filterbank.get_filter(wavelet_name)
    rows = [dwt.select_coarse(dwt.decompose(row, wf)) for row in panel.values]
    return np.asarray(rows)


def run_single(
    panel: TimeSeriesPanel, wavelet_name: str, config: TrendRunConfig
) -> tuple[ClusterModel, np.ndarray]:
    """Cluster one wavelet's coarse coefficients; returns (model, features)."""
    features = features_for(panel, wavelet_name)
    model = kmeans_fit(
        features,
        config.k,
        seed=wavelet_seed(config.seed, wavelet_name),
        n_restarts=config.n_restarts,
        max_iter=config.max_iter,
        tol=config.tol,
    )
    return model, features


def align_labels(model: ClusterModel, entity_ids, anchors: dict[str, str]) -> list[str]:
    """Name raw cluster indices through anchor entities.

    Every anchor entity must sit in its own cluster; two anchors sharing one
    raise AnchorCollision (such runs are reported, not repaired).  Clusters
    left without an anchor keep a neutral 'cluster<i>' name.
    """
    entity_ids = list(entity_ids)
    if len(entity_ids) != len(model.labels):
        raise InvalidInput(f"{len(entity_ids)} entity ids for {len(model.labels)} labels")
    index = {e: i for i, e in enumerate(entity_ids)}
    cluster_of: dict[str, int] = {}
    for cluster_name, entity in anchors.items():
        if entity not in index:
            raise InvalidInput(f"anchor entity {entity!r} not in panel")
        cluster_of[cluster_name] = int(model.labels[index[entity]])
    seen: dict[int, str] = {}
    for cluster_name, cluster in cluster_of.items():
        if cluster in seen:
            raise AnchorCollision(
                f"anchors {anchors[seen[cluster]]!r} and {anchors[cluster_name]!r} "
                f"share cluster {cluster}"
            )
        seen[cluster] = cluster_name
    naming = {cluster: name for name, cluster in cluster_of.items()}
    return [naming.get(int(lbl), f"cluster{int(lbl)}") for lbl in model.labels]


def co_occurrence(
    panel: TimeSeriesPanel, config: TrendRunConfig
) -> tuple[CoOccurrenceMatrix, list[WaveletRun]]:
    """Run every configured wavelet and count pairwise cluster agreement."""
    if len(config.wavelet_names) < 2:
        raise InvalidInput("co-occurrence needs at least 2 wavelets")
    n = panel.n_entities
    counts = np.zeros((n, n), dtype=np.int64)
    runs: list[WaveletRun] = []
    for name in config.wavelet_names:
        model, features = run_single(panel, name, config)
        named: tuple[str, ...] | None = None
        collision = False
        if config.anchors:
            try:
                named = tuple(align_labels(model, panel.entity_ids, config.anchors))
            except AnchorCollision:
                collision = True
        counts += model.labels[:, None] == model.labels[None, :]
        runs.append(
            WaveletRun(
                wavelet_name=name,
                model=model,
                named_labels=named,
                anchor_collision=collision,
                feature_length=features.shape[1],
            )
        )
    w = len(config.wavelet_names)
    matrix = CoOccurrenceMatrix(
        entity_ids=panel.entity_ids,
        values=counts / w,
        pair_counts=counts,
        n_wavelets=w,
    )
    return matrix, runs


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic daily-sales panel with planted trends.

    Three archetypes: 'increasing' rows drift up by a total rise drawn from
    ``slope_range``; 'stagnating' rows drift by a zero-or-negative total
    drawn from ``stagnating_slope_range``; 'seasonal' rows follow an annual
    sinusoid peaking around day-of-year ``seasonal_peak_doy`` (mid July).
    The two drifting archetypes carry a 7-day sales pattern of amplitude
    ``weekly_amplitude``; all rows get i.i.d. Gaussian noise.
    """

    n_days: int = 846
    n_increasing: int = 20
    n_stagnating: int = 20
    n_seasonal: int = 20
    slope_range: tuple[float, float] = (25.0, 60.0)
    stagnating_slope_range: tuple[float, float] = (-10.0, 0.0)
    seasonal_amplitude: float = 30.0
    seasonal_peak_doy: int = 196
    weekly_amplitude: float = 5.0
    noise_sigma: float = 8.0
    base_level: float = 100.0
    start_date: dt.date = field(default_factory=lambda: dt.date(2017, 1, 1))
    seed: int = 42

    def __post_init__(self):
        if self.n_days < 64:
            raise InvalidInput(f"n_days must be >= 64, got {self.n_days}")
        for name, count in (
            ("n_increasing", self.n_increasing),
            ("n_stagnating", self.n_stagnating),
            ("n_seasonal", self.n_seasonal),
        ):
            if count < 1:
                raise InvalidInput(f"{name} must be >= 1, got {count}")
        lo, hi = self.slope_range
        if not 0 < lo <= hi:
            raise InvalidInput(f"slope_range must be positive and ordered, got {self.slope_range}")
        lo, hi = self.stagnating_slope_range
        if not lo <= hi <= 0:
            raise InvalidInput(
                f"stagnating_slope_range must be ordered and <= 0, got "
                f"{self.stagnating_slope_range}"
            )
        if self.noise_sigma < 0:
            raise InvalidInput(f"noise_sigma must be >= 0, got {self.noise_sigma}")


def generate_synthetic(spec: SyntheticSpec) -> tuple[TimeSeriesPanel, list[str]]:
    """Build the panel and its planted archetype labels, deterministically."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=int(spec.seed)))
    n = spec.n_days
    t = np.arange(n, dtype=np.float64)
    ramp = t / (n - 1)
    weekly = spec.weekly_amplitude * np.sin(2.0 * np.pi * (t % 7) / 7.0)
    dates = [spec.start_date + dt.timedelta(days=int(i)) for i in range(n)]
    doy = np.array([d.timetuple().tm_yday for d in dates], dtype=np.float64)
    annual = np.cos(2.0 * np.pi * (doy - spec.seasonal_peak_doy) / 365.25)

    rows: list[np.ndarray] = []
    planted: list[str] = []
    for archetype, count in zip(ARCHETYPES, (spec.n_increasing, spec.n_stagnating, spec.n_seasonal)):
        for _ in range(count):
            noise = rng.normal(0.0, spec.noise_sigma, n)
            if archetype == "increasing":
                rise = rng.uniform(*spec.slope_range)
                row = spec.base_level + rise * ramp + weekly + noise
            elif archetype == "stagnating":
                rise = rng.uniform(*spec.stagnating_slope_range)
                row = spec.base_level + rise * ramp + weekly + noise
            else:
                row = spec.base_level + spec.seasonal_amplitude * annual + noise
            rows.append(row)
            planted.append(archetype)
    total = len(rows)
    width = max(2, len(str(total)))
    ids = tuple(f"shop{i + 1:0{width}d}" for i in range(total))
    panel = TimeSeriesPanel(
        entity_ids=ids, dates=tuple(dates), values=np.asarray(rows), normalized=False
    )
    return panel, planted
