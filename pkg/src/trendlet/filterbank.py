"""Registry of the 15 short wavelet filter banks used for trend clustering.

Each entry is a quadruple of decomposition/reconstruction low/high-pass
filters, stored as literal constants (full float64 precision).  Orthogonal
entries (haar, db*, sym*, coif*) come from the classical closed forms; the
biorthogonal entries are the short spline filters, zero-padded where the raw
analysis/synthesis lengths differ so all four sequences share one length.
Reverse-biorthogonal entries swap the analysis and synthesis banks.

Filter tap ordering and high-pass signs follow one fixed convention,
validated by the perfect-reconstruction checks in the test suite (and a
cheap self-check at package import), not by matching any external library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownWavelet

__all__ = ["WaveletFilter", "WAVELET_ORDER", "ORTHOGONAL_NAMES", "get_filter", "list_filters"]


@dataclass(frozen=True, eq=False)
class WaveletFilter:
    """Immutable four-filter bank for one named wavelet."""

    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray
    orthogonal: bool = field(default=False)

    def __post_init__(self):
        for attr in ("dec_lo", "dec_hi", "rec_lo", "rec_hi"):
            arr = np.asarray(getattr(self, attr), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)

    @property
    def filter_length(self) -> int:
        return len(self.dec_lo)


# (dec_lo, dec_hi, rec_lo, rec_hi) per distinct bank; values shared by the
# alias entries below (db1 = haar, sym2 = db2, sym3 = db3, rbio1.1 = haar).
_HAAR = (
    (0.7071067811865475, 0.7071067811865475),
    (-0.7071067811865475, 0.7071067811865475),
    (0.7071067811865475, 0.7071067811865475),
    (0.7071067811865475, -0.7071067811865475),
)
# db2 taps: {(1 +- sqrt3)/(4 sqrt2), (3 +- sqrt3)/(4 sqrt2)}
_DB2 = (
    (-0.12940952255126034, 0.2241438680420134, 0.8365163037378077, 0.4829629131445341),
    (-0.4829629131445341, 0.8365163037378077, -0.2241438680420134, -0.12940952255126034),
    (0.4829629131445341, 0.8365163037378077, 0.2241438680420134, -0.12940952255126034),
    (-0.12940952255126034, -0.2241438680420134, 0.8365163037378077, -0.4829629131445341),
)
# db3 taps: sqrt2/32 * {1+r+s, 5+r+3s, 10-2r+2s, 10-2r-2s, 5+r-3s, 1+r-s}
# with r = sqrt10, s = sqrt(5+2 sqrt10)
_DB3 = (
    (0.03522629188570956, -0.08544127388202666, -0.13501102001025464,
     0.45987750211849154, 0.8068915093110928, 0.3326705529500827),
    (-0.3326705529500827, 0.8068915093110928, -0.45987750211849154,
     -0.13501102001025464, 0.08544127388202666, 0.03522629188570956),
    (0.3326705529500827, 0.8068915093110928, 0.45987750211849154,
     -0.13501102001025464, -0.08544127388202666, 0.03522629188570956),
    (0.03522629188570956, 0.08544127388202666, -0.13501102001025464,
     -0.45987750211849154, 0.8068915093110928, -0.3326705529500827),
)
# coif1 taps: {-3+r, 1-r, 14-2r, 14+2r, 5+r, 1-r} / (16 sqrt2) with r = sqrt7
_COIF1 = (
    (-0.015655728135791986, -0.07273261951252645, 0.3848648468648577,
     0.8525720202116003, 0.33789766245748176, -0.07273261951252645),
    (0.07273261951252645, 0.33789766245748176, -0.8525720202116003,
     0.3848648468648577, 0.07273261951252645, -0.015655728135791986),
    (-0.07273261951252645, 0.33789766245748176, 0.8525720202116003,
     0.3848648468648577, -0.07273261951252645, -0.015655728135791986),
    (-0.015655728135791986, 0.07273261951252645, 0.3848648468648577,
     -0.8525720202116003, 0.33789766245748176, 0.07273261951252645),
)
_BIOR1_3 = (
    (-0.08838834764831843, 0.08838834764831843, 0.7071067811865475,
     0.7071067811865475, 0.08838834764831843, -0.08838834764831843),
    (0.0, 0.0, -0.7071067811865475, 0.7071067811865475, 0.0, 0.0),
    (0.0, 0.0, 0.7071067811865475, 0.7071067811865475, 0.0, 0.0),
    (-0.08838834764831843, -0.08838834764831843, 0.7071067811865475,
     -0.7071067811865475, 0.08838834764831843, 0.08838834764831843),
)
_BIOR2_2 = (
    (0.0, -0.17677669529663687, 0.35355339059327373, 1.0606601717798212,
     0.35355339059327373, -0.17677669529663687),
    (0.0, 0.35355339059327373, -0.7071067811865475, 0.35355339059327373, 0.0, 0.0),
    (0.0, 0.35355339059327373, 0.7071067811865475, 0.35355339059327373, 0.0, 0.0),
    (0.0, 0.17677669529663687, 0.35355339059327373, -1.0606601717798212,
     0.35355339059327373, 0.17677669529663687),
)
_BIOR3_1 = (
    (-0.35355339059327373, 1.0606601717798212, 1.0606601717798212, -0.35355339059327373),
    (-0.17677669529663687, 0.5303300858899106, -0.5303300858899106, 0.17677669529663687),
    (0.17677669529663687, 0.5303300858899106, 0.5303300858899106, 0.17677669529663687),
    (-0.35355339059327373, -1.0606601717798212, 1.0606601717798212, 0.35355339059327373),
)
_RBIO1_3 = (
    (0.0, 0.0, 0.7071067811865475, 0.7071067811865475, 0.0, 0.0),
    (0.08838834764831843, 0.08838834764831843, -0.7071067811865475,
     0.7071067811865475, -0.08838834764831843, -0.08838834764831843),
    (-0.08838834764831843, 0.08838834764831843, 0.7071067811865475,
     0.7071067811865475, 0.08838834764831843, -0.08838834764831843),
    (0.0, 0.0, 0.7071067811865475, -0.7071067811865475, 0.0, 0.0),
)
_RBIO2_2 = (
    (0.0, 0.0, 0.35355339059327373, 0.7071067811865475, 0.35355339059327373, 0.0),
    (0.17677669529663687, 0.35355339059327373, -1.0606601717798212,
     0.35355339059327373, 0.17677669529663687, 0.0),
    (-0.17677669529663687, 0.35355339059327373, 1.0606601717798212,
     0.35355339059327373, -0.17677669529663687, 0.0),
    (0.0, 0.0, 0.35355339059327373, -0.7071067811865475, 0.35355339059327373, 0.0),
)
_RBIO3_1 = (
    (0.17677669529663687, 0.5303300858899106, 0.5303300858899106, 0.17677669529663687),
    (0.35355339059327373, 1.0606601717798212, -1.0606601717798212, -0.35355339059327373),
    (-0.35355339059327373, 1.0606601717798212, 1.0606601717798212, -0.35355339059327373),
    (0.17677669529663687, -0.5303300858899106, 0.5303300858899106, -0.17677669529663687),
)

# Registry order is canonical and stable: it defines the per-wavelet index
# used to derive sub-seeds, so adding entries at the end never perturbs
# existing results.
_BANKS: dict[str, tuple] = {
    "haar": _HAAR,
    "db1": _HAAR,
    "db2": _DB2,
    "db3": _DB3,
    "sym2": _DB2,
    "sym3": _DB3,
    "coif1": _COIF1,
    "bior1.1": _HAAR,
    "bior1.3": _BIOR1_3,
    "bior2.2": _BIOR2_2,
    "bior3.1": _BIOR3_1,
    "rbio1.1": _HAAR,
    "rbio1.3": _RBIO1_3,
    "rbio2.2": _RBIO2_2,
    "rbio3.1": _RBIO3_1,
}

WAVELET_ORDER: tuple[str, ...] = tuple(_BANKS)

ORTHOGONAL_NAMES = frozenset({"haar", "db1", "db2", "db3", "sym2", "sym3", "coif1"})

_SQRT2 = math.sqrt(2.0)

_REGISTRY: dict[str, WaveletFilter] = {
    name: WaveletFilter(name, *bank, orthogonal=name in ORTHOGONAL_NAMES)
    for name, bank in _BANKS.items()
}


def _check_algebra(wf: WaveletFilter) -> None:
    """Raise if the stored constants violate the filter-bank identities."""
    m = wf.filter_length
    if not (len(wf.dec_hi) == len(wf.rec_lo) == len(wf.rec_hi) == m):
        raise AssertionError(f"{wf.name}: filter lengths differ")
    if m not in (2, 4, 6):
        raise AssertionError(f"{wf.name}: unsupported filter length {m}")
    if abs(wf.dec_lo.sum() - _SQRT2) > 1e-10:
        raise AssertionError(f"{wf.name}: dec_lo does not sum to sqrt(2)")
    if abs(wf.dec_hi.sum()) > 1e-10:
        raise AssertionError(f"{wf.name}: dec_hi does not sum to 0")
    if wf.orthogonal:
        if abs((wf.dec_lo**2).sum() - 1.0) > 1e-10:
            raise AssertionError(f"{wf.name}: dec_lo not orthonormal")
        mirror = np.array([(-1.0) ** n * wf.dec_lo[m - 1 - n] for n in range(m)])
        if min(np.abs(wf.dec_hi - mirror).max(), np.abs(wf.dec_hi + mirror).max()) > 1e-10:
            raise AssertionError(f"{wf.name}: dec_hi is not the quadrature mirror of dec_lo")


for _wf in _REGISTRY.values():
    _check_algebra(_wf)


def get_filter(name: str) -> WaveletFilter:
    """Look up a wavelet by name (case-insensitive).

    haar, db1, bior1.1 and rbio1.1 are distinct registry entries that share
    numerically identical length-2 filters; likewise sym2/db2 and sym3/db3.
    """
    try:
        return _REGISTRY[str(name).lower()]
    except KeyError:
        raise UnknownWavelet(
            f"unknown wavelet {name!r}; supported: {', '.join(WAVELET_ORDER)}"
        ) from None


def list_filters(n_samples: int = 846) -> list[tuple[str, int, int]]:
    """All registry entries as (name, filter_length, selected_count) rows.

    The third column is the length of the (c0, d0, d1) feature vector for a
    series of ``n_samples`` points, grouped by filter length.
    """
    from . import dwt  # local import; dwt depends on this module

    rows = [
        (name, wf.filter_length, dwt.selected_length(n_samples, wf.filter_length))
        for name, wf in _REGISTRY.items()
    ]
    rows.sort(key=lambda r: (r[1], WAVELET_ORDER.index(r[0])))
    return rows
