"""Panel ingestion from CSV and per-series normalization.

The on-disk format is one header row ``date,<entity1>,<entity2>,...``
followed by one row per day.  Dates must be ISO-8601, strictly increasing
and gap-free at daily frequency.  In memory the panel is transposed: one
row per entity.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateSeries, EmptyInput, GapError, InvalidInput, ParseError

__all__ = ["TimeSeriesPanel", "ingest_csv", "normalize", "emit_csv"]

log = logging.getLogger(__name__)

_ONE_DAY = dt.timedelta(days=1)


@dataclass(frozen=True, eq=False)
class TimeSeriesPanel:
    """Rectangular set of equal-length daily series, one row per entity."""

    entity_ids: tuple[str, ...]
    dates: tuple[dt.date, ...]
    values: np.ndarray  # shape (n_entities, n_days)
    normalized: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ParseError(f"panel values must be 2-D, got shape {vals.shape}")
        if vals.shape != (len(self.entity_ids), len(self.dates)):
            raise ParseError(
                f"panel shape {vals.shape} does not match "
                f"{len(self.entity_ids)} entities x {len(self.dates)} days"
            )
        if not np.all(np.isfinite(vals)):
            raise ParseError("panel contains non-finite values")
        if self.normalized and vals.size:
            if (
                np.abs(vals.mean(axis=1)).max() > 1e-9
                or np.abs(vals.std(axis=1) - 1.0).max() > 1e-9
            ):
                raise InvalidInput("normalized panel must have zero-mean, unit-std rows")
        object.__setattr__(self, "values", vals)

    @property
    def n_entities(self) -> int:
        return len(self.entity_ids)

    @property
    def n_days(self) -> int:
        return len(self.dates)


def ingest_csv(source) -> TimeSeriesPanel:
    """Read a panel from a file path or text stream.

    Raises ParseError for malformed cells or ragged rows, GapError when a
    day is missing, EmptyInput for a file without data rows.
    """
    if hasattr(source, "read"):
        return _ingest(source)
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return _ingest(fh)


def _ingest(stream: io.TextIOBase) -> TimeSeriesPanel:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("no header row") from None
    if len(header) < 2 or header[0].strip().lower() != "date":
        raise ParseError("header must be 'date,<entity>,...'")
    entity_ids = tuple(name.strip() for name in header[1:])
    if any(not name for name in entity_ids):
        raise ParseError("empty entity name in header")
    if len(set(entity_ids)) != len(entity_ids):
        raise ParseError("duplicate entity name in header")

    dates: list[dt.date] = []
    columns: list[list[float]] = []
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"row {row_no}: expected {len(header)} cells, got {len(row)}")
        try:
            day = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise ParseError(f"row {row_no}: bad date {row[0]!r}") from None
        if dates:
            expected = dates[-1] + _ONE_DAY
            if day == expected:
                pass
            elif day > expected:
                raise GapError(f"missing date {expected.isoformat()} (row {row_no})")
            else:
                raise ParseError(
                    f"row {row_no}: date {day.isoformat()} not after {dates[-1].isoformat()}"
                )
        dates.append(day)
        cells = []
        for col_no, cell in enumerate(row[1:], start=2):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"row {row_no}, column {col_no}: bad number {cell!r}") from None
            if not np.isfinite(value):
                raise ParseError(f"row {row_no}, column {col_no}: non-finite value {cell!r}")
            cells.append(value)
        columns.append(cells)
    if not dates:
        raise EmptyInput("no data rows")
    values = np.asarray(columns, dtype=np.float64).T  # days x entities -> entities x days
    return TimeSeriesPanel(entity_ids=entity_ids, dates=tuple(dates), values=values)


def normalize(panel: TimeSeriesPanel, drop_degenerate: bool = False) -> TimeSeriesPanel:
    """Z-score each row with its population standard deviation.

    A constant row cannot be scaled; by default it aborts the run with
    DegenerateSeries naming the entity, with ``drop_degenerate`` it is
    removed and logged instead.
    """
    vals = panel.values
    constant = np.ptp(vals, axis=1) == 0.0
    if constant.any():
        bad = [panel.entity_ids[i] for i in np.flatnonzero(constant)]
        if not drop_degenerate:
            raise DegenerateSeries(f"constant series (zero variance): {', '.join(bad)}")
        log.warning("dropping %d degenerate series: %s", len(bad), ", ".join(bad))
        keep = ~constant
        vals = vals[keep]
        ids = tuple(e for e, k in zip(panel.entity_ids, keep) if k)
    else:
        ids = panel.entity_ids
    mean = vals.mean(axis=1, keepdims=True)
    std = vals.std(axis=1, keepdims=True)  # population (1/N) std
    normed = (vals - mean) / std
    return TimeSeriesPanel(entity_ids=ids, dates=panel.dates, values=normed, normalized=True)


def emit_csv(panel: TimeSeriesPanel, target) -> None:
    """Write a panel in the ingestion format (17 significant digits)."""
    if hasattr(target, "write"):
        _emit(panel, target)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            _emit(panel, fh)


def _emit(panel: TimeSeriesPanel, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["date", *panel.entity_ids])
    for j, day in enumerate(panel.dates):
        writer.writerow([day.isoformat(), *(f"{v:.17g}" for v in panel.values[:, j])])


def subset(panel: TimeSeriesPanel, entity_ids) -> TimeSeriesPanel:
    """Panel restricted to the given entities, in the given order."""
    index = {e: i for i, e in enumerate(panel.entity_ids)}
    missing = [e for e in entity_ids if e not in index]
    if missing:
        raise ParseError(f"unknown entities: {', '.join(missing)}")
    rows = [index[e] for e in entity_ids]
    return replace(panel, entity_ids=tuple(entity_ids), values=panel.values[rows])
