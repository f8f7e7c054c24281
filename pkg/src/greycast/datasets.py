"""Series container, strict CSV ingestion, and the bundled datasets."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DatasetError, TooFewSamples

__all__ = ["Series", "parse_dataset", "load_bundled", "BUNDLED_DATASETS"]

BUNDLED_DATASETS = ("oilfield", "settlement", "nuclear")


@dataclass(frozen=True, eq=False)
class Series:
    """Ordered observations with integer period labels (year or day index)."""

    labels: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be 1-d")
        if len(self.labels) != values.size:
            raise ValueError(
                f"{len(self.labels)} labels for {values.size} values"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))

    def __len__(self) -> int:
        return len(self.labels)


def parse_dataset(path) -> Series:
    """Strict parse of a ``period,value`` CSV.

    Rules: exact ``period,value`` header; ``#`` lines and blank lines
    skipped; integer periods, strictly increasing; strictly positive
    decimal values; at least 4 rows.  Trailing whitespace and CRLF line
    endings are tolerated.  Violations raise with the line number.
    """
    labels: list[int] = []
    values: list[float] = []
    header_seen = False
    try:
        fh = open(path, "r", encoding="utf-8-sig")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, raw_line in enumerate(fh, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                if line.lower() != "period,value":
                    raise DatasetError(
                        f"{path}:{lineno}: expected header 'period,value', got {line!r}"
                    )
                header_seen = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise DatasetError(
                    f"{path}:{lineno}: expected 2 fields, got {len(parts)}"
                )
            try:
                period = int(parts[0])
            except ValueError:
                raise DatasetError(
                    f"{path}:{lineno}: period {parts[0]!r} is not an integer"
                ) from None
            try:
                value = float(parts[1])
            except ValueError:
                raise DatasetError(
                    f"{path}:{lineno}: value {parts[1]!r} is not a number"
                ) from None
            if not np.isfinite(value):
                raise DatasetError(f"{path}:{lineno}: value {parts[1]!r} is not finite")
            if value <= 0:
                raise DatasetError(
                    f"{path}:{lineno}: values must be strictly positive, got {parts[1]}"
                )
            if labels and period <= labels[-1]:
                raise DatasetError(
                    f"{path}:{lineno}: periods must be strictly increasing "
                    f"({period} after {labels[-1]})"
                )
            labels.append(period)
            values.append(value)
    if not header_seen:
        raise DatasetError(f"{path}: missing 'period,value' header")
    if len(values) < 4:
        raise TooFewSamples(f"{path}: dataset has {len(values)} rows, need at least 4")
    return Series(labels=tuple(labels), values=np.array(values))


def load_bundled(name: str) -> Series:
    """Load one of the packaged datasets by name."""
    if name not in BUNDLED_DATASETS:
        raise ValueError(
            f"unknown dataset {name!r} (expected one of {BUNDLED_DATASETS})"
        )
    ref = resources.files(__package__).joinpath("data", f"{name}.csv")
    with resources.as_file(ref) as path:
        return parse_dataset(path)
