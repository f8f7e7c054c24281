"""Evaluation criteria for fitted-vs-observed series.

Percentage metrics are stored as percent values (3.14 means 3.14%);
serialisation also carries the raw ratios.  The training/holdout split
is controlled by nu: RMSPEPR runs over k = 1..nu, RMSPEPO over
k = nu+1..n, RMSPE over the full range.  The k = 1 term is included in
RMSPEPR even though anchored models make it zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ZeroObserved

__all__ = ["EvaluationReport", "evaluate", "relative_errors"]


@dataclass(frozen=True)
class EvaluationReport:
    rmspepr: float
    rmspepo: float | None
    rmspe: float
    ia: float
    ae: float
    mae: float
    nu: int
    n: int

    def to_dict(self) -> dict:
        """All eight fields, with raw ratios alongside the percent values."""
        return {
            "rmspepr_pct": self.rmspepr,
            "rmspepo_pct": self.rmspepo,
            "rmspe_pct": self.rmspe,
            "rmspepr_ratio": self.rmspepr / 100.0,
            "rmspepo_ratio": None if self.rmspepo is None else self.rmspepo / 100.0,
            "rmspe_ratio": self.rmspe / 100.0,
            "ia": self.ia,
            "ae": self.ae,
            "mae": self.mae,
            "nu": self.nu,
            "n": self.n,
        }

    def csv_rows(self) -> list[tuple[str, float | None]]:
        """One (metric, value) row per metric, for delimited export."""
        return [
            ("rmspepr_pct", self.rmspepr),
            ("rmspepo_pct", self.rmspepo),
            ("rmspe_pct", self.rmspe),
            ("ia", self.ia),
            ("ae", self.ae),
            ("mae", self.mae),
            ("nu", self.nu),
            ("n", self.n),
        ]

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("metric,value\n")
            for name, value in self.csv_rows():
                fh.write(f"{name},{'' if value is None else repr(float(value))}\n")


def _check_pair(observed, predicted) -> tuple[np.ndarray, np.ndarray]:
    observed = np.asarray(observed, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if observed.ndim != 1 or predicted.ndim != 1:
        raise ValueError("expected 1-d series")
    if observed.size != predicted.size:
        raise LengthMismatch(
            f"observed has {observed.size} points, predicted has {predicted.size}"
        )
    if observed.size == 0:
        raise ValueError("series are empty")
    if np.any(observed == 0):
        k = int(np.flatnonzero(observed == 0)[0])
        raise ZeroObserved(f"observed value at position {k + 1} is exactly 0")
    return observed, predicted


def evaluate(observed, predicted, nu: int) -> EvaluationReport:
    """Compute the six criteria for a fitted/observed pairing.

    nu is the number of points the model was built on; RMSPEPO is absent
    (None) when there is no holdout, i.e. nu == n.
    """
    observed, predicted = _check_pair(observed, predicted)
    n = observed.size
    nu = int(nu)
    if not 1 <= nu <= n:
        raise ValueError(f"nu must be in [1, {n}], got {nu}")
    rel = (predicted - observed) / observed
    rmspepr = float(np.sqrt(np.mean(rel[:nu] ** 2)) * 100.0)
    rmspepo = float(np.sqrt(np.mean(rel[nu:] ** 2)) * 100.0) if n > nu else None
    rmspe = float(np.sqrt(np.mean(rel**2)) * 100.0)
    xbar = float(np.mean(observed))
    spread = np.abs(predicted - xbar) + np.abs(observed - xbar)
    ia = float(1.0 - np.sum((predicted - observed) ** 2) / np.sum(spread**2))
    ae = float(np.mean(predicted - observed))
    mae = float(np.mean(np.abs(predicted - observed)))
    return EvaluationReport(
        rmspepr=rmspepr,
        rmspepo=rmspepo,
        rmspe=rmspe,
        ia=ia,
        ae=ae,
        mae=mae,
        nu=nu,
        n=n,
    )


def relative_errors(observed, predicted) -> np.ndarray:
    """Per-point |predicted - observed| / observed (observed is positive
    for real datasets, so these are error magnitudes)."""
    observed, predicted = _check_pair(observed, predicted)
    return np.abs(predicted - observed) / observed
