"""Prediction performance measures for censored survival data.

Two measures: mean absolute error over observed events, and Harrell's
concordance index with the usual conventions (pairs comparable when the
earlier time is an event; prediction ties count half).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UndefinedMetricError

__all__ = ["EvalReport", "c_index", "mae"]


@dataclass(frozen=True)
class EvalReport:
    """Evaluation summary for one fitted model on one dataset."""

    model_label: str
    mae: float
    c_index: float
    n_comparable_pairs: int
    n_events_used: int

    def to_dict(self) -> dict:
        return {
            "model_label": self.model_label,
            "mae": self.mae,
            "c_index": self.c_index,
            "n_comparable_pairs": self.n_comparable_pairs,
            "n_events_used": self.n_events_used,
        }


def _check_vectors(pred, time, status):
    pred = np.asarray(pred, dtype=float)
    time = np.asarray(time, dtype=float)
    status = np.asarray(status)
    if not (len(pred) == len(time) == len(status)):
        raise InvalidInputError("pred, time and status must have equal length")
    if len(pred) < 2:
        raise InvalidInputError("need at least 2 observations")
    if not np.isfinite(pred).all() or not np.isfinite(time).all():
        raise InvalidInputError("predictions and times must be finite")
    if not np.isin(status, (0, 1)).all():
        raise InvalidInputError("status flags must be 0 or 1")
    return pred, time, status.astype(bool)


def c_index(pred, time, status) -> tuple:
    """Harrell's concordance index; returns (c, number of comparable pairs).

    An ordered pair (i, j) is comparable iff time_i < time_j and subject i
    had the event.  Concordant predictions (pred_i < pred_j) score 1, ties
    score 0.5.  All pairs are enumerated exactly; weights are halves so the
    accumulated sum is exact in floating point regardless of order.
    """
    pred, time, status = _check_vectors(pred, time, status)
    comparable = (time[:, None] < time[None, :]) & status[:, None]
    concordant = pred[:, None] < pred[None, :]
    tied = pred[:, None] == pred[None, :]
    n_comparable = int(comparable.sum())
    if n_comparable == 0:
        raise UndefinedMetricError("no comparable pairs: C-index undefined")
    score = float(concordant[comparable].sum()) + 0.5 * float(tied[comparable].sum())
    return score / n_comparable, n_comparable


def mae(pred, time, status) -> tuple:
    """Mean absolute error over events only; returns (mae, events used).

    Censored rows carry only a lower bound on the event time, so the
    absolute deviation is not an error measure for them and they are
    excluded.
    """
    pred, time, status = _check_vectors(pred, time, status)
    if not status.any():
        raise UndefinedMetricError("no observed events: MAE undefined")
    err = np.abs(pred[status] - time[status])
    return float(err.mean()), int(status.sum())
