"""Module orderings: score-descending, density-normalized, and optimal.

All rankings break remaining ties by dataset order, so results are fully
deterministic. Score and density rankings additionally break score ties
using the active effort driver (ascending by default; smaller modules
first stretches a fixed budget over more modules).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import DataQualityWarning, Dataset
from .effort import EffortDriver, driver_values

TIE_BREAKS = ("asc", "desc", "input")


@dataclass(frozen=True)
class RankedList:
    """A permutation of module indices plus the key that produced it."""

    order: tuple[int, ...]
    policy: str
    key_values: tuple[float, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order is not a permutation of 0..n-1")
        if len(self.key_values) != len(self.order):
            raise ValueError("one key value per module required")


def _score_values(scores) -> np.ndarray:
    return np.asarray(getattr(scores, "values", scores), dtype=float)


def _tie_key(driver_vals: np.ndarray | None, tie_break: str, i: int):
    if driver_vals is None or tie_break == "input":
        return ()
    value = driver_vals[i]
    return (value,) if tie_break == "asc" else (-value,)


def _check_tie_break(tie_break: str) -> None:
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")


def rank_by_score(
    scores,
    d: Dataset,
    driver: EffortDriver | None = None,
    tie_break: str = "asc",
) -> RankedList:
    """Rank modules by descending score."""
    _check_tie_break(tie_break)
    values = _score_values(scores)
    if values.shape != (d.n,):
        raise ValueError(f"expected {d.n} scores, got {values.shape}")
    for i, v in enumerate(values):
        if math.isnan(v):
            raise ValueError(f"NaN score for module {d.records[i].id!r}")
    driver_vals = driver_values(driver, d) if driver is not None else None
    order = sorted(
        range(d.n), key=lambda i: (-values[i], *_tie_key(driver_vals, tie_break, i), i)
    )
    return RankedList(
        order=tuple(order),
        policy="score",
        key_values=tuple(float(values[i]) for i in order),
    )


def rank_by_density(
    scores,
    norm_measure: str,
    d: Dataset,
    driver: EffortDriver | None = None,
    tie_break: str = "asc",
) -> RankedList:
    """Rank modules by descending score density (score / normalizing measure).

    Modules whose normalizing measure is zero have no defined density; they
    are placed last and flagged with a warning. Their audit key is -inf.
    """
    _check_tie_break(tie_break)
    values = _score_values(scores)
    if values.shape != (d.n,):
        raise ValueError(f"expected {d.n} scores, got {values.shape}")
    for i, v in enumerate(values):
        if math.isnan(v):
            raise ValueError(f"NaN score for module {d.records[i].id!r}")
    norm = d.measure_vector(norm_measure)
    zero = norm == 0
    if zero.any():
        flagged = ", ".join(d.records[i].id for i in np.flatnonzero(zero))
        warnings.warn(
            f"{int(zero.sum())} module(s) with zero {norm_measure} ranked last: {flagged}",
            DataQualityWarning,
            stacklevel=2,
        )
    density = np.where(zero, -np.inf, values / np.where(zero, 1.0, norm))
    driver_vals = driver_values(driver, d) if driver is not None else None
    order = sorted(
        range(d.n), key=lambda i: (-density[i], *_tie_key(driver_vals, tie_break, i), i)
    )
    return RankedList(
        order=tuple(order),
        policy="density",
        key_values=tuple(float(density[i]) for i in order),
    )


def optimal_ranking(d: Dataset, driver: EffortDriver) -> RankedList:
    """The best achievable ordering under a driver.

    Defective modules first in ascending driver value, then the clean ones
    in ascending driver value; ties by dataset order. No other ordering
    finds more defective modules within the effort of any of its prefixes.
    """
    vals = driver_values(driver, d)
    labels = d.labels
    order = sorted(range(d.n), key=lambda i: (not labels[i], vals[i], i))
    return RankedList(
        order=tuple(order),
        policy="optimal",
        key_values=tuple(float(vals[i]) for i in order),
    )
