"""Effort drivers: turn code measures into analysis effort and budgets into cutoffs.

A driver assigns each module the effort its analysis is assumed to cost,
either proportional to a single measure or to a weighted combination of
two measures. Only effort fractions matter downstream, so the unit cost
cancels everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, ModuleRecord

# Budget comparisons tolerate float accumulation from the cumulative sums.
BUDGET_TOL = 1e-12


@dataclass(frozen=True)
class EffortDriver:
    """Rule mapping a module to analysis effort.

    Single form: effort = unit_cost * measure. Composite form: effort =
    unit_cost * (weight * first + (1 - weight) * second), combining the raw
    measure values; set normalize=True to min-max normalize each measure
    over the dataset before combining.
    """

    measures: tuple[str, ...]
    weight: float | None = None
    unit_cost: float = 1.0
    normalize: bool = False

    def __post_init__(self) -> None:
        if len(self.measures) not in (1, 2):
            raise ValueError("driver needs one measure or two")
        if self.is_composite != (self.weight is not None):
            raise ValueError("weight must be given exactly for composite drivers")
        if self.weight is not None and not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"composite weight must be in [0, 1], got {self.weight}")
        if not self.unit_cost > 0:
            raise ValueError(f"unit cost must be positive, got {self.unit_cost}")
        if self.normalize and not self.is_composite:
            raise ValueError("normalize applies to composite drivers only")

    @property
    def is_composite(self) -> bool:
        return len(self.measures) == 2

    @property
    def name(self) -> str:
        """Stable label used in reports, filenames, and curve-compatibility checks."""
        if not self.is_composite:
            return self.measures[0]
        label = f"composite:{self.measures[0]},{self.measures[1]},{self.weight:g}"
        return label + ",minmax" if self.normalize else label


def parse_driver(text: str) -> EffortDriver:
    """Parse a driver spec: a measure name, or 'composite:A,B,<weight>[,minmax]'."""
    text = text.strip()
    if not text:
        raise ValueError("empty driver spec")
    if not text.startswith("composite:"):
        return EffortDriver(measures=(text,))
    parts = [p.strip() for p in text[len("composite:"):].split(",")]
    normalize = False
    if len(parts) == 4 and parts[3] == "minmax":
        normalize = True
        parts = parts[:3]
    if len(parts) != 3 or not parts[0] or not parts[1]:
        raise ValueError(f"bad composite driver spec {text!r}; expected composite:A,B,<weight>[,minmax]")
    try:
        weight = float(parts[2])
    except ValueError:
        raise ValueError(f"bad composite weight {parts[2]!r}") from None
    return EffortDriver(measures=(parts[0], parts[1]), weight=weight, normalize=normalize)


def module_effort(drv: EffortDriver, record: ModuleRecord) -> float:
    """Effort of analyzing a single module, in the driver's (arbitrary) units."""
    try:
        values = [record.measures[name] for name in drv.measures]
    except KeyError as exc:
        raise ValueError(f"module {record.id!r} lacks measure {exc.args[0]!r}") from None
    if not drv.is_composite:
        return drv.unit_cost * values[0]
    if drv.normalize:
        raise ValueError("normalized composite effort is dataset-relative; use driver_values")
    return drv.unit_cost * (drv.weight * values[0] + (1.0 - drv.weight) * values[1])


def driver_values(drv: EffortDriver, d: Dataset) -> np.ndarray:
    """Per-module effort values in dataset order."""
    if not drv.is_composite:
        return drv.unit_cost * d.measure_vector(drv.measures[0])
    first = d.measure_vector(drv.measures[0])
    second = d.measure_vector(drv.measures[1])
    if drv.normalize:
        first = _min_max(first, drv.measures[0])
        second = _min_max(second, drv.measures[1])
    return drv.unit_cost * (drv.weight * first + (1.0 - drv.weight) * second)


def _min_max(values: np.ndarray, name: str) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi == lo:
        raise ValueError(f"cannot min-max normalize constant measure {name!r}")
    return (values - lo) / (hi - lo)


def _order_indices(order) -> np.ndarray:
    # Accepts a RankedList or any index sequence, avoiding a module cycle.
    return np.asarray(getattr(order, "order", order), dtype=int)


def cumulative_effort_fractions(drv: EffortDriver, order, d: Dataset) -> np.ndarray:
    """Cumulative effort fraction after each whole module along the ranking.

    Entry k is the effort of the first k+1 modules divided by the whole
    system's effort; the unit cost cancels. The last entry is exactly 1.
    """
    idx = _order_indices(order)
    if sorted(idx.tolist()) != list(range(d.n)):
        raise ValueError("order is not a permutation of the dataset")
    values = driver_values(drv, d)
    sums = np.cumsum(values[idx])
    # Divide by the cumulative sum's own last element, not a separately
    # computed total: summation order differences of one ulp would otherwise
    # let an intermediate fraction land above 1.
    total = float(sums[-1])
    if total <= 0.0:
        raise ValueError(f"degenerate driver {drv.name!r}: total system effort is zero")
    fractions = sums / total
    fractions[-1] = 1.0
    return fractions


def cutoff_from_fractions(fractions: np.ndarray, budget: float) -> int:
    """Largest count of leading whole modules whose fraction fits the budget."""
    if not 0.0 <= budget <= 1.0:
        raise ValueError(f"budget must be in [0, 1], got {budget}")
    return int(np.searchsorted(fractions, budget + BUDGET_TOL, side="right"))


def budget_to_cutoff(drv: EffortDriver, order, d: Dataset, budget: float) -> int:
    """How many leading modules of the ranking an effort budget pays for.

    Whole modules only: the cutoff is the largest k whose cumulative effort
    fraction does not exceed the budget (within a 1e-12 tolerance).
    """
    return cutoff_from_fractions(cumulative_effort_fractions(drv, order, d), budget)
