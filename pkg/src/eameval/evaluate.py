"""Run the full evaluation grid: (ranking policy x effort driver) cells.

Each cell holds the cost-efficiency curve, its optimal counterpart, Popt,
the benefit proportion at each budget, and the confusion-based metrics at
each budget's cutoff. Everything is deterministic given the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curves import CostEfficiencyCurve, cost_efficiency_curve, pofb_at, popt
from .dataset import Dataset
from .effort import EffortDriver, budget_to_cutoff
from .metrics import (
    ClassificationMetrics,
    classification_metrics,
    confusion_at_cutoff,
    roc_auc,
)
from .ranking import RankedList, optimal_ranking, rank_by_density, rank_by_score

POLICIES = ("score", "density", "optimal")


@dataclass(frozen=True)
class BudgetResult:
    budget: float
    value: float            # benefit proportion at the budget (PofB-style)
    cutoff: int             # whole modules the budget pays for
    metrics: ClassificationMetrics


@dataclass(frozen=True)
class EvaluationCell:
    policy: str
    driver: str
    ranking: RankedList
    curve: CostEfficiencyCurve
    optimal_curve: CostEfficiencyCurve
    popt: float
    budgets: tuple[BudgetResult, ...]


@dataclass(frozen=True)
class EvaluationReport:
    dataset_name: str
    n: int
    num_defective: int
    prevalence: float
    model: dict
    auc: float | None
    cells: tuple[EvaluationCell, ...]
    config: dict = field(default_factory=dict)


def _ranking_for(policy, scores, d, drv, norm, tie_break) -> RankedList:
    if policy == "score":
        return rank_by_score(scores, d, driver=drv, tie_break=tie_break)
    if policy == "density":
        return rank_by_density(scores, norm, d, driver=drv, tie_break=tie_break)
    if policy == "optimal":
        return optimal_ranking(d, drv)
    raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")


def evaluate_suite(
    d: Dataset,
    scores,
    drivers,
    budgets,
    policies=("score",),
    *,
    norm: str = "LOC",
    tie_break: str = "asc",
    benefit: str = "modules",
    interpolation: str = "linear",
    dataset_name: str = "dataset",
    model: dict | None = None,
) -> EvaluationReport:
    """Evaluate the scores under every (policy, driver) combination.

    budgets may be empty, in which case only curves and Popt are produced.
    The AUC is ranking-free and reported once; it is None when the dataset
    has a single class (both classes are required for it to exist).
    """
    drivers = tuple(drivers)
    budgets = tuple(float(b) for b in budgets)
    for b in budgets:
        if not 0.0 <= b <= 1.0:
            raise ValueError(f"budget must be in [0, 1], got {b}")

    cells = []
    for policy in policies:
        for drv in drivers:
            ranking = _ranking_for(policy, scores, d, drv, norm, tie_break)
            curve = cost_efficiency_curve(ranking, drv, d, benefit=benefit)
            best = optimal_ranking(d, drv)
            optimal_curve = cost_efficiency_curve(best, drv, d, benefit=benefit)
            cell_popt = popt(curve, optimal_curve, interpolation=interpolation)
            per_budget = []
            for b in budgets:
                cutoff = budget_to_cutoff(drv, ranking, d, b)
                per_budget.append(
                    BudgetResult(
                        budget=b,
                        value=pofb_at(curve, b),
                        cutoff=cutoff,
                        metrics=classification_metrics(
                            confusion_at_cutoff(ranking, d, cutoff)
                        ),
                    )
                )
            cells.append(
                EvaluationCell(
                    policy=policy,
                    driver=drv.name,
                    ranking=ranking,
                    curve=curve,
                    optimal_curve=optimal_curve,
                    popt=cell_popt,
                    budgets=tuple(per_budget),
                )
            )

    try:
        auc = roc_auc(scores, d)
    except ValueError:
        auc = None

    return EvaluationReport(
        dataset_name=dataset_name,
        n=d.n,
        num_defective=d.num_defective,
        prevalence=d.prevalence,
        model=dict(model or {"kind": "external"}),
        auc=auc,
        cells=tuple(cells),
        config={
            "policies": list(policies),
            "drivers": [drv.name for drv in drivers],
            "budgets": list(budgets),
            "norm": norm,
            "tie_break": tie_break,
            "benefit": benefit,
            "popt_interpolation": interpolation,
        },
    )
