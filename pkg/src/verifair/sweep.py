"""Metric evaluation over the (FMR-target x alpha) lattice.

Each FMR target is resolved to a threshold once, per-group rates are
computed once per threshold, and every requested metric is then evaluated
at every alpha. Cells are emitted in grid order (target-major, then alpha,
then metric) and not-computable cells are kept in place, never dropped, so
the cell count always equals |targets| x |alphas| x |metrics|.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UnreachableTargetError, ValidationError
from .metrics import METRICS, MetricResult, evaluate
from .rates import Scope, rates_at, threshold_for_fmr
from .trials import TrialSet

DEFAULT_FMR_RANGE = (0.001, 0.1, 50)
DEFAULT_ALPHA_RANGE = (0.0, 1.0, 101)


@dataclass(frozen=True)
class ResolvedTarget:
    """One FMR target resolved against a trial set."""

    target: float
    threshold: float
    achieved_fmr: float
    quantized_to_zero: bool = False


@dataclass(frozen=True)
class SweepGrid:
    """The evaluation lattice: FMR targets x risk parameters.

    Alphas must span the full risk range, endpoints 0 and 1 included;
    criteria reports are only meaningful over the whole range.
    """

    fmr_targets: tuple[float, ...]
    alphas: tuple[float, ...]
    resolved: tuple[ResolvedTarget, ...] | None = None

    def __post_init__(self):
        targets = tuple(float(t) for t in self.fmr_targets)
        alphas = tuple(float(a) for a in self.alphas)
        if not targets:
            raise ValidationError("grid needs at least one FMR target")
        if any(not 0.0 < t < 1.0 for t in targets):
            raise ValidationError("FMR targets must lie in (0, 1)")
        if any(b <= a for a, b in zip(targets, targets[1:])):
            raise ValidationError("FMR targets must be strictly increasing")
        if len(alphas) < 2 or alphas[0] != 0.0 or alphas[-1] != 1.0:
            raise ValidationError("alpha grid must run from 0 to 1 inclusive")
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise ValidationError("alphas must be strictly increasing")
        object.__setattr__(self, "fmr_targets", targets)
        object.__setattr__(self, "alphas", alphas)


def log_spaced(start: float, stop: float, count: int) -> tuple[float, ...]:
    """Logarithmically spaced values, endpoints exact."""
    if count < 2:
        raise ValidationError("need at least 2 points")
    return tuple(float(x) for x in np.geomspace(start, stop, count))


def linear_spaced(start: float, stop: float, count: int) -> tuple[float, ...]:
    """Linearly spaced values, endpoints exact."""
    if count < 2:
        raise ValidationError("need at least 2 points")
    return tuple(float(x) for x in np.linspace(start, stop, count))


def default_grid() -> SweepGrid:
    """50 log-spaced FMR targets in [0.001, 0.1] x 101 linear alphas in [0, 1]."""
    return SweepGrid(
        fmr_targets=log_spaced(*DEFAULT_FMR_RANGE),
        alphas=linear_spaced(*DEFAULT_ALPHA_RANGE),
    )


@dataclass(frozen=True)
class SweepCell:
    """One lattice cell: a metric evaluated at (resolved target, alpha)."""

    metric: str
    fmr_target: float
    achieved_fmr: float
    threshold: float
    quantized_to_zero: bool
    alpha: float
    value: float | None
    fpd: float | None
    fnd: float | None

    @property
    def computable(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class SweepResult:
    grid: SweepGrid
    cells: tuple[SweepCell, ...]

    def cells_for(self, metric: str) -> list[SweepCell]:
        return [c for c in self.cells if c.metric == metric]


def _canonical_metrics(metrics: Iterable[str]) -> tuple[str, ...]:
    requested = {m.lower() for m in metrics}
    unknown = requested - set(METRICS)
    if unknown:
        raise ValidationError(f"unknown metrics: {', '.join(sorted(unknown))}")
    if not requested:
        raise ValidationError("no metrics requested")
    return tuple(m for m in METRICS if m in requested)


def resolve_targets(trials: TrialSet, targets: Sequence[float]) -> tuple[ResolvedTarget, ...]:
    """Resolve each FMR target to a threshold; unreachable targets are
    recorded with their quantized-to-zero fallback rather than raised."""
    resolved = []
    for target in targets:
        try:
            r = threshold_for_fmr(trials, target)
        except UnreachableTargetError as exc:
            r = exc.result
        resolved.append(
            ResolvedTarget(
                target=float(target),
                threshold=r.threshold,
                achieved_fmr=float(r.achieved_fmr),
                quantized_to_zero=r.quantized_to_zero,
            )
        )
    return tuple(resolved)


def run_sweep(
    trials: TrialSet,
    grid: SweepGrid,
    metrics: Iterable[str] = METRICS,
    max_workers: int | None = None,
) -> SweepResult:
    """Evaluate ``metrics`` over the full lattice.

    Targets are independent, so they may be evaluated in parallel
    (``max_workers`` > 1); results are gathered in grid order either way,
    and identical inputs produce identical output.
    """
    if len(trials.groups) < 2:
        raise ValidationError("sweep needs >= 2 demographic groups")
    metric_names = _canonical_metrics(metrics)
    resolved = grid.resolved or resolve_targets(trials, grid.fmr_targets)

    def eval_target(rt: ResolvedTarget) -> list[SweepCell]:
        rates = rates_at(trials, rt.threshold, Scope.GROUP)
        out = []
        for alpha in grid.alphas:
            for name in metric_names:
                res = evaluate(name, rates, alpha)
                out.append(_cell(rt, res))
        return out

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_target = list(pool.map(eval_target, resolved))
    else:
        per_target = [eval_target(rt) for rt in resolved]

    cells = tuple(cell for chunk in per_target for cell in chunk)
    return SweepResult(
        grid=SweepGrid(grid.fmr_targets, grid.alphas, resolved=resolved),
        cells=cells,
    )


def _cell(rt: ResolvedTarget, res: MetricResult) -> SweepCell:
    return SweepCell(
        metric=res.metric,
        fmr_target=rt.target,
        achieved_fmr=rt.achieved_fmr,
        threshold=rt.threshold,
        quantized_to_zero=rt.quantized_to_zero,
        alpha=res.alpha,
        value=res.value,
        fpd=res.fpd,
        fnd=res.fnd,
    )


@dataclass(frozen=True)
class DistributionSummary:
    """Five-number summary of one component's values across the grid."""

    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    count: int
    raw: tuple[float, ...] | None = None

    @classmethod
    def from_values(cls, values: Sequence[float], keep_raw: bool = False) -> "DistributionSummary":
        if not values:
            raise ValidationError("cannot summarize an empty value list")
        arr = np.asarray(values, dtype=float)
        q1, median, q3 = np.percentile(arr, [25.0, 50.0, 75.0], method="linear")
        return cls(
            minimum=float(arr.min()),
            q1=float(q1),
            median=float(median),
            q3=float(q3),
            maximum=float(arr.max()),
            count=len(values),
            raw=tuple(float(v) for v in values) if keep_raw else None,
        )


@dataclass(frozen=True)
class ComponentSummary:
    """FPD/FND distribution summaries for one metric; a side with no
    computable values is None."""

    metric: str
    fpd: DistributionSummary | None
    fnd: DistributionSummary | None


def summarize_components(
    results: Iterable[SweepCell | MetricResult], keep_raw: bool = False
) -> dict[str, ComponentSummary]:
    """Quartile summaries of the FPD and FND components, per metric.

    Not-computable components are excluded from the summaries (they still
    count toward criteria bookkeeping elsewhere). Raises if no metric has
    any computable component at all.
    """
    by_metric: dict[str, tuple[list[float], list[float]]] = {}
    for res in results:
        fpds, fnds = by_metric.setdefault(res.metric, ([], []))
        if res.fpd is not None:
            fpds.append(res.fpd)
        if res.fnd is not None:
            fnds.append(res.fnd)
    if not by_metric:
        raise ValidationError("no results to summarize")
    out = {}
    for metric in (m for m in METRICS if m in by_metric):
        fpds, fnds = by_metric[metric]
        out[metric] = ComponentSummary(
            metric=metric,
            fpd=DistributionSummary.from_values(fpds, keep_raw) if fpds else None,
            fnd=DistributionSummary.from_values(fnds, keep_raw) if fnds else None,
        )
    if all(s.fpd is None and s.fnd is None for s in out.values()):
        raise ValidationError("all results are not-computable; nothing to summarize")
    return out


@dataclass(frozen=True)
class CurvePoint:
    """One point of a metric-vs-FMR curve."""

    fmr_target: float
    achieved_fmr: float
    threshold: float
    quantized_to_zero: bool
    value: float


def garbe_curve_data(
    trials: TrialSet, fmr_targets: Sequence[float], alpha: float
) -> list[CurvePoint]:
    """GARBE at a single alpha across FMR targets, sorted by achieved FMR."""
    if len(trials.groups) < 2:
        raise ValidationError("curve needs >= 2 demographic groups")
    points = []
    for rt in resolve_targets(trials, sorted(float(t) for t in fmr_targets)):
        rates = rates_at(trials, rt.threshold, Scope.GROUP)
        res = evaluate("garbe", rates, alpha)
        points.append(
            CurvePoint(
                fmr_target=rt.target,
                achieved_fmr=rt.achieved_fmr,
                threshold=rt.threshold,
                quantized_to_zero=rt.quantized_to_zero,
                value=res.value,
            )
        )
    points.sort(key=lambda p: (p.achieved_fmr, p.fmr_target))
    return points
