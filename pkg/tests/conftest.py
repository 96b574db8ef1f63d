"""Shared fixtures and independent oracles used across the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest

from verifair import Label, TrialRecord, TrialSet


def make_trials(groups: dict[str, tuple[list[float], list[float]]]) -> TrialSet:
    """Build a TrialSet from {group: (mated scores, nonmated scores)}."""
    records = []
    for group, (mated, nonmated) in groups.items():
        records.extend(TrialRecord(group, Label.MATED, float(s)) for s in mated)
        records.extend(TrialRecord(group, Label.NONMATED, float(s)) for s in nonmated)
    return TrialSet.from_records(records)


def oracle_rates(mated: list[float], nonmated: list[float], threshold: float) -> tuple[Fraction, Fraction]:
    """Double-loop rate counting: accept iff score >= threshold."""
    false_matches = sum(1 for s in nonmated if s >= threshold)
    false_nonmatches = sum(1 for s in mated if s < threshold)
    return (
        Fraction(false_matches, len(nonmated)),
        Fraction(false_nonmatches, len(mated)),
    )


def oracle_fdr(fmrs: list[float], fnmrs: list[float], alpha: float) -> tuple[float, float, float]:
    """Pairwise enumeration of the FDR differentials and value."""
    fpd = max(abs(a - b) for a in fmrs for b in fmrs)
    fnd = max(abs(a - b) for a in fnmrs for b in fnmrs)
    return fpd, fnd, 1.0 - (alpha * fpd + (1.0 - alpha) * fnd)


def oracle_ir(fmrs: list[float], fnmrs: list[float], alpha: float):
    """Max/min ratio components; None marks a not-computable side/value."""

    def component(values):
        hi = max(values)
        lo = min(values)
        if lo == 0.0:
            return 1.0 if hi == 0.0 else None
        return hi / lo

    fpd = component(fmrs)
    fnd = component(fnmrs)
    if (alpha > 0.0 and fpd is None) or (alpha < 1.0 and fnd is None):
        return fpd, fnd, None
    value = 1.0
    if alpha > 0.0:
        value *= fpd ** alpha
    if alpha < 1.0:
        value *= fnd ** (1.0 - alpha)
    return fpd, fnd, value


def oracle_gini(values: list[float]) -> float:
    """Direct double-sum Gini with the n/(n-1) small-sample correction."""
    n = len(values)
    mean = sum(values) / n
    if mean == 0.0:
        return 0.0
    double_sum = sum(abs(a - b) for a in values for b in values)
    return (n / (n - 1)) * double_sum / (2 * n * n * mean)


def oracle_garbe(fmrs: list[float], fnmrs: list[float], alpha: float) -> tuple[float, float, float]:
    fpd = oracle_gini(fmrs)
    fnd = oracle_gini(fnmrs)
    return fpd, fnd, alpha * fpd + (1.0 - alpha) * fnd


def oracle_quartiles(values: list[float]) -> tuple[float, float, float]:
    """Sort-based order statistics with linear interpolation."""

    def q(p: float) -> float:
        xs = sorted(values)
        h = (len(xs) - 1) * p
        lo = int(h)
        frac = h - lo
        if lo + 1 >= len(xs):
            return xs[lo]
        return xs[lo] + frac * (xs[lo + 1] - xs[lo])

    return q(0.25), q(0.5), q(0.75)


@pytest.fixture
def two_group_trials() -> TrialSet:
    return make_trials(
        {
            "A": ([0.9, 0.8, 0.7, 0.65], [0.1, 0.2, 0.3, 0.05]),
            "B": ([0.85, 0.6, 0.5, 0.4], [0.15, 0.35, 0.45, 0.25]),
        }
    )
