"""Canonical report documents and flat exports.

Every report is a plain dict with a fixed field layout (schema_version 1)
so that JSON output is stable and the renderer can consume it without
recomputation. Reports embed the tool version, a digest of the evaluated
input, the fully resolved configuration, and the PRNG seed where one was
used; reruns are auditable from the report alone. No timestamps: identical
inputs must produce byte-identical reports.

Infinite DET sentinel thresholds are serialized as the strings "-inf" and
"inf" (strict JSON has no infinity literal); not-computable values are
null with an explicit computable flag, never NaN.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .ffmc import FfmcReport
from .protocol import PRNG_NAME, TrialPair
from .rates import DetPoint, EerResult, GroupRates
from .sweep import ComponentSummary, CurvePoint, DistributionSummary, SweepResult
from .trials import Label, Polarity, TrialSet

SCHEMA_VERSION = 1


def sha256_digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def _num(x: float | Fraction | None) -> float | None:
    if x is None:
        return None
    return float(x)


def _json_threshold(t: float) -> float | str:
    if math.isinf(t):
        return "inf" if t > 0 else "-inf"
    return float(t)


def input_info(
    content: bytes | str | None,
    path: str | None = None,
    trials: TrialSet | None = None,
    source_polarity: Polarity | str | None = None,
) -> dict[str, Any]:
    info: dict[str, Any] = {
        "path": path,
        "sha256": sha256_digest(content) if content is not None else None,
    }
    if trials is not None:
        info["records"] = len(trials)
        info["groups"] = list(trials.groups)
        info["mated"] = trials.n_mated
        info["nonmated"] = trials.n_nonmated
    if source_polarity is not None:
        info["source_polarity"] = Polarity(source_polarity).value
    return info


def envelope(
    command: str,
    config: Mapping[str, Any],
    input_: Mapping[str, Any] | None = None,
    seed: int | None = None,
) -> dict[str, Any]:
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "verifair", "version": __version__},
        "command": command,
        "input": dict(input_) if input_ is not None else None,
        "config": dict(config),
        "seed": seed,
    }
    if seed is not None:
        report["prng"] = PRNG_NAME
        report["numpy_version"] = np.__version__
    return report


def rate_row(group: str | None, pair) -> dict[str, Any]:
    return {
        "group": group,
        "fmr": _num(pair.fmr),
        "fnmr": _num(pair.fnmr),
        "mated": pair.n_mated,
        "nonmated": pair.n_nonmated,
    }


def rates_body(
    group_rates: GroupRates,
    pooled_pair,
    threshold_source: str,
    eer: EerResult | None = None,
    fmr_target: float | None = None,
    achieved_fmr: Fraction | float | None = None,
    quantized_to_zero: bool = False,
) -> dict[str, Any]:
    return {
        "threshold": group_rates.threshold,
        "threshold_source": threshold_source,
        "pooled_eer": eer.eer if eer is not None else None,
        "fmr_target": fmr_target,
        "achieved_fmr": _num(achieved_fmr),
        "quantized_to_zero": quantized_to_zero,
        "pooled": rate_row(None, pooled_pair),
        "groups": [
            rate_row(group, pair) for group, pair in group_rates.per_group.items()
        ],
    }


def cell_dict(cell) -> dict[str, Any]:
    """Serialize a sweep/eval cell; works for SweepCell-shaped objects."""
    return {
        "metric": cell.metric,
        "fmr_target": getattr(cell, "fmr_target", None),
        "achieved_fmr": _num(getattr(cell, "achieved_fmr", None)),
        "threshold": cell.threshold,
        "quantized_to_zero": bool(getattr(cell, "quantized_to_zero", False)),
        "alpha": cell.alpha,
        "value": _num(cell.value),
        "fpd": _num(cell.fpd),
        "fnd": _num(cell.fnd),
        "computable": cell.value is not None,
    }


def _summary_dict(s: DistributionSummary | None) -> dict[str, Any] | None:
    if s is None:
        return None
    out = {
        "min": s.minimum,
        "q1": s.q1,
        "median": s.median,
        "q3": s.q3,
        "max": s.maximum,
        "count": s.count,
    }
    if s.raw is not None:
        out["raw"] = list(s.raw)
    return out


def component_summary_dict(summaries: Mapping[str, ComponentSummary]) -> dict[str, Any]:
    return {
        metric: {"fpd": _summary_dict(s.fpd), "fnd": _summary_dict(s.fnd)}
        for metric, s in summaries.items()
    }


def sweep_body(
    result: SweepResult, summaries: Mapping[str, ComponentSummary]
) -> dict[str, Any]:
    return {
        "grid": {
            "fmr_targets": list(result.grid.fmr_targets),
            "alphas": list(result.grid.alphas),
        },
        "resolved_targets": [
            {
                "target": rt.target,
                "threshold": rt.threshold,
                "achieved_fmr": rt.achieved_fmr,
                "quantized_to_zero": rt.quantized_to_zero,
            }
            for rt in (result.grid.resolved or ())
        ],
        "cells": [cell_dict(c) for c in result.cells],
        "component_summary": component_summary_dict(summaries),
    }


def ffmc_body(report: FfmcReport) -> dict[str, Any]:
    criteria = {}
    for metric, crit in report.per_metric.items():
        criteria[metric] = {
            "ffmc1": {
                "passed": crit.scale.passed,
                "median_fpd": crit.scale.median_fpd,
                "median_fnd": crit.scale.median_fnd,
                "scale_ratio": crit.scale.ratio,
            },
            "ffmc2": {
                "passed": crit.bounds.passed,
                "lower": crit.bounds.lower,
                "upper": crit.bounds.upper,
            },
            "ffmc3": {
                "passed": crit.computability.passed,
                "computable_cells": crit.computability.computable_cells,
                "total_cells": crit.computability.total_cells,
                "computable_fraction": crit.computability.computable_fraction,
            },
        }
    return {"scale_ratio_limit": report.scale_ratio_limit, "criteria": criteria}


def det_body(series: Mapping[str | None, Sequence[DetPoint]], scope: str) -> dict[str, Any]:
    return {
        "scope": scope,
        "series": [
            {
                "group": group,
                "points": [
                    {"threshold": _json_threshold(p.threshold), "fmr": p.fmr, "fnmr": p.fnmr}
                    for p in points
                ],
            }
            for group, points in series.items()
        ],
    }


def curve_body(points: Sequence[CurvePoint], alpha: float) -> dict[str, Any]:
    return {
        "metric": "garbe",
        "alpha": alpha,
        "points": [
            {
                "fmr_target": p.fmr_target,
                "achieved_fmr": p.achieved_fmr,
                "threshold": p.threshold,
                "quantized_to_zero": p.quantized_to_zero,
                "value": p.value,
            }
            for p in points
        ],
    }


def protocol_body(pairs: Sequence[TrialPair], content: str) -> dict[str, Any]:
    per_group: dict[str, dict[str, int]] = {}
    for p in pairs:
        counts = per_group.setdefault(p.group, {"mated": 0, "nonmated": 0})
        counts["mated" if p.label is Label.MATED else "nonmated"] += 1
    return {
        "totals": {
            "pairs": len(pairs),
            "mated": sum(c["mated"] for c in per_group.values()),
            "nonmated": sum(c["nonmated"] for c in per_group.values()),
            "per_group": per_group,
        },
        "content": content,
    }


def to_json(report: Mapping[str, Any]) -> str:
    """Stable JSON rendering; rejects NaN/inf outright."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _csv_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_value(v) for v in row])
    return buf.getvalue()


CELL_CSV_HEADER = (
    "metric",
    "fmr_target",
    "achieved_fmr",
    "threshold",
    "alpha",
    "value",
    "fpd",
    "fnd",
    "computable",
    "quantized_to_zero",
)


def cells_csv(cells: Iterable[Mapping[str, Any]]) -> str:
    """Flat delimiter-separated export of sweep/eval cells (dict form)."""
    return _write_csv(
        CELL_CSV_HEADER,
        (
            (
                c["metric"],
                c["fmr_target"],
                c["achieved_fmr"],
                c["threshold"],
                c["alpha"],
                c["value"],
                c["fpd"],
                c["fnd"],
                c["computable"],
                c["quantized_to_zero"],
            )
            for c in cells
        ),
    )


def det_csv(body: Mapping[str, Any]) -> str:
    rows = []
    for series in body["series"]:
        group = series["group"] or ""
        for p in series["points"]:
            t = p["threshold"]
            rows.append((group, t if isinstance(t, str) else t, p["fmr"], p["fnmr"]))
    return _write_csv(("group", "threshold", "fmr", "fnmr"), rows)


def rates_csv(body: Mapping[str, Any]) -> str:
    rows = [
        (r["group"], r["fmr"], r["fnmr"], r["mated"], r["nonmated"])
        for r in body["groups"]
    ]
    pooled = body["pooled"]
    rows.append(("pooled", pooled["fmr"], pooled["fnmr"], pooled["mated"], pooled["nonmated"]))
    return _write_csv(("group", "fmr", "fnmr", "mated", "nonmated"), rows)
