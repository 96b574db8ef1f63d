"""Command-line client for the evaluation service.

The CLI never computes metrics itself: it builds a request, sends it to the
service (an in-process ASGI instance by default, or a remote server via
``--server``), and renders the returned report. Text tables and structured
output therefore always contain the same numbers.

Exit status: 0 on success; 1 on any validation or transport error (a
single-line diagnostic goes to stderr); 2 when results were produced but
are partial — an FMR target was quantized to zero, or every requested
metric value came back not-computable.
"""

from __future__ import annotations

import argparse
import asyncio
import decimal
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import httpx

from . import __version__, reports

OUT_DIR_ENV = "VERIFAIR_OUT_DIR"


def _parse_range(text: str, name: str) -> dict[str, Any]:
    """Parse ``start:stop:count[log]`` into a range spec dict."""
    parts = text.split(":")
    if len(parts) != 3:
        raise SystemExit(_fail(f"bad {name} range {text!r}: expected start:stop:count[log]"))
    start_s, stop_s, count_s = parts
    spacing = "linear"
    if count_s.endswith("log"):
        spacing = "log"
        count_s = count_s[:-3]
    elif count_s.endswith("lin"):
        count_s = count_s[:-3]
    try:
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError:
        raise SystemExit(_fail(f"bad {name} range {text!r}: non-numeric field")) from None
    return {"start": start, "stop": stop, "count": count, "spacing": spacing}


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _read_scores(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc.strerror or exc}")) from None


def _read_json(path: str, name: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SystemExit(_fail(f"cannot read {path}: {exc.strerror or exc}")) from None
    except json.JSONDecodeError as exc:
        raise SystemExit(_fail(f"{name} file {path} is not valid JSON: {exc}")) from None


def _post(server: str | None, endpoint: str, payload: dict) -> dict:
    """POST to the service; in-process app when no server is given."""

    async def go() -> httpx.Response:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=300.0) as client:
                return await client.post(endpoint, json=payload)
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://verifair.local", timeout=None
        ) as client:
            return await client.post(endpoint, json=payload)

    try:
        response = asyncio.run(go())
    except httpx.HTTPError as exc:
        raise SystemExit(_fail(f"request failed: {exc}")) from None
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        if isinstance(detail, list):  # pydantic validation errors
            first = detail[0]
            loc = ".".join(str(p) for p in first.get("loc", []) if p != "body")
            detail = f"{loc}: {first.get('msg', 'invalid value')}"
        raise SystemExit(_fail(str(detail)))
    return response.json()


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        _out_path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(value: Any, percent: bool = False) -> str:
    if value is None:
        return "n/c"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if percent:
            scaled = decimal.Decimal(repr(value * 100.0))
            return f"{scaled.quantize(decimal.Decimal('0.01'), rounding=decimal.ROUND_HALF_UP)}%"
        return f"{value:.6g}"
    return str(value)


def _table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _render_rates(report: dict, percent: bool) -> str:
    rows = []
    for entry in report["groups"] + [report["pooled"]]:
        rows.append(
            [
                entry["group"] or "pooled",
                _fmt(entry["fmr"], percent),
                _fmt(entry["fnmr"], percent),
                str(entry["mated"]),
                str(entry["nonmated"]),
            ]
        )
    head = f"threshold {_fmt(report['threshold'])} (source: {report['threshold_source']})\n"
    if report.get("pooled_eer") is not None:
        head += f"pooled EER {_fmt(report['pooled_eer'], percent)}\n"
    if report.get("fmr_target") is not None:
        head += (
            f"target FMR {_fmt(report['fmr_target'], percent)}, "
            f"achieved {_fmt(report['achieved_fmr'], percent)}"
        )
        if report.get("quantized_to_zero"):
            head += " (quantized to zero)"
        head += "\n"
    return head + _table(["group", "fmr", "fnmr", "mated", "nonmated"], rows)


def _render_cells(cells: list[dict], percent: bool) -> str:
    rows = [
        [
            c["metric"],
            _fmt(c["alpha"]),
            _fmt(c["threshold"]),
            _fmt(c.get("fmr_target"), percent),
            _fmt(c.get("achieved_fmr"), percent),
            _fmt(c["value"]),
            _fmt(c["fpd"]),
            _fmt(c["fnd"]),
            _fmt(c["computable"]),
        ]
        for c in cells
    ]
    return _table(
        ["metric", "alpha", "threshold", "target_fmr", "achieved_fmr", "value", "fpd", "fnd", "computable"],
        rows,
    )


def _render_summary(summary: dict) -> str:
    rows = []
    for metric, sides in summary.items():
        for side in ("fpd", "fnd"):
            s = sides.get(side)
            if s is None:
                rows.append([metric, side, "n/c", "n/c", "n/c", "n/c", "n/c", "0"])
            else:
                rows.append(
                    [
                        metric,
                        side,
                        _fmt(s["min"]),
                        _fmt(s["q1"]),
                        _fmt(s["median"]),
                        _fmt(s["q3"]),
                        _fmt(s["max"]),
                        str(s["count"]),
                    ]
                )
    return _table(["metric", "component", "min", "q1", "median", "q3", "max", "n"], rows)


def _render_sweep(report: dict, percent: bool) -> str:
    cells = report["cells"]
    computable = sum(1 for c in cells if c["computable"])
    lines = [
        f"grid: {len(report['grid']['fmr_targets'])} FMR targets x "
        f"{len(report['grid']['alphas'])} alphas, {len(cells)} cells "
        f"({computable} computable)",
    ]
    quantized = [rt for rt in report["resolved_targets"] if rt["quantized_to_zero"]]
    if quantized:
        lines.append(f"warning: {len(quantized)} FMR target(s) quantized to zero")
    lines.append("")
    lines.append(_render_summary(report["component_summary"]))
    return "\n".join(lines)


def _render_ffmc(report: dict) -> str:
    criteria = report["criteria"]
    metrics = list(criteria)
    rows = []
    for key, label in (("ffmc1", "intuitive scales"), ("ffmc2", "bounded"), ("ffmc3", "computable")):
        row = [label]
        for m in metrics:
            row.append("pass" if criteria[m][key]["passed"] else "fail")
        rows.append(row)
    table = _table(["criterion"] + metrics, rows)
    notes = []
    for m in metrics:
        c1, c3 = criteria[m]["ffmc1"], criteria[m]["ffmc3"]
        ratio = _fmt(c1["scale_ratio"])
        frac = _fmt(c3["computable_fraction"])
        notes.append(
            f"{m}: component medians {_fmt(c1['median_fpd'])}/{_fmt(c1['median_fnd'])} "
            f"(ratio {ratio}, limit {_fmt(report['scale_ratio_limit'])}); "
            f"computable {c3['computable_cells']}/{c3['total_cells']} ({frac})"
        )
    return table + "\n" + "\n".join(notes) + "\n"


def _render_det(report: dict) -> str:
    rows = []
    for series in report["series"]:
        label = series["group"] or "pooled"
        rows.append([label, str(len(series["points"]))])
    return _table(["series", "points"], rows)


def _exit_code(report: dict) -> int:
    cells = report.get("results") or report.get("cells")
    if cells is not None:
        if all(not c["computable"] for c in cells):
            return 2
        if any(c.get("quantized_to_zero") for c in cells):
            return 2
    for rt in report.get("resolved_targets", []):
        if rt["quantized_to_zero"]:
            return 2
    if report.get("quantized_to_zero"):
        return 2
    return 0


def _infer_format(args: argparse.Namespace) -> str:
    if args.format:
        return args.format
    if args.out:
        suffix = Path(args.out).suffix.lower()
        if suffix == ".json":
            return "json"
        if suffix == ".csv":
            return "csv"
    return "text"


def _scores_payload(args: argparse.Namespace) -> dict:
    return {
        "scores": _read_scores(args.scores),
        "path": args.scores,
        "polarity": args.polarity,
    }


def _add_common(parser: argparse.ArgumentParser, scores: bool = True) -> None:
    if scores:
        parser.add_argument("--scores", required=True, help="trial score file")
        parser.add_argument(
            "--polarity",
            choices=["similarity", "distance"],
            default="similarity",
            help="polarity of the input scores (distance scores are negated at ingest)",
        )
    parser.add_argument("--server", help="remote service URL (default: run in-process)")
    parser.add_argument("--format", choices=["text", "json", "csv"], help="output format")
    parser.add_argument("--out", help=f"output path (relative paths honor ${OUT_DIR_ENV})")
    parser.add_argument("--percent", action="store_true", help="display rates as percentages")


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; this CLI reserves 2
    for partial results, so flag errors exit 1 with one diagnostic line."""

    def error(self, message: str):
        raise SystemExit(_fail(message))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="verifair",
        description="Demographic fairness evaluation for binary biometric verifiers.",
    )
    parser.add_argument("--version", action="version", version=f"verifair {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="per-group FMR/FNMR table (default: at the pooled-EER threshold)")
    _add_common(p)
    p.add_argument("--threshold", type=float, help="evaluate at this threshold")
    p.add_argument("--fmr", type=float, help="evaluate at the threshold reaching this pooled FMR")

    p = sub.add_parser("eval", help="evaluate fairness metrics at one operating point")
    _add_common(p)
    p.add_argument("--metric", default="fdr,ir,garbe", help="comma-separated metric list")
    p.add_argument("--alpha", type=float, required=True, help="risk parameter in [0,1]")
    p.add_argument("--threshold", type=float)
    p.add_argument("--fmr", type=float, help="target pooled FMR")

    p = sub.add_parser("sweep", help="evaluate metrics over an (FMR target x alpha) grid")
    _add_common(p)
    p.add_argument("--metrics", default="fdr,ir,garbe")
    p.add_argument("--fmr-range", default="0.001:0.1:50log", help="start:stop:count[log]")
    p.add_argument("--alpha-range", default="0:1:101", help="start:stop:count")
    p.add_argument("--workers", type=int, help="parallel workers for grid evaluation")
    p.add_argument("--csv", dest="csv_out", help="also write the flat cell export here")

    p = sub.add_parser("ffmc", help="functional fairness measure criteria report")
    _add_common(p)
    p.add_argument("--metrics", default="fdr,ir,garbe")
    p.add_argument("--fmr-range", default="0.001:0.1:50log")
    p.add_argument("--alpha-range", default="0:1:101")
    p.add_argument("--scale-limit", type=float, default=10.0, help="FFMC.1 median-scale ratio limit")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("det", help="DET operating points")
    _add_common(p)
    p.add_argument("--scope", choices=["pooled", "group"], default="pooled")

    p = sub.add_parser("protocol", help="generate a balanced trial protocol from a roster")
    _add_common(p, scores=False)
    p.add_argument("--roster", required=True, help="JSON: group -> speaker -> [utterance, ...]")
    p.add_argument("--groups", help="comma-separated subset of roster groups")
    p.add_argument("--speakers", type=int, required=True, help="speakers per group")
    p.add_argument("--utterances", type=int, required=True, help="utterances per speaker")
    p.add_argument("--nonmated", type=int, required=True, help="nonmated pairs per group")
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("synth", help="generate synthetic Gaussian score sets")
    _add_common(p, scores=False)
    p.add_argument("--config", required=True, help="JSON group spec file")
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _run_rates(args: argparse.Namespace) -> int:
    payload = _scores_payload(args)
    payload["threshold"] = args.threshold
    payload["fmr_target"] = args.fmr
    report = _post(args.server, "/v1/rates", payload)
    fmt = _infer_format(args)
    if fmt == "json":
        _emit(reports.to_json(report), args.out)
    elif fmt == "csv":
        _emit(reports.rates_csv(report), args.out)
    else:
        _emit(_render_rates(report, args.percent), args.out)
    return _exit_code(report)


def _run_eval(args: argparse.Namespace) -> int:
    payload = _scores_payload(args)
    payload["metrics"] = [m.strip() for m in args.metric.split(",") if m.strip()]
    payload["alpha"] = args.alpha
    payload["threshold"] = args.threshold
    payload["fmr_target"] = args.fmr
    report = _post(args.server, "/v1/eval", payload)
    fmt = _infer_format(args)
    if fmt == "json":
        _emit(reports.to_json(report), args.out)
    elif fmt == "csv":
        _emit(reports.cells_csv(report["results"]), args.out)
    else:
        _emit(_render_cells(report["results"], args.percent), args.out)
    return _exit_code(report)


def _run_sweep(args: argparse.Namespace) -> int:
    payload = _scores_payload(args)
    payload["metrics"] = [m.strip() for m in args.metrics.split(",") if m.strip()]
    payload["fmr_targets"] = _parse_range(args.fmr_range, "FMR")
    payload["alphas"] = _parse_range(args.alpha_range, "alpha")
    payload["max_workers"] = args.workers
    report = _post(args.server, "/v1/sweep", payload)
    if args.csv_out:
        _emit(reports.cells_csv(report["cells"]), args.csv_out)
    fmt = _infer_format(args)
    if fmt == "json":
        _emit(reports.to_json(report), args.out)
    elif fmt == "csv":
        _emit(reports.cells_csv(report["cells"]), args.out)
    else:
        _emit(_render_sweep(report, args.percent), args.out)
    return _exit_code(report)


def _run_ffmc(args: argparse.Namespace) -> int:
    payload = _scores_payload(args)
    payload["metrics"] = [m.strip() for m in args.metrics.split(",") if m.strip()]
    payload["fmr_targets"] = _parse_range(args.fmr_range, "FMR")
    payload["alphas"] = _parse_range(args.alpha_range, "alpha")
    payload["scale_ratio_limit"] = args.scale_limit
    payload["max_workers"] = args.workers
    report = _post(args.server, "/v1/ffmc", payload)
    fmt = _infer_format(args)
    if fmt == "json":
        _emit(reports.to_json(report), args.out)
    else:
        _emit(_render_ffmc(report), args.out)
    return _exit_code(report)


def _run_det(args: argparse.Namespace) -> int:
    payload = _scores_payload(args)
    payload["scope"] = args.scope
    report = _post(args.server, "/v1/det", payload)
    fmt = _infer_format(args)
    if fmt == "json":
        _emit(reports.to_json(report), args.out)
    elif fmt == "csv":
        _emit(reports.det_csv(report), args.out)
    else:
        _emit(_render_det(report), args.out)
    return _exit_code(report)


def _run_protocol(args: argparse.Namespace) -> int:
    roster = _read_json(args.roster, "roster")
    payload = {
        "roster": roster,
        "groups": [g.strip() for g in args.groups.split(",")] if args.groups else None,
        "speakers_per_group": args.speakers,
        "utterances_per_speaker": args.utterances,
        "nonmated_per_group": args.nonmated,
        "seed": args.seed,
    }
    report = _post(args.server, "/v1/protocol", payload)
    if _infer_format(args) == "json":
        _emit(reports.to_json(report), args.out)
    else:
        _emit(report["content"], args.out)
        totals = report["totals"]
        print(
            f"protocol: {totals['pairs']} pairs "
            f"({totals['mated']} mated, {totals['nonmated']} nonmated)",
            file=sys.stderr,
        )
    return 0


def _run_synth(args: argparse.Namespace) -> int:
    config = _read_json(args.config, "config")
    if isinstance(config, list):
        config = {"groups": config}
    payload = {"groups": config["groups"], "seed": args.seed}
    report = _post(args.server, "/v1/synth", payload)
    if _infer_format(args) == "json":
        _emit(reports.to_json(report), args.out)
    else:
        _emit(report["content"], args.out)
    return 0


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


_RUNNERS = {
    "rates": _run_rates,
    "eval": _run_eval,
    "sweep": _run_sweep,
    "ffmc": _run_ffmc,
    "det": _run_det,
    "protocol": _run_protocol,
    "synth": _run_synth,
    "serve": _run_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _RUNNERS[args.command](args)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    except Exception as exc:  # last-resort single-line diagnostic
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
