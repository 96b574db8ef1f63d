"""FastAPI service wrapping the core evaluation package.

Domain errors surface as HTTP 400 with a single-line detail message.
Unreachable FMR targets are not errors at this layer: the affected cells
are flagged ``quantized_to_zero`` and reported, so clients can decide how
to treat partial results.
"""

from __future__ import annotations

import json
from typing import Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, reports
from ..errors import UnreachableTargetError, VerifairError
from ..ffmc import ffmc_report
from ..metrics import METRICS, evaluate
from ..protocol import (
    ProtocolSpec,
    SyntheticGroupSpec,
    dump_protocol,
    generate_protocol,
    generate_synthetic,
)
from ..rates import (
    Scope,
    det_points,
    det_points_by_group,
    group_rate_table,
    pooled_eer,
    rates_at,
    threshold_for_fmr,
)
from ..sweep import (
    SweepGrid,
    garbe_curve_data,
    linear_spaced,
    log_spaced,
    run_sweep,
    summarize_components,
)
from ..trials import Polarity, TrialSet, dump_scores, parse_scores
from . import schemas


def _trials_from(req: schemas.ScoresRequest) -> TrialSet:
    return parse_scores(req.scores, Polarity(req.polarity))


def _input_info(req: schemas.ScoresRequest, trials: TrialSet) -> dict:
    return reports.input_info(
        content=req.scores, path=req.path, trials=trials, source_polarity=req.polarity
    )


def _expand_range(spec: Union[schemas.RangeSpec, list[float]]) -> tuple[float, ...]:
    if isinstance(spec, schemas.RangeSpec):
        fn = log_spaced if spec.spacing == "log" else linear_spaced
        return fn(spec.start, spec.stop, spec.count)
    return tuple(float(v) for v in spec)


def _range_config(spec: Union[schemas.RangeSpec, list[float]]) -> dict | list[float]:
    if isinstance(spec, schemas.RangeSpec):
        return spec.model_dump()
    return [float(v) for v in spec]


def _resolve_threshold(trials: TrialSet, threshold, fmr_target):
    """Returns (threshold, source, target, achieved, quantized)."""
    if (threshold is None) == (fmr_target is None):
        raise VerifairError("exactly one of threshold or fmr_target is required")
    if threshold is not None:
        return float(threshold), "given", None, None, False
    try:
        r = threshold_for_fmr(trials, fmr_target)
    except UnreachableTargetError as exc:
        r = exc.result
    return r.threshold, "fmr_target", float(fmr_target), float(r.achieved_fmr), r.quantized_to_zero


def create_app() -> FastAPI:
    app = FastAPI(title="verifair", version=__version__)

    @app.exception_handler(VerifairError)
    async def domain_error(request: Request, exc: VerifairError) -> JSONResponse:
        detail = " ".join(str(exc).split())
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/v1/version", response_model=schemas.VersionInfo)
    def version() -> dict:
        return {
            "name": "verifair",
            "version": __version__,
            "report_schema_version": reports.SCHEMA_VERSION,
        }

    @app.post("/v1/rates", response_model=schemas.RatesReport)
    def rates_endpoint(req: schemas.RatesRequest) -> dict:
        trials = _trials_from(req)
        eer = None
        if req.threshold is None and req.fmr_target is None:
            eer = pooled_eer(trials)
            threshold, source = eer.threshold, "eer"
            target = achieved = None
            quantized = False
            table = group_rate_table(trials)
        else:
            threshold, source, target, achieved, quantized = _resolve_threshold(
                trials, req.threshold, req.fmr_target
            )
            table = rates_at(trials, threshold, Scope.GROUP)
        pooled_pair = rates_at(trials, threshold, Scope.POOLED).per_group["pooled"]
        report = reports.envelope(
            command="rates",
            config={
                "polarity": req.polarity,
                "threshold": req.threshold,
                "fmr_target": req.fmr_target,
            },
            input_=_input_info(req, trials),
        )
        report.update(
            reports.rates_body(
                table,
                pooled_pair,
                threshold_source=source,
                eer=eer,
                fmr_target=target,
                achieved_fmr=achieved,
                quantized_to_zero=quantized,
            )
        )
        return report

    @app.post("/v1/eval", response_model=schemas.EvalReport)
    def eval_endpoint(req: schemas.EvalRequest) -> dict:
        trials = _trials_from(req)
        threshold, source, target, achieved, quantized = _resolve_threshold(
            trials, req.threshold, req.fmr_target
        )
        rates = rates_at(trials, threshold, Scope.GROUP)
        names = [m for m in METRICS if m in set(req.metrics)]
        cells = []
        for name in names:
            res = evaluate(name, rates, req.alpha)
            cell = reports.cell_dict(res)
            cell["fmr_target"] = target
            cell["achieved_fmr"] = achieved
            cell["quantized_to_zero"] = quantized
            cells.append(cell)
        report = reports.envelope(
            command="eval",
            config={
                "polarity": req.polarity,
                "metrics": names,
                "alpha": req.alpha,
                "threshold": req.threshold,
                "fmr_target": req.fmr_target,
            },
            input_=_input_info(req, trials),
        )
        report["threshold_source"] = source
        report["results"] = cells
        return report

    @app.post("/v1/sweep", response_model=schemas.SweepReport)
    def sweep_endpoint(req: schemas.SweepRequest) -> dict:
        trials = _trials_from(req)
        grid = SweepGrid(_expand_range(req.fmr_targets), _expand_range(req.alphas))
        result = run_sweep(trials, grid, req.metrics, max_workers=req.max_workers)
        summaries = summarize_components(result.cells) if req.include_summary else {}
        report = reports.envelope(
            command="sweep",
            config={
                "polarity": req.polarity,
                "metrics": sorted(set(req.metrics)),
                "fmr_targets": _range_config(req.fmr_targets),
                "alphas": _range_config(req.alphas),
                "max_workers": req.max_workers,
            },
            input_=_input_info(req, trials),
        )
        report.update(reports.sweep_body(result, summaries))
        return report

    @app.post("/v1/ffmc", response_model=schemas.FfmcReportModel)
    def ffmc_endpoint(req: schemas.FfmcRequest) -> dict:
        trials = _trials_from(req)
        grid = SweepGrid(_expand_range(req.fmr_targets), _expand_range(req.alphas))
        result = run_sweep(trials, grid, req.metrics, max_workers=req.max_workers)
        criteria = ffmc_report(result.cells, scale_ratio_limit=req.scale_ratio_limit)
        report = reports.envelope(
            command="ffmc",
            config={
                "polarity": req.polarity,
                "metrics": sorted(set(req.metrics)),
                "fmr_targets": _range_config(req.fmr_targets),
                "alphas": _range_config(req.alphas),
                "scale_ratio_limit": req.scale_ratio_limit,
                "max_workers": req.max_workers,
            },
            input_=_input_info(req, trials),
        )
        report["resolved_targets"] = [
            {
                "target": rt.target,
                "threshold": rt.threshold,
                "achieved_fmr": rt.achieved_fmr,
                "quantized_to_zero": rt.quantized_to_zero,
            }
            for rt in (result.grid.resolved or ())
        ]
        report.update(reports.ffmc_body(criteria))
        return report

    @app.post("/v1/det", response_model=schemas.DetReport)
    def det_endpoint(req: schemas.DetRequest) -> dict:
        trials = _trials_from(req)
        if req.scope == "pooled":
            series = {None: det_points(trials)}
        else:
            series = dict(det_points_by_group(trials))
        report = reports.envelope(
            command="det",
            config={"polarity": req.polarity, "scope": req.scope},
            input_=_input_info(req, trials),
        )
        report.update(reports.det_body(series, req.scope))
        return report

    @app.post("/v1/curve", response_model=schemas.CurveReport)
    def curve_endpoint(req: schemas.CurveRequest) -> dict:
        trials = _trials_from(req)
        points = garbe_curve_data(trials, _expand_range(req.fmr_targets), req.alpha)
        report = reports.envelope(
            command="curve",
            config={
                "polarity": req.polarity,
                "alpha": req.alpha,
                "fmr_targets": _range_config(req.fmr_targets),
            },
            input_=_input_info(req, trials),
        )
        report.update(reports.curve_body(points, req.alpha))
        return report

    @app.post("/v1/protocol", response_model=schemas.ProtocolReport)
    def protocol_endpoint(req: schemas.ProtocolRequest) -> dict:
        groups = tuple(req.groups) if req.groups else tuple(sorted(req.roster))
        spec = ProtocolSpec(
            groups=groups,
            speakers_per_group=req.speakers_per_group,
            utterances_per_speaker=req.utterances_per_speaker,
            nonmated_per_group=req.nonmated_per_group,
            seed=req.seed,
        )
        pairs = generate_protocol(spec, req.roster)
        content = dump_protocol(pairs)
        config = {
            "groups": list(groups),
            "speakers_per_group": spec.speakers_per_group,
            "utterances_per_speaker": spec.utterances_per_speaker,
            "nonmated_per_group": spec.nonmated_per_group,
        }
        roster_digest = reports.sha256_digest(json.dumps(req.roster, sort_keys=True))
        report = reports.envelope(
            command="protocol",
            config=config,
            input_={"path": None, "sha256": roster_digest},
            seed=req.seed,
        )
        report.update(reports.protocol_body(pairs, content))
        return report

    @app.post("/v1/synth", response_model=schemas.SynthReport)
    def synth_endpoint(req: schemas.SynthRequest) -> dict:
        specs = [
            SyntheticGroupSpec(
                group=g.group,
                mated_mean=g.mated_mean,
                mated_std=g.mated_std,
                nonmated_mean=g.nonmated_mean,
                nonmated_std=g.nonmated_std,
                n_mated=g.n_mated,
                n_nonmated=g.n_nonmated,
                seed_offset=g.seed_offset,
            )
            for g in req.groups
        ]
        trials = generate_synthetic(specs, req.seed)
        content = dump_scores(trials)
        config = {"groups": [g.model_dump() for g in req.groups]}
        config_digest = reports.sha256_digest(json.dumps(config, sort_keys=True))
        report = reports.envelope(
            command="synth",
            config=config,
            input_={"path": None, "sha256": config_digest},
            seed=req.seed,
        )
        report["totals"] = {
            "records": len(trials),
            "mated": trials.n_mated,
            "nonmated": trials.n_nonmated,
        }
        report["content"] = content
        return report

    return app


app = create_app()
