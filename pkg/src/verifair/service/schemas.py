"""Pydantic request and response models for the evaluation service.

Response models mirror the report documents built by ``verifair.reports``
field for field; the service validates every outgoing report against them,
so the wire schema cannot drift from the core serializers.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

MetricName = Literal["fdr", "ir", "garbe"]
PolarityName = Literal["similarity", "distance"]


class RangeSpec(BaseModel):
    """A swept parameter range: ``count`` points from start to stop."""

    start: float
    stop: float
    count: int = Field(ge=2)
    spacing: Literal["linear", "log"] = "linear"


class ScoresRequest(BaseModel):
    """Base payload: the score file content plus its declared polarity."""

    scores: str
    path: Optional[str] = None
    polarity: PolarityName = "similarity"


class RatesRequest(ScoresRequest):
    threshold: Optional[float] = None
    fmr_target: Optional[float] = None


class EvalRequest(ScoresRequest):
    metrics: list[MetricName] = Field(default=["fdr", "ir", "garbe"], min_length=1)
    alpha: float = Field(ge=0.0, le=1.0)
    threshold: Optional[float] = None
    fmr_target: Optional[float] = None


class SweepRequest(ScoresRequest):
    metrics: list[MetricName] = Field(default=["fdr", "ir", "garbe"], min_length=1)
    fmr_targets: Union[RangeSpec, list[float]] = RangeSpec(
        start=0.001, stop=0.1, count=50, spacing="log"
    )
    alphas: Union[RangeSpec, list[float]] = RangeSpec(start=0.0, stop=1.0, count=101)
    max_workers: Optional[int] = Field(default=None, ge=1, le=16)
    include_summary: bool = True


class FfmcRequest(SweepRequest):
    scale_ratio_limit: float = Field(default=10.0, ge=1.0)


class DetRequest(ScoresRequest):
    scope: Literal["pooled", "group"] = "pooled"


class CurveRequest(ScoresRequest):
    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    fmr_targets: Union[RangeSpec, list[float]] = RangeSpec(
        start=0.001, stop=0.1, count=50, spacing="log"
    )


class ProtocolRequest(BaseModel):
    roster: dict[str, dict[str, list[str]]]
    groups: Optional[list[str]] = None
    speakers_per_group: int = Field(ge=1)
    utterances_per_speaker: int = Field(ge=1)
    nonmated_per_group: int = Field(ge=0)
    seed: int


class SyntheticGroup(BaseModel):
    group: str
    mated_mean: float
    mated_std: float = Field(gt=0.0)
    nonmated_mean: float
    nonmated_std: float = Field(gt=0.0)
    n_mated: int = Field(ge=1)
    n_nonmated: int = Field(ge=1)
    seed_offset: Optional[int] = None

    @field_validator("group")
    @classmethod
    def _nonempty(cls, v: str) -> str:
        if not v:
            raise ValueError("group label must be non-empty")
        return v


class SynthRequest(BaseModel):
    groups: list[SyntheticGroup] = Field(min_length=1)
    seed: int


class ToolInfo(BaseModel):
    name: str
    version: str


class InputInfo(BaseModel):
    path: Optional[str] = None
    sha256: Optional[str] = None
    records: Optional[int] = None
    groups: Optional[list[str]] = None
    mated: Optional[int] = None
    nonmated: Optional[int] = None
    source_polarity: Optional[PolarityName] = None


class ReportEnvelope(BaseModel):
    schema_version: int
    tool: ToolInfo
    command: str
    input: Optional[InputInfo] = None
    config: dict[str, Any]
    seed: Optional[int] = None
    prng: Optional[str] = None
    numpy_version: Optional[str] = None


class RateRow(BaseModel):
    group: Optional[str] = None
    fmr: float
    fnmr: float
    mated: Optional[int] = None
    nonmated: Optional[int] = None


class RatesReport(ReportEnvelope):
    threshold: float
    threshold_source: Literal["eer", "fmr_target", "given"]
    pooled_eer: Optional[float] = None
    fmr_target: Optional[float] = None
    achieved_fmr: Optional[float] = None
    quantized_to_zero: bool = False
    pooled: RateRow
    groups: list[RateRow]


class Cell(BaseModel):
    metric: MetricName
    fmr_target: Optional[float] = None
    achieved_fmr: Optional[float] = None
    threshold: float
    quantized_to_zero: bool = False
    alpha: float
    value: Optional[float] = None
    fpd: Optional[float] = None
    fnd: Optional[float] = None
    computable: bool


class EvalReport(ReportEnvelope):
    threshold_source: Literal["fmr_target", "given"]
    results: list[Cell]


class ResolvedTargetModel(BaseModel):
    target: float
    threshold: float
    achieved_fmr: float
    quantized_to_zero: bool


class SummaryModel(BaseModel):
    min: float
    q1: float
    median: float
    q3: float
    max: float
    count: int
    raw: Optional[list[float]] = None


class ComponentSummaryModel(BaseModel):
    fpd: Optional[SummaryModel] = None
    fnd: Optional[SummaryModel] = None


class GridModel(BaseModel):
    fmr_targets: list[float]
    alphas: list[float]


class SweepReport(ReportEnvelope):
    grid: GridModel
    resolved_targets: list[ResolvedTargetModel]
    cells: list[Cell]
    component_summary: dict[str, ComponentSummaryModel]


class Ffmc1Model(BaseModel):
    passed: bool
    median_fpd: Optional[float] = None
    median_fnd: Optional[float] = None
    scale_ratio: Optional[float] = None


class Ffmc2Model(BaseModel):
    passed: bool
    lower: float
    upper: Optional[float] = None


class Ffmc3Model(BaseModel):
    passed: bool
    computable_cells: int
    total_cells: int
    computable_fraction: float


class MetricCriteriaModel(BaseModel):
    ffmc1: Ffmc1Model
    ffmc2: Ffmc2Model
    ffmc3: Ffmc3Model


class FfmcReportModel(ReportEnvelope):
    scale_ratio_limit: float
    resolved_targets: list[ResolvedTargetModel]
    criteria: dict[str, MetricCriteriaModel]


class DetPointModel(BaseModel):
    threshold: Union[float, Literal["inf", "-inf"]]
    fmr: float
    fnmr: float


class DetSeries(BaseModel):
    group: Optional[str] = None
    points: list[DetPointModel]


class DetReport(ReportEnvelope):
    scope: Literal["pooled", "group"]
    series: list[DetSeries]


class CurvePointModel(BaseModel):
    fmr_target: float
    achieved_fmr: float
    threshold: float
    quantized_to_zero: bool
    value: float


class CurveReport(ReportEnvelope):
    metric: MetricName
    alpha: float
    points: list[CurvePointModel]


class ProtocolTotals(BaseModel):
    pairs: int
    mated: int
    nonmated: int
    per_group: dict[str, dict[str, int]]


class ProtocolReport(ReportEnvelope):
    totals: ProtocolTotals
    content: str


class SynthReport(ReportEnvelope):
    totals: dict[str, int]
    content: str


class VersionInfo(BaseModel):
    name: str
    version: str
    report_schema_version: int
