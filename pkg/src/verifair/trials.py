"""Trial score file parsing, validation, and serialization.

A score file is UTF-8 text with one trial per line:

    group,label,score[,enrol_id,test_id]

The delimiter (comma or tab) is sniffed from the first line, an optional
header line is skipped, and label tokens are matched case-insensitively.
Scores are normalized to similarity polarity at ingest: distance scores are
negated once so every downstream computation can assume higher = more
similar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import IO, Iterable, Union

import numpy as np

from .errors import ScoreParseError, ValidationError


class Label(str, Enum):
    MATED = "mated"
    NONMATED = "nonmated"


class Polarity(str, Enum):
    SIMILARITY = "similarity"
    DISTANCE = "distance"


@dataclass(frozen=True)
class TrialRecord:
    """One comparison trial: score, ground-truth label, demographic group."""

    group: str
    label: Label
    score: float
    enrol_id: str | None = None
    test_id: str | None = None


@dataclass(frozen=True)
class TrialSet:
    """A validated, similarity-polarity collection of trials.

    Sorted score arrays are cached lazily per scope; the caches are built
    once and never mutated afterwards, so a TrialSet is safe to share
    across threads.
    """

    records: tuple[TrialRecord, ...]
    groups: tuple[str, ...]
    score_polarity: Polarity = Polarity.SIMILARITY

    @classmethod
    def from_records(cls, records: Iterable[TrialRecord]) -> "TrialSet":
        """Validate records and derive the group list (first-appearance order)."""
        recs = tuple(records)
        if not recs:
            raise ValidationError("trial set is empty")
        groups: list[str] = []
        seen: dict[str, list[int]] = {}
        for rec in recs:
            if not isinstance(rec.label, Label):
                raise ValidationError(f"invalid label {rec.label!r}")
            if not rec.group:
                raise ValidationError("empty group label")
            if not math.isfinite(rec.score):
                raise ValidationError(f"non-finite score in group {rec.group!r}")
            counts = seen.get(rec.group)
            if counts is None:
                counts = seen[rec.group] = [0, 0]
                groups.append(rec.group)
            counts[0 if rec.label is Label.MATED else 1] += 1
        for group in groups:
            n_mated, n_nonmated = seen[group]
            if n_mated == 0 or n_nonmated == 0:
                missing = "mated" if n_mated == 0 else "nonmated"
                raise ValidationError(
                    f"group {group!r} has no {missing} trials; rates are undefined"
                )
        return cls(records=recs, groups=tuple(groups))

    def __len__(self) -> int:
        return len(self.records)

    @cached_property
    def _pooled(self) -> tuple[np.ndarray, np.ndarray]:
        mated = np.sort([r.score for r in self.records if r.label is Label.MATED])
        nonmated = np.sort([r.score for r in self.records if r.label is Label.NONMATED])
        mated.setflags(write=False)
        nonmated.setflags(write=False)
        return mated, nonmated

    @cached_property
    def _by_group(self) -> dict[str, tuple[np.ndarray, np.ndarray]]:
        buckets: dict[str, tuple[list[float], list[float]]] = {
            g: ([], []) for g in self.groups
        }
        for rec in self.records:
            buckets[rec.group][0 if rec.label is Label.MATED else 1].append(rec.score)
        out = {}
        for group, (m, nm) in buckets.items():
            ma, nma = np.sort(m), np.sort(nm)
            ma.setflags(write=False)
            nma.setflags(write=False)
            out[group] = (ma, nma)
        return out

    def mated_scores(self, group: str | None = None) -> np.ndarray:
        """Sorted mated scores, pooled or for one group."""
        return self._pooled[0] if group is None else self._by_group[group][0]

    def nonmated_scores(self, group: str | None = None) -> np.ndarray:
        """Sorted nonmated scores, pooled or for one group."""
        return self._pooled[1] if group is None else self._by_group[group][1]

    @property
    def n_mated(self) -> int:
        return len(self._pooled[0])

    @property
    def n_nonmated(self) -> int:
        return len(self._pooled[1])


_LABEL_TOKENS = {"mated": Label.MATED, "nonmated": Label.NONMATED}

Source = Union[str, bytes, IO[str], IO[bytes]]


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _sniff_delimiter(line: str) -> str:
    return "\t" if "\t" in line else ","


def _is_float(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_scores(source: Source, polarity: Polarity = Polarity.SIMILARITY) -> TrialSet:
    """Parse a trial score file into a validated TrialSet.

    ``polarity`` declares the convention of the incoming scores; distance
    scores are negated so that the returned set is always in similarity
    polarity. Raises ScoreParseError with the offending line number for
    malformed lines, unknown label tokens, or non-finite scores, and
    ValidationError when any group lacks mated or nonmated trials.
    """
    text = _read_text(source)
    polarity = Polarity(polarity)
    records: list[TrialRecord] = []
    delimiter: str | None = None
    saw_first = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if delimiter is None:
            delimiter = _sniff_delimiter(line)
        parts = [p.strip() for p in line.split(delimiter)]
        if not saw_first:
            saw_first = True
            # Header heuristic: needs both a non-label second column and a
            # non-numeric third column, so data rows with one bad field
            # still produce a parse error rather than being skipped.
            if (
                len(parts) >= 3
                and parts[1].lower() not in _LABEL_TOKENS
                and not _is_float(parts[2])
            ):
                continue
        if len(parts) not in (3, 5):
            raise ScoreParseError(
                f"expected 3 or 5 columns, got {len(parts)}", line_no
            )
        group, label_token, score_token = parts[0], parts[1], parts[2]
        if not group:
            raise ScoreParseError("empty group label", line_no)
        label = _LABEL_TOKENS.get(label_token.lower())
        if label is None:
            raise ScoreParseError(f"unknown label token {label_token!r}", line_no)
        try:
            score = float(score_token)
        except ValueError:
            raise ScoreParseError(f"malformed score {score_token!r}", line_no) from None
        if not math.isfinite(score):
            raise ScoreParseError(f"non-finite score {score_token!r}", line_no)
        if polarity is Polarity.DISTANCE:
            score = -score
        enrol_id = test_id = None
        if len(parts) == 5:
            enrol_id, test_id = parts[3], parts[4]
        records.append(TrialRecord(group, label, score, enrol_id, test_id))
    if not records:
        raise ScoreParseError("no trial rows found")
    return TrialSet.from_records(records)


def dump_scores(trials: TrialSet, header: bool = True) -> str:
    """Serialize a TrialSet back to canonical comma-delimited text.

    Round-trips through parse_scores: scores are written with repr so the
    exact float values survive.
    """
    with_ids = any(r.enrol_id is not None and r.test_id is not None for r in trials.records)
    lines = []
    if header:
        lines.append("group,label,score,enrol_id,test_id" if with_ids else "group,label,score")
    for rec in trials.records:
        row = f"{rec.group},{rec.label.value},{rec.score!r}"
        if rec.enrol_id is not None and rec.test_id is not None:
            row += f",{rec.enrol_id},{rec.test_id}"
        lines.append(row)
    return "\n".join(lines) + "\n"
