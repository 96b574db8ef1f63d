"""Balanced evaluation protocol generation and synthetic score sets.

Protocols pair utterances within demographic groups: every within-speaker
utterance pair becomes a mated trial, and a fixed number of cross-speaker
(same-group) pairs are sampled uniformly without replacement as nonmated
trials. Sampling uses numpy's PCG64 generator; the seed, generator name,
and numpy version are recorded in report metadata so runs are auditable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .trials import Label, TrialRecord, TrialSet

PRNG_NAME = "pcg64"

Roster = Mapping[str, Mapping[str, Sequence[str]]]


@dataclass(frozen=True)
class ProtocolSpec:
    """Shape of a balanced protocol.

    Mated pairs per group = speakers_per_group * C(utterances_per_speaker, 2).
    """

    groups: tuple[str, ...]
    speakers_per_group: int
    utterances_per_speaker: int
    nonmated_per_group: int
    seed: int

    def __post_init__(self):
        if not self.groups:
            raise ValidationError("protocol needs at least one group")
        if self.speakers_per_group < 1:
            raise ValidationError("speakers_per_group must be >= 1")
        if self.utterances_per_speaker < 1:
            raise ValidationError("utterances_per_speaker must be >= 1")
        if self.nonmated_per_group < 0:
            raise ValidationError("nonmated_per_group must be >= 0")
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def mated_per_group(self) -> int:
        u = self.utterances_per_speaker
        return self.speakers_per_group * (u * (u - 1) // 2)


@dataclass(frozen=True)
class TrialPair:
    """One protocol row: a pair of utterances to be compared."""

    group: str
    label: Label
    enrol_id: str
    test_id: str


def _rng(seed: int, *offsets: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *offsets])))


def _sample_without_replacement(rng: np.random.Generator, pool_size: int, k: int) -> list[int]:
    if k == 0:
        return []
    return sorted(int(i) for i in rng.choice(pool_size, size=k, replace=False))


def generate_protocol(spec: ProtocolSpec, roster: Roster) -> list[TrialPair]:
    """Build the trial pair list for ``spec`` from a roster of utterances.

    roster maps group -> speaker -> utterance ids. Speaker and utterance
    selection and nonmated sampling are all deterministic under the seed;
    speakers and utterances are drawn in sorted-name order so dict ordering
    of the roster cannot change the output.
    """
    pairs: list[TrialPair] = []
    for group_index, group in enumerate(spec.groups):
        if group not in roster:
            raise ValidationError(f"roster has no group {group!r}")
        rng = _rng(spec.seed, group_index)
        speakers = sorted(roster[group])
        if len(speakers) < spec.speakers_per_group:
            raise ValidationError(
                f"group {group!r}: roster has {len(speakers)} speakers, "
                f"need {spec.speakers_per_group}"
            )
        chosen_idx = _sample_without_replacement(rng, len(speakers), spec.speakers_per_group)
        chosen: list[tuple[str, list[str]]] = []
        for i in chosen_idx:
            speaker = speakers[i]
            utterances = sorted(roster[group][speaker])
            if len(set(utterances)) != len(utterances):
                raise ValidationError(f"speaker {speaker!r} has duplicate utterance ids")
            if len(utterances) < spec.utterances_per_speaker:
                raise ValidationError(
                    f"speaker {speaker!r} in group {group!r} has {len(utterances)} "
                    f"utterances, need {spec.utterances_per_speaker}"
                )
            utt_idx = _sample_without_replacement(
                rng, len(utterances), spec.utterances_per_speaker
            )
            chosen.append((speaker, [utterances[i] for i in utt_idx]))

        selected = [u for _, utts in chosen for u in utts]
        if len(set(selected)) != len(selected):
            raise ValidationError(
                f"group {group!r}: utterance ids are reused across speakers; "
                "pairs would be ambiguous"
            )

        for _, utterances in chosen:
            for a, b in itertools.combinations(utterances, 2):
                pairs.append(TrialPair(group, Label.MATED, a, b))

        cross: list[tuple[str, str]] = []
        for (_, utts_a), (_, utts_b) in itertools.combinations(chosen, 2):
            cross.extend(itertools.product(utts_a, utts_b))
        if spec.nonmated_per_group > len(cross):
            raise ValidationError(
                f"group {group!r}: requested {spec.nonmated_per_group} nonmated pairs "
                f"but only {len(cross)} cross-speaker pairs exist"
            )
        for i in _sample_without_replacement(rng, len(cross), spec.nonmated_per_group):
            a, b = cross[i]
            pairs.append(TrialPair(group, Label.NONMATED, a, b))
    return pairs


def dump_protocol(pairs: Iterable[TrialPair], header: bool = True) -> str:
    """Serialize protocol pairs as ``group,label,enrol_id,test_id`` text."""
    lines = ["group,label,enrol_id,test_id"] if header else []
    lines.extend(f"{p.group},{p.label.value},{p.enrol_id},{p.test_id}" for p in pairs)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SyntheticGroupSpec:
    """Gaussian score model for one group's mated and nonmated trials.

    Two groups given the same seed_offset (and parameters) receive identical
    score draws, which makes exactly-fair multi-group fixtures easy to build.
    By default each group uses its position index as the offset.
    """

    group: str
    mated_mean: float
    mated_std: float
    nonmated_mean: float
    nonmated_std: float
    n_mated: int
    n_nonmated: int
    seed_offset: int | None = None

    def __post_init__(self):
        if self.mated_std <= 0 or self.nonmated_std <= 0:
            raise ValidationError("score standard deviations must be positive")
        if self.n_mated < 1 or self.n_nonmated < 1:
            raise ValidationError("trial counts must be >= 1")


def generate_synthetic(groups: Sequence[SyntheticGroupSpec], seed: int) -> TrialSet:
    """Draw Gaussian similarity scores per group and label; deterministic under seed."""
    if not groups:
        raise ValidationError("need at least one group spec")
    records: list[TrialRecord] = []
    for index, g in enumerate(groups):
        offset = g.seed_offset if g.seed_offset is not None else index
        rng = _rng(seed, offset)
        mated = rng.normal(g.mated_mean, g.mated_std, g.n_mated)
        nonmated = rng.normal(g.nonmated_mean, g.nonmated_std, g.n_nonmated)
        records.extend(TrialRecord(g.group, Label.MATED, float(s)) for s in mated)
        records.extend(TrialRecord(g.group, Label.NONMATED, float(s)) for s in nonmated)
    return TrialSet.from_records(records)
