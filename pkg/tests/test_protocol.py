"""Protocol generation combinatorics and synthetic score determinism."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verifair import (
    Label,
    ProtocolSpec,
    Scope,
    SyntheticGroupSpec,
    ValidationError,
    dump_protocol,
    generate_protocol,
    generate_synthetic,
    pooled_eer,
    rates_at,
)


def make_roster(groups, speakers, utterances):
    return {
        g: {
            f"{g}-spk{s}": [f"{g}-spk{s}-utt{u}" for u in range(utterances)]
            for s in range(speakers)
        }
        for g in groups
    }


def count_labels(pairs, group=None):
    mated = sum(
        1 for p in pairs if p.label is Label.MATED and (group is None or p.group == group)
    )
    nonmated = sum(
        1 for p in pairs if p.label is Label.NONMATED and (group is None or p.group == group)
    )
    return mated, nonmated


class TestGenerateProtocol:
    def test_balanced_nine_group_protocol(self):
        groups = tuple(f"G{i}" for i in range(9))
        spec = ProtocolSpec(groups, 8, 24, 2208, seed=42)
        roster = make_roster(groups, 10, 30)
        pairs = generate_protocol(spec, roster)
        assert len(pairs) == 39744
        for g in groups:
            mated, nonmated = count_labels(pairs, g)
            assert mated == 2208  # 8 * C(24, 2)
            assert nonmated == 2208

    def test_deterministic_under_seed(self):
        groups = ("a", "b")
        roster = make_roster(groups, 5, 6)
        spec = ProtocolSpec(groups, 3, 4, 10, seed=7)
        assert generate_protocol(spec, roster) == generate_protocol(spec, roster)
        other = ProtocolSpec(groups, 3, 4, 10, seed=8)
        assert generate_protocol(other, roster) != generate_protocol(spec, roster)

    def test_single_speaker_two_utterances(self):
        spec = ProtocolSpec(("a",), 1, 2, 0, seed=1)
        pairs = generate_protocol(spec, make_roster(("a",), 1, 2))
        assert len(pairs) == 1
        assert pairs[0].label is Label.MATED

    def test_sampled_nonmated_pairs_come_from_cross_speaker_enumeration(self):
        spec = ProtocolSpec(("a",), 2, 2, 3, seed=3)
        roster = {"a": {"s1": ["u1", "u2"], "s2": ["u3", "u4"]}}
        pairs = generate_protocol(spec, roster)
        mated = [(p.enrol_id, p.test_id) for p in pairs if p.label is Label.MATED]
        nonmated = [(p.enrol_id, p.test_id) for p in pairs if p.label is Label.NONMATED]
        assert sorted(mated) == [("u1", "u2"), ("u3", "u4")]
        all_cross = {("u1", "u3"), ("u1", "u4"), ("u2", "u3"), ("u2", "u4")}
        assert len(nonmated) == 3
        assert set(nonmated) <= all_cross

    def test_roster_too_small(self):
        spec = ProtocolSpec(("a",), 3, 2, 0, seed=1)
        with pytest.raises(ValidationError, match="speakers"):
            generate_protocol(spec, make_roster(("a",), 2, 2))
        spec = ProtocolSpec(("a",), 2, 5, 0, seed=1)
        with pytest.raises(ValidationError, match="utterances"):
            generate_protocol(spec, make_roster(("a",), 2, 3))

    def test_too_many_nonmated_requested(self):
        spec = ProtocolSpec(("a",), 2, 2, 5, seed=1)
        with pytest.raises(ValidationError, match="cross-speaker"):
            generate_protocol(spec, make_roster(("a",), 2, 2))

    def test_missing_group(self):
        spec = ProtocolSpec(("a", "zz"), 1, 2, 0, seed=1)
        with pytest.raises(ValidationError, match="zz"):
            generate_protocol(spec, make_roster(("a",), 1, 2))

    def test_invalid_spec_counts(self):
        with pytest.raises(ValidationError):
            ProtocolSpec(("a",), 0, 2, 0, seed=1)
        with pytest.raises(ValidationError):
            ProtocolSpec(("a",), 1, 0, 0, seed=1)
        with pytest.raises(ValidationError):
            ProtocolSpec(("a",), 1, 2, -1, seed=1)
        with pytest.raises(ValidationError):
            ProtocolSpec((), 1, 2, 0, seed=1)

    @given(
        n_groups=st.integers(1, 3),
        speakers=st.integers(1, 4),
        utterances=st.integers(1, 4),
        extra=st.integers(0, 2),
        seed=st.integers(0, 2**32),
        data=st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_counts_match_closed_form(self, n_groups, speakers, utterances, extra, seed, data):
        groups = tuple(f"g{i}" for i in range(n_groups))
        cross = math.comb(speakers, 2) * utterances * utterances
        nonmated = data.draw(st.integers(0, cross))
        spec = ProtocolSpec(groups, speakers, utterances, nonmated, seed=seed)
        roster = make_roster(groups, speakers + extra, utterances + extra)
        pairs = generate_protocol(spec, roster)
        expected_mated = speakers * math.comb(utterances, 2)
        for g in groups:
            mated_n, nonmated_n = count_labels(pairs, g)
            assert mated_n == expected_mated == spec.mated_per_group
            assert nonmated_n == nonmated
        assert len(pairs) == n_groups * (expected_mated + nonmated)

    @given(
        speakers=st.integers(2, 4),
        utterances=st.integers(2, 4),
        seed=st.integers(0, 2**32),
    )
    @settings(max_examples=40, deadline=None)
    def test_no_duplicate_pairs(self, speakers, utterances, seed):
        cross = math.comb(speakers, 2) * utterances * utterances
        spec = ProtocolSpec(("g0", "g1"), speakers, utterances, cross, seed=seed)
        pairs = generate_protocol(spec, make_roster(("g0", "g1"), speakers, utterances))
        keys = [(p.group, frozenset((p.enrol_id, p.test_id))) for p in pairs]
        assert len(set(keys)) == len(keys)

    def test_reused_utterance_ids_rejected(self):
        roster = {"a": {"s1": ["u1", "u2"], "s2": ["u1", "u3"]}}
        spec = ProtocolSpec(("a",), 2, 2, 1, seed=1)
        with pytest.raises(ValidationError, match="reused"):
            generate_protocol(spec, roster)

    def test_dump_format(self):
        spec = ProtocolSpec(("a",), 1, 2, 0, seed=1)
        pairs = generate_protocol(spec, {"a": {"s": ["u1", "u2"]}})
        text = dump_protocol(pairs)
        assert text == "group,label,enrol_id,test_id\na,mated,u1,u2\n"


class TestGenerateSynthetic:
    def test_wide_separation_gives_near_zero_eer(self):
        # Gaussian overlap at 10 sigma separation is ~7.6e-24; any empirical
        # EER above zero would be a sampling fluke.
        specs = [SyntheticGroupSpec("A", 1.0, 0.1, -1.0, 0.1, 1000, 1000)]
        ts = generate_synthetic(specs, seed=123)
        assert pooled_eer(ts).eer < 1e-3

    def test_identical_distributions_give_half_eer(self):
        specs = [SyntheticGroupSpec("A", 0.0, 1.0, 0.0, 1.0, 5000, 5000)]
        ts = generate_synthetic(specs, seed=77)
        assert pooled_eer(ts).eer == pytest.approx(0.5, abs=0.02)

    def test_deterministic_under_seed(self):
        specs = [SyntheticGroupSpec("A", 1.0, 0.5, -1.0, 0.5, 50, 50)]
        a = generate_synthetic(specs, seed=5)
        b = generate_synthetic(specs, seed=5)
        assert a.records == b.records
        c = generate_synthetic(specs, seed=6)
        assert a.records != c.records

    def test_same_seed_offset_gives_identical_group_curves(self):
        specs = [
            SyntheticGroupSpec("A", 1.0, 0.5, -1.0, 0.5, 200, 200, seed_offset=0),
            SyntheticGroupSpec("B", 1.0, 0.5, -1.0, 0.5, 200, 200, seed_offset=0),
        ]
        ts = generate_synthetic(specs, seed=9)
        for t in np.linspace(-2, 2, 21):
            rates = rates_at(ts, float(t), Scope.GROUP)
            assert rates.per_group["A"] == rates.per_group["B"]

    def test_invalid_parameters(self):
        with pytest.raises(ValidationError):
            SyntheticGroupSpec("A", 1.0, 0.0, -1.0, 0.5, 10, 10)
        with pytest.raises(ValidationError):
            SyntheticGroupSpec("A", 1.0, 0.5, -1.0, -1.0, 10, 10)
        with pytest.raises(ValidationError):
            SyntheticGroupSpec("A", 1.0, 0.5, -1.0, 0.5, 0, 10)
        with pytest.raises(ValidationError):
            generate_synthetic([], seed=1)
