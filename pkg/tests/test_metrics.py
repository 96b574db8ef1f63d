"""Fairness metric formulas against brute-force oracles and frozen examples."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from verifair import (
    GroupRates,
    ValidationError,
    evaluate,
    fdr,
    garbe,
    gini,
    ir,
)

from conftest import oracle_fdr, oracle_garbe, oracle_gini, oracle_ir


def rates_from(fmrs, fnmrs) -> GroupRates:
    labels = [f"g{i}" for i in range(len(fmrs))]
    return GroupRates.from_values(
        0.0,
        dict(zip(labels, fmrs)),
        dict(zip(labels, fnmrs)),
    )


class TestGini:
    def test_all_equal_is_zero(self):
        assert gini([0.05, 0.05, 0.05]) == 0.0

    def test_two_values_hand_computed(self):
        # sum |diff| = 0.04 over ordered pairs, denominator 2*4*0.02 = 0.16,
        # times the 2/1 small-sample factor -> 0.5
        assert gini([0.01, 0.03]) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("x", [1e-6, 0.3, 5.0])
    def test_zero_and_positive_reaches_one(self, x):
        assert gini([0.0, x]) == pytest.approx(1.0, abs=1e-12)

    def test_zero_mean_defined_as_zero(self):
        assert gini([0.0, 0.0, 0.0]) == 0.0

    def test_rejects_negative_and_short_input(self):
        with pytest.raises(ValidationError):
            gini([0.1])
        with pytest.raises(ValidationError):
            gini([-0.1, 0.2])

    # subnormal inputs excluded: the double-sum reference underflows on
    # them while the rank form does not, and rates are never subnormal
    @given(
        st.lists(
            st.floats(min_value=0, max_value=100, allow_subnormal=False),
            min_size=2,
            max_size=8,
        ),
        st.floats(min_value=1e-3, max_value=1e3),
    )
    @settings(max_examples=150)
    def test_scale_invariance(self, values, c):
        assert gini([c * v for v in values]) == pytest.approx(gini(values), abs=1e-9)

    @given(
        st.lists(
            st.floats(min_value=0, max_value=10, allow_subnormal=False),
            min_size=2,
            max_size=8,
        )
    )
    @settings(max_examples=150)
    def test_bounds_and_oracle(self, values):
        g = gini(values)
        assert 0.0 <= g <= 1.0
        assert g == pytest.approx(oracle_gini(values), abs=1e-10)

    @given(st.permutations([0.1, 0.0, 0.7, 0.3]))
    def test_permutation_invariance(self, values):
        assert gini(values) == pytest.approx(gini([0.0, 0.1, 0.3, 0.7]), abs=1e-12)


class TestFdr:
    def test_identical_rates_fully_fair(self):
        r = fdr(rates_from(["0.02", "0.02", "0.02"], ["0.05", "0.05", "0.05"]), 0.3)
        assert r.value == 1.0
        assert r.fpd == 0.0 and r.fnd == 0.0

    def test_hand_evaluated_example(self):
        r = fdr(rates_from(["0.01", "0.03"], ["0.02", "0.02"]), 0.5)
        assert r.fpd == pytest.approx(0.02, abs=1e-15)
        assert r.fnd == 0.0
        assert r.value == pytest.approx(0.99, abs=1e-12)

    def test_requires_two_groups(self):
        with pytest.raises(ValidationError):
            fdr(rates_from(["0.01"], ["0.02"]), 0.5)

    def test_alpha_validated(self):
        with pytest.raises(ValidationError):
            fdr(rates_from(["0.01", "0.03"], ["0.02", "0.02"]), 1.5)


class TestIr:
    def test_identical_nonzero_rates(self):
        r = ir(rates_from(["0.02", "0.02"], ["0.05", "0.05"]), 0.5)
        assert r.value == 1.0

    def test_hand_evaluated_example(self):
        r = ir(rates_from(["0.01", "0.03"], ["0.02", "0.04"]), 0.5)
        assert r.fpd == pytest.approx(3.0, abs=1e-12)
        assert r.fnd == pytest.approx(2.0, abs=1e-12)
        assert r.value == pytest.approx(math.sqrt(6.0), abs=1e-12)

    def test_zero_min_fmr_not_computable(self):
        r = ir(rates_from(["0", "0.03"], ["0.02", "0.04"]), 0.5)
        assert r.value is None
        assert r.fpd is None
        assert not r.computable
        assert r.fnd == pytest.approx(2.0)

    def test_alpha_zero_skips_fmr_side(self):
        r = ir(rates_from(["0", "0.03"], ["0.02", "0.04"]), 0.0)
        assert r.value == pytest.approx(2.0)
        assert r.computable

    def test_alpha_one_skips_fnmr_side(self):
        r = ir(rates_from(["0.01", "0.03"], ["0", "0.04"]), 1.0)
        assert r.value == pytest.approx(3.0)

    def test_both_zero_component_is_one(self):
        r = ir(rates_from(["0", "0"], ["0.02", "0.04"]), 0.5)
        assert r.fpd == 1.0
        assert r.value == pytest.approx(math.sqrt(2.0))

    def test_never_nan_or_inf(self):
        for alpha in (0.0, 0.25, 1.0):
            r = ir(rates_from(["0", "0.03"], ["0", "0.04"]), alpha)
            for field in (r.value, r.fpd, r.fnd):
                if field is not None:
                    assert math.isfinite(field)


class TestGarbe:
    def test_identical_rates_fully_fair(self):
        r = garbe(rates_from(["0.02", "0.02"], ["0.05", "0.05"]), 0.7)
        assert r.value == 0.0

    def test_composes_gini_examples(self):
        r = garbe(rates_from(["0.01", "0.03"], ["0.02", "0.02"]), 0.5)
        assert r.fpd == pytest.approx(0.5, abs=1e-12)
        assert r.fnd == 0.0
        assert r.value == pytest.approx(0.25, abs=1e-12)

    def test_all_zero_fmr_alpha_one_is_zero(self):
        r = garbe(rates_from(["0", "0", "0"], ["0.1", "0.4", "0.02"]), 1.0)
        assert r.value == 0.0
        assert r.computable


_rate_grid = st.integers(min_value=0, max_value=40).map(lambda k: Fraction(k, 40))


@st.composite
def random_group_rates(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    fmrs = [draw(_rate_grid) for _ in range(n)]
    fnmrs = [draw(_rate_grid) for _ in range(n)]
    return rates_from(fmrs, fnmrs), [float(f) for f in fmrs], [float(f) for f in fnmrs]


@given(random_group_rates(), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=200)
def test_oracle_equivalence_all_metrics(data, alpha):
    rates, fmrs, fnmrs = data

    got = fdr(rates, alpha)
    fpd, fnd, value = oracle_fdr(fmrs, fnmrs, alpha)
    assert got.fpd == pytest.approx(fpd, abs=1e-12)
    assert got.fnd == pytest.approx(fnd, abs=1e-12)
    assert got.value == pytest.approx(value, abs=1e-12)

    got = garbe(rates, alpha)
    fpd, fnd, value = oracle_garbe(fmrs, fnmrs, alpha)
    assert got.fpd == pytest.approx(fpd, abs=1e-12)
    assert got.value == pytest.approx(value, abs=1e-12)

    got = ir(rates, alpha)
    fpd, fnd, value = oracle_ir(fmrs, fnmrs, alpha)
    assert (got.value is None) == (value is None)
    if value is not None:
        assert got.value == pytest.approx(value, rel=1e-12)


@given(random_group_rates(), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=200)
def test_bounds(data, alpha):
    rates, _, _ = data
    assert 0.0 <= fdr(rates, alpha).value <= 1.0
    assert 0.0 <= garbe(rates, alpha).value <= 1.0
    r = ir(rates, alpha)
    if r.computable:
        assert r.value >= 1.0


@given(random_group_rates())
def test_permutation_invariance_of_metrics(data):
    rates, fmrs, fnmrs = data
    reversed_rates = rates_from(list(reversed(fmrs)), list(reversed(fnmrs)))
    for metric in ("fdr", "ir", "garbe"):
        a = evaluate(metric, rates, 0.4)
        b = evaluate(metric, reversed_rates, 0.4)
        assert (a.value is None) == (b.value is None)
        if a.value is not None:
            assert a.value == pytest.approx(b.value, rel=1e-12)


@given(random_group_rates(), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=100)
def test_alpha_linearity(data, alpha):
    """FDR and GARBE are affine in alpha; IR is log-linear when computable."""
    rates, _, _ = data
    for metric_fn in (fdr, garbe):
        v0 = metric_fn(rates, 0.0).value
        v1 = metric_fn(rates, 1.0).value
        expected = v0 + alpha * (v1 - v0)
        assert metric_fn(rates, alpha).value == pytest.approx(expected, abs=1e-9)
    r0, r1, ra = ir(rates, 0.0), ir(rates, 1.0), ir(rates, alpha)
    if r0.computable and r1.computable and ra.computable and r0.fpd is not None:
        expected = math.exp(
            (1 - alpha) * math.log(r0.value) + alpha * math.log(r1.value)
        )
        assert ra.value == pytest.approx(expected, rel=1e-9)


def test_translation_changes_gini_but_not_fdr_differential():
    """Adding a constant to every FMR leaves the FDR spread untouched but
    shrinks the Gini: the two metrics react differently to uniform shifts."""
    base = ["0.01", "0.03"]
    shifted = ["0.11", "0.13"]
    fnmrs = ["0.02", "0.02"]
    assert fdr(rates_from(base, fnmrs), 1.0).fpd == pytest.approx(
        fdr(rates_from(shifted, fnmrs), 1.0).fpd, abs=1e-15
    )
    g_base = garbe(rates_from(base, fnmrs), 1.0).fpd
    g_shifted = garbe(rates_from(shifted, fnmrs), 1.0).fpd
    assert g_base == pytest.approx(0.5, abs=1e-12)
    assert g_shifted == pytest.approx(1 / 12, abs=1e-12)
    assert g_shifted < g_base


def test_metric_result_reports_threshold_and_alpha():
    rates = rates_from(["0.01", "0.03"], ["0.02", "0.04"])
    r = fdr(rates, 0.25)
    assert r.alpha == 0.25
    assert r.threshold == rates.threshold


def test_unknown_metric_name_rejected():
    with pytest.raises(ValidationError, match="unknown metric"):
        evaluate("auc", rates_from(["0.01", "0.03"], ["0.02", "0.04"]), 0.5)
