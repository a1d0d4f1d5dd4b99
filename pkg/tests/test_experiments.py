"""Scaling-limit and stability experiments.

Distance helpers are pinned on hand cases, the reach law's closed form
is replayed against raw path enumeration, the window observable's two
noise correlations are frozen, and each sampled report must agree with
an independent recomputation or a known limit.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signflows.errors import InvalidParameter
from signflows import experiments as ex
from signflows import flow, walsh, web


class TestDistanceHelpers:
    """KS and TV machinery on cases small enough to do by hand."""

    def test_atom_at_zero_vs_normal(self):
        assert ex.discrete_ks_against_cdf([0.0], [1.0], ex.normal_cdf) == 0.5

    def test_two_fair_atoms(self):
        got = ex.discrete_ks_against_cdf([-1.0, 1.0], [0.5, 0.5],
                                         ex.normal_cdf)
        assert abs(got - 0.5 * math.erf(1 / math.sqrt(2))) <= 1e-15

    def test_ecdf_single_sample(self):
        assert ex.ecdf_ks_against_cdf([0.0], ex.normal_cdf) == 0.5

    def test_two_sample_identical(self):
        xs = np.array([0.0, 1.0, 2.5])
        assert ex.two_sample_ks(xs, xs) == 0.0

    def test_two_sample_disjoint(self):
        assert ex.two_sample_ks([0.0, 1.0], [5.0, 6.0]) == 1.0

    def test_exp_inverse_cdf(self):
        assert abs(ex.exp1_from_uniform(1 - math.exp(-1)) - 1.0) <= 1e-12
        assert ex.exp1_from_uniform(0.0) == 0.0

    def test_maxwell_cdf_shape(self):
        assert ex.maxwell_cdf(0.0) == 0.0
        assert ex.maxwell_cdf(-2.0) == 0.0
        assert 0.999 < ex.maxwell_cdf(8.0) <= 1.0
        grid = np.linspace(0.0, 5.0, 200)
        vals = [ex.maxwell_cdf(u) for u in grid]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


class TestReachLaw:
    """Law of a + 2b: closed form == DP == raw path enumeration."""

    def test_closed_form_vs_paths(self):
        t = 6
        tally = {}
        for signs in itertools.product((-1, 1), repeat=t):
            a = b = run = 0
            for s in signs:
                a += s
                run = min(run, a)
                b = max(b, -run)
            tally[a + 2 * b] = tally.get(a + 2 * b, 0) + 1
        by_paths = {j: Fraction(c, 1 << t) for j, c in tally.items()}
        assert ex.reach_law_closed_form(t) == by_paths

    def test_closed_form_vs_dp(self):
        for t in (4, 7, 12):
            reach, lost = ex._reach_law_dp(t)
            law = ex.reach_law_closed_form(t)
            assert lost <= 1e-12
            for j, w in law.items():
                assert abs(reach[j] - float(w)) <= 1e-12

    def test_total_mass(self):
        for t in (1, 5, 10):
            assert sum(ex.reach_law_closed_form(t).values()) == 1


class TestLimitReports:
    """CLT, reach, and plateau limits at unit-test sizes."""

    def test_clt_smallest_case_is_exact(self):
        rep = ex.clt_report(1)
        expected = 0.5 * math.erf(1 / math.sqrt(2))
        assert abs(rep.distances["ks_i1"] - expected) <= 1e-15
        assert rep.passed   # threshold at i=1 is 1, far above 0.341

    def test_clt_exact_thresholds(self):
        rep = ex.clt_report([64, 256])
        assert rep.passed
        assert rep.distances["ks_i256"] <= 1 / 16

    def test_clt_mc_mode(self):
        rep = ex.clt_report(64, mode="mc", samples=4000, seed=2)
        assert rep.passed

    def test_clt_mc_needs_samples(self):
        with pytest.raises(InvalidParameter):
            ex.clt_report(64, mode="mc")

    def test_reach_limit_fails_honestly_when_coarse(self):
        rep = ex.g2_limit_report(100)
        assert not rep.passed

    def test_reach_limit_passes_at_scale(self):
        rep = ex.g2_limit_report(2048)
        assert rep.passed

    def test_plateau_limit(self):
        rep = ex.g3_limit_report(1024, samples=2000, seed=5)
        assert rep.passed

    def test_plateau_needs_perfect_square(self):
        with pytest.raises(InvalidParameter):
            ex.g3_limit_report(1000)


class TestTrapWaiting:
    """Sampled waiting statistic against the analytic mixture reference."""

    def test_ks_matches_naive_recomputation(self):
        m, t, samples, seed = 3, 64, 200, 17
        rep = ex.trap_waiting_report(m, t, samples=samples, seed=seed)
        rng = np.random.default_rng(seed)
        a, a_min, c = flow.sample_trap_endpoints(t, m, samples, rng)
        scale = 2.0 ** m
        obs = (a - c - a_min) / scale
        rngs = (a - a_min) / scale
        worst = 0.0
        for w in np.unique(np.concatenate([obs, rngs])):
            decay = 1.0 - math.exp(-w)
            for emp, ref in (
                    (np.mean(obs <= w),
                     np.mean(rngs <= w) + decay * np.mean(rngs > w)),
                    (np.mean(obs < w),
                     np.mean(rngs < w) + decay * np.mean(rngs >= w))):
                worst = max(worst, abs(float(emp) - float(ref)))
        assert abs(rep.distances["ks"] - worst) <= 1e-12

    def test_deep_trap_passes(self):
        rep = ex.trap_waiting_report(5, 1024, samples=10000, seed=20260816)
        assert rep.passed

    def test_parameters_validated(self):
        with pytest.raises(InvalidParameter):
            ex.trap_waiting_report(0, 16)


class TestWindowObservable:
    """Sliding-window product observable and its two noise correlations."""

    def test_window_length_exact_on_squares(self):
        assert ex.window_length(4096) == 64
        assert ex.window_length(8) == 2
        assert ex.window_length(64, Fraction(1, 2)) == 4

    def test_small_case_frozen(self):
        rep = ex.micro_block_report(8)
        assert rep.passed
        r = math.exp(-1)
        assert rep.statistics["windows_by_blocks_hit"] == {"1": 4, "2": 3}
        assert abs(rep.statistics["micro_correlation"] - r ** 2) <= 1e-15
        assert abs(rep.statistics["block_correlation"]
                   - (4 * r + 3 * r * r) / 7) <= 1e-15

    def test_declared_scale_frozen(self):
        rep = ex.micro_block_report(4096)
        assert rep.passed
        r = math.exp(-1)
        assert rep.statistics["window_length"] == 64
        assert rep.statistics["windows"] == 4033
        assert rep.statistics["windows_by_blocks_hit"] == {"1": 3844, "2": 189}
        assert rep.statistics["micro_correlation"] == r ** 64
        assert rep.statistics["micro_correlation"] <= 1e-10
        block = (3844 * r + 189 * r * r) / 4033
        assert abs(rep.statistics["block_correlation"] - block) <= 1e-15
        assert rep.statistics["block_correlation"] >= 0.3

    def test_observable_matches_direct_window_sum(self):
        i = 6
        f = ex.product_observable(i)
        length = ex.window_length(i)
        for idx in (0, 5, 21, 63):
            signs = [1 if idx >> k & 1 else -1 for k in range(i)]
            total = sum(
                np.prod(signs[j:j + length])
                for j in range(i - length + 1))
            assert abs(f.values[idx] - total / math.sqrt(i)) <= 1e-12

    def test_custom_partition(self):
        part = walsh.BlockPartition.equal_split(8, 2)
        rep = ex.micro_block_report(8, blocks=part)
        assert rep.passed
        with pytest.raises(InvalidParameter):
            ex.micro_block_report(8, blocks=walsh.BlockPartition.equal_split(6, 2))


class TestPoissonPattern:
    """Run-pattern counts against the limiting Poisson law."""

    def test_small_pattern(self):
        rep = ex.poisson_block_report(8, 1, samples=2000, seed=9)
        assert rep.passed
        assert abs(rep.statistics["mean_count"] - 1.0) <= 0.15

    def test_pmf_rows_sum_close_to_one(self):
        rep = ex.poisson_block_report(6, 1, samples=1000, seed=3)
        emp_total = sum(row[1] for row in rep.data["pmf"])
        assert emp_total > 0.99

    def test_parameters_validated(self):
        with pytest.raises(InvalidParameter):
            ex.poisson_block_report(0, 1)
        with pytest.raises(InvalidParameter):
            ex.poisson_block_report(3, 0)


class TestWebCritical:
    """Exact trajectory-count mean against Monte Carlo."""

    def test_report(self):
        rep = ex.web_critical_report(6, 0, 3, samples=20000, seed=1)
        assert rep.passed
        assert rep.statistics["exact_mean"] == Fraction(105, 64)
        pmf_exact = {k: w for k, _, w in rep.data["pmf"]}
        assert pmf_exact == {1: 3 / 8, 2: 39 / 64, 3: 1 / 64}


class TestSpectralSets:
    """Finite spectral supports and the Hausdorff distance."""

    def test_from_mask(self):
        got = ex.FiniteSpectralSet.from_mask(0b101, 4)
        assert got.points == (Fraction(0), Fraction(1, 2))

    def test_duplicates_rejected(self):
        with pytest.raises(InvalidParameter):
            ex.FiniteSpectralSet([1, 1])

    def test_hand_distance(self):
        assert ex.hausdorff_distance([0], [3]) == 3
        assert ex.hausdorff_distance([0, 1], [0, 1, 5]) == 4
        assert ex.hausdorff_distance([], []) == 0
        assert ex.hausdorff_distance([], [2]) == 1

    @given(st.sets(st.integers(-8, 8), min_size=1, max_size=5),
           st.sets(st.integers(-8, 8), min_size=1, max_size=5),
           st.sets(st.integers(-8, 8), min_size=1, max_size=5))
    @settings(max_examples=80, deadline=None)
    def test_metric_axioms_on_nonempty_sets(self, a, b, c):
        d_ab = ex.hausdorff_distance(a, b)
        assert d_ab == ex.hausdorff_distance(b, a)
        assert d_ab >= 0
        assert (d_ab == 0) == (a == b)
        assert d_ab <= ex.hausdorff_distance(a, c) + ex.hausdorff_distance(c, b)

    def test_profile_of_majority(self):
        f = walsh.majority(3)
        rep = ex.spectral_profile(f, rescale=3)
        assert abs(rep.statistics["mass_card_1"] - 0.75) <= 1e-12
        assert abs(rep.statistics["mass_card_3"] - 0.25) <= 1e-12
