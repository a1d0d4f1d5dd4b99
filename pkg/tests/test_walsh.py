"""Sign-table analysis: transform, operators, influences, block noise.

Every operator has two independent routes (spectral multiplier vs
pointwise kernel, plus a brute-force joint enumeration for small n);
the tests pin them against each other and against hand values.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signflows.config import EXACT_REL_TOL
from signflows.errors import DimensionTooLarge, InvalidParameter
from signflows import walsh


def exact_observable(n, seed, den=8):
    rng = np.random.default_rng(seed)
    return walsh.random_rational_observable(n, rng, den_limit=den)


class TestTransform:
    """Forward/inverse round trip and energy bookkeeping."""

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_exact(self, n, seed):
        f = exact_observable(n, seed)
        g = walsh.synthesize(walsh.walsh_transform(f))
        assert g.values == f.values

    def test_round_trip_float(self):
        rng = np.random.default_rng(5)
        f = walsh.random_uniform_observable(8, rng)
        g = walsh.synthesize(walsh.walsh_transform(f))
        assert np.max(np.abs(g.to_array() - f.to_array())) < 1e-12

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25, deadline=None)
    def test_parseval(self, n, seed):
        f = exact_observable(n, seed)
        spec = walsh.walsh_transform(f)
        assert f.norm_squared() == sum(
            (w * w for w in spec.values), Fraction(0))

    def test_point_indicator_spectrum(self):
        # the indicator of the all-plus corner weights every frequency 2^-n
        n = 2
        values = [Fraction(0)] * 4
        values[3] = Fraction(1)
        spec = walsh.walsh_transform(walsh.Observable(n, tuple(values)))
        assert all(spec.coefficient(mask) == Fraction(1, 4) for mask in range(4))

    def test_spectral_measure_total(self):
        f = exact_observable(4, 9)
        mu = walsh.spectral_measure(walsh.walsh_transform(f))
        assert mu.total_mass() == f.norm_squared()

    def test_dense_dimension_guard(self):
        with pytest.raises(DimensionTooLarge):
            walsh.Observable(25, np.zeros(2))


class TestConditionalExpectation:
    """Averaging out coordinates must kill exactly the escaping frequencies."""

    def test_projection_norm_identity(self):
        f = exact_observable(5, 21)
        spec = walsh.walsh_transform(f)
        kept = (0, 2, 3)
        keep_mask = sum(1 << m for m in kept)
        g = walsh.conditional_expectation(f, kept)
        inside = sum((w * w for mask, w in enumerate(spec.values)
                      if mask & ~keep_mask == 0), Fraction(0))
        assert g.norm_squared() == inside

    def test_idempotent(self):
        f = exact_observable(4, 3)
        g = walsh.conditional_expectation(f, (1, 3))
        assert walsh.conditional_expectation(g, (1, 3)).values == g.values

    def test_empty_conditioning_is_mean(self):
        f = exact_observable(3, 7)
        g = walsh.conditional_expectation(f, ())
        assert set(g.values) == {f.mean()}


class TestNoiseOperators:
    """Spectral multiplier == pointwise kernel == joint enumeration."""

    @given(st.integers(min_value=1, max_value=4),
           st.integers(min_value=0, max_value=10**6),
           st.fractions(min_value=0, max_value=1, max_denominator=6))
    @settings(max_examples=20, deadline=None)
    def test_correlation_routes_exact(self, n, seed, rho):
        f = exact_observable(n, seed)
        g = exact_observable(n, seed + 1)
        spectral = walsh.noisy_correlation(f, g, rho)
        assert walsh.coupling_correlation(f, g, rho) == spectral
        joint = walsh.correlation_by_joint_enumeration(f, g, rho)
        assert abs(joint - float(spectral)) < 1e-10

    def test_noise_operator_multiplier(self):
        f = exact_observable(4, 11)
        rho = Fraction(1, 3)
        spec = walsh.walsh_transform(f)
        noised = walsh.noise_operator(spec, rho)
        for mask, w in enumerate(spec.values):
            assert noised.coefficient(mask) == w * rho ** bin(mask).count("1")

    def test_float_route_tolerance(self):
        rng = np.random.default_rng(2)
        f = walsh.random_uniform_observable(10, rng)
        rho = 0.37
        a = walsh.noisy_correlation(f, f, rho)
        b = walsh.coupling_correlation(f, f, rho)
        assert abs(a - b) <= EXACT_REL_TOL * max(abs(a), abs(b))

    def test_rho_range_checked(self):
        f = exact_observable(2, 0)
        with pytest.raises(InvalidParameter):
            walsh.noisy_correlation(f, f, Fraction(3, 2))


class TestBlockNoise:
    """Whole blocks resampled together: multiplier counts blocks, not sites."""

    def test_two_block_example(self):
        # i=8, window length 2: 6 windows inside one block, 1 straddling
        f = walsh.Observable(8, self._window_sum(8, 2))
        part = walsh.BlockPartition(8, ((0, 4), (4, 8)))
        rho = Fraction(1, 3)
        got = walsh.block_noisy_correlation(f, f, part, rho) / f.norm_squared()
        assert got == (6 * rho + rho ** 2) / 7

    @staticmethod
    def _window_sum(n, length):
        scale = Fraction(1, 1)
        vals = []
        for idx in range(1 << n):
            total = Fraction(0)
            for j in range(n - length + 1):
                prod = 1
                for k in range(j, j + length):
                    prod *= 1 if (idx >> k) & 1 else -1
                total += prod
            vals.append(total * scale)
        return tuple(vals)

    @given(st.integers(min_value=1, max_value=4),
           st.integers(min_value=0, max_value=10**6),
           st.fractions(min_value=0, max_value=1, max_denominator=5))
    @settings(max_examples=15, deadline=None)
    def test_singleton_blocks_match_per_coordinate(self, n, seed, rho):
        f = exact_observable(n, seed)
        part = walsh.BlockPartition.singletons(n)
        assert walsh.block_noisy_correlation(f, f, part, rho) == \
            walsh.noisy_correlation(f, f, rho)

    @given(st.integers(min_value=1, max_value=4),
           st.integers(min_value=0, max_value=10**6),
           st.fractions(min_value=0, max_value=1, max_denominator=5))
    @settings(max_examples=15, deadline=None)
    def test_block_routes_agree(self, n, seed, rho):
        f = exact_observable(n, seed)
        g = exact_observable(n, seed + 17)
        part = walsh.BlockPartition.from_sizes(n, self._split(n))
        spectral = walsh.block_noisy_correlation(f, g, part, rho)
        assert walsh.block_coupling_correlation(f, g, part, rho) == spectral
        joint = walsh.correlation_by_joint_enumeration(f, g, rho, blocks=part)
        assert abs(joint - float(spectral)) < 1e-10

    @staticmethod
    def _split(n):
        if n == 1:
            return (1,)
        return (n // 2, n - n // 2)

    def test_one_block_mixes_scalar(self):
        f = exact_observable(3, 2)
        part = walsh.BlockPartition(3, ((0, 3),))
        rho = Fraction(1, 4)
        mean = f.mean()
        expected = rho * f.norm_squared() + (1 - rho) * mean * mean
        assert walsh.block_noisy_correlation(f, f, part, rho) == expected

    def test_partition_validation(self):
        with pytest.raises(InvalidParameter):
            walsh.BlockPartition(4, ((0, 2), (3, 4)))
        with pytest.raises(InvalidParameter):
            walsh.BlockPartition(4, ((0, 2),))
        with pytest.raises(InvalidParameter):
            walsh.BlockPartition.from_sizes(4, (2, 3))

    def test_partition_beyond_dense_limit(self):
        part = walsh.BlockPartition.equal_split(4096, 4)
        assert part.block_of(0) == 0 and part.block_of(4095) == 3
        assert part.blocks_hit((1 << 1024) | 1) == 2


class TestInfluence:
    """Coordinate influences and their spectral form."""

    def test_dictator(self):
        f = walsh.dictator(3, 0)
        assert walsh.influence(f, 0) == 1
        assert walsh.influence(f, 1) == 0
        assert walsh.bks_statistic(f) == 1

    def test_parity_spreads(self):
        f = walsh.parity_observable(3, 0b111)
        assert all(walsh.influence(f, m) == 1 for m in range(3))

    def test_majority_three(self):
        f = walsh.majority(3)
        assert all(walsh.influence(f, m) == Fraction(1, 2) for m in range(3))
        assert walsh.bks_statistic(f) == Fraction(3, 4)

    @given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=20, deadline=None)
    def test_spectral_form(self, n, seed):
        f = exact_observable(n, seed)
        spec = walsh.walsh_transform(f)
        for m in range(n):
            assert walsh.influence_from_spectrum(spec, m) == sum(
                (w * w for mask, w in enumerate(spec.values) if mask >> m & 1),
                Fraction(0))

    def test_linear_additivity(self):
        # a ±1 combination of disjoint singletons: squared influences add
        coeffs = {0: Fraction(1, 2), 2: Fraction(-1, 3), 3: Fraction(1, 6)}
        n = 4
        vals = []
        for idx in range(1 << n):
            total = Fraction(0)
            for m, w in coeffs.items():
                total += w * (1 if (idx >> m) & 1 else -1)
            vals.append(total)
        f = walsh.Observable(n, tuple(vals))
        assert walsh.bks_statistic(f) == sum(w * w for w in coeffs.values())


class TestReport:
    """The bundled dual-route report must stay green at its defaults."""

    def test_report_passes(self):
        rep = walsh.walsh_report(5, trials=2, seed=13)
        assert rep.passed
        ids = {c.check_id for c in rep.checks}
        assert "majority3_bks" in ids and "float_rel_error" in ids
