import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gkpsev.bounds import (
    IDEAL,
    BoundsRegion,
    distances_from_fidelity,
    f_upper_from_sevs,
    fidelity_ceiling_surface,
    region_contains,
    sp_lower,
    sp_upper,
)
from gkpsev.exceptions import DomainError
from gkpsev.metrics import fidelity_discrete, sev_discrete, sev_gaussian, fidelity_gaussian
from gkpsev.quadrature import sinc
from gkpsev.states import (
    DiscreteBaseState,
    make_box_base,
    make_roots_of_unity_state,
    make_spike_state,
    make_three_vector_state,
    make_two_vector_state,
)

unit = st.floats(0.0, 1.0)
N_PRIMES = [4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096]


class TestSpUpper:
    def test_examples(self):
        assert sp_upper(0.5, IDEAL) == 1.0
        assert sp_upper(0.5, 64) == pytest.approx(sinc(math.pi / 64) * math.cos(math.pi / 64), abs=1e-15)

    def test_series(self):
        n, F = 100, 0.75
        series = 1 - (math.pi**2 / (6 * n**2)) * (1 + 12 * (1 - F) * F)
        # fourth-order term from expanding sinc and the square root
        a = F * (1 - F)
        c4 = math.pi**4 * (1 / 120 + 2 * a / 3 - 2 * a * a + a / 3)
        assert abs(sp_upper(F, n) - series - c4 / n**4) < 1e-9
        assert abs(sp_upper(F, n) - series) < 13 / n**4

    def test_domain(self):
        with pytest.raises(DomainError):
            sp_upper(1.5, 8)
        with pytest.raises(DomainError):
            sp_upper(0.5, 0)

    def test_vectorized(self):
        F = np.linspace(0, 1, 11)
        assert sp_upper(F, 8).shape == (11,)


class TestSpLower:
    def test_examples(self):
        assert sp_lower(1.0, IDEAL) == 1.0
        assert sp_lower(0.3, 8) == 0.0
        assert sp_lower(0.3, IDEAL) == 0.0
        assert sp_lower(0.75, 64) == pytest.approx(0.5 * sinc(math.pi / 64), abs=1e-15)


class TestFidelityCeiling:
    def test_examples(self):
        assert f_upper_from_sevs(1, 1) == 1
        assert f_upper_from_sevs(0, 0) == 0.25
        assert f_upper_from_sevs(0.56, 0.41) == pytest.approx(0.5499, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            f_upper_from_sevs(1.1, 0.5)

    @given(unit, unit, unit, unit)
    def test_monotone(self, a, b, c, d):
        if a <= b and c <= d:
            assert f_upper_from_sevs(a, c) <= f_upper_from_sevs(b, d)

    def test_surface_grid(self):
        s_q, s_p, F = fidelity_ceiling_surface(51)
        assert s_q.shape == s_p.shape == F.shape == (51 * 51,)
        assert F.min() == 0.25 and F.max() == 1.0


class TestRegion:
    def test_examples(self):
        assert not region_contains(0.9, 0.5, IDEAL, 0)
        assert region_contains(0.3, 0.99, IDEAL, 0)
        edge = sinc(math.pi / 8) * math.cos(math.pi / 8)
        assert not region_contains(0.5, edge + 1e-6, 8, 0)
        assert region_contains(0.5, edge, 8, 1e-15)

    def test_region_object(self):
        r = BoundsRegion(8)
        F, lo, hi = r.curves(5)
        assert np.all(lo <= hi)
        assert r.contains(0.75, 0.6)
        with pytest.raises(DomainError):
            BoundsRegion(-3)

    def test_ideal_triangle(self):
        F, lo, hi = BoundsRegion(IDEAL).curves(11)
        np.testing.assert_allclose(lo, np.maximum(0, 2 * F - 1))
        np.testing.assert_allclose(hi, 1)

    def test_lower_below_upper_and_monotone_convergence(self):
        F = np.linspace(0, 1, 1001)
        prev_lo, prev_hi = None, None
        for n in N_PRIMES:
            lo, hi = sp_lower(F, n), sp_upper(F, n)
            assert np.all(lo <= hi)
            if prev_lo is not None:
                assert np.all(lo >= prev_lo - 1e-15)
                assert np.all(hi >= prev_hi - 1e-15)
            prev_lo, prev_hi = lo, hi
        assert np.all(prev_lo <= sp_lower(F, IDEAL))
        assert np.all(prev_hi <= sp_upper(F, IDEAL))

    @pytest.mark.parametrize("n_prime", [8, 64])
    def test_two_vector_saturation(self, n_prime):
        for F in np.linspace(0.5, 1, 101):
            hi = sev_discrete(make_two_vector_state(n_prime, F, 1), 10).s_p
            lo = sev_discrete(make_two_vector_state(n_prime, F, n_prime // 2), 10).s_p
            assert abs(hi - sp_upper(F, n_prime)) < 1e-12
            assert abs(lo - sp_lower(F, n_prime)) < 1e-12

    @given(st.integers(2, 64), st.integers(0, 2**32 - 1))
    def test_random_states_inside(self, n_prime, seed):
        rng = np.random.default_rng(seed)
        p = rng.dirichlet(np.ones(n_prime))
        state = DiscreteBaseState.from_probabilities(p)
        F = fidelity_discrete(state).F
        assert region_contains(F, sev_discrete(state, 5).s_p, n_prime, 1e-12)


class TestDistances:
    def test_examples(self):
        assert distances_from_fidelity(1.0) == (0.0, 0.0, 0.0)
        assert distances_from_fidelity(0.0) == pytest.approx((2.0, math.pi / 2, 1.0))

    @given(unit)
    def test_bures_at_ceiling(self, d):
        F = ((d + 1) / 2) ** 2
        assert distances_from_fidelity(F)[0] == pytest.approx(1 - d, abs=1e-12)

    @given(unit, unit)
    def test_monotone_decreasing(self, a, b):
        lo, hi = sorted((a, b))
        for x, y in zip(distances_from_fidelity(lo), distances_from_fidelity(hi)):
            assert x >= y

    def test_domain(self):
        with pytest.raises(DomainError):
            distances_from_fidelity(-0.1)


class TestCeilingOnConstructors:
    def _check(self, state, N=10):
        F = fidelity_discrete(state).F
        r = sev_discrete(state, N)
        return F <= f_upper_from_sevs(r.s_q, r.s_p) + 1e-9

    def test_spoofing_families(self):
        assert self._check(make_roots_of_unity_state(8, 4))
        assert self._check(make_box_base(1.0, 64))
        # n = 0 and n = N' collapse onto the counterexamples below
        for n in range(1, 64, 3):
            assert self._check(make_three_vector_state(64, 0.3, n))
        for F in (0.5, 0.6):
            for gap in (1, 16):
                assert self._check(make_two_vector_state(64, F, gap))

    def test_spike_states(self):
        state = make_spike_state(1, 0.2, 1e-3, 3)
        r = sev_gaussian(state)
        assert fidelity_gaussian(state).F <= f_upper_from_sevs(r.s_q, r.s_p) + 1e-9

    def test_single_bin_counterexample(self):
        # a one-bin state has F = 1 but s_p = sinc(pi/N'), so the ceiling
        # only holds in the limit of many bins and periods
        state = make_two_vector_state(8, 1.0, 1)
        assert not self._check(state)
        big = make_two_vector_state(4096, 1.0, 1)
        r = sev_discrete(big, 10**6)
        assert 0 < 1 - f_upper_from_sevs(r.s_q, r.s_p) < 1e-6

    def test_opposite_pair_counterexample(self):
        # on the lower boundary the ceiling is F * (s_q + 1) / 2 in the ideal
        # limit, so any s_q < 1 pushes it below F
        for state in (make_two_vector_state(64, 0.7, 32), make_three_vector_state(64, 0.3, 64)):
            assert fidelity_discrete(state).F == pytest.approx(0.7)
            assert not self._check(state)
