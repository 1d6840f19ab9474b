import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from gkpsev.bounds import f_upper_from_sevs
from gkpsev.exceptions import DomainError, FidelityConvergenceError
from gkpsev.metrics import (
    FidelityMethod,
    SevResult,
    effective_squeezing,
    fidelity_discrete,
    fidelity_gaussian,
    sev_discrete,
    sev_fidelity_envelope,
    sev_gaussian,
)
from gkpsev.quadrature import SQRT_PI, sinc
from gkpsev.states import (
    DiscreteBaseState,
    GaussianCombState,
    GkpParams,
    PeriodicEnvelope,
    make_gaussian_gkp,
    make_roots_of_unity_state,
    make_spike_state,
    make_two_vector_state,
    uniform_state,
)

from .oracles import comb_sev_oracle, discrete_sev_oracle, random_comb_state, random_discrete_state


class TestEffectiveSqueezing:
    def test_examples(self):
        assert effective_squeezing(1.0, "q") == 0.0
        assert effective_squeezing(math.exp(-2 * math.pi), "q") == pytest.approx(1.0)
        assert effective_squeezing(math.exp(-math.pi / 2), "p") == pytest.approx(1.0)

    @pytest.mark.parametrize("s", [0.0, -0.1, 1.0 + 1e-9])
    def test_domain(self, s):
        with pytest.raises(DomainError):
            effective_squeezing(s, "q")

    @given(st.floats(1e-300, 1.0), st.sampled_from("qp"))
    def test_inverse(self, s, quad_):
        c = 2 * math.pi if quad_ == "q" else math.pi / 2
        d = effective_squeezing(s, quad_)
        assert math.exp(-c * d * d) == pytest.approx(s, rel=1e-9)

    @given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
    def test_monotone_decreasing(self, a, b):
        if a < b:
            assert effective_squeezing(a, "p") >= effective_squeezing(b, "p")

    def test_zero_sev_reports_infinite_width(self):
        assert SevResult.from_sevs(0j, 1 + 0j).delta_q == math.inf


class TestSevDiscrete:
    def test_roots_of_unity(self):
        r = sev_discrete(make_roots_of_unity_state(4, 2), 10)
        assert r.s_p < 1e-15
        assert r.s_q == pytest.approx(20 / 21, abs=1e-15)

    def test_single_bin(self):
        state = DiscreteBaseState.from_probabilities(np.eye(8)[0])
        assert sev_discrete(state, 10).s_p == pytest.approx(sinc(math.pi / 8), abs=1e-15)

    def test_two_vector(self):
        F = 0.75
        expected = sinc(math.pi / 64) * math.sqrt(F**2 + (1 - F) ** 2 + 2 * F * (1 - F) * math.cos(2 * math.pi / 64))
        assert sev_discrete(make_two_vector_state(64, F, 1), 10).s_p == pytest.approx(expected, abs=1e-14)

    def test_uniform_vanishes(self):
        assert sev_discrete(uniform_state(8), 10).s_p < 1e-15

    def test_result_types_are_python_floats(self):
        r = sev_discrete(uniform_state(8), 3)
        assert type(r.s_q) is float and type(r.s_p) is float

    @pytest.mark.parametrize("seed", range(5))
    def test_against_piecewise_integration(self, seed):
        rng = np.random.default_rng(1000 + seed)
        state = random_discrete_state(rng, int(rng.integers(2, 65)))
        oracle = discrete_sev_oracle(state, 10)
        r = sev_discrete(state, 10)
        assert abs(r.d_p - oracle["d_p"]) < 1e-9
        assert abs(r.s_q - oracle["s_q"]) < 1e-9

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 64), st.integers(0, 2**32 - 1))
    def test_sevs_in_unit_interval(self, n_prime, seed):
        state = random_discrete_state(np.random.default_rng(seed), n_prime)
        r = sev_discrete(state, 5)
        assert 0 <= r.s_p <= sinc(math.pi / n_prime) + 1e-12
        assert 0 <= r.s_q <= 1


class TestFidelityDiscrete:
    def test_examples(self):
        assert fidelity_discrete(uniform_state(8)).F == pytest.approx(1 / 8)
        assert fidelity_discrete(make_two_vector_state(16, 0.75, 3)).F == pytest.approx(0.75)
        assert fidelity_discrete(make_roots_of_unity_state(6, 3)).F == pytest.approx(1 / 3)

    def test_ties_choose_lowest_bin(self):
        r = fidelity_discrete(uniform_state(4))
        assert r.y_star == pytest.approx(DiscreteBaseState.from_probabilities(np.full(4, 0.25)).bin_centers[0])
        assert r.method is FidelityMethod.closed_form

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 64), st.integers(0, 2**32 - 1))
    def test_fidelity_is_max_probability(self, n_prime, seed):
        state = random_discrete_state(np.random.default_rng(seed), n_prime)
        assert fidelity_discrete(state).F == pytest.approx(state.probabilities.max(), abs=1e-15)
        assert 1 / n_prime - 1e-12 <= fidelity_discrete(state).F <= 1


def _trio_sp(M, eps, V):
    # double-integral form with the sqrt(pi) phase and exp(-pi V/2) envelope
    m = np.arange(-M, M + 1)
    W = np.exp(-(eps**2 / (8 * V)) * (m[:, None] - m[None, :]) ** 2)
    phase = np.exp(1j * (m[:, None] + m[None, :]) * eps * SQRT_PI / 2)
    norm = W.sum() / (2 * M + 1)
    return math.exp(-math.pi * V / 2) / (norm * (2 * M + 1)) * abs(np.sum(W * phase))


def _spike_F(M, eps, V):
    n = np.arange(-M, M + 1)
    m = n[:, None] - n[None, :]
    norm = np.exp(-(eps**2 / (8 * V)) * m**2).sum() / (2 * M + 1)
    return np.exp(-(n**2) * eps**2 / (8 * V)).sum() ** 2 / ((2 * M + 1) * norm)


class TestSevGaussian:
    def test_single_comb(self):
        r = sev_gaussian(make_gaussian_gkp(GkpParams(), 0.001, 3))
        assert r.s_q == pytest.approx(6 / 7, abs=1e-9)
        assert r.s_p == pytest.approx(math.exp(-math.pi * 0.001 / 2), abs=1e-9)

    def test_spike_trio(self):
        r = sev_gaussian(make_spike_state(1, 0.2, 1e-3, 3))
        assert r.s_p == pytest.approx(_trio_sp(1, 0.2, 1e-3), abs=1e-9)
        assert r.s_p == pytest.approx(0.9572736, abs=1e-6)

    def test_narrow_spacing_limit(self):
        r = sev_gaussian(make_spike_state(1, 1e-3, 1e-9, 3))
        assert r.s_p == pytest.approx(math.exp(-math.pi * 1e-9 / 2), abs=1e-4)

    @pytest.mark.parametrize("seed", range(4))
    def test_against_grid_oracle(self, seed):
        state = random_comb_state(np.random.default_rng(seed))
        oracle = comb_sev_oracle(state)
        r = sev_gaussian(state)
        assert abs(r.d_q - oracle["d_q"]) < 1e-6
        assert abs(r.d_p - oracle["d_p"]) < 1e-6

    def test_momentum_offset_rotates_position_sev(self):
        k = 0.3
        r = sev_gaussian(make_gaussian_gkp(GkpParams(0.0, k), 0.001, 3))
        assert np.angle(r.d_q) == pytest.approx(np.angle(np.exp(-1j * k * 2 * SQRT_PI)), abs=1e-9)


class TestFidelityGaussian:
    def test_self_fidelity(self):
        r = fidelity_gaussian(make_gaussian_gkp(GkpParams(0.3, 0.1), 0.001, 5))
        assert r.F == pytest.approx(1.0, abs=1e-9)
        assert r.y_star == pytest.approx(0.3, abs=1e-5)
        assert r.k_star == pytest.approx(0.1, abs=1e-5)
        assert not r.mismatched_target

    def test_spike_state_top(self):
        r = fidelity_gaussian(make_spike_state(1, 0.2, 1e-3, 3))
        assert abs(r.F - 1 / 3) < 2e-2
        assert r.F == pytest.approx(_spike_F(1, 0.2, 1e-3), abs=1e-7)

    def test_spike_state_five_peaks(self):
        eps, V = 0.1, 1e-6
        r = fidelity_gaussian(make_spike_state(2, eps, V, 3))
        assert abs(r.F - 1 / 5) <= max(math.exp(-(eps**2) / (8 * V)), 1e-8)

    def test_mismatched_target_flagged(self):
        r = fidelity_gaussian(make_gaussian_gkp(GkpParams(), 0.001, 3), target_V=0.002)
        assert r.mismatched_target
        # overlap of two centred Gaussians with variances V and 2V
        assert r.F == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-7)

    def test_non_convergence_carries_lower_bound(self):
        state = make_spike_state(1, 0.2, 1e-3, 3)
        with pytest.raises(FidelityConvergenceError) as info:
            fidelity_gaussian(state, grid=9, max_iter=1)
        assert 0 < info.value.best_F <= 1

    def test_bad_target(self):
        with pytest.raises(DomainError):
            fidelity_gaussian(make_gaussian_gkp(GkpParams(), 0.001, 1), target_V=-1)

    def test_upper_bound_holds_for_spike_states(self):
        for M, eps, V in [(1, 0.2, 1e-3), (1, 0.1, 1e-4), (2, 0.1, 1e-4)]:
            state = make_spike_state(M, eps, V, 3)
            sev = sev_gaussian(state)
            assert fidelity_gaussian(state).F <= f_upper_from_sevs(sev.s_q, sev.s_p) + 1e-9


class TestEnvelope:
    def test_gkp_envelope(self):
        N, k = 10, 0.2
        n = np.arange(-N, N + 1)
        env = PeriodicEnvelope.normalized(np.exp(1j * k * 2 * n * SQRT_PI))
        r = sev_fidelity_envelope(env, k)
        assert r.fidelity.F == pytest.approx(1.0, abs=1e-12)
        assert r.sev.s_q == pytest.approx(1.0, abs=1e-12)
        assert r.fidelity.k_star == pytest.approx(k, abs=1e-12)
        assert r.s_q_direct == pytest.approx(2 * N / (2 * N + 1), abs=1e-12)

    def test_opposite_fourier_pair(self):
        N = 50
        size = 2 * N + 1
        n = np.arange(-N, N + 1)
        l1, l2 = 3, 3 + math.ceil(size / 2)
        psi = np.exp(2j * math.pi * l1 * n / size) + np.exp(2j * math.pi * l2 * n / size)
        r = sev_fidelity_envelope(PeriodicEnvelope.normalized(psi))
        assert r.fidelity.F == pytest.approx(0.5, abs=1e-12)
        assert r.sev.s_q == pytest.approx(abs(math.cos(math.pi * (l2 - l1) / size)), abs=1e-12)
        assert r.sev.s_q < 0.02
        assert r.s_q_direct < 0.02 + 2 / size

    def test_random_envelope_routes_agree(self):
        rng = np.random.default_rng(20)
        for _ in range(20):
            env = PeriodicEnvelope.normalized(np.exp(2j * math.pi * rng.random(41)))
            r = sev_fidelity_envelope(env)
            wrap = abs(env.values[0]) * abs(env.values[-1])
            assert abs(r.sev.d_q - r.d_q_direct) == pytest.approx(wrap, abs=1e-12)
            assert abs(r.sev.s_q - r.s_q_direct) <= wrap + 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 60), st.integers(0, 2**32 - 1), st.floats(-1, 1))
    def test_fidelity_and_sev_bounded(self, N, seed, k):
        rng = np.random.default_rng(seed)
        env = PeriodicEnvelope.normalized(rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1))
        r = sev_fidelity_envelope(env, k)
        assert 1 / (2 * N + 1) - 1e-12 <= r.fidelity.F <= 1 + 1e-12
        assert r.sev.s_q <= 1 + 1e-12
        # triangle inequality on the Fourier weights
        assert r.fidelity.F <= (r.sev.s_q + 1) / 2 + 1e-12
