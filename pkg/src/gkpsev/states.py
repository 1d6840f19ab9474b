"""State families: Gaussian combs, rectangle-bin base states and envelopes.

Gaussian combs replicate a base state ``2N + 1`` times with period
``2*sqrt(pi)``; rectangle base states live on ``n_prime`` box bins tiling
one period ``[-sqrt(pi), sqrt(pi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, PreconditionError
from .quadrature import PERIOD_P, PERIOD_Q, SQRT_PI, gaussian_kernel

GAUSSIAN_NORM_TOL = 1e-9
DISCRETE_NORM_TOL = 1e-12
DEFAULT_OVERLAP_TOL = 1e-12

# Spike regime: neglected cross terms are at most exp(-5) (the 1% level) and
# the spike cluster occupies at most half a period.
SPIKE_MIN_SEPARATION_RATIO = 5.0
SPIKE_MAX_CLUSTER_WIDTH = SQRT_PI


def _wrap(value: float, period: float) -> float:
    half = period / 2.0
    wrapped = (value + half) % period - half
    # float modulo can land exactly on +half
    return -half if wrapped >= half else wrapped


@dataclass(frozen=True)
class GkpParams:
    """Position and momentum offsets of a displaced GKP state.

    Offsets are reduced into ``y in [-sqrt(pi), sqrt(pi))`` and
    ``k in [-sqrt(pi)/2, sqrt(pi)/2)`` on construction.
    """

    y: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "y", _wrap(float(self.y), PERIOD_Q))
        object.__setattr__(self, "k", _wrap(float(self.k), PERIOD_P))


@dataclass(frozen=True)
class GaussianCombState:
    """Base state of Gaussian spikes replicated over ``2N + 1`` periods.

    ``components`` holds ``(center, amplitude)`` pairs of the base state,
    each spike being ``|center; V>``.  The whole comb carries the momentum
    kick ``D_p(k)``.  The base state is normalized including the overlaps
    between its own spikes.
    """

    components: tuple[tuple[float, complex], ...]
    V: float
    N: int
    k: float = 0.0

    def __post_init__(self):
        comps = tuple((float(c), complex(a)) for c, a in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise PreconditionError("a Gaussian comb needs at least one component")
        if not self.V > 0:
            raise DomainError(f"variance must be positive, got V={self.V}")
        if int(self.N) != self.N or self.N < 0:
            raise DomainError(f"N must be a non-negative integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "k", float(self.k))
        c = self.centers
        if np.any(c < -SQRT_PI) or np.any(c >= SQRT_PI):
            raise PreconditionError("component centers must lie in [-sqrt(pi), sqrt(pi))")
        norm = self.base_norm()
        if abs(norm - 1.0) > GAUSSIAN_NORM_TOL:
            raise PreconditionError(f"base state is not normalized: <psi|psi> = {norm!r}")

    @classmethod
    def normalized(cls, components, V: float, N: int, k: float = 0.0) -> GaussianCombState:
        """Build a comb after rescaling the base amplitudes to unit norm."""
        c = np.array([float(ci) for ci, _ in components])
        a = np.array([complex(ai) for _, ai in components])
        gram = gaussian_kernel(c[None, :], c[:, None], V, V)
        scale = math.sqrt(float(np.real(np.conj(a) @ gram @ a)))
        return cls(tuple(zip(c, a / scale)), V, N, k)

    @property
    def centers(self) -> np.ndarray:
        return np.array([c for c, _ in self.components])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.components], dtype=complex)

    def base_norm(self) -> float:
        c, a = self.centers, self.amplitudes
        gram = gaussian_kernel(c[None, :], c[:, None], self.V, self.V)
        return float(np.real(np.conj(a) @ gram @ a))

    def replicated(self) -> tuple[np.ndarray, np.ndarray]:
        """Centers and amplitudes of every spike in the full comb."""
        shifts = PERIOD_Q * np.arange(-self.N, self.N + 1)
        centers = (shifts[:, None] + self.centers[None, :]).ravel()
        amps = np.tile(self.amplitudes, 2 * self.N + 1) / math.sqrt(2 * self.N + 1)
        return centers, amps

    def adjacent_period_overlap(self) -> float:
        """Largest overlap between spikes in neighbouring periods."""
        c = self.centers
        gap = np.abs(c[:, None] - (c[None, :] + PERIOD_Q))
        return float(np.exp(-gap.min() ** 2 / (8.0 * self.V)))

    def wavefunction(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        centers, amps = self.replicated()
        pref = (2.0 * math.pi * self.V) ** -0.25
        psi = np.zeros(x.shape, dtype=complex)
        for c, a in zip(centers, amps):
            psi += a * np.exp(-((x - c) ** 2) / (4.0 * self.V))
        return pref * psi * np.exp(1j * self.k * x)

    def displaced(self, y0: float, k0: float) -> GaussianCombState:
        """Apply ``D_p(k0) D_q(y0)``, dropping the global phase."""
        comps = tuple((c + y0, a) for c, a in self.components)
        return GaussianCombState(comps, self.V, self.N, self.k + k0)


@dataclass(frozen=True)
class DiscreteBaseState:
    """Base state on ``n_prime`` orthogonal box bins of one period."""

    n_prime: int
    amplitudes: tuple[complex, ...] = field(repr=False)

    def __post_init__(self):
        if int(self.n_prime) != self.n_prime or self.n_prime < 1:
            raise DomainError(f"n_prime must be a positive integer, got {self.n_prime}")
        object.__setattr__(self, "n_prime", int(self.n_prime))
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != self.n_prime:
            raise PreconditionError(f"expected {self.n_prime} amplitudes, got {len(amps)}")
        object.__setattr__(self, "amplitudes", amps)
        total = float(np.sum(self.probabilities))
        if abs(total - 1.0) > DISCRETE_NORM_TOL:
            raise PreconditionError(f"bin probabilities sum to {total!r}, not 1")

    @classmethod
    def from_probabilities(cls, probabilities, phases=None) -> DiscreteBaseState:
        p = np.asarray(probabilities, dtype=float)
        if np.any(p < 0):
            raise DomainError("probabilities must be non-negative")
        amps = np.sqrt(p)
        if phases is not None:
            amps = amps * np.exp(1j * np.asarray(phases, dtype=float))
        return cls(len(p), tuple(amps))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(np.array(self.amplitudes, dtype=complex)) ** 2

    @property
    def bin_width(self) -> float:
        return PERIOD_Q / self.n_prime

    @property
    def bin_centers(self) -> np.ndarray:
        n = np.arange(self.n_prime)
        return SQRT_PI * (2 * n + 1 - self.n_prime) / self.n_prime


@dataclass(frozen=True)
class PeriodicEnvelope:
    """Amplitudes ``psi_n`` multiplying the replicas ``D_q(2 n sqrt(pi))|psi>``."""

    N: int
    envelope: tuple[complex, ...] = field(repr=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise DomainError(f"N must be a non-negative integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        env = tuple(complex(v) for v in self.envelope)
        if len(env) != 2 * self.N + 1:
            raise PreconditionError(f"expected {2 * self.N + 1} envelope values, got {len(env)}")
        object.__setattr__(self, "envelope", env)
        total = float(np.sum(np.abs(self.values) ** 2))
        if abs(total - 1.0) > DISCRETE_NORM_TOL:
            raise PreconditionError(f"envelope norm is {total!r}, not 1")

    @classmethod
    def normalized(cls, values) -> PeriodicEnvelope:
        v = np.asarray(values, dtype=complex)
        if v.size % 2 != 1:
            raise PreconditionError("an envelope needs an odd number 2N+1 of values")
        return cls((v.size - 1) // 2, tuple(v / np.linalg.norm(v)))

    @property
    def values(self) -> np.ndarray:
        return np.array(self.envelope, dtype=complex)


# -- Gaussian-comb constructors -------------------------------------------------


def make_gaussian_gkp(
    params: GkpParams, V: float, N: int, overlap_tol: float = DEFAULT_OVERLAP_TOL
) -> GaussianCombState:
    """Approximate GKP state: one spike at ``params.y`` per period.

    Adjacent periods must be effectively orthogonal,
    ``exp(-pi / 2V) < overlap_tol``.
    """
    if not V > 0:
        raise DomainError(f"variance must be positive, got V={V}")
    overlap = math.exp(-math.pi / (2.0 * V))
    if overlap >= overlap_tol:
        raise PreconditionError(
            f"adjacent-period overlap exp(-pi/2V) = {overlap:.3e} is not below {overlap_tol:.1e}"
        )
    return GaussianCombState(((params.y, 1.0 + 0j),), V, N, params.k)


def make_spike_state(
    M: int, epsilon: float, V: float, N: int, overlap_tol: float = DEFAULT_OVERLAP_TOL
) -> GaussianCombState:
    """Spoofing state: ``2M + 1`` equal spikes spaced by ``epsilon`` per period.

    Needs ``epsilon^2 / 8V >= 5`` and ``(2M + 1) * epsilon <= sqrt(pi)``.
    Amplitudes are ``1 / sqrt((2M + 1) * norm_factor)`` with
    ``norm_factor = sum_{m,n} exp(-(epsilon^2 / 8V) (m - n)^2) / (2M + 1)``.
    """
    if int(M) != M or M < 0:
        raise DomainError(f"M must be a non-negative integer, got {M}")
    M = int(M)
    if not V > 0:
        raise DomainError(f"variance must be positive, got V={V}")
    if not epsilon > 0:
        raise DomainError(f"spike spacing must be positive, got epsilon={epsilon}")
    if M > 0:
        ratio = epsilon**2 / (8.0 * V)
        if ratio < SPIKE_MIN_SEPARATION_RATIO:
            raise PreconditionError(
                f"8V << epsilon^2 violated: epsilon^2/8V = {ratio:.3g} < {SPIKE_MIN_SEPARATION_RATIO}"
            )
        width = (2 * M + 1) * epsilon
        if width > SPIKE_MAX_CLUSTER_WIDTH:
            raise PreconditionError(
                f"M*epsilon << 1 violated: (2M+1)*epsilon = {width:.3g} > sqrt(pi)"
            )
    overlap = math.exp(-math.pi / (2.0 * V))
    if overlap >= overlap_tol:
        raise PreconditionError(
            f"adjacent-period overlap exp(-pi/2V) = {overlap:.3e} is not below {overlap_tol:.1e}"
        )
    idx = np.arange(-M, M + 1)
    diff = idx[:, None] - idx[None, :]
    norm_factor = float(np.exp(-(epsilon**2 / (8.0 * V)) * diff**2).sum()) / (2 * M + 1)
    amp = 1.0 / math.sqrt((2 * M + 1) * norm_factor)
    comps = tuple((epsilon * float(n), complex(amp)) for n in idx)
    return GaussianCombState(comps, V, N, 0.0)


# -- rectangle-basis constructors -----------------------------------------------


def make_box_base(a: float, n_prime: int) -> DiscreteBaseState:
    """Coarse-grain the box ``|psi(x)|^2 = 1/a`` on ``|x| <= a/2`` onto bins.

    The box is centred on a block of ``ceil(a / bin_width)`` central bins and
    each bin receives the probability mass the box puts inside it, so boxes
    of whole-bin width map to equal weights on exactly that many bins.
    """
    if not 0 < a <= PERIOD_Q * (1 + 1e-12):
        raise DomainError(f"box width must satisfy 0 < a <= 2*sqrt(pi), got a={a}")
    if int(n_prime) != n_prime or n_prime < 1:
        raise DomainError(f"n_prime must be a positive integer, got {n_prime}")
    width = PERIOD_Q / n_prime
    span = a / width
    if span < 1 - 1e-9:
        raise DomainError(f"box width {a} spans fewer than one of {n_prime} bins")
    nbins = min(n_prime, math.ceil(span - 1e-9))
    start = (n_prime - nbins) // 2
    edges = width * np.arange(n_prime + 1)
    mid = width * (start + nbins / 2.0)
    lo, hi = mid - a / 2.0, mid + a / 2.0
    mass = np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)
    return DiscreteBaseState.from_probabilities(mass / mass.sum())


def make_roots_of_unity_state(n_prime: int, M: int) -> DiscreteBaseState:
    """Probability ``1/M`` on bins ``0, n'/M, ..., (M-1) n'/M``; ``s_p`` vanishes."""
    if M < 2:
        raise DomainError(f"M must be at least 2, got {M}")
    if n_prime % M:
        raise DomainError(f"M={M} does not divide n_prime={n_prime}")
    p = np.zeros(n_prime)
    p[:: n_prime // M] = 1.0 / M
    return DiscreteBaseState.from_probabilities(p)


def make_two_vector_state(n_prime: int, F: float, gap: int) -> DiscreteBaseState:
    """Weight ``F`` on bin 0 and ``1 - F`` on bin ``gap``.

    ``gap = 1`` gives the largest momentum SEV for this fidelity and
    ``gap = n_prime/2`` the smallest.
    """
    if not 0.5 <= F <= 1.0:
        raise DomainError(f"two-vector states need 1/2 <= F <= 1, got F={F}")
    if int(gap) != gap or not 1 <= gap <= n_prime // 2:
        raise DomainError(f"gap must be an integer in [1, n_prime/2], got {gap}")
    p = np.zeros(n_prime)
    p[0] = F
    p[int(gap)] = 1.0 - F
    return DiscreteBaseState.from_probabilities(p)


def three_vector_bins(n_prime: int, n: int) -> tuple[int, int]:
    # Even n sits the pair symmetrically at +-n/2; odd n shifts it by half a bin.
    if n % 2 == 0:
        return n // 2 % n_prime, -(n // 2) % n_prime
    return (n + 1) // 2 % n_prime, -((n - 1) // 2) % n_prime


def make_three_vector_state(n_prime: int, F: float, n: int) -> DiscreteBaseState:
    """Weight ``F`` on bin 0 and ``(1 - F)/2`` on a pair of bins around it.

    The pair sits at angles ``+-n*pi/n_prime`` from the bin-0 phasor, so the
    momentum SEV is ``sinc(pi/n') |F + (1 - F) cos(n pi / n')|``.  Odd ``n``
    needs half-bin angles; the pair is then placed at bins ``(n+1)/2`` and
    ``-(n-1)/2``, which rotates it by ``pi/n'`` and perturbs the magnitude
    at order ``1/n'``.  Coinciding bins (``n = 0``, ``n = n'``) merge.
    For ``F < 1/3`` the pair weights exceed ``F``, so the fidelity of the
    result is ``(1 - F)/2`` rather than ``F``.
    """
    if not 0.0 < F < 0.5:
        raise DomainError(f"three-vector states need 0 < F < 1/2, got F={F}")
    if n_prime % 2:
        raise DomainError(f"three-vector states need an even n_prime, got {n_prime}")
    if int(n) != n or not 0 <= n <= n_prime:
        raise DomainError(f"n must be an integer in [0, n_prime], got {n}")
    p = np.zeros(n_prime)
    p[0] += F
    for b in three_vector_bins(n_prime, int(n)):
        p[b] += (1.0 - F) / 2.0
    return DiscreteBaseState.from_probabilities(p)


def uniform_state(n_prime: int) -> DiscreteBaseState:
    return DiscreteBaseState.from_probabilities(np.full(n_prime, 1.0 / n_prime))
