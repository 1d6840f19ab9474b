"""Stabilizer expectation values and maximum GKP fidelities.

Three routes are provided: closed forms for rectangle-bin base states, exact
Gaussian matrix elements for Gaussian combs, and a discrete Fourier basis for
the position stabilizer of periodic envelopes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .exceptions import DomainError, FidelityConvergenceError, PreconditionError
from .quadrature import PERIOD_P, PERIOD_Q, SQRT_PI, gaussian_kernel, sinc
from .states import (
    DISCRETE_NORM_TOL,
    DiscreteBaseState,
    GaussianCombState,
    GkpParams,
    PeriodicEnvelope,
)

FIDELITY_GRID = 257
FIDELITY_TOL = 1e-10


class FidelityMethod(str, enum.Enum):
    closed_form = "closed_form"
    grid_refine = "grid_refine"
    dft_basis = "dft_basis"


def effective_squeezing(s: float, quadrature: str) -> float:
    """Effective squeezing ``sqrt(-c ln s)`` with ``c = 1/2pi`` (q) or ``2/pi`` (p)."""
    if quadrature not in ("q", "p"):
        raise DomainError(f"quadrature must be 'q' or 'p', got {quadrature!r}")
    if not 0.0 < s <= 1.0:
        raise DomainError(f"stabilizer magnitude must lie in (0, 1], got {s}")
    c = 1.0 / (2.0 * math.pi) if quadrature == "q" else 2.0 / math.pi
    return math.sqrt(max(0.0, -c * math.log(s)))


def _squeezing_or_inf(s: float, quadrature: str) -> float:
    if s <= 0.0:
        return math.inf
    return effective_squeezing(min(s, 1.0), quadrature)


@dataclass(frozen=True)
class SevResult:
    d_q: complex
    d_p: complex
    s_q: float
    s_p: float
    delta_q: float
    delta_p: float

    @classmethod
    def from_sevs(cls, d_q: complex, d_p: complex) -> SevResult:
        s_q, s_p = float(abs(d_q)), float(abs(d_p))
        return cls(
            complex(d_q),
            complex(d_p),
            s_q,
            s_p,
            _squeezing_or_inf(s_q, "q"),
            _squeezing_or_inf(s_p, "p"),
        )

    def to_dict(self) -> dict:
        return {
            "s_q": self.s_q,
            "s_p": self.s_p,
            "d_q": [self.d_q.real, self.d_q.imag],
            "d_p": [self.d_p.real, self.d_p.imag],
            "delta_q": self.delta_q,
            "delta_p": self.delta_p,
        }


@dataclass(frozen=True)
class FidelityResult:
    F: float
    y_star: float
    k_star: float
    method: FidelityMethod
    # target family differs from the state's (V, N)
    mismatched_target: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["method"] = self.method.value
        return out


def uniform_envelope_overlap(N: int) -> float:
    """``<Psi|D_q(2 sqrt(pi))|Psi>`` for ``2N + 1`` equal, orthogonal replicas."""
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    return 2.0 * N / (2.0 * N + 1.0)


# -- rectangle approximation ----------------------------------------------------


def sev_discrete(state: DiscreteBaseState, N: int) -> SevResult:
    """SEVs of a rectangle base state repeated over ``2N + 1`` equal periods.

    ``d_p = sinc(pi/n') sum_n |psi_n|^2 exp(i sqrt(pi) x_n)`` with ``x_n`` the
    bin centres, which is the exact integral of ``exp(i sqrt(pi) x)`` over the
    piecewise-constant density.
    """
    p = state.probabilities
    if abs(p.sum() - 1.0) > DISCRETE_NORM_TOL:
        raise PreconditionError("state is not normalized")
    d_p = complex(momentum_sev_from_probabilities(p))
    return SevResult.from_sevs(complex(uniform_envelope_overlap(N)), d_p)


def momentum_sev_from_probabilities(probabilities: np.ndarray) -> np.ndarray:
    """Complex ``d_p`` for bin-probability vectors along the last axis."""
    p = np.asarray(probabilities, dtype=float)
    n_prime = p.shape[-1]
    centers = SQRT_PI * (2 * np.arange(n_prime) + 1 - n_prime) / n_prime
    return sinc(math.pi / n_prime) * (p @ np.exp(1j * SQRT_PI * centers))


def fidelity_discrete(state: DiscreteBaseState) -> FidelityResult:
    """Largest bin probability; ties resolve to the lowest bin index."""
    p = state.probabilities
    i = int(np.argmax(p))
    # normalization is only checked to 1e-12
    F = min(1.0, float(p[i]))
    return FidelityResult(F, float(state.bin_centers[i]), 0.0, FidelityMethod.closed_form)


# -- Gaussian approximation -----------------------------------------------------


def _normalized_comb(state: GaussianCombState) -> tuple[np.ndarray, np.ndarray]:
    centers, amps = state.replicated()
    gram = gaussian_kernel(centers[None, :], centers[:, None], state.V, state.V)
    norm = float(np.real(np.conj(amps) @ gram @ amps))
    return centers, amps / math.sqrt(norm)


def sev_gaussian(state: GaussianCombState) -> SevResult:
    """Exact SEVs of the full Gaussian comb.

    Every spike pair, including those in neighbouring periods, enters through
    the closed-form Gaussian matrix elements, so ``s_q`` carries the lost edge
    periods and ``s_p`` the ``exp(-pi V / 2)`` spike-width factor.
    """
    c, a = _normalized_comb(state)
    V = state.V
    kp = gaussian_kernel(c[None, :], c[:, None], V, V, PERIOD_P)
    d_p = complex(np.conj(a) @ kp @ a)
    kq = gaussian_kernel(c[None, :] + PERIOD_Q, c[:, None], V, V)
    d_q = complex(np.conj(a) @ kq @ a) * np.exp(-1j * state.k * PERIOD_Q)
    return SevResult.from_sevs(d_q, d_p)


class _CombOverlap:
    """``<psi_GKP(y,k); Vt, Nt | Psi>`` for a Gaussian comb ``Psi``."""

    def __init__(self, state: GaussianCombState, Vt: float, Nt: int):
        self.centers, self.amps = _normalized_comb(state)
        self.V, self.Vt, self.Nt = state.V, Vt, Nt
        self.k_state = state.k
        self.vsum = state.V + Vt
        self.pref = math.sqrt(2.0 * math.sqrt(state.V * Vt) / self.vsum) / math.sqrt(2 * Nt + 1)
        self.target_offsets = PERIOD_Q * np.arange(-Nt, Nt + 1)

    def row(self, y: float, k: np.ndarray) -> np.ndarray:
        """Fidelities at one ``y`` for an array of ``k``."""
        b = self.target_offsets + y
        a = self.centers
        gauss = np.exp(-((a[None, :] - b[:, None]) ** 2) / (4.0 * self.vsum))
        weight = (gauss * self.amps[None, :]).ravel()
        phase = ((b[:, None] * self.V + a[None, :] * self.Vt) / self.vsum).ravel()
        keep = np.abs(weight) > 1e-17 * max(np.abs(weight).max(), 1e-300)
        weight, phase = weight[keep], phase[keep]
        kappa = self.k_state - np.atleast_1d(np.asarray(k, dtype=float))
        amp = np.exp(1j * np.outer(kappa, phase)) @ weight
        damp = np.exp(-(kappa**2) * self.V * self.Vt / self.vsum)
        return (self.pref * damp * np.abs(amp)) ** 2

    def __call__(self, y: float, k: float) -> float:
        return float(self.row(y, np.array([k]))[0])


def fidelity_gaussian(
    state: GaussianCombState,
    target_V: float | None = None,
    target_N: int | None = None,
    grid: int = FIDELITY_GRID,
    tol: float = FIDELITY_TOL,
    n_starts: int = 4,
    max_iter: int = 4000,
) -> FidelityResult:
    """Maximum fidelity to the approximate GKP family ``(target_V, target_N)``.

    A ``grid x grid`` scan of the fundamental domain, augmented by rows at the
    state's own spike positions and a column at its momentum, seeds
    Nelder-Mead refinements from the best ``n_starts`` points.  Spike rows
    keep combs narrower than the grid spacing from slipping between points.
    """
    Vt = state.V if target_V is None else float(target_V)
    Nt = state.N if target_N is None else int(target_N)
    if not Vt > 0 or Nt < 0:
        raise DomainError("target family needs V > 0 and N >= 0")
    mismatched = not (math.isclose(Vt, state.V, rel_tol=1e-12) and Nt == state.N)
    overlap = _CombOverlap(state, Vt, Nt)

    ys = np.concatenate(
        [
            np.linspace(-SQRT_PI, SQRT_PI, grid, endpoint=False),
            [GkpParams(y=c).y for c in state.centers],
        ]
    )
    ks = np.concatenate(
        [np.linspace(-SQRT_PI / 2, SQRT_PI / 2, grid, endpoint=False), [GkpParams(k=state.k).k]]
    )
    table = np.array([overlap.row(y, ks) for y in ys])

    order = np.argsort(table, axis=None)[::-1]
    starts: list[tuple[float, float]] = []
    for flat in order:
        iy, ik = np.unravel_index(flat, table.shape)
        cand = (float(ys[iy]), float(ks[ik]))
        if all(abs(cand[0] - s[0]) > 1e-9 or abs(cand[1] - s[1]) > 1e-9 for s in starts):
            starts.append(cand)
        if len(starts) == n_starts:
            break

    dy = min(PERIOD_Q / grid, math.sqrt(min(state.V, Vt))) / 2.0
    dk = PERIOD_P / grid / 2.0
    best = (float(table.max()), *starts[0])
    converged = False
    for y0, k0 in starts:
        simplex = np.array([[y0, k0], [y0 + dy, k0], [y0, k0 + dk]])
        res = minimize(
            lambda v: -overlap(v[0], v[1]),
            np.array([y0, k0]),
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-12,
                "fatol": tol / 10.0,
                "maxiter": max_iter,
                "maxfev": 2 * max_iter,
            },
        )
        converged = converged or bool(res.success)
        if -res.fun > best[0]:
            best = (float(-res.fun), float(res.x[0]), float(res.x[1]))
    params = GkpParams(best[1], best[2])
    if not converged:
        raise FidelityConvergenceError(
            "fidelity refinement did not converge", best[0], params.y, params.k
        )
    return FidelityResult(min(1.0, best[0]), params.y, params.k, FidelityMethod.grid_refine, mismatched)


# -- periodic envelopes ---------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeResult:
    """Envelope metrics from the Fourier basis plus the direct overlap.

    ``sev`` holds the Fourier-basis position SEV; the base state is taken as
    ideal so ``d_p = 1``.
    """

    sev: SevResult
    fidelity: FidelityResult
    d_q_direct: complex

    @property
    def s_q_direct(self) -> float:
        return abs(self.d_q_direct)


def envelope_basis(N: int, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal Fourier basis of GKP-like envelopes and its phases.

    Column ``l`` is ``exp(i theta_l n) / sqrt(2N + 1)`` with
    ``theta_l = 2 pi l / (2N + 1) + 2 k sqrt(pi)``, i.e. the envelope of a GKP
    state with momentum offset ``k + l sqrt(pi) / (2N + 1)``.
    """
    size = 2 * N + 1
    idx = np.arange(-N, N + 1)
    theta = 2.0 * math.pi * idx / size + 2.0 * k * SQRT_PI
    return np.exp(1j * np.outer(idx, theta)) / math.sqrt(size), theta


def sev_fidelity_envelope(env: PeriodicEnvelope, k: float = 0.0) -> EnvelopeResult:
    """Position SEV and fidelity of a periodic envelope in the Fourier basis."""
    psi = env.values
    basis, theta = envelope_basis(env.N, k)
    phi = basis.conj().T @ psi
    weights = np.abs(phi) ** 2
    d_q = complex(np.sum(weights * np.exp(-1j * theta)))
    d_q_direct = complex(np.sum(np.conj(psi[1:]) * psi[:-1]))
    l_star = int(np.argmax(weights))
    k_star = GkpParams(k=k + (l_star - env.N) * SQRT_PI / (2 * env.N + 1)).k
    fid = FidelityResult(min(1.0, float(weights[l_star])), 0.0, k_star, FidelityMethod.dft_basis)
    return EnvelopeResult(SevResult.from_sevs(d_q, 1.0 + 0j), fid, d_q_direct)
