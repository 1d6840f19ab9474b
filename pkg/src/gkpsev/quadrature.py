"""Numerical kernels shared by the state, metric and bound modules.

Conventions are fixed: hbar = 1, ``D_q(y)|x> = |x + y>`` and
``D_p(k)|x> = exp(i k x)|x>``.  The position stabilizer displaces by
``2*sqrt(pi)`` and the momentum stabilizer by ``sqrt(pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .exceptions import DomainError

SQRT_PI = math.sqrt(math.pi)

_SINC_SERIES_CUTOFF = 1e-4
_PAIRWISE_BLOCK = 1024


@dataclass(frozen=True)
class QuadratureConvention:
    period_q: float = 2.0 * SQRT_PI
    period_p: float = SQRT_PI

    def __post_init__(self):
        if not math.isclose(self.period_q * self.period_p, 2.0 * math.pi, rel_tol=1e-14):
            raise DomainError("stabilizer displacements must satisfy period_q * period_p = 2*pi")


CONVENTION = QuadratureConvention()
PERIOD_Q = CONVENTION.period_q
PERIOD_P = CONVENTION.period_p


class Phasor(NamedTuple):
    magnitude: float
    angle: float


def sinc(x):
    """Unnormalized sinc, ``sin(x)/x`` with ``sinc(0) == 1``.

    Accepts scalars or arrays.  Below ``|x| < 1e-4`` a Taylor branch is used
    so the removable singularity never divides by a tiny number.
    """
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, arr)
    x2 = arr * arr
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def gaussian_overlap(x: float, y: float, V: float) -> float:
    """Overlap ``<y;V|x;V> = exp(-(x - y)^2 / 8V)`` of equal-variance Gaussians."""
    if not V > 0:
        raise DomainError(f"variance must be positive, got V={V}")
    return math.exp(-((x - y) ** 2) / (8.0 * V))


def gaussian_kernel(a, b, Va, Vb, kappa=0.0):
    """Matrix element ``<b;Vb| exp(i kappa x) |a;Va>`` between Gaussian wavepackets.

    ``|c;V>`` has wavefunction ``(2 pi V)^(-1/4) exp(-(x - c)^2 / 4V)``.  The
    expression is written around the product centre so that large centres
    (far comb replicas) do not cancel catastrophically.  Broadcasts over
    ``a``, ``b`` and ``kappa``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    vsum = Va + Vb
    centre = (b * Va + a * Vb) / vsum
    log_mag = (
        0.5 * math.log(2.0 * math.sqrt(Va * Vb) / vsum)
        - (a - b) ** 2 / (4.0 * vsum)
        - kappa**2 * Va * Vb / vsum
    )
    return np.exp(log_mag + 1j * kappa * centre)


def _pairwise_sum(z: np.ndarray) -> complex:
    if z.size <= _PAIRWISE_BLOCK:
        return complex(z.sum())
    half = z.size // 2
    return _pairwise_sum(z[:half]) + _pairwise_sum(z[half:])


def phasor_sum(terms: Iterable[Phasor | tuple[float, float]]) -> tuple[float, float]:
    """Polar form ``(|S|, arg S)`` of ``S = sum_j m_j exp(i theta_j)``.

    An empty sum returns ``(0.0, 0.0)``.
    """
    pairs = np.asarray(list(terms), dtype=float).reshape(-1, 2)
    if pairs.shape[0] == 0:
        return 0.0, 0.0
    if np.any(pairs[:, 0] < 0):
        raise DomainError("phasor magnitudes must be non-negative")
    total = _pairwise_sum(pairs[:, 0] * np.exp(1j * pairs[:, 1]))
    return abs(total), math.atan2(total.imag, total.real)
