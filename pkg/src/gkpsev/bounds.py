"""Closed-form relations between fidelity and stabilizer values.

For rectangle base states with ``n_prime`` bins the attainable momentum SEV
at fidelity ``F >= 1/2`` is

    (2F - 1) sinc(pi/n')  <=  s_p  <=  sinc(pi/n') sqrt(F^2 + (1-F)^2 + 2F(1-F) cos(2pi/n'))

and any ``s_p`` in ``[0, sinc(pi/n')]`` is attainable for ``F < 1/2``.  As
``n' -> inf`` the region becomes ``max(0, 2F - 1) <= s_p <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError
from .quadrature import sinc

IDEAL = "ideal"
NPrime = Union[int, str]

DEFAULT_TOL = 1e-12


def _check_n_prime(n_prime: NPrime) -> NPrime:
    if n_prime == IDEAL:
        return IDEAL
    if isinstance(n_prime, str) or int(n_prime) != n_prime or n_prime < 2:
        raise DomainError(f"n_prime must be an integer >= 2 or 'ideal', got {n_prime!r}")
    return int(n_prime)


def _check_unit(name: str, value) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return arr


def _out(arr: np.ndarray):
    return float(arr) if arr.ndim == 0 else arr


def sp_upper(F, n_prime: NPrime):
    """Largest momentum SEV compatible with fidelity ``F``.

    Above ``F = 1/2`` it is the adjacent-bin two-vector value; below it is
    ``sinc(pi/n')``, reached by aligned phasors.
    """
    n_prime = _check_n_prime(n_prime)
    F = _check_unit("F", F)
    if n_prime == IDEAL:
        return _out(np.ones_like(F))
    s = sinc(math.pi / n_prime)
    c = math.cos(2.0 * math.pi / n_prime)
    two_vec = s * np.sqrt(F**2 + (1.0 - F) ** 2 + 2.0 * F * (1.0 - F) * c)
    return _out(np.where(F >= 0.5, two_vec, s))


def sp_lower(F, n_prime: NPrime):
    """Smallest momentum SEV compatible with fidelity ``F``."""
    n_prime = _check_n_prime(n_prime)
    F = _check_unit("F", F)
    s = 1.0 if n_prime == IDEAL else sinc(math.pi / n_prime)
    return _out(np.maximum(0.0, 2.0 * F - 1.0) * s)


def f_upper_from_sevs(s_q, s_p):
    """Fidelity ceiling ``((s_q + 1)/2) ((s_p + 1)/2)``, clamped at 1."""
    s_q = _check_unit("s_q", s_q)
    s_p = _check_unit("s_p", s_p)
    return _out(np.minimum(1.0, 0.25 * (s_q + 1.0) * (s_p + 1.0)))


def region_contains(F, s_p, n_prime: NPrime, tol: float = DEFAULT_TOL):
    F = np.asarray(F, dtype=float)
    s_p = np.asarray(s_p, dtype=float)
    valid = (F >= 0) & (F <= 1) & (s_p >= -tol) & (s_p <= 1 + tol)
    Fc = np.clip(F, 0.0, 1.0)
    inside = (s_p >= sp_lower(Fc, n_prime) - tol) & (s_p <= sp_upper(Fc, n_prime) + tol)
    out = valid & inside
    return bool(out) if out.ndim == 0 else out


def distances_from_fidelity(F: float) -> tuple[float, float, float]:
    """Bures distance, Bures angle and the trace-distance lower bound."""
    if not 0.0 <= F <= 1.0:
        raise DomainError(f"F must lie in [0, 1], got {F}")
    root = math.sqrt(F)
    return 2.0 - 2.0 * root, math.acos(root), 1.0 - root


@dataclass(frozen=True)
class BoundsRegion:
    """Attainable ``(F, s_p)`` region for a bin count or the ideal limit."""

    n_prime: NPrime = IDEAL

    def __post_init__(self):
        object.__setattr__(self, "n_prime", _check_n_prime(self.n_prime))

    def lower(self, F):
        return sp_lower(F, self.n_prime)

    def upper(self, F):
        return sp_upper(F, self.n_prime)

    def contains(self, F, s_p, tol: float = DEFAULT_TOL):
        return region_contains(F, s_p, self.n_prime, tol)

    def curves(self, grid: int = 101) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        F = np.linspace(0.0, 1.0, grid)
        return F, self.lower(F), self.upper(F)


def fidelity_ceiling_surface(grid: int = 51) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened ``(s_q, s_p, F_upper)`` samples on a ``grid x grid`` mesh."""
    s = np.linspace(0.0, 1.0, grid)
    sq, sp = np.meshgrid(s, s, indexing="ij")
    return sq.ravel(), sp.ravel(), f_upper_from_sevs(sq.ravel(), sp.ravel())
