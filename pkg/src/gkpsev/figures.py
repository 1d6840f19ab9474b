"""Column data behind the figures; plotting is left to external tools."""

from __future__ import annotations

import math

import numpy as np

from .bounds import IDEAL, BoundsRegion, fidelity_ceiling_surface
from .quadrature import SQRT_PI
from .sampler import SampleConfig, sample_region_arrays
from .states import GaussianCombState, GkpParams, make_gaussian_gkp, make_spike_state

MIN_GRID_POINTS = 4096
POINTS_PER_SIGMA = 10

FIG3_SETS = {"top": (1e-3, 0.2), "bottom": (1e-4, 0.1)}


def position_grid(N: int, V_min: float) -> np.ndarray:
    """Grid over ``[-(2N+1) sqrt(pi), (2N+1) sqrt(pi)]``.

    At least ``MIN_GRID_POINTS`` points and ``POINTS_PER_SIGMA`` points per
    standard deviation ``sqrt(V_min)`` of the narrowest peak density.
    """
    half = (2 * N + 1) * SQRT_PI
    needed = math.ceil(2 * half * POINTS_PER_SIGMA / math.sqrt(V_min)) + 1
    return np.linspace(-half, half, max(MIN_GRID_POINTS, needed))


def fig1(N: int = 3, V: float = 0.01) -> dict[str, np.ndarray]:
    """Periodic state whose base is two unequal bumps, ``k = 0``."""
    state = GaussianCombState.normalized([(-0.45, 1.0), (0.3, 0.6)], V, N)
    x = position_grid(N, V)
    psi = state.wavefunction(x)
    return {"x": x, "re_psi": psi.real, "im_psi": psi.imag, "density": np.abs(psi) ** 2}


def fig2(N: int = 3, V: float = 0.1) -> dict[str, np.ndarray]:
    # V = 1/10 overlaps neighbouring periods at the 1e-7 level.
    state = make_gaussian_gkp(GkpParams(), V, N, overlap_tol=1e-6)
    x = position_grid(N, V)
    return {"x": x, "density": np.abs(state.wavefunction(x)) ** 2}


def fig3(N: int = 3, M: int = 1) -> dict[str, np.ndarray]:
    x = position_grid(N, min(V for V, _ in FIG3_SETS.values()))
    cols = {"x": x}
    for label, (V, eps) in FIG3_SETS.items():
        gkp = make_gaussian_gkp(GkpParams(), V, N)
        spoof = make_spike_state(M, eps, V, N)
        cols[f"gkp_{label}"] = np.abs(gkp.wavefunction(x)) ** 2
        cols[f"spoof_{label}"] = np.abs(spoof.wavefunction(x)) ** 2
    return cols


def fig5_bounds(n_primes=(4, 8, 64, IDEAL), grid: int = 201) -> dict[str, np.ndarray]:
    rows = []
    for n_prime in n_primes:
        F, lo, hi = BoundsRegion(n_prime).curves(grid)
        rows.append((np.full(F.shape, str(n_prime), dtype=object), F, lo, hi))
    return {
        "n_prime": np.concatenate([r[0] for r in rows]),
        "F": np.concatenate([r[1] for r in rows]),
        "sp_lower": np.concatenate([r[2] for r in rows]),
        "sp_upper": np.concatenate([r[3] for r in rows]),
    }


def fig5_samples(n_prime: int = 8, num_samples: int = 2000, seed: int = 5) -> dict[str, np.ndarray]:
    cols = {}
    for dist in ("dirichlet_uniform", "boundary_biased"):
        cfg = SampleConfig(n_prime=n_prime, N=100, num_samples=num_samples, seed=seed, distribution=dist)
        arrays = sample_region_arrays(cfg)
        for key in ("F", "s_p"):
            cols.setdefault(key, []).append(arrays[key])
        cols.setdefault("distribution", []).append(np.full(num_samples, dist, dtype=object))
    return {
        "distribution": np.concatenate(cols["distribution"]),
        "F": np.concatenate(cols["F"]),
        "s_p": np.concatenate(cols["s_p"]),
    }


def fig6(grid: int = 51) -> dict[str, np.ndarray]:
    s_q, s_p, F = fidelity_ceiling_surface(grid)
    return {"s_q": s_q, "s_p": s_p, "F_upper": F}


FIGURES = {
    "fig1": {"fig1.csv": fig1},
    "fig2": {"fig2.csv": fig2},
    "fig3": {"fig3.csv": fig3},
    "fig5": {"fig5_bounds.csv": fig5_bounds, "fig5_samples.csv": fig5_samples},
    "fig6": {"fig6.csv": fig6},
}
