"""Monte Carlo mapping of the attainable (F, s_q, s_p) region.

Random rectangle base states are drawn, their fidelity and stabilizer values
computed, and each sample is checked against the exact region and against
the two-stabilizer fidelity ceiling.

Samples are generated in fixed-size chunks.  Chunk ``c`` draws from a Philox
stream keyed by ``(seed, c)``, so output is bit-identical for any number of
worker threads.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import IO, Iterable, Iterator, Optional

import numpy as np

from .bounds import f_upper_from_sevs, region_contains, sp_lower, sp_upper
from .exceptions import DomainError
from .metrics import momentum_sev_from_probabilities, uniform_envelope_overlap

DISTRIBUTIONS = ("dirichlet_uniform", "sparse_k", "boundary_biased")
CHUNK_SIZE = 1024
BOUNDARY_NOISE = 0.01
CSV_HEADER = ("F", "s_q", "s_p", "in_region", "eq1_slack")


@dataclass(frozen=True)
class SampleConfig:
    n_prime: int
    N: int
    num_samples: int
    seed: int = 0
    distribution: str = "dirichlet_uniform"
    k: Optional[int] = None
    tol: float = 1e-12

    def __post_init__(self):
        if self.num_samples < 1:
            raise DomainError(f"num_samples must be >= 1, got {self.num_samples}")
        if self.n_prime < 2:
            raise DomainError(f"n_prime must be >= 2, got {self.n_prime}")
        if self.N < 0:
            raise DomainError(f"N must be >= 0, got {self.N}")
        if self.distribution not in DISTRIBUTIONS:
            raise DomainError(f"unknown distribution {self.distribution!r}")
        if self.distribution == "sparse_k":
            if self.k is None or not 1 <= self.k <= self.n_prime:
                raise DomainError(f"sparse_k needs 1 <= k <= n_prime, got k={self.k}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SampleRecord:
    F: float
    s_q: float
    s_p: float
    in_region: bool
    eq1_slack: float


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def _boundary_biased(rng: np.random.Generator, n_prime: int, size: int) -> np.ndarray:
    # Perturbed two-vector (adjacent / opposite) and three-vector states,
    # one third each; the perturbation weight is uniform on [0, BOUNDARY_NOISE].
    family = rng.integers(0, 3 if n_prime % 2 == 0 else 2, size)
    F_hi = rng.uniform(0.5, 1.0, size)
    F_lo = rng.uniform(0.0, 0.5, size)
    n = rng.integers(0, n_prime + 1, size)
    rows = np.arange(size)
    p = np.zeros((size, n_prime))

    adj = family == 0
    p[rows[adj], 0] = F_hi[adj]
    p[rows[adj], 1] = 1.0 - F_hi[adj]

    opp = family == 1
    p[rows[opp], 0] = F_hi[opp]
    p[rows[opp], n_prime // 2] += 1.0 - F_hi[opp]

    tri = family == 2
    if tri.any():
        nt = n[tri]
        plus = np.where(nt % 2 == 0, nt // 2, (nt + 1) // 2) % n_prime
        minus = np.where(nt % 2 == 0, -(nt // 2), -((nt - 1) // 2)) % n_prime
        rt = rows[tri]
        p[rt, 0] += F_lo[tri]
        np.add.at(p, (rt, plus), (1.0 - F_lo[tri]) / 2.0)
        np.add.at(p, (rt, minus), (1.0 - F_lo[tri]) / 2.0)

    lam = rng.uniform(0.0, BOUNDARY_NOISE, size)[:, None]
    noise = rng.dirichlet(np.ones(n_prime), size)
    return (1.0 - lam) * p + lam * noise


def _draw_probabilities(config: SampleConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    n_prime = config.n_prime
    if config.distribution == "dirichlet_uniform":
        return rng.dirichlet(np.ones(n_prime), size)
    if config.distribution == "sparse_k":
        bins = np.argsort(rng.random((size, n_prime)), axis=1)[:, : config.k]
        p = np.zeros((size, n_prime))
        np.put_along_axis(p, bins, rng.dirichlet(np.ones(config.k), size), axis=1)
        return p
    return _boundary_biased(rng, n_prime, size)


def _chunk_arrays(config: SampleConfig, chunk: int) -> dict[str, np.ndarray]:
    start = chunk * CHUNK_SIZE
    size = min(CHUNK_SIZE, config.num_samples - start)
    rng = _chunk_rng(config.seed, chunk)
    p = _draw_probabilities(config, rng, size)
    p /= p.sum(axis=1, keepdims=True)
    F = p.max(axis=1)
    s_p = np.minimum(np.abs(momentum_sev_from_probabilities(p)), 1.0)
    s_q = np.full(size, uniform_envelope_overlap(config.N))
    return {
        "F": F,
        "s_q": s_q,
        "s_p": s_p,
        "in_region": region_contains(F, s_p, config.n_prime, config.tol),
        "eq1_slack": f_upper_from_sevs(s_q, s_p) - F,
    }


def sample_region_arrays(config: SampleConfig, n_jobs: int = 1) -> dict[str, np.ndarray]:
    """Column arrays ``F, s_q, s_p, in_region, eq1_slack`` in sample order.

    Only bin probabilities enter ``F`` and ``s_p``, so bin phases are not drawn.
    """
    n_chunks = -(-config.num_samples // CHUNK_SIZE)
    if n_jobs == 1:
        parts = [_chunk_arrays(config, c) for c in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda c: _chunk_arrays(config, c), range(n_chunks)))
    return {key: np.concatenate([part[key] for part in parts]) for key in CSV_HEADER}


def sample_region(config: SampleConfig, n_jobs: int = 1) -> Iterator[SampleRecord]:
    cols = sample_region_arrays(config, n_jobs)
    for i in range(config.num_samples):
        yield SampleRecord(
            float(cols["F"][i]),
            float(cols["s_q"][i]),
            float(cols["s_p"][i]),
            bool(cols["in_region"][i]),
            float(cols["eq1_slack"][i]),
        )


@dataclass(frozen=True)
class CoverageSummary:
    n_records: int
    n_prime: object
    cells_in_region: int
    cells_touched: int
    coverage_fraction: float
    violations: int
    max_eq1_violation: float

    def to_dict(self) -> dict:
        return asdict(self)


def coverage_report(records: Iterable[SampleRecord], n_prime, bins: int = 100) -> CoverageSummary:
    """Bin ``(F, s_p)`` on a ``bins x bins`` grid and summarize region coverage.

    A cell belongs to the region when its centre does; ``coverage_fraction``
    is the share of those cells holding at least one sample.
    """
    rows = [(r.F, r.s_p, r.in_region, r.eq1_slack) for r in records]
    if not rows:
        raise ValueError("coverage_report needs at least one record")
    data = np.array(rows, dtype=float)
    F, s_p = data[:, 0], data[:, 1]
    in_region = data[:, 2].astype(bool)
    slack = data[:, 3]

    centers = (np.arange(bins) + 0.5) / bins
    cf, cs = np.meshgrid(centers, centers, indexing="ij")
    region = (cs >= sp_lower(cf, n_prime)) & (cs <= sp_upper(cf, n_prime))
    hit = np.zeros((bins, bins), dtype=bool)
    fi = np.clip((F * bins).astype(int), 0, bins - 1)
    si = np.clip((s_p * bins).astype(int), 0, bins - 1)
    hit[fi, si] = True
    touched = int(np.sum(hit & region))
    total = int(region.sum())
    return CoverageSummary(
        n_records=len(rows),
        n_prime=n_prime,
        cells_in_region=total,
        cells_touched=touched,
        coverage_fraction=touched / total if total else 0.0,
        violations=int(np.sum(~in_region)),
        max_eq1_violation=float(max(0.0, -slack.min())),
    )


def write_records_csv(records: Iterable[SampleRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([repr(r.F), repr(r.s_q), repr(r.s_p), str(r.in_region).lower(), repr(r.eq1_slack)])


def write_summary_json(summary: CoverageSummary, fh: IO[str]) -> None:
    json.dump(summary.to_dict(), fh, indent=2)
    fh.write("\n")
