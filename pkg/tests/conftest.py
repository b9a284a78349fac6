"""Shared helpers: random objects and independent oracles for the tests."""

from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, settings

from weakprobe import (
    DensityOperator,
    Projector,
    ProtocolConfig,
    SuperOp,
    validate_density,
)

settings.register_profile(
    "weakprobe",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("weakprobe")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def rank_by_elimination(m: np.ndarray, tol: float = 1e-8) -> int:
    """Rank via plain Gaussian elimination with partial pivoting.

    Deliberately independent of numpy's SVD-based matrix_rank; used as
    the oracle for linear-independence claims.
    """
    a = np.array(m, dtype=complex)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot = rank + int(np.argmax(np.abs(a[rank:, col])))
        if abs(a[pivot, col]) <= tol:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = a[rank] / a[rank, col]
        for r in range(rows):
            if r != rank:
                a[r] = a[r] - a[r, col] * a[rank]
        rank += 1
    return rank


def random_ket(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_density(rng: np.random.Generator, d: int) -> DensityOperator:
    """Full-rank random state: normalized A A^dag plus a mixed floor."""
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = a @ a.conj().T + 0.1 * np.eye(d)
    return validate_density(m / np.trace(m).real)


def random_rank1_projector(rng: np.random.Generator, d: int) -> Projector:
    return Projector.onto(random_ket(rng, d))


def random_superop(rng: np.random.Generator, d: int) -> SuperOp:
    n = d * d
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return SuperOp(d, m)


def random_config(rng: np.random.Generator, d: int = 2) -> ProtocolConfig:
    """A valid random protocol configuration with healthy overlaps."""
    while True:
        rho_in = random_density(rng, d)
        rho_fin = random_density(rng, d)
        proj = random_rank1_projector(rng, d)
        p = proj.mat
        if (
            np.trace(p @ rho_in.mat).real > 1e-3
            and np.trace(p @ rho_fin.mat).real > 1e-3
        ):
            break
    return ProtocolConfig(
        rho_in=rho_in,
        rho_fin=rho_fin,
        strong_projector=proj,
        weak_observable=random_hermitian(rng, d),
        delta_t_m=float(rng.uniform(0.5, 2.0)),
        delta_t_c=float(rng.uniform(0.5, 2.0)),
    )


def spin_config(a=np.sqrt(0.5), b=np.sqrt(0.5), dtm=1.0, dtc=0.5, hbar=1.0):
    """Spin-1/2 reference setup shared by the frozen-number tests."""
    from weakprobe import DensityOperator as _D

    psi_in = np.array([a, np.sqrt(1 - abs(a) ** 2)], dtype=complex)
    psi_fin = np.array([b, np.sqrt(1 - abs(b) ** 2)], dtype=complex)
    return ProtocolConfig(
        rho_in=_D.pure(psi_in),
        rho_fin=_D.pure(psi_fin),
        strong_projector=Projector.onto(np.array([1.0, 0.0], dtype=complex)),
        weak_observable=hbar / 2 * np.diag([1.0, -1.0]).astype(complex),
        delta_t_m=dtm,
        delta_t_c=dtc,
        hbar=hbar,
    )
