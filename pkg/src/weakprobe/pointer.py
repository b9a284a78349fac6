"""Gaussian-pointer readout: where weak values come from in the lab.

An impulsive coupling of strength ``g`` between the system observable
and the pointer momentum displaces a Gaussian pointer (position spread
``sigma``) by ``g * a_n`` on the spectral branch ``a_n``.  After
postselection the pointer wavefunction is a superposition of displaced
Gaussians, and every moment has a closed form in the branch amplitudes
``c_n = <psi2|P_n|psi1>`` because the Gaussian overlap integrals are
elementary:

    <phi_A | phi_B>     = exp(-(A - B)^2 / (8 sigma^2))
    <phi_A | x | phi_B> = ((A + B) / 2) * <phi_A | phi_B>

No quadrature is involved.  In the weak limit ``g -> 0`` the position
shift is ``g * Re(O_w)`` with cubic leading corrections (the shift is
odd in ``g``), and the momentum shift is
``hbar g / (2 sigma^2) * Im(O_w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OrthogonalPostselection, VanishingPostselection
from .operators import (
    DEFAULT_TOLERANCES,
    ObservableSpectral,
    spectral_decompose,
)

__all__ = [
    "GaussianPointer",
    "SlopeFit",
    "postselected_pointer_mean",
    "postselected_pointer_momentum_mean",
    "weak_limit_slope",
]


@dataclass(frozen=True)
class GaussianPointer:
    """Pointer wavepacket: position spread ``sigma``, coupling ``g``."""

    sigma: float
    g: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("pointer spread sigma must be positive")


def _as_spectral(obs) -> ObservableSpectral:
    if isinstance(obs, ObservableSpectral):
        return obs
    return spectral_decompose(obs)


def _branches(psi1, psi2, obs: ObservableSpectral) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and postselected branch amplitudes c_n = <psi2|P_n|psi1>."""
    v1 = np.asarray(psi1, dtype=complex).reshape(-1)
    v2 = np.asarray(psi2, dtype=complex).reshape(-1)
    for v in (v1, v2):
        if np.linalg.norm(v) == 0.0:
            raise ValueError("state vectors must be nonzero")
    v1 = v1 / np.linalg.norm(v1)
    v2 = v2 / np.linalg.norm(v2)
    if v1.size != obs.dim or v2.size != obs.dim:
        raise ValueError("state vectors must match the observable dimension")
    a = np.array(obs.eigenvalues, dtype=float)
    c = np.array([v2.conj() @ (p.mat @ v1) for p in obs.projectors], dtype=complex)
    return a, c


def _overlap_kernel(a: np.ndarray, c: np.ndarray, g: float, sigma: float) -> np.ndarray:
    diffs = a[:, None] - a[None, :]
    e = np.exp(-((g * diffs) ** 2) / (8.0 * sigma**2))
    return np.outer(c.conj(), c) * e


def postselected_pointer_mean(
    psi1,
    psi2,
    obs,
    ptr: GaussianPointer,
    tol_zero: float = DEFAULT_TOLERANCES.zero,
) -> float:
    """Exact postselected pointer position average at finite coupling.

    ``sum_mn conj(c_m) c_n (g(a_m + a_n)/2) E_mn / sum_mn conj(c_m) c_n E_mn``
    with ``E_mn`` the displaced-Gaussian overlap.  The denominator is
    the postselection probability including the pointer; when it
    vanishes (e.g. exactly orthogonal selections with a single branch)
    no trial survives and :class:`VanishingPostselection` is raised.
    """
    obs = _as_spectral(obs)
    a, c = _branches(psi1, psi2, obs)
    kernel = _overlap_kernel(a, c, ptr.g, ptr.sigma)
    den = float(kernel.sum().real)
    if den <= tol_zero:
        raise VanishingPostselection(
            f"postselection probability {den:.3e} below tolerance"
        )
    sums = a[:, None] + a[None, :]
    num = float((kernel * (ptr.g * sums / 2.0)).sum().real)
    return num / den


def postselected_pointer_momentum_mean(
    psi1,
    psi2,
    obs,
    ptr: GaussianPointer,
    hbar: float = 1.0,
    tol_zero: float = DEFAULT_TOLERANCES.zero,
) -> float:
    """Exact postselected pointer momentum average at finite coupling.

    Secondary readout: in the weak limit the shift is
    ``hbar g / (2 sigma^2) * Im(O_w)``, so the momentum channel exposes
    the imaginary part of the weak value.
    """
    obs = _as_spectral(obs)
    a, c = _branches(psi1, psi2, obs)
    kernel = _overlap_kernel(a, c, ptr.g, ptr.sigma)
    den = float(kernel.sum().real)
    if den <= tol_zero:
        raise VanishingPostselection(
            f"postselection probability {den:.3e} below tolerance"
        )
    diffs = a[:, None] - a[None, :]
    num = float(
        (kernel * (1j * hbar * ptr.g * diffs / (4.0 * ptr.sigma**2))).sum().real
    )
    return num / den


@dataclass(frozen=True)
class SlopeFit:
    """Weak-limit fit of shift-vs-coupling.

    ``slope`` is the least-squares through-origin slope over the grid,
    ``weak_value_re`` the exact ``Re(O_w)`` it estimates, and
    ``bound_constant`` the constant ``C`` in the error model
    ``|slope - Re(O_w)| <= C (g_max / sigma)^2``.
    """

    slope: float
    weak_value_re: float
    bound_constant: float


def weak_limit_slope(psi1, psi2, obs, sigma: float, g_grid) -> SlopeFit:
    """Extract ``Re(O_w)`` from pointer shifts over a grid of couplings.

    The grid must stay weak (``g_max * max|a_m - a_n| <= sigma``) and
    span at least a decade so the linearity of the shift is actually
    exercised.  The fit is least squares through the origin, since the
    shift is an odd function of ``g``.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    g = np.asarray(g_grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValueError("g_grid must be a 1-d grid with at least two points")
    if not np.all(g > 0):
        raise ValueError("g_grid must be positive")
    obs = _as_spectral(obs)
    a, c = _branches(psi1, psi2, obs)
    spread = float(np.max(a) - np.min(a))
    if spread > 0 and float(g.max()) * spread > sigma:
        raise ValueError(
            f"grid reaches g*spread = {g.max() * spread:.3e} > sigma = {sigma}: "
            "not in the weak-coupling regime"
        )
    if float(g.max()) / float(g.min()) < 10.0:
        raise ValueError("g_grid must span at least one decade")
    shifts = np.array(
        [
            postselected_pointer_mean(psi1, psi2, obs, GaussianPointer(sigma, gi))
            for gi in g
        ]
    )
    slope = float(np.dot(g, shifts) / np.dot(g, g))
    overlap = complex(np.asarray(c).sum())
    if abs(overlap) <= DEFAULT_TOLERANCES.zero:
        raise OrthogonalPostselection("selections are orthogonal: no weak value")
    numerator = complex(np.dot(a, c))
    weak_value_re = float((numerator / overlap).real)
    bound_constant = abs(slope - weak_value_re) / (float(g.max()) / sigma) ** 2
    return SlopeFit(slope, weak_value_re, bound_constant)
