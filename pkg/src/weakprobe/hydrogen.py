"""Concrete qubit scenario: spin-z of a two-level atom.

The system is the ground hyperfine doublet of a hydrogen-like atom,
treated as a qubit with basis ``|+>`` and ``|->`` (spin up/down along
z).  The ensemble is prepared in

    psi_in  = a |+>  +  sqrt(1 - |a|^2) |->,

the strong measurement selects the outcome ``|+><+|``, the weak probe
couples to ``S_z = (hbar/2) sigma_z``, and postselection is on

    psi_fin = b |+>  +  sqrt(1 - |b|^2) |->.

Every trace the analytic predictions need has a one-line closed form in
``|a|^2``, ``|b|^2`` and ``hbar``; this module builds the generic
protocol configuration and cross-checks the closed forms against it.

Predictions (in units of hbar): the instantaneous model always gives
``hbar/2`` — both trial orderings yield the eigenvalue of the selected
branch.  The objective model gives ``hbar |a|^2 / 2`` once the collapse
outlasts the jitter window, and interpolates linearly in
``delta_t_c / delta_t_m`` below that.  The gap closes only at
``|a| = 1``, so any preparation not already in the selected branch can
discriminate the models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OrthogonalPostselection
from .operators import DensityOperator, Projector
from .weakvalues import ProtocolConfig, ProtocolTraces, protocol_traces

__all__ = [
    "PLUS",
    "MINUS",
    "SIGMA_Z",
    "HydrogenScenario",
    "HydrogenPredictions",
    "build_hydrogen",
    "hydrogen_traces",
    "hydrogen_predictions",
]

PLUS = np.array([1.0, 0.0], dtype=complex)
MINUS = np.array([0.0, 1.0], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_NORM_SLACK = 1e-12


@dataclass(frozen=True)
class HydrogenScenario:
    """Preparation amplitude ``a``, postselection amplitude ``b``."""

    a: complex
    b: complex
    hbar: float = 1.0

    def __post_init__(self):
        for name, amp in (("a", self.a), ("b", self.b)):
            if abs(amp) > 1.0 + _NORM_SLACK:
                raise ValueError(f"|{name}| = {abs(amp)} exceeds 1: not an amplitude")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    def flags(self) -> list[str]:
        """Caveats that do not invalidate the scenario but weaken it."""
        out = []
        if abs(self.a) <= _NORM_SLACK:
            out.append("a = 0: preparation orthogonal to the selected branch")
        if abs(self.b) <= _NORM_SLACK:
            out.append("b = 0: postselection orthogonal to the selected branch")
        if abs(abs(self.a) - 1.0) <= _NORM_SLACK:
            out.append("|a| = 1: model predictions coincide (degenerate scenario)")
        return out

    @property
    def psi_in(self) -> np.ndarray:
        return self.a * PLUS + math.sqrt(max(0.0, 1.0 - abs(self.a) ** 2)) * MINUS

    @property
    def psi_fin(self) -> np.ndarray:
        return self.b * PLUS + math.sqrt(max(0.0, 1.0 - abs(self.b) ** 2)) * MINUS


def build_hydrogen(
    a: complex,
    b: complex,
    hbar: float = 1.0,
    delta_t_m: float = 1.0,
    delta_t_c: float = 1.0,
) -> ProtocolConfig:
    """Assemble the full protocol configuration for the scenario."""
    sc = HydrogenScenario(complex(a), complex(b), hbar)
    return ProtocolConfig(
        rho_in=DensityOperator.pure(sc.psi_in),
        rho_fin=DensityOperator.pure(sc.psi_fin),
        strong_projector=Projector.onto(PLUS),
        weak_observable=(hbar / 2.0) * SIGMA_Z,
        delta_t_m=delta_t_m,
        delta_t_c=delta_t_c,
        hbar=hbar,
    )


def hydrogen_traces(scenario: HydrogenScenario) -> ProtocolTraces:
    """The six protocol traces, computed numerically and cross-checked.

    Closed forms (``p = |a|^2``, ``q = |b|^2``):
    ``Tr[P S_z rho_in] = hbar p / 2``, ``Tr[P rho_in] = p``,
    ``Tr[rho_fin S_z P] = hbar q / 2``, ``Tr[rho_fin P] = q``,
    ``Tr[S_z rho_in] = hbar (2p - 1) / 2``, ``Tr[S_z P] = hbar / 2``.
    A mismatch beyond 1e-12 means the scenario wiring is broken, so it
    raises rather than returning silently wrong numbers.
    """
    cfg = build_hydrogen(scenario.a, scenario.b, scenario.hbar)
    t = protocol_traces(cfg)
    p = abs(scenario.a) ** 2
    q = abs(scenario.b) ** 2
    hbar = scenario.hbar
    closed = {
        "proj_obs_in": hbar * p / 2.0,
        "proj_in": p,
        "fin_obs_proj": hbar * q / 2.0,
        "fin_proj": q,
        "obs_in": hbar * (2.0 * p - 1.0) / 2.0,
        "obs_proj": hbar / 2.0,
    }
    for name, expected in closed.items():
        got = getattr(t, name)
        if abs(got - expected) > 1e-12:
            raise ArithmeticError(
                f"trace {name} = {got} disagrees with closed form {expected}"
            )
    return t


@dataclass(frozen=True)
class HydrogenPredictions:
    """Closed-form averaged weak values for both models.

    ``degenerate`` flags ``|a| = 1``, where the two predictions
    coincide and the scenario cannot discriminate.
    """

    vn: complex
    objective: complex
    degenerate: bool


def hydrogen_predictions(
    scenario: HydrogenScenario, delta_t_c: float, delta_t_m: float
) -> HydrogenPredictions:
    """Both model predictions from the closed forms.

    Instantaneous: ``hbar/2`` regardless of ``a`` and ``b`` (as long as
    neither vanishes).  Objective: ``hbar |a|^2 / 2`` for
    ``delta_t_c >= delta_t_m``, else
    ``(hbar/2) (1 - (delta_t_c/delta_t_m)(1 - |a|^2))``.
    """
    if not (delta_t_c > 0 and delta_t_m > 0):
        raise ValueError("window durations must be positive")
    p = abs(scenario.a) ** 2
    q = abs(scenario.b) ** 2
    if p <= 1e-12 or q <= 1e-12:
        raise OrthogonalPostselection(
            "a and b must be nonzero for the trial weak values to exist"
        )
    hbar = scenario.hbar
    vn = hbar / 2.0
    if delta_t_c >= delta_t_m:
        objective = hbar * p / 2.0
    else:
        objective = (hbar / 2.0) * (1.0 - (delta_t_c / delta_t_m) * (1.0 - p))
    return HydrogenPredictions(
        vn=complex(vn),
        objective=complex(objective),
        degenerate=abs(abs(scenario.a) - 1.0) <= _NORM_SLACK,
    )
