"""Weak values of a probe observable measured *during* a strong measurement.

The protocol: an ensemble is preselected in ``rho_in``, a strong
selective measurement (outcome projector ``strong_projector``) happens
somewhere inside the run, a weak coupling to ``weak_observable`` fires
at a time ``t_w`` that cannot be controlled relative to the collapse,
and the ensemble is postselected on ``rho_fin``.  The conditional
pointer average is the weak value

    O_w = Tr[rho2 O rho1] / Tr[rho2 rho1],

with ``rho1`` the state evolved forward to ``t_w`` and ``rho2`` the
postselection pulled back to ``t_w``.  For pure states this reduces to
the familiar ``<psi2|O|psi1> / <psi2|psi1>``.

Because the weak-coupling time jitters, the laboratory number is a
*time average* of per-trial weak values, and that average differs
between the two collapse models in :mod:`weakprobe.collapse`:

* instantaneous collapse: each trial is either "weak first" or
  "strong first"; averaging the two orderings gives
  ``(W1 + W3) / 2``.
* objective collapse: trials with ``t_w`` inside the collapse window
  see the partially collapsed state, and the pulled-back postselection
  degenerates to a multiple of the identity, making the weak value an
  *unconditional* expectation there.  Averaging over the window gives
  a value that interpolates between the instantaneous result (short
  collapse) and ``(Tr[O rho_in] + Tr[O P]) / 2`` (collapse longer than
  the timing jitter).

The averaged predictions therefore separate the models; the
discrimination logic at the bottom turns a measured average into a
verdict.

Averaging convention: per-trial weak values are averaged uniformly over
the timing window.  Weighting trials by their postselection probability
instead is available behind ``weight_by_postselection=True`` for
exploration; it is not part of the validated surface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collapse import UniformTiming, objective_state_at
from .errors import (
    DegenerateScenario,
    DimensionMismatch,
    HermiticityViolation,
    InvalidProjector,
    OrthogonalPostselection,
)
from .operators import (
    DEFAULT_TOLERANCES,
    DensityOperator,
    Projector,
    Tolerances,
    _frozen,
    as_operator,
    hermiticity_defect,
)
from .superops import apply_superop, backward_state, collapse_superop

__all__ = [
    "ProtocolConfig",
    "ProtocolTraces",
    "DiscriminationVerdict",
    "weak_value",
    "trial_weak_value_strong_first",
    "trial_weak_value_weak_first",
    "averaged_weak_value_vn",
    "objective_weak_value_at",
    "averaged_weak_value_objective",
    "objective_weak_value_forward",
    "objective_weak_value_adjoint",
    "apparent_resolution",
    "protocol_traces",
    "discriminate",
]


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    """Full specification of one weak-measurement-during-collapse run.

    ``delta_t_m`` is the timing-jitter window of the weak coupling
    relative to the strong measurement; ``delta_t_c`` the putative
    objective-collapse duration.  Both postselection overlaps must be
    nonzero or every conditional average is undefined.
    """

    rho_in: DensityOperator
    rho_fin: DensityOperator
    strong_projector: Projector
    weak_observable: np.ndarray
    delta_t_m: float
    delta_t_c: float
    hbar: float = 1.0

    def __post_init__(self):
        obs = _frozen(as_operator(self.weak_observable))
        object.__setattr__(self, "weak_observable", obs)
        d = self.rho_in.dim
        if not (self.rho_fin.dim == d == self.strong_projector.dim == obs.shape[0]):
            raise DimensionMismatch(
                "rho_in, rho_fin, strong_projector and weak_observable must share "
                "one dimension"
            )
        if self.strong_projector.rank != 1:
            raise InvalidProjector("strong_projector must have rank 1")
        defect = hermiticity_defect(obs)
        if defect > DEFAULT_TOLERANCES.herm:
            raise HermiticityViolation("weak_observable is not Hermitian", defect)
        for name in ("delta_t_m", "delta_t_c", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        p = self.strong_projector.mat
        for name, rho in (("rho_in", self.rho_in), ("rho_fin", self.rho_fin)):
            overlap = float(np.trace(p @ rho.mat).real)
            if overlap <= DEFAULT_TOLERANCES.zero:
                raise OrthogonalPostselection(
                    f"Tr[P {name}] = {overlap:.3e}: the strong outcome never "
                    f"connects {name} to the rest of the protocol"
                )

    @property
    def dim(self) -> int:
        return self.rho_in.dim

    @property
    def weak_window(self) -> UniformTiming:
        """Window of the weak-coupling time relative to the collapse start."""
        half = self.delta_t_m / 2.0
        center = self.delta_t_c / 2.0
        return UniformTiming(center - half, center + half)


@dataclass(frozen=True)
class ProtocolTraces:
    """The six traces every analytic prediction is built from."""

    proj_obs_in: complex  # Tr[P O rho_in]
    proj_in: complex      # Tr[P rho_in]
    fin_obs_proj: complex  # Tr[rho_fin O P]
    fin_proj: complex      # Tr[rho_fin P]
    obs_in: complex        # Tr[O rho_in]
    obs_proj: complex      # Tr[O P]


def protocol_traces(cfg: ProtocolConfig) -> ProtocolTraces:
    p = cfg.strong_projector.mat
    o = cfg.weak_observable
    rin = cfg.rho_in.mat
    rfin = cfg.rho_fin.mat
    return ProtocolTraces(
        proj_obs_in=complex(np.trace(p @ o @ rin)),
        proj_in=complex(np.trace(p @ rin)),
        fin_obs_proj=complex(np.trace(rfin @ o @ p)),
        fin_proj=complex(np.trace(rfin @ p)),
        obs_in=complex(np.trace(o @ rin)),
        obs_proj=complex(np.trace(o @ p)),
    )


def weak_value(rho1, rho2, obs, tol_zero: float = DEFAULT_TOLERANCES.zero) -> complex:
    """Conditional weak value ``Tr[rho2 obs rho1] / Tr[rho2 rho1]``.

    ``rho1``/``rho2`` need not be normalized (or even states); the
    pulled-back postselection typically is not.  Raises
    :class:`OrthogonalPostselection` when the overlap denominator
    vanishes.
    """
    r1 = as_operator(rho1)
    r2 = as_operator(rho2)
    o = as_operator(obs)
    if not (r1.shape == r2.shape == o.shape):
        raise DimensionMismatch("rho1, rho2 and obs must share one dimension")
    den = complex(np.trace(r2 @ r1))
    if abs(den) <= tol_zero:
        raise OrthogonalPostselection(
            f"overlap Tr[rho2 rho1] = {abs(den):.3e} below tolerance"
        )
    num = complex(np.trace(r2 @ o @ r1))
    return num / den


def trial_weak_value_strong_first(cfg: ProtocolConfig) -> complex:
    """Weak value of a trial whose weak coupling fires *after* the collapse.

    The completed strong measurement acts as a fresh preselection in the
    outcome projector: ``Tr[rho_fin O P] / Tr[rho_fin P]``.
    """
    t = protocol_traces(cfg)
    if abs(t.fin_proj) <= DEFAULT_TOLERANCES.zero:
        raise OrthogonalPostselection("postselection never follows the strong outcome")
    return t.fin_obs_proj / t.fin_proj


def trial_weak_value_weak_first(cfg: ProtocolConfig) -> complex:
    """Weak value of a trial whose weak coupling fires *before* the collapse.

    The strong outcome acts as the postselection: ``Tr[P O rho_in] / Tr[P rho_in]``.
    """
    t = protocol_traces(cfg)
    if abs(t.proj_in) <= DEFAULT_TOLERANCES.zero:
        raise OrthogonalPostselection("preselection never reaches the strong outcome")
    return t.proj_obs_in / t.proj_in


def averaged_weak_value_vn(
    cfg: ProtocolConfig, weight_by_postselection: bool = False
) -> complex:
    """Time-averaged weak value when collapse is instantaneous.

    With the weak-coupling and collapse times drawn independently and
    uniformly from the same window, the two orderings are equally
    likely, so the average is ``(W1 + W3) / 2``.  The exploratory
    weighted variant reweights each ordering by its postselection
    probability.
    """
    w1 = trial_weak_value_weak_first(cfg)
    w3 = trial_weak_value_strong_first(cfg)
    if weight_by_postselection:
        t = protocol_traces(cfg)
        return (t.proj_obs_in + t.fin_obs_proj) / (t.proj_in + t.fin_proj)
    return (w1 + w3) / 2.0


def objective_weak_value_at(t_w: float, cfg: ProtocolConfig) -> complex:
    """Per-trial weak value under objective collapse, weak coupling at ``t_w``.

    ``t_w`` is measured from the collapse start and ranges over
    ``cfg.weak_window``.  Before the window starts (``t_w < 0``) the
    trial is weak-first; after the collapse completes (``t_w > dtc``)
    it is strong-first.  Inside the collapse the pulled-back
    postselection is proportional to the identity, so the weak value is
    the plain expectation in the partially collapsed state:
    ``(1 - t_w/dtc) Tr[O rho_in] + (t_w/dtc) Tr[O P]``.
    """
    window = cfg.weak_window
    if not window.contains(t_w):
        raise ValueError(
            f"t_w={t_w} outside the weak-coupling window "
            f"[{window.lo}, {window.hi}]"
        )
    if t_w < 0.0:
        return trial_weak_value_weak_first(cfg)
    if t_w > cfg.delta_t_c:
        return trial_weak_value_strong_first(cfg)
    t = protocol_traces(cfg)
    x = t_w / cfg.delta_t_c
    return (1.0 - x) * t.obs_in + x * t.obs_proj


def objective_weak_value_forward(cfg: ProtocolConfig, t_w: float) -> complex:
    """Mid-collapse weak value via forward evolution of ``O rho1``.

    Evolves both ``O rho1(t_w)`` and ``rho1(t_w)`` to the postselection
    time with the collapse superoperator and takes the ratio of
    overlaps with ``rho_fin``.  Agrees with
    :func:`objective_weak_value_at` on ``0 <= t_w <= delta_t_c``; kept
    as an independent route through the superoperator machinery.
    """
    rho1 = objective_state_at(
        cfg.rho_in, cfg.strong_projector, t_w, cfg.delta_t_c
    ).mat
    c = collapse_superop(cfg.strong_projector)
    o = cfg.weak_observable
    num = complex(np.trace(cfg.rho_fin.mat @ apply_superop(c, o @ rho1)))
    den = complex(np.trace(cfg.rho_fin.mat @ apply_superop(c, rho1)))
    if abs(den) <= DEFAULT_TOLERANCES.zero:
        raise OrthogonalPostselection("forward-evolved overlap vanished")
    return num / den


def objective_weak_value_adjoint(cfg: ProtocolConfig, t_w: float) -> complex:
    """Mid-collapse weak value via the pulled-back postselection.

    Builds ``rho2`` explicitly with :func:`weakprobe.superops.backward_state`
    (the retrograde collapse map applied to ``rho_fin``) and feeds it to
    the general two-state formula.
    """
    rho1 = objective_state_at(
        cfg.rho_in, cfg.strong_projector, t_w, cfg.delta_t_c
    ).mat
    c = collapse_superop(cfg.strong_projector)
    rho2 = backward_state(c, cfg.rho_fin)
    return weak_value(rho1, rho2, cfg.weak_observable)


def apparent_resolution(delta_t_m: float, delta_t_c: float) -> float:
    """Effective timing resolution of the averaged measurement.

    The averaged objective prediction depends on the two windows only
    through ``max(delta_t_m, delta_t_c)``: whichever is longer smears
    the per-trial values.
    """
    if not (delta_t_m > 0 and delta_t_c > 0):
        raise ValueError("window durations must be positive")
    return max(delta_t_m, delta_t_c)


def averaged_weak_value_objective(
    cfg: ProtocolConfig, weight_by_postselection: bool = False
) -> complex:
    """Time-averaged weak value when collapse is an objective process.

    Uniform average of :func:`objective_weak_value_at` over the weak
    window.  With ``dta = max(dtm, dtc)`` the closed form is

        ((dta - dtc) / (2 dta)) * (W1 + W3)
        + (dtc / (2 dta)) * (Tr[O rho_in] + Tr[O P]),

    which reduces to the instantaneous-model value as ``dtc -> 0`` and
    saturates at ``(Tr[O rho_in] + Tr[O P]) / 2`` once the collapse
    outlasts the timing jitter.
    """
    t = protocol_traces(cfg)
    dtm, dtc = cfg.delta_t_m, cfg.delta_t_c
    if weight_by_postselection:
        return _weighted_objective_average(cfg, t)
    dta = apparent_resolution(dtm, dtc)
    w1 = t.proj_obs_in / t.proj_in
    w3 = t.fin_obs_proj / t.fin_proj
    ordered = (dta - dtc) / (2.0 * dta) * (w1 + w3)
    unconditional = dtc / (2.0 * dta) * (t.obs_in + t.obs_proj)
    return ordered + unconditional


def _weighted_objective_average(cfg: ProtocolConfig, t: ProtocolTraces) -> complex:
    # Exploratory: weight each stretch of the window by the trial's
    # postselection probability instead of uniformly.
    window = cfg.weak_window
    dtc = cfg.delta_t_c
    len_before = max(0.0, -window.lo)       # weak-first stretch (t_w < 0)
    len_after = max(0.0, window.hi - dtc)   # strong-first stretch (t_w > dtc)
    lo_mid = max(window.lo, 0.0)
    hi_mid = min(window.hi, dtc)
    len_mid = hi_mid - lo_mid
    mid = (lo_mid + hi_mid) / 2.0
    value_mid = (1.0 - mid / dtc) * t.obs_in + (mid / dtc) * t.obs_proj
    num = (
        len_before * t.proj_obs_in
        + len_mid * t.fin_proj * value_mid
        + len_after * t.fin_obs_proj
    )
    den = len_before * t.proj_in + len_mid * t.fin_proj + len_after * t.fin_proj
    return num / den


@dataclass(frozen=True)
class DiscriminationVerdict:
    """Outcome of comparing a measured average against both models.

    ``model`` is ``"vn"``, ``"objective"`` or ``"inconclusive"``.  For
    an objective verdict ``branch`` says which part of the prediction
    curve matched: ``"jitter"`` (collapse shorter than the jitter
    window, ``delta_t_c_estimate`` holds the inferred duration) or
    ``"saturated"`` (any collapse duration >= the jitter window fits,
    so no point estimate is possible).  ``residual`` is the distance
    between the measurement and the matched prediction.
    """

    model: str
    delta_t_c_estimate: float | None
    branch: str | None
    residual: float


def discriminate(
    measured: complex,
    cfg: ProtocolConfig,
    sigma_meas: float,
    degenerate_tol: float = 1e-12,
) -> DiscriminationVerdict:
    """Turn a measured time-averaged weak value into a model verdict.

    Policy: if the measurement sits within ``2 sigma_meas`` of the
    instantaneous-model prediction, report ``"vn"`` (a vanishing
    collapse duration can never be excluded).  Otherwise inversion of
    the objective prediction — linear in ``delta_t_c`` up to the
    saturation at ``delta_t_c = delta_t_m`` — either yields a duration
    estimate, matches the saturated plateau, or fails, in which case
    the verdict is ``"inconclusive"``.

    Raises :class:`DegenerateScenario` when both models predict the
    same value, since then the measurement cannot separate them.
    """
    if not sigma_meas > 0:
        raise ValueError("sigma_meas must be positive")
    measured = complex(measured)
    v_vn = averaged_weak_value_vn(cfg)
    t = protocol_traces(cfg)
    v_sat = (t.obs_in + t.obs_proj) / 2.0
    scale = max(1.0, abs(v_vn), abs(v_sat))
    if abs(v_vn - v_sat) <= degenerate_tol * scale:
        raise DegenerateScenario(
            "instantaneous and objective predictions coincide for this "
            "configuration; the averaged weak value carries no discriminating "
            "power"
        )
    if abs(measured - v_vn) <= 2.0 * sigma_meas:
        return DiscriminationVerdict("vn", None, None, abs(measured - v_vn))
    # Objective prediction: (1 - x) v_vn + x v_sat with x = dtc/dtm in (0, 1],
    # constant at v_sat beyond x = 1.  Project the measurement onto the line.
    span = v_sat - v_vn
    x = float(((measured - v_vn) * span.conjugate()).real / abs(span) ** 2)
    if x >= 1.0:
        residual = abs(measured - v_sat)
        if residual <= 2.0 * sigma_meas:
            return DiscriminationVerdict("objective", None, "saturated", residual)
        return DiscriminationVerdict("inconclusive", None, None, residual)
    if x > 0.0:
        predicted = (1.0 - x) * v_vn + x * v_sat
        residual = abs(measured - predicted)
        if residual <= 2.0 * sigma_meas:
            return DiscriminationVerdict(
                "objective", x * cfg.delta_t_m, "jitter", residual
            )
        return DiscriminationVerdict("inconclusive", None, None, residual)
    return DiscriminationVerdict("inconclusive", None, None, abs(measured - v_vn))
