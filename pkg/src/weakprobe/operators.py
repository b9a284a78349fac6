"""Finite-dimensional operator algebra on a complex Hilbert space.

Operators are plain complex ndarrays of shape ``(d, d)``.  The validated
wrapper types (:class:`DensityOperator`, :class:`Projector`,
:class:`ObservableSpectral`) freeze their matrices after construction so
instances can safely be shared between threads; all transformations
return new objects.

The Hilbert-Schmidt inner product used throughout is
``<A, B> = Tr[A^dag B]``, conjugate-linear in the first argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    HermiticityViolation,
    InvalidProjector,
    NegativeEigenvalue,
    TraceViolation,
    ZeroProbability,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "DensityOperator",
    "Projector",
    "ObservableSpectral",
    "identity",
    "dagger",
    "hs_inner",
    "hermiticity_defect",
    "spectral_decompose",
    "selective_projection",
    "density_operator_basis",
    "validate_density",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for validation and guard checks.

    ``herm``, ``trace`` and ``psd`` bound the allowed Hermiticity, trace
    and positivity defects of density operators; ``zero`` is the guard
    on denominators (selection probabilities, weak-value overlaps);
    ``degeneracy`` is the eigenvalue-clustering width used by
    :func:`spectral_decompose`.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    zero: float = 1e-12
    degeneracy: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()


def _frozen(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex)
    out.setflags(write=False)
    return out


def as_operator(m) -> np.ndarray:
    """Coerce ``m`` to a square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-norm distance between ``a`` and its adjoint."""
    return float(np.max(np.abs(a - dagger(a)))) if np.asarray(a).size else 0.0


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr[a^dag b]``.

    Conjugate-linear in ``a``, linear in ``b``; ``hs_inner(a, a)`` is the
    squared Frobenius norm.
    """
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operand shapes differ: {a.shape} vs {b.shape}")
    # vdot conjugates its first argument and sums elementwise, which is
    # exactly sum_ij conj(a_ij) b_ij = Tr[a^dag b].
    return complex(np.vdot(a, b))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A state: Hermitian, positive semi-definite, unit trace.

    Construct through :func:`validate_density` (or the ``pure`` /
    ``maximally_mixed`` helpers) so the invariants are actually checked.
    ``psd_adjustment`` records the total eigenvalue mass clipped to zero
    during validation; it is 0.0 when no repair was needed.
    """

    mat: np.ndarray
    psd_adjustment: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen(as_operator(self.mat)))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def pure(cls, ket) -> "DensityOperator":
        v = np.asarray(ket, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ValueError("cannot build a state from the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityOperator":
        return cls(identity(d) / d)


@dataclass(frozen=True, eq=False)
class Projector:
    """An orthogonal projector ``P = P^dag = P^2`` with its rank."""

    mat: np.ndarray
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "mat", _frozen(as_operator(self.mat)))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_matrix(cls, m, tolerances: Tolerances = DEFAULT_TOLERANCES) -> "Projector":
        p = as_operator(m)
        herm = hermiticity_defect(p)
        if herm > tolerances.herm:
            raise InvalidProjector(f"not Hermitian (defect {herm:.3e})")
        idem = float(np.max(np.abs(p @ p - p)))
        if idem > tolerances.herm:
            raise InvalidProjector(f"not idempotent (defect {idem:.3e})")
        tr = float(np.trace(p).real)
        rank = round(tr)
        if abs(tr - rank) > 1e-6:
            raise InvalidProjector(f"trace {tr} is not near an integer")
        if rank < 1:
            raise InvalidProjector("zero projector has no selective outcome")
        return cls(p, rank)

    @classmethod
    def onto(cls, ket) -> "Projector":
        """Rank-1 projector onto the ray of ``ket``."""
        v = np.asarray(ket, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise InvalidProjector("cannot project onto the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()), 1)


@dataclass(frozen=True, eq=False)
class ObservableSpectral:
    """A Hermitian observable with its spectral resolution.

    ``pairs`` lists ``(eigenvalue, eigenprojector)`` in ascending
    eigenvalue order; nearly degenerate eigenvalues are merged into a
    single projector, so the projectors are mutually orthogonal and
    complete.
    """

    observable: np.ndarray
    pairs: tuple[tuple[float, Projector], ...]

    def __post_init__(self):
        object.__setattr__(self, "observable", _frozen(as_operator(self.observable)))

    @property
    def dim(self) -> int:
        return self.observable.shape[0]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def projectors(self) -> tuple[Projector, ...]:
        return tuple(p for _, p in self.pairs)


def spectral_decompose(
    a,
    degeneracy_tol: float | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ObservableSpectral:
    """Spectral resolution of a Hermitian matrix.

    Eigenvalues closer than ``degeneracy_tol`` (consecutive-gap
    clustering) are treated as one degenerate level and their
    eigenvectors are merged into a single projector.  Each reported
    eigenvalue is the mean of its cluster.
    """
    a = as_operator(a)
    defect = hermiticity_defect(a)
    if defect > tolerances.herm:
        raise HermiticityViolation("observable is not Hermitian", defect)
    if degeneracy_tol is None:
        degeneracy_tol = tolerances.degeneracy
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    pairs: list[tuple[float, Projector]] = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > degeneracy_tol:
            block = v[:, start:i]
            proj = Projector(block @ dagger(block), i - start)
            pairs.append((float(np.mean(w[start:i])), proj))
            start = i
    return ObservableSpectral(a, tuple(pairs))


def selective_projection(
    rho: DensityOperator,
    p: Projector,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> DensityOperator:
    """State after selecting the outcome ``p``: ``P rho P / Tr[P rho P]``.

    Raises :class:`ZeroProbability` when the outcome probability is below
    the zero tolerance.  For rank-1 ``p`` the result is ``p`` itself.
    """
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state dim {rho.dim} != projector dim {p.dim}")
    out = p.mat @ rho.mat @ p.mat
    prob = float(np.trace(out).real)
    if prob <= tolerances.zero:
        raise ZeroProbability(f"selection probability {prob:.3e} below tolerance")
    return validate_density(out / prob, tolerances)


def density_operator_basis(d: int) -> list[DensityOperator]:
    """A basis of the operator space made entirely of density operators.

    Returns ``d**2`` linearly independent pure states: the ``d``
    computational-basis projectors ``|j><j|``, then for each pair
    ``j < k`` the projectors onto ``(|j> + |k>)/sqrt(2)`` and
    ``(|j> + i|k>)/sqrt(2)`` (in that order).  Any linear map on
    operators is determined by its action on this family.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    kets = np.eye(d, dtype=complex)
    out = [DensityOperator(np.outer(kets[j], kets[j].conj())) for j in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            plus = (kets[j] + kets[k]) / np.sqrt(2.0)
            phase = (kets[j] + 1j * kets[k]) / np.sqrt(2.0)
            out.append(DensityOperator(np.outer(plus, plus.conj())))
            out.append(DensityOperator(np.outer(phase, phase.conj())))
    return out


def validate_density(
    m, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> DensityOperator:
    """Check the density-operator invariants and return the state.

    Raises :class:`HermiticityViolation`, :class:`TraceViolation` or
    :class:`NegativeEigenvalue` with the offending defect.  Eigenvalues
    in ``[-psd_tol, 0)`` are treated as roundoff: they are clipped to
    zero, the state is renormalized, and the clipped mass is reported on
    ``psd_adjustment``.
    """
    m = as_operator(m)
    defect = hermiticity_defect(m)
    if defect > tolerances.herm:
        raise HermiticityViolation("matrix is not Hermitian", defect)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tolerances.trace:
        raise TraceViolation("trace differs from 1", abs(tr - 1.0))
    herm = (m + dagger(m)) / 2
    w, v = np.linalg.eigh(herm)
    if w[0] < -tolerances.psd:
        raise NegativeEigenvalue("negative eigenvalue", abs(float(w[0])))
    clipped = np.clip(w, 0.0, None)
    adjustment = float(np.sum(clipped - w))
    if adjustment > 0.0:
        repaired = (v * clipped) @ dagger(v)
        repaired = repaired / np.trace(repaired).real
        return DensityOperator(repaired, psd_adjustment=adjustment)
    return DensityOperator(m)
