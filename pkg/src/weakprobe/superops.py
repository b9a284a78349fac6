"""Superoperators: linear maps on operators, stored as matrices.

Vectorization convention: ``vec(X)`` stacks the *columns* of ``X``
(Fortran order), so a map on a ``d``-dimensional system is a
``d**2 x d**2`` complex matrix acting on ``vec``'ed operators.  Under
the Hilbert-Schmidt inner product ``Tr[A^dag B] = vec(A)^dag vec(B)``,
which makes the adjoint of a superoperator the conjugate transpose of
its matrix:  ``<A, K(B)> = <K^dag(A), B>``.

The only physics-specific map built here is the collapse superoperator
of a selective strong measurement, ``C(xi) = Tr[xi] * P`` for a rank-1
projector ``P``.  It is idempotent, erases all memory of its input
except the trace, and its adjoint acts as ``C^dag(A) = Tr[P A] * Id``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NoExactSolution, RankDeficient
from .operators import (
    DEFAULT_TOLERANCES,
    DensityOperator,
    Projector,
    Tolerances,
    _frozen,
    as_operator,
    identity,
)

__all__ = [
    "SuperOp",
    "CollapseSuperOp",
    "CompletionResult",
    "vectorize",
    "unvectorize",
    "apply_superop",
    "compose",
    "superop_adjoint",
    "collapse_superop",
    "reconstruct_superop",
    "solve_completion",
    "retrograde",
    "backward_state",
]


def vectorize(x) -> np.ndarray:
    """Column-stacking vectorization of a square matrix."""
    return as_operator(x).reshape(-1, order="F")


def unvectorize(v, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != d * d:
        raise DimensionMismatch(f"vector of length {v.size} is not {d}x{d}")
    return v.reshape((d, d), order="F")


@dataclass(frozen=True, eq=False)
class SuperOp:
    """A linear map on operators of a ``dim``-dimensional system."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.dim * self.dim
        if m.shape != (n, n):
            raise DimensionMismatch(
                f"superoperator matrix shape {m.shape} != ({n}, {n})"
            )
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def identity(cls, d: int) -> "SuperOp":
        return cls(d, np.eye(d * d, dtype=complex))


@dataclass(frozen=True, eq=False)
class CollapseSuperOp(SuperOp):
    """The collapse map of a selective strong measurement.

    Sends every operator ``xi`` to ``Tr[xi] * target``; build with
    :func:`collapse_superop`.
    """

    target: Projector = None  # type: ignore[assignment]


def _mat(x) -> np.ndarray:
    if isinstance(x, (DensityOperator, Projector)):
        return x.mat
    return as_operator(x)


def apply_superop(k: SuperOp, x) -> np.ndarray:
    """Apply the map to an operator: ``unvec(K @ vec(x))``."""
    x = _mat(x)
    if x.shape[0] != k.dim:
        raise DimensionMismatch(f"operator dim {x.shape[0]} != superop dim {k.dim}")
    return unvectorize(k.matrix @ vectorize(x), k.dim)


def compose(k2: SuperOp, k1: SuperOp) -> SuperOp:
    """The map ``x -> k2(k1(x))``."""
    if k1.dim != k2.dim:
        raise DimensionMismatch(f"superop dims differ: {k2.dim} vs {k1.dim}")
    return SuperOp(k1.dim, k2.matrix @ k1.matrix)


def superop_adjoint(k: SuperOp) -> SuperOp:
    """Hilbert-Schmidt adjoint; conjugate transpose under column stacking."""
    return SuperOp(k.dim, k.matrix.conj().T)


def collapse_superop(
    p, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> CollapseSuperOp:
    """Collapse map ``xi -> Tr[xi] * P`` of a selective measurement onto ``p``.

    ``vec`` of the output is ``vec(P) * (vec(I)^dag vec(xi))``, so the
    matrix is the rank-1 outer product ``vec(P) vec(I)^dag``.
    """
    if not isinstance(p, Projector):
        p = Projector.from_matrix(p, tolerances)
    d = p.dim
    matrix = np.outer(vectorize(p.mat), vectorize(identity(d)).conj())
    return CollapseSuperOp(d, matrix, p)


def reconstruct_superop(inputs: Sequence, outputs: Sequence) -> SuperOp:
    """Recover the unique linear map sending ``inputs[j]`` to ``outputs[j]``.

    ``inputs`` must be ``d**2`` operators spanning the operator space
    (e.g. :func:`weakprobe.operators.density_operator_basis`); otherwise
    :class:`RankDeficient` is raised.  This is how an unknown ensemble
    evolution is assembled from tomographic before/after snapshots.
    """
    if len(inputs) == 0 or len(inputs) != len(outputs):
        raise ValueError(
            f"need equally many inputs and outputs, got {len(inputs)}/{len(outputs)}"
        )
    ins = [_mat(x) for x in inputs]
    outs = [_mat(x) for x in outputs]
    d = ins[0].shape[0]
    for m in ins + outs:
        if m.shape[0] != d:
            raise DimensionMismatch("operators live on different dimensions")
    if len(ins) != d * d:
        raise RankDeficient(f"{len(ins)} operators cannot span a {d*d}-dim space")
    v_in = np.column_stack([vectorize(m) for m in ins])
    v_out = np.column_stack([vectorize(m) for m in outs])
    rank = np.linalg.matrix_rank(v_in)
    if rank < d * d:
        raise RankDeficient(f"inputs span only {rank} of {d*d} dimensions")
    k = np.linalg.solve(v_in.T, v_out.T).T
    return SuperOp(d, k)


@dataclass(frozen=True, eq=False)
class CompletionResult:
    """Solution of ``K @ E_first = E_total``.

    ``unique`` is True when ``E_first`` has full rank, so no operator
    ``B`` with ``B @ E_first = 0`` can be added to ``K``;
    ``affine_dimension`` is the dimension of the solution family (0 when
    unique) and ``residual`` the Frobenius norm of the defect.
    """

    solution: SuperOp
    unique: bool
    affine_dimension: int
    residual: float


def solve_completion(
    e_first: SuperOp, e_total: SuperOp, residual_tol: float = 1e-10
) -> CompletionResult:
    """Find ``K`` with ``K composed after e_first == e_total``.

    Solves ``K @ E1 = E`` by least squares and reports whether the
    solution is unique.  When the equations cannot be satisfied to
    within ``residual_tol`` (Frobenius norm), :class:`NoExactSolution`
    is raised rather than silently returning the minimizer; pass
    ``residual_tol=float("inf")`` to get the minimizer regardless.
    """
    if e_first.dim != e_total.dim:
        raise DimensionMismatch(f"superop dims differ: {e_first.dim} vs {e_total.dim}")
    n = e_first.dim ** 2
    a = e_first.matrix
    t = e_total.matrix
    # K A = T  <=>  A^T K^T = T^T, a standard least-squares problem.
    kt, _, rank, _ = np.linalg.lstsq(a.T, t.T, rcond=None)
    k = kt.T
    residual = float(np.linalg.norm(k @ a - t))
    if residual > residual_tol:
        raise NoExactSolution("completion has no exact solution", residual)
    unique = rank == n
    affine_dimension = n * (n - int(rank))
    return CompletionResult(SuperOp(e_first.dim, k), unique, affine_dimension, residual)


def retrograde(e: SuperOp) -> SuperOp:
    """Retrograde counterpart of a forward ensemble evolution.

    Running the adjoint map backwards over an interval pairs with the
    forward map under the Hilbert-Schmidt product, which is what lets a
    later selection be pulled back to an earlier time.
    """
    return superop_adjoint(e)


def backward_state(e_w_fin: SuperOp, rho_fin) -> np.ndarray:
    """Pull the final selection back to the weak-coupling time.

    Returns ``retrograde(E)(rho_fin)`` — in general *not* normalized and
    not a density operator; it enters conditional averages only through
    ratios, where the normalization cancels.
    """
    return apply_superop(retrograde(e_w_fin), _mat(rho_fin))
