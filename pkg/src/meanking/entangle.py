"""Two-qudit states carried by points and lines of the geometry.

A point ``(m, b)`` carries the product ``|m,b>_1 |m~,b~>_2``; a line
``(mddot, m0)`` carries the maximally entangled state ``|mddot>_c |2 m0>_r``.

Two line-vector conventions are kept apart on purpose:

* :func:`line_state` is a unit vector and is the one used for Born
  probabilities;
* :func:`line_vector_raw` is "sum of the line's point states minus the
  balance state", which has norm ``sqrt(d)``.

``line_vector_raw(j) / sqrt(d) == line_state(j)``, and the geometric sums
(a point state as the average of its ``d`` raw line vectors) hold exactly for
the raw convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .finitefield import ModInt, PrimeDim, as_dim
from .geometry import Line, Point, line_points, row_on_line
from .mub import (
    BasisLabel,
    ComputationalBasis,
    MubIndex,
    basis_labels,
    column_index,
    conjugate_label,
    mub_state,
    mub_table,
)
from .qudit import Ket, Operator, inner, root_of_unity, tensor


@dataclass(frozen=True, eq=False)
class PointState:
    point: Point
    vector: Ket = field(repr=False)


@dataclass(frozen=True, eq=False)
class LineState:
    line: Line
    vector: Ket = field(repr=False)


@dataclass(frozen=True, eq=False)
class BalanceState:
    vector: Ket = field(repr=False)


def line_state_matrix(d: int) -> np.ndarray:
    """Row ``mddot * d + m0`` is the normalized state of that line."""
    return _line_table(as_dim(d).d, _kernels.BACKEND)


def point_state_matrix(d: int) -> np.ndarray:
    """Row ``column * d + m`` is the product state of that point."""
    return _point_table(as_dim(d).d, _kernels.BACKEND)


# backend is part of the key so switching backends never serves stale tables
@lru_cache(maxsize=None)
def _line_table(d: int, backend: str) -> np.ndarray:
    table = _kernels.line_table(d)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _point_table(d: int, backend: str) -> np.ndarray:
    table = _kernels.point_table(np.array(mub_table(d)))
    table.setflags(write=False)
    return table


def point_index(p: Point) -> int:
    return column_index(p.b) * p.m.dim.d + p.m.value


def point_state(d: int | PrimeDim, p: Point) -> PointState:
    dim = as_dim(d)
    idx = MubIndex(p.b, p.m)
    vec = tensor(mub_state(dim, idx), mub_state(dim, conjugate_label(dim, idx)))
    return PointState(p, vec)


def column_sum(d: int | PrimeDim, b: BasisLabel) -> Ket:
    """Sum of the ``d`` point states in column ``b``."""
    dim = as_dim(d)
    rows = point_state_matrix(dim.d)[column_index(b) * dim.d:(column_index(b) + 1) * dim.d]
    return Ket(rows.sum(axis=0))


def balance_state(d: int | PrimeDim, tol: float = 1e-10) -> BalanceState:
    """``sum_n |n>_1 |n>_2`` (norm ``sqrt(d)``).

    Raises ``ArithmeticError`` if any column sum of point states differs from it.
    """
    dim = as_dim(d)
    vec = np.zeros(dim.d * dim.d, dtype=np.complex128)
    vec[[n * dim.d + n for n in range(dim.d)]] = 1.0
    state = Ket(vec)
    for b in basis_labels(dim):
        if not column_sum(dim, b).allclose(state, tol):
            raise ArithmeticError(f"column {b} does not sum to the balance state")
    return BalanceState(state)


def line_state(d: int | PrimeDim, j: Line) -> LineState:
    dim = as_dim(d)
    return LineState(j, Ket(line_state_matrix(dim.d)[j.index]))


def line_vector_raw(d: int | PrimeDim, j: Line) -> Ket:
    """Sum of point states on ``j`` minus the balance state (norm ``sqrt(d)``)."""
    dim = as_dim(d)
    acc = -balance_state(dim).vector.amplitudes
    for p in line_points(dim, j):
        acc = acc + point_state(dim, p).vector.amplitudes
    return Ket(acc)


def line_operator(d: int | PrimeDim, j: Line) -> Operator:
    """Single-qudit ``sum_{a on j} |a><a| - I``; Hermitian, squares to I."""
    dim = as_dim(d)
    acc = -np.eye(dim.d, dtype=np.complex128)
    for p in line_points(dim, j):
        v = mub_state(dim, MubIndex(p.b, p.m)).amplitudes
        acc += np.outer(v, v.conj())
    return Operator(acc, unitary=True)


def overlap_point_line(d: int | PrimeDim, p: Point, j: Line) -> complex:
    """``<A_p|P_j>``; modulus ``1/sqrt(d)`` if ``p`` is on ``j``, else 0."""
    return inner(point_state(d, p).vector, line_state(d, j).vector)


def residue_label(d: int | PrimeDim, m: ModInt, b: BasisLabel, j: Line) -> MubIndex:
    """Label of particle 2 after particle 1 is found in ``|m, b>`` on line ``j``.

    With ``mbar`` the row of ``j`` in column ``b`` and ``delta = mbar - m`` this is
    the conjugate of ``|mbar + delta, b>``.
    """
    mbar = row_on_line(j, b)
    return conjugate_label(d, MubIndex(b, 2 * mbar - m))


def residue_phase(d: int | PrimeDim, m: ModInt, b: BasisLabel, j: Line) -> complex:
    """Phase relating the residue to ``mub_state(residue_label) / sqrt(d)``."""
    dim = as_dim(d)
    delta = row_on_line(j, b) - m
    if isinstance(b, ComputationalBasis):
        return root_of_unity(dim.d, 2 * j.m0.value * delta.value)
    return root_of_unity(dim.d, -2 * j.m_ddot.value * delta.value)


def single_particle_residue(d: int | PrimeDim, m: ModInt, b: BasisLabel, j: Line) -> tuple[Ket, complex]:
    """Project particle 1 of the line state onto ``<b, m|``.

    Returns the unnormalized particle-2 vector (squared norm ``1/d``) and the
    phase ``ph`` with ``residue = ph * mub_state(residue_label) / sqrt(d)``.
    """
    dim = as_dim(d)
    bra = mub_state(dim, MubIndex(b, m)).amplitudes.conj()
    psi = line_state(dim, j).vector.amplitudes.reshape(dim.d, dim.d)
    return Ket(bra @ psi), residue_phase(dim, m, b, j)


def schmidt_coefficients(state: Ket, d: int | PrimeDim) -> np.ndarray:
    """Schmidt coefficients (descending) of a two-qudit pure state."""
    dim = as_dim(d)
    return np.linalg.svd(state.amplitudes.reshape(dim.d, dim.d), compute_uv=False)
