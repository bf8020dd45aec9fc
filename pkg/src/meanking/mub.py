"""The d+1 mutually unbiased bases of a prime-dimension qudit.

Basis labels are a tagged union: the computational basis ``CB`` (serialized as
``"dd0"``) and the ``d`` shifted bases ``Shifted(b)``, ``b = 0..d-1``. ``CB`` is
never confused with ``Shifted(0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Union

import numpy as np

from . import _kernels
from .finitefield import ModInt, PrimeDim, as_dim
from .qudit import Ket, Operator, root_of_unity

CB_TOKEN = "dd0"


@dataclass(frozen=True)
class ComputationalBasis:
    def __str__(self) -> str:
        return CB_TOKEN

    def __repr__(self) -> str:
        return "CB"


CB = ComputationalBasis()


@dataclass(frozen=True)
class Shifted:
    b: ModInt

    def __str__(self) -> str:
        return str(self.b.value)

    def __repr__(self) -> str:
        return f"Shifted({self.b.value})"


BasisLabel = Union[ComputationalBasis, Shifted]


@dataclass(frozen=True)
class MubIndex:
    b: BasisLabel
    m: ModInt


def shifted(d: int | PrimeDim, b: int) -> Shifted:
    return Shifted(as_dim(d)(b))


def basis_labels(d: int | PrimeDim) -> list[BasisLabel]:
    """``[CB, Shifted(0), ..., Shifted(d-1)]`` (column order)."""
    dim = as_dim(d)
    return [CB] + [Shifted(r) for r in dim.residues()]


def column_index(label: BasisLabel) -> int:
    """0 for CB, ``1 + b`` otherwise; the first axis of the MUB table."""
    return 0 if isinstance(label, ComputationalBasis) else 1 + label.b.value


def label_from_column(d: int | PrimeDim, c: int) -> BasisLabel:
    return CB if c == 0 else shifted(d, c - 1)


def parse_basis(d: int | PrimeDim, token) -> BasisLabel:
    """``"dd0"`` -> CB; an integer (or its string) in ``[0, d)`` -> Shifted."""
    dim = as_dim(d)
    if isinstance(token, (ComputationalBasis, Shifted)):
        return token
    if isinstance(token, str):
        token = token.strip()
        if token == CB_TOKEN:
            return CB
        try:
            token = int(token)
        except ValueError:
            raise ValueError(f"invalid basis label {token!r}; use 'dd0' or 0..{dim.d - 1}") from None
    if isinstance(token, bool) or not isinstance(token, int) or not 0 <= token < dim.d:
        raise ValueError(f"invalid basis label {token!r}; use 'dd0' or 0..{dim.d - 1}")
    return Shifted(dim(token))


def basis_to_json(label: BasisLabel):
    return CB_TOKEN if isinstance(label, ComputationalBasis) else label.b.value


def mub_table(d: int) -> np.ndarray:
    """Read-only ``[column, m, n]`` amplitude table for all d+1 bases."""
    return _mub_table(as_dim(d).d, _kernels.BACKEND)


@lru_cache(maxsize=None)
def _mub_table(d: int, backend: str) -> np.ndarray:
    table = _kernels.mub_table(d)
    table.setflags(write=False)
    return table


def mub_state(d: int | PrimeDim, idx: MubIndex) -> Ket:
    dim = as_dim(d)
    return Ket(mub_table(dim.d)[column_index(idx.b), idx.m.value])


def mub_basis(d: int | PrimeDim, b: BasisLabel) -> list[Ket]:
    dim = as_dim(d)
    return [Ket(v) for v in mub_table(dim.d)[column_index(b)]]


def all_bases(d: int | PrimeDim) -> list[list[Ket]]:
    return [mub_basis(d, b) for b in basis_labels(d)]


def pauli_z(d: int | PrimeDim) -> Operator:
    dim = as_dim(d)
    return Operator(np.diag([root_of_unity(dim.d, n) for n in range(dim.d)]), unitary=True)


def pauli_x(d: int | PrimeDim) -> Operator:
    """Cyclic shift ``X|n> = |n+1>``."""
    dim = as_dim(d)
    return Operator(np.roll(np.eye(dim.d), 1, axis=0), unitary=True)


def conjugate_label(d: int | PrimeDim, idx: MubIndex) -> MubIndex:
    """Label of the componentwise complex conjugate: ``(-m, -b)``; CB is fixed."""
    if isinstance(idx.b, ComputationalBasis):
        return idx
    return MubIndex(Shifted(-idx.b.b), -idx.m)


def inversion_operator(d: int | PrimeDim) -> Operator:
    """Permutation ``|n> -> |-n mod d>``."""
    dim = as_dim(d)
    mat = np.zeros((dim.d, dim.d))
    for n in range(dim.d):
        mat[(-n) % dim.d, n] = 1.0
    return Operator(mat, unitary=True)


def king_eigenvalue(d: int | PrimeDim, m: int) -> complex:
    return root_of_unity(as_dim(d).d, m)


def king_operator(d: int | PrimeDim, b: BasisLabel) -> Operator:
    """``sum_m |m,b> w^m <b,m|``; non-degenerate, diagonal in basis ``b``."""
    dim = as_dim(d)
    vecs = mub_table(dim.d)[column_index(b)]
    lam = np.array([king_eigenvalue(dim, m) for m in range(dim.d)])
    return Operator((vecs.T * lam) @ vecs.conj(), unitary=True)


def verify_unbiased(basis1, basis2, tol: float = 1e-10) -> bool:
    """True iff every cross overlap has modulus ``1/sqrt(d)`` within ``tol``."""
    a = np.array([np.asarray(k) for k in basis1])
    b = np.array([np.asarray(k) for k in basis2])
    if a.shape != b.shape:
        return False
    d = a.shape[1]
    return bool(np.all(np.abs(np.abs(a.conj() @ b.T) - 1 / np.sqrt(d)) <= tol))


def all_pairs_unbiased(d: int | PrimeDim, tol: float = 1e-10) -> bool:
    return all(verify_unbiased(x, y, tol) for x, y in combinations(all_bases(d), 2))
