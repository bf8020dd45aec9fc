"""Center-of-mass and relative coordinates of a qudit pair.

Labels: ``n_r = (n1 - n2)/2``, ``n_c = (n1 + n2)/2`` (halving mod d), inverted by
``n1 = n_r + n_c``, ``n2 = n_c - n_r``.

Storage stays in the particle convention (index ``n1 * d + n2``). The
collective label space, used only by :func:`particle_to_collective_map`, is
indexed ``n_r * d + n_c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .finitefield import ModInt, PrimeDim, as_dim
from .mub import BasisLabel, MubIndex, mub_state
from .qudit import Ket, Operator, root_of_unity

Mode = Literal["r", "c"]


@dataclass(frozen=True)
class CollectiveIndex:
    n_r: ModInt
    n_c: ModInt

    @classmethod
    def from_particles(cls, n1: ModInt, n2: ModInt) -> "CollectiveIndex":
        return cls((n1 - n2).half(), (n1 + n2).half())

    def to_particles(self) -> tuple[ModInt, ModInt]:
        return self.n_r + self.n_c, self.n_c - self.n_r


def collective_operators(d: int | PrimeDim) -> tuple[Operator, Operator, Operator, Operator]:
    """``(Z_r, Z_c, X_r, X_c)`` on the d**2-dim pair space.

    ``Z_r = Z1^{1/2} Z2^{-1/2}``, ``Z_c = Z1^{1/2} Z2^{1/2}``, ``X_r = X1 X2^{-1}``,
    ``X_c = X1 X2``; the square roots act on exponents mod d.
    """
    dim = as_dim(d)
    n = dim.d
    h = dim.half
    n1 = np.repeat(np.arange(n), n)
    n2 = np.tile(np.arange(n), n)
    z_r = np.diag([root_of_unity(n, h * (a - b)) for a, b in zip(n1, n2)])
    z_c = np.diag([root_of_unity(n, h * (a + b)) for a, b in zip(n1, n2)])
    x_r = np.zeros((n * n, n * n))
    x_c = np.zeros((n * n, n * n))
    x_r[((n1 + 1) % n) * n + (n2 - 1) % n, n1 * n + n2] = 1.0
    x_c[((n1 + 1) % n) * n + (n2 + 1) % n, n1 * n + n2] = 1.0
    return tuple(Operator(m, unitary=True) for m in (z_r, z_c, x_r, x_c))


@lru_cache(maxsize=None)
def _collective_index(d: int) -> np.ndarray:
    """``perm[n1 * d + n2] = n_r * d + n_c``."""
    dim = as_dim(d)
    perm = np.empty(d * d, dtype=np.int64)
    for a in dim.residues():
        for b in dim.residues():
            idx = CollectiveIndex.from_particles(a, b)
            perm[a.value * d + b.value] = idx.n_r.value * d + idx.n_c.value
    perm.setflags(write=False)
    return perm


def particle_to_collective_map(d: int | PrimeDim) -> Operator:
    """Permutation ``|n1, n2> -> |n_r, n_c>`` (collective index ``n_r * d + n_c``)."""
    dim = as_dim(d)
    n = dim.d
    mat = np.zeros((n * n, n * n))
    mat[_collective_index(n), np.arange(n * n)] = 1.0
    return Operator(mat, unitary=True)


def collective_basis_state(d: int | PrimeDim, mode: Mode, b_s: BasisLabel, m_s: ModInt) -> Ket:
    """Single-mode MUB state ``|m_s, b_s>_s``; the amplitudes do not depend on ``mode``."""
    if mode not in ("r", "c"):
        raise ValueError(f"mode must be 'r' or 'c', got {mode!r}")
    return mub_state(d, MubIndex(b_s, m_s))


def embed_collective(d: int | PrimeDim, com: Ket, rel: Ket) -> Ket:
    """Product ``|com>_c |rel>_r`` written in particle storage."""
    dim = as_dim(d)
    n = dim.d
    if com.dim != n or rel.dim != n:
        raise ValueError(f"collective factors must have dimension {n}")
    # amplitude(n_r, n_c) laid out on the collective grid, then pulled back to particles
    grid = np.outer(rel.amplitudes, com.amplitudes).ravel()
    return Ket(grid[_collective_index(n)])
