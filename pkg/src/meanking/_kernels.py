"""Dense table kernels with a numba path and a pure-numpy path.

Set ``MEANKING_NO_NUMBA=1`` (or leave numba uninstalled) to run the numpy
implementations. Both paths return identical layouts:

* MUB table ``[c, m, n] = <n|m, b>`` with column ``c = 0`` for the
  computational basis and ``c = 1 + b`` otherwise.
* line table ``[mddot * d + m0, n1 * d + n2]``, one normalized line state
  per row.
* incidence table ``[mddot * d + m0, c]`` = row of the line's point in
  column ``c``.
* point table ``[c * d + m, n1 * d + n2]``, one product state per row.

All phases are looked up from a table of ``d``-th roots of unity indexed by
an exponent already reduced mod ``d``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

NUMBA_AVAILABLE = numba is not None
_ENV_DISABLED = os.environ.get("MEANKING_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

BACKEND = "numba" if NUMBA_AVAILABLE and not _ENV_DISABLED else "numpy"


def set_backend(name: str) -> str:
    """Switch backend at runtime; returns the previous one."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    prev, BACKEND = BACKEND, name
    return prev


def _njit(f):
    if numba is None:
        return f
    return numba.njit(cache=True, nogil=True)(f)


def roots_of_unity(d: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(d) / d)


# -- MUB table -------------------------------------------------------------

@_njit
def _mub_table_loops(d, omega):
    half = (d + 1) // 2
    out = np.zeros((d + 1, d, d), dtype=np.complex128)
    amp = 1.0 / np.sqrt(d)
    for m in range(d):
        out[0, m, m] = 1.0
    for b in range(d):
        bh = (b * half) % d
        for m in range(d):
            for n in range(d):
                e = (bh * ((n * (n - 1)) % d) - n * m) % d
                out[1 + b, m, n] = amp * omega[e]
    return out


def _mub_table_np(d, omega):
    half = (d + 1) // 2
    n = np.arange(d)
    b = np.arange(d)[:, None, None]
    m = np.arange(d)[None, :, None]
    e = (((b * half) % d) * ((n * (n - 1)) % d)[None, None, :] - n[None, None, :] * m) % d
    out = np.empty((d + 1, d, d), dtype=np.complex128)
    out[0] = np.eye(d)
    out[1:] = omega[e] / np.sqrt(d)
    return out


def mub_table(d: int) -> np.ndarray:
    omega = roots_of_unity(d)
    if BACKEND == "numba":
        return _mub_table_loops(d, omega)
    return _mub_table_np(d, omega)


# -- line states -----------------------------------------------------------

@_njit
def _line_table_loops(d, omega):
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    amp = 1.0 / np.sqrt(d)
    for md in range(d):
        for m0 in range(d):
            row = md * d + m0
            for n in range(d):
                col = ((md + n) % d) * d + (md - n) % d
                out[row, col] = amp * omega[(-2 * m0 * n) % d]
    return out


def _line_table_np(d, omega):
    md = np.arange(d)[:, None, None]
    m0 = np.arange(d)[None, :, None]
    n = np.arange(d)[None, None, :]
    rows = np.broadcast_to(md * d + m0, (d, d, d)).ravel()
    cols = np.broadcast_to(((md + n) % d) * d + (md - n) % d, (d, d, d)).ravel()
    vals = np.broadcast_to(omega[(-2 * m0 * n) % d], (d, d, d)).ravel()
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    out[rows, cols] = vals / np.sqrt(d)
    return out


def line_table(d: int) -> np.ndarray:
    omega = roots_of_unity(d)
    if BACKEND == "numba":
        return _line_table_loops(d, omega)
    return _line_table_np(d, omega)


# -- incidence -------------------------------------------------------------

@_njit
def _incidence_loops(d):
    half = (d + 1) // 2
    out = np.empty((d * d, d + 1), dtype=np.int64)
    for md in range(d):
        for m0 in range(d):
            row = md * d + m0
            out[row, 0] = md
            slope = (2 * md - 1) % d
            for b in range(d):
                out[row, 1 + b] = (m0 + ((b * half) % d) * slope) % d
    return out


def _incidence_np(d):
    half = (d + 1) // 2
    md = np.repeat(np.arange(d), d)
    m0 = np.tile(np.arange(d), d)
    b = np.arange(d)
    out = np.empty((d * d, d + 1), dtype=np.int64)
    out[:, 0] = md
    out[:, 1:] = (m0[:, None] + ((b * half) % d)[None, :] * ((2 * md - 1) % d)[:, None]) % d
    return out


def incidence_table(d: int) -> np.ndarray:
    if BACKEND == "numba":
        return _incidence_loops(d)
    return _incidence_np(d)


# -- point (product) states ----------------------------------------------

@_njit
def _point_table_loops(mub):
    nb, d, _ = mub.shape
    out = np.empty((nb * d, d * d), dtype=np.complex128)
    for c in range(nb):
        for m in range(d):
            if c == 0:
                c2, m2 = 0, m
            else:
                c2, m2 = 1 + (d - (c - 1)) % d, (d - m) % d
            row = c * d + m
            for n1 in range(d):
                for n2 in range(d):
                    out[row, n1 * d + n2] = mub[c, m, n1] * mub[c2, m2, n2]
    return out


def _point_table_np(mub):
    nb, d, _ = mub.shape
    c = np.arange(nb)
    m = np.arange(d)
    c2 = np.where(c == 0, 0, 1 + (d - (c - 1)) % d)
    m2 = np.where(c[:, None] == 0, m[None, :], (d - m[None, :]) % d)
    partner = mub[c2[:, None], m2]
    return np.einsum("cmi,cmj->cmij", mub, partner).reshape(nb * d, d * d)


def point_table(mub: np.ndarray) -> np.ndarray:
    """Rows ``|m,b>_1 |m~, b~>_2`` built from the conjugate *label*, not ``conj``."""
    if BACKEND == "numba":
        return _point_table_loops(mub)
    return _point_table_np(mub)


# -- Born-rule tables ----------------------------------------------------

@_njit
def _overlap_loops(a, b):
    # the contraction goes through BLAS; only the modulus-squared is a loop
    g = np.conj(a) @ np.ascontiguousarray(b.T)
    out = np.empty(g.shape, dtype=np.float64)
    for i in range(g.shape[0]):
        for j in range(g.shape[1]):
            out[i, j] = g[i, j].real * g[i, j].real + g[i, j].imag * g[i, j].imag
    return out


def overlap_probabilities(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``|<a_i|b_j>|^2`` for row-stacked kets."""
    if BACKEND == "numba":
        return _overlap_loops(np.ascontiguousarray(a), np.ascontiguousarray(b))
    return np.abs(a.conj() @ b.T) ** 2


@_njit
def _branch_loops(psi, basis, lines):
    d = basis.shape[0]
    res = np.conj(basis) @ np.ascontiguousarray(psi.reshape(d, d))
    post = np.empty((d, d * d), dtype=np.complex128)
    for k in range(d):
        for n1 in range(d):
            for n2 in range(d):
                post[k, n1 * d + n2] = basis[k, n1] * res[k, n2]
    amp = post @ np.ascontiguousarray(np.conj(lines).T)
    out = np.empty(amp.shape, dtype=np.float64)
    for k in range(d):
        for j in range(amp.shape[1]):
            out[k, j] = amp[k, j].real * amp[k, j].real + amp[k, j].imag * amp[k, j].imag
    return out


def _branch_np(psi, basis, lines):
    d = basis.shape[0]
    res = basis.conj() @ psi.reshape(d, d)
    post = (basis[:, :, None] * res[:, None, :]).reshape(d, d * d)
    return np.abs(post @ lines.conj().T) ** 2


def branch_probabilities(psi: np.ndarray, basis: np.ndarray, lines: np.ndarray) -> np.ndarray:
    """Joint probabilities ``[k, j]`` of a particle-1 measurement in ``basis``
    (outcome ``k``) followed by a two-particle measurement in ``lines`` (outcome ``j``)."""
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    basis = np.ascontiguousarray(basis, dtype=np.complex128)
    lines = np.ascontiguousarray(lines, dtype=np.complex128)
    if BACKEND == "numba":
        return _branch_loops(psi, basis, lines)
    return _branch_np(psi, basis, lines)
