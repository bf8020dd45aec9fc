"""Dense kets and operators for one qudit (dim d) or a qudit pair (dim d**2).

Two-qudit amplitudes are stored particle-1 major: index ``n1 * d + n2``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionMismatchError(ValueError):
    pass


class NotNormalizedError(ValueError):
    pass


class IncompleteBasisError(ValueError):
    pass


def _frozen(a, dtype=np.complex128) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise ValueError(f"ket amplitudes must be 1-d, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def normalized(self) -> "Ket":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return Ket(self.amplitudes / n)

    def conj(self) -> "Ket":
        return Ket(self.amplitudes.conj())

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def __add__(self, other: "Ket") -> "Ket":
        _check_dims(self.dim, other.dim)
        return Ket(self.amplitudes + other.amplitudes)

    def __sub__(self, other: "Ket") -> "Ket":
        _check_dims(self.dim, other.dim)
        return Ket(self.amplitudes - other.amplitudes)

    def __mul__(self, scalar: complex) -> "Ket":
        return Ket(self.amplitudes * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Ket":
        return Ket(self.amplitudes / scalar)

    def allclose(self, other: "Ket", tol: float = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=tol))

    @classmethod
    def basis_vector(cls, dim: int, index: int) -> "Ket":
        v = np.zeros(dim, dtype=np.complex128)
        v[index % dim] = 1.0
        return cls(v)


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        if self.unitary and not self.is_unitary():
            raise ValueError("operator flagged unitary but U U^dagger != I")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_dims(self.dim, other.dim)
            return Operator(self.matrix @ other.matrix, unitary=self.unitary and other.unitary)
        if isinstance(other, Ket):
            return apply(self, other)
        return NotImplemented

    def __pow__(self, k: int) -> "Operator":
        if k < 0:
            return Operator(np.linalg.matrix_power(self.dagger().matrix, -k), unitary=self.unitary)
        return Operator(np.linalg.matrix_power(self.matrix, k), unitary=self.unitary)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, unitary=self.unitary)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.allclose(self.matrix @ self.matrix.conj().T, eye, rtol=0, atol=tol))

    def allclose(self, other: "Operator", tol: float = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=tol))

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim), unitary=True)


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    index: int
    probability: float
    post_state: Ket = field(repr=False)


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} vs {b}")


def root_of_unity(d: int, k: int) -> complex:
    """``exp(2 pi i k / d)`` with ``k`` reduced mod ``d`` first."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return cmath.exp(2j * cmath.pi * (k % d) / d)


def tensor(a: Ket, b: Ket) -> Ket:
    return Ket(np.kron(a.amplitudes, b.amplitudes))


def tensor_op(a: Operator, b: Operator) -> Operator:
    return Operator(np.kron(a.matrix, b.matrix), unitary=a.unitary and b.unitary)


def inner(a: Ket, b: Ket) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_dims(a.dim, b.dim)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply(op: Operator, s: Ket) -> Ket:
    _check_dims(op.dim, s.dim)
    return Ket(op.matrix @ s.amplitudes)


def _basis_matrix(basis, dim: int, tol: float) -> np.ndarray:
    rows = np.array([np.asarray(k, dtype=np.complex128) for k in basis])
    if rows.ndim != 2 or rows.shape[1] != dim:
        raise DimensionMismatchError(f"basis vectors do not match state dimension {dim}")
    if rows.shape[0] != dim:
        raise IncompleteBasisError(f"basis has {rows.shape[0]} vectors, need {dim}")
    if not np.allclose(rows.conj() @ rows.T, np.eye(dim), rtol=0, atol=tol):
        raise IncompleteBasisError("basis is not orthonormal")
    return rows


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def measure_in_basis(s: Ket, basis, rng_seed=None, tol: float = DEFAULT_TOL):
    """Projective measurement of ``s`` in an orthonormal ``basis``.

    With ``rng_seed`` (an int or a ``numpy.random.Generator``) one outcome is
    sampled and returned. Without it every outcome is returned, in basis
    order, with its Born probability.
    """
    if not s.is_normalized(tol):
        raise NotNormalizedError(f"state has norm {s.norm()!r}")
    rows = _basis_matrix(basis, s.dim, tol)
    probs = np.abs(rows.conj() @ s.amplitudes) ** 2
    outcomes = [MeasurementOutcome(k, float(probs[k]), Ket(rows[k])) for k in range(s.dim)]
    if rng_seed is None:
        return outcomes
    k = int(_rng(rng_seed).choice(s.dim, p=probs / probs.sum()))
    return outcomes[k]


def measure_subsystem(s: Ket, basis, d: int, rng_seed=None, tol: float = DEFAULT_TOL):
    """Measure particle 1 of a two-qudit state in ``basis``.

    Post-states are ``|basis_k> (x) residue_k`` renormalized. Zero-probability
    outcomes carry a zero post-state when enumerated.
    """
    if s.dim != d * d:
        raise DimensionMismatchError(f"expected a {d * d}-dim two-qudit state, got {s.dim}")
    if not s.is_normalized(tol):
        raise NotNormalizedError(f"state has norm {s.norm()!r}")
    rows = _basis_matrix(basis, d, tol)
    residues = rows.conj() @ s.amplitudes.reshape(d, d)
    probs = np.sum(np.abs(residues) ** 2, axis=1)
    outcomes = []
    for k in range(d):
        post = np.kron(rows[k], residues[k])
        if probs[k] > 0:
            post = post / np.sqrt(probs[k])
        outcomes.append(MeasurementOutcome(k, float(probs[k]), Ket(post)))
    if rng_seed is None:
        return outcomes
    k = int(_rng(rng_seed).choice(d, p=probs / probs.sum()))
    return outcomes[k]
