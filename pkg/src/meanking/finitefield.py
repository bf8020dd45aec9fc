"""Exact arithmetic modulo an odd prime.

Every integer label in the package (basis index, row, line coordinates,
collective labels) is a residue mod ``d``. Halving is the one operation that
makes ``d = 2`` unusable: ``1/2 mod d`` is ``(d + 1) / 2`` and only exists for
odd ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class InvalidDimensionError(ValueError):
    """Raised when a dimension is not an odd prime."""


def is_valid_dim(n: int) -> bool:
    """True iff ``n`` is an odd prime."""
    if not isinstance(n, int) or isinstance(n, bool):
        return False
    if n < 3 or n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True, order=True)
class PrimeDim:
    """Single-qudit dimension ``d``, an odd prime."""

    d: int

    def __post_init__(self):
        if not is_valid_dim(self.d):
            if self.d == 2:
                raise InvalidDimensionError("dimension must be an odd prime (d=p != 2); got 2")
            raise InvalidDimensionError(f"dimension must be an odd prime; got {self.d!r}")

    def __int__(self) -> int:
        return self.d

    def __call__(self, value: int) -> "ModInt":
        return ModInt(value % self.d, self)

    @property
    def half(self) -> int:
        return (self.d + 1) // 2

    def residues(self) -> list["ModInt"]:
        return [ModInt(v, self) for v in range(self.d)]


@lru_cache(maxsize=None)
def _dim(d: int) -> PrimeDim:
    return PrimeDim(d)


def as_dim(d: "int | PrimeDim") -> PrimeDim:
    """Coerce an int or PrimeDim into a (cached) PrimeDim."""
    if isinstance(d, PrimeDim):
        return d
    if isinstance(d, bool) or not isinstance(d, int):
        raise InvalidDimensionError(f"dimension must be an integer; got {d!r}")
    return _dim(d)


@dataclass(frozen=True, order=True)
class ModInt:
    """Residue in ``[0, d)``; arithmetic with ints or same-dimension residues."""

    value: int
    dim: PrimeDim

    def __post_init__(self):
        if not 0 <= self.value < self.dim.d:
            object.__setattr__(self, "value", self.value % self.dim.d)

    def _coerce(self, other) -> int:
        if isinstance(other, ModInt):
            if other.dim != self.dim:
                raise ValueError(f"mixing residues mod {self.dim.d} and mod {other.dim.d}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        return NotImplemented

    def _new(self, v: int) -> "ModInt":
        return ModInt(v % self.dim.d, self.dim)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return mod_div(self, self._new(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return mod_div(self._new(o), self)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.dim.d})"

    def half(self) -> "ModInt":
        return mod_half(self)

    def inv(self) -> "ModInt":
        return mod_inv(self)


def mod_inv(a: ModInt) -> ModInt:
    """Multiplicative inverse via Fermat: ``a**(d-2) mod d``."""
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {a.dim.d}")
    return ModInt(pow(a.value, a.dim.d - 2, a.dim.d), a.dim)


def mod_half(a: ModInt) -> ModInt:
    return ModInt(a.value * a.dim.half % a.dim.d, a.dim)


def mod_div(a: ModInt, b: ModInt) -> ModInt:
    if a.dim != b.dim:
        raise ValueError(f"mixing residues mod {a.dim.d} and mod {b.dim.d}")
    return ModInt(a.value * mod_inv(b).value % a.dim.d, a.dim)
