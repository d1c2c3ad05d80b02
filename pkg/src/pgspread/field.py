"""Arithmetic in the prime field GF(p).

Residues are kept canonical (``0 <= value < p``) on every operation, so the
geometry code can compare raw integers directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ModulusMismatchError

MAX_MODULUS = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` unchanged if it is a supported prime modulus, else raise."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise TypeError(f"modulus must be an integer, got {type(p).__name__}")
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_MODULUS:
        raise ValueError(f"modulus {p} exceeds supported bound {MAX_MODULUS}")
    return p


@dataclass(frozen=True, slots=True)
class Prime:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __int__(self) -> int:
        return self.p

    def __index__(self) -> int:
        return self.p

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.p)]


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    modulus: Prime

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.modulus.p}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"GF({self.modulus.p}) and GF({other.modulus.p}) elements combined")
            return other.value
        if isinstance(other, int):
            return other % self.modulus.p
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement((self.value + v) % self.modulus.p, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement((self.value - v) % self.modulus.p, self.modulus)

    def __rsub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement((v - self.value) % self.modulus.p, self.modulus)

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement((self.value * v) % self.modulus.p, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement((-self.value) % self.modulus.p, self.modulus)

    def __truediv__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return self * FieldElement(v, self.modulus).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.modulus.p), self.modulus)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.modulus.p})")
        return FieldElement(pow(self.value, -1, self.modulus.p), self.modulus)

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.p})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.modulus != b.modulus:
        raise ModulusMismatchError(f"GF({a.modulus.p}) + GF({b.modulus.p})")
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.modulus != b.modulus:
        raise ModulusMismatchError(f"GF({a.modulus.p}) * GF({b.modulus.p})")
    return a * b


def fe_neg(a: FieldElement) -> FieldElement:
    return -a


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    """``inv[a]`` is the multiplicative inverse of ``a`` mod ``q``; ``inv[0] = 0``."""
    q = check_prime(q)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, -1, q)
    inv.flags.writeable = False
    return inv
