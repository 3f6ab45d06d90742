"""Arithmetic in GF(2^m) with a fixed instruction pattern.

Elements are plain integers in ``[0, 2^m)`` (polynomial basis, bit i is the
coefficient of x^i). All operations accept Python ints or numpy arrays and
broadcast like numpy ufuncs. Each elementwise primitive reports one operation
of its kind to the active :mod:`pufcodes.opcount` context; none of them has a
data-dependent early exit (zero operands take the same path as any other).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import FieldMismatchError, InversionOfZero, TableTooLarge, UsageError
from .opcount import tally

MAX_M = 16
MAX_TABLE_M = 8

# Primitive polynomials, so that x generates the multiplicative group.
DEFAULT_MODULI = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11D,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1053, 13: 0x201B, 14: 0x4443,
    15: 0x8003, 16: 0x1100B,
}

DTYPE = np.uint16


def clmul(a: int, b: int) -> int:
    """Carry-less product of two F_2[x] polynomials encoded as ints."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def clmod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


@functools.lru_cache(maxsize=None)
def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if clmod(poly, cand) == 0:
                return False
    return True


def _out(x, scalar):
    return int(x) if scalar else x


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(2^m) defined by an irreducible ``modulus`` of degree exactly m.

    ``mul_table``/``inv_table`` are only present after :func:`build_tables`.
    """

    m: int
    modulus: int = None
    mul_table: np.ndarray = field(default=None, repr=False)
    inv_table: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or not 1 <= self.m <= MAX_M:
            raise UsageError(f"extension degree must be in [1, {MAX_M}], got {self.m!r}")
        if self.modulus is None:
            object.__setattr__(self, "modulus", DEFAULT_MODULI[self.m])
        if self.modulus.bit_length() - 1 != self.m:
            raise UsageError(f"modulus {self.modulus:#x} does not have degree {self.m}")
        if not is_irreducible(self.modulus):
            raise UsageError(f"modulus {self.modulus:#x} is reducible")

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self):
        return hash((self.m, self.modulus))

    @property
    def order(self) -> int:
        return 1 << self.m

    @property
    def has_tables(self) -> bool:
        return self.mul_table is not None

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=DTYPE)

    def config_text(self) -> str:
        return f"m={self.m} modulus={self.modulus:#x}"

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    # -- primitives -------------------------------------------------------

    def add(self, a, b):
        if type(a) is np.ndarray and type(b) is np.ndarray and a.dtype == b.dtype == DTYPE:
            out = a ^ b
            tally(adds=out.size)
            return out
        scalar = np.isscalar(a) and np.isscalar(b)
        out = np.bitwise_xor(np.asarray(a, dtype=DTYPE), np.asarray(b, dtype=DTYPE))
        tally(adds=out.size)
        return _out(out, scalar)

    sub = add

    def mul(self, a, b):
        if self.mul_table is not None and type(a) is np.ndarray and type(b) is np.ndarray:
            out = self.mul_table[a, b]
            tally(muls=out.size)
            return out
        scalar = np.isscalar(a) and np.isscalar(b)
        a = np.asarray(a, dtype=DTYPE)
        b = np.asarray(b, dtype=DTYPE)
        if self.mul_table is not None:
            out = self.mul_table[a, b]
        else:
            out = self._mul_arith(a, b)
        tally(muls=out.size)
        return _out(out, scalar)

    def sum(self, a, axis=-1):
        """XOR-reduce along ``axis``; counts (terms - 1) additions per output."""
        a = np.asarray(a, dtype=DTYPE)
        out = np.bitwise_xor.reduce(a, axis=axis)
        tally(adds=np.size(out) * (a.shape[axis] - 1))
        return out

    def inv(self, a):
        scalar = np.isscalar(a)
        a = np.asarray(a, dtype=DTYPE)
        if np.any(a == 0):
            raise InversionOfZero("zero has no multiplicative inverse")
        out = self._inv_raw(a)
        tally(invs=out.size)
        return _out(out, scalar)

    def inv_or_zero(self, a):
        """Like :meth:`inv` but maps 0 to 0 instead of raising (same cost)."""
        scalar = np.isscalar(a)
        out = self._inv_raw(np.asarray(a, dtype=DTYPE))
        tally(invs=out.size)
        return _out(out, scalar)

    # -- uncounted internals ----------------------------------------------

    def _mul_raw(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        return self._mul_arith(np.asarray(a, dtype=DTYPE), np.asarray(b, dtype=DTYPE))

    def _outer_raw(self, a, b):
        """(len a, len b) table of products; gathers whole table rows."""
        if self.mul_table is not None:
            return np.take(np.take(self.mul_table, b, axis=1), a, axis=0)
        return self._mul_arith(np.asarray(a, dtype=DTYPE)[:, None], np.asarray(b, dtype=DTYPE)[None, :])

    def _mul_arith(self, a, b):
        a32 = a.astype(np.uint32)
        b32 = b.astype(np.uint32)
        acc = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.uint32)
        for i in range(self.m):
            acc ^= ((b32 >> i) & 1) * (a32 << i)
        for i in range(2 * self.m - 2, self.m - 1, -1):
            acc ^= ((acc >> i) & 1) * np.uint32(self.modulus << (i - self.m))
        return acc.astype(DTYPE)

    def _inv_raw(self, a):
        if self.inv_table is not None:
            return self.inv_table[a]
        # a^(2^m - 2) = prod_{i=1}^{m-1} a^(2^i): fixed m-1 squarings and products
        sq = a
        res = np.ones_like(a)
        for _ in range(self.m - 1):
            sq = self._mul_arith(sq, sq)
            res = self._mul_arith(res, sq)
        return res


@functools.lru_cache(maxsize=None)
def _tables(m: int, modulus: int):
    bare = FieldSpec(m, modulus)
    e = bare.elements()
    mul_table = bare._mul_arith(e[:, None], e[None, :])
    inv_table = bare._inv_raw(e)
    mul_table.setflags(write=False)
    inv_table.setflags(write=False)
    return mul_table, inv_table


def build_tables(spec: FieldSpec) -> FieldSpec:
    """Return ``spec`` with a full 2^(2m)-entry multiplication table attached."""
    if spec.m > MAX_TABLE_M:
        raise TableTooLarge(f"a full table for m={spec.m} would need 2^{2 * spec.m} entries")
    if spec.has_tables:
        return spec
    mul_table, inv_table = _tables(spec.m, spec.modulus)
    return replace(spec, mul_table=mul_table, inv_table=inv_table)


def fast_field(m: int, modulus: int = None) -> FieldSpec:
    """Field with lookup tables whenever they fit."""
    spec = FieldSpec(m, modulus)
    return build_tables(spec) if m <= MAX_TABLE_M else spec


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= int(self.value) < self.field.order:
            raise UsageError(f"{self.value} is not an element of GF(2^{self.field.m})")
        object.__setattr__(self, "value", int(self.value))

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("operands live in different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.add(self.value, other.value))

    __sub__ = __add__

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF(2^{self.field.m})({self.value})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()
