"""Reed-Solomon codes as evaluation codes over GF(2^m)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._rng import as_rng
from .exceptions import MessageTooLong, UsageError
from .gf2m import DTYPE, FieldSpec, build_tables, MAX_TABLE_M
from .polyring import UniPoly, horner


def default_locators(fld: FieldSpec, n: int) -> np.ndarray:
    """alpha^0, ..., alpha^(n-1) for alpha = x; zero is appended when n = 2^m."""
    if n > fld.order:
        raise UsageError(f"length {n} exceeds the field size {fld.order}")
    locs = np.empty(n, dtype=DTYPE)
    cur = 1
    for i in range(min(n, fld.order - 1)):
        locs[i] = cur
        cur = fld.mul(cur, 2) if fld.m > 1 else 1
    if n == fld.order:
        locs[-1] = 0
    return locs


@dataclass(frozen=True, eq=False)
class RsSpec:
    field: FieldSpec
    n: int
    k: int
    locators: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        fld = self.field
        if fld.m <= MAX_TABLE_M and not fld.has_tables:
            fld = build_tables(fld)
            object.__setattr__(self, "field", fld)
        if not 1 <= self.k < self.n <= fld.order:
            raise UsageError(f"need 1 <= k < n <= 2^m, got n={self.n}, k={self.k}, m={fld.m}")
        locs = self.locators
        if locs is None:
            locs = default_locators(fld, self.n)
        locs = np.array(locs, dtype=DTYPE).reshape(-1)
        if locs.size != self.n:
            raise UsageError("need exactly n locators")
        if np.unique(locs).size != self.n or np.any(locs >= fld.order):
            raise UsageError("locators must be distinct field elements")
        locs.setflags(write=False)
        object.__setattr__(self, "locators", locs)

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    @property
    def unique_radius(self) -> int:
        return (self.d - 1) // 2

    def with_locators(self, locators) -> "RsSpec":
        return RsSpec(self.field, len(locators), self.k, locators)

    def config_text(self) -> str:
        return f"type=rs m={self.field.m} modulus={self.field.modulus:#x} n={self.n} k={self.k}"

    def __eq__(self, other):
        return (isinstance(other, RsSpec) and other.field == self.field and other.k == self.k
                and np.array_equal(other.locators, self.locators))

    def __hash__(self):
        return hash((self.field, self.k, self.locators.tobytes()))


@dataclass(frozen=True, eq=False)
class Word:
    """Received or transmitted word; erased positions always hold symbol 0."""

    symbols: np.ndarray
    erased: np.ndarray = None

    def __post_init__(self):
        sym = np.array(self.symbols, dtype=DTYPE).reshape(-1)
        er = np.zeros(sym.size, dtype=bool) if self.erased is None else np.array(self.erased, dtype=bool).reshape(-1)
        if er.size != sym.size:
            raise UsageError("erasure mask and symbols differ in length")
        sym[er] = 0
        sym.setflags(write=False)
        er.setflags(write=False)
        object.__setattr__(self, "symbols", sym)
        object.__setattr__(self, "erased", er)

    def __len__(self):
        return self.symbols.size

    @property
    def n_erased(self) -> int:
        return int(self.erased.sum())

    def __eq__(self, other):
        return (isinstance(other, Word) and np.array_equal(self.symbols, other.symbols)
                and np.array_equal(self.erased, other.erased))

    def __repr__(self):
        body = " ".join("?" if e else format(int(s), "x") for s, e in zip(self.symbols, self.erased))
        return f"Word({body})"


def _message_coeffs(spec: RsSpec, f) -> np.ndarray:
    if not isinstance(f, UniPoly):
        f = UniPoly(spec.field, f)
    if f.degree >= spec.k:
        raise MessageTooLong(f"message polynomial has degree {f.degree} >= k = {spec.k}")
    out = np.zeros(spec.k, dtype=DTYPE)
    out[: min(spec.k, f.coeffs.size)] = f.coeffs[: spec.k]
    return out


def encode(spec: RsSpec, f) -> Word:
    """Evaluate the message polynomial ``f`` (UniPoly or coefficient list) at the locators."""
    coeffs = _message_coeffs(spec, f)
    return Word(horner(spec.field, coeffs, spec.locators))


def encode_many(spec: RsSpec, messages: np.ndarray) -> np.ndarray:
    """Rows of k coefficients -> rows of n symbols."""
    messages = np.asarray(messages, dtype=DTYPE)
    return horner(spec.field, messages[:, None, :], spec.locators[None, :])


def random_message(spec: RsSpec, seed=None) -> UniPoly:
    rng = as_rng(seed)
    return UniPoly(spec.field, rng.integers(0, spec.field.order, spec.k, dtype=DTYPE))


def random_codeword(spec: RsSpec, seed=None) -> Word:
    return encode(spec, random_message(spec, seed))


def lagrange_values(spec: RsSpec, values, support) -> np.ndarray:
    """Values at all locators of the unique poly of degree < len(support)
    through ``(locators[support], values)``."""
    fld = spec.field
    pts = spec.locators[np.asarray(support)]
    vals = np.asarray(values, dtype=DTYPE)
    out = np.zeros(spec.n, dtype=DTYPE)
    for i in range(pts.size):
        others = np.delete(pts, i)
        num = np.ones(spec.n, dtype=DTYPE)
        den = 1
        for a in others:
            num = fld.mul(num, fld.add(spec.locators, a))
            den = fld.mul(den, fld.add(int(pts[i]), int(a)))
        out = fld.add(out, fld.mul(num, fld.mul(int(vals[i]), fld.inv(den))))
    return out


def is_codeword(spec: RsSpec, w: Word) -> bool:
    if w.n_erased:
        raise UsageError("is_codeword needs an erasure-free word")
    if len(w) != spec.n:
        raise UsageError("word length differs from the code length")
    support = np.arange(spec.k)
    recon = lagrange_values(spec, w.symbols[: spec.k], support)
    return bool(np.array_equal(recon, w.symbols))
