"""Concatenation of an inner binary RM code with an outer RS code.

A codeword is an ``(n_a, n_b)`` bit matrix whose i-th row is the inner
encoding of the i-th outer symbol. The symbol-to-message map is the identity
on integers: bit i of the symbol value is bit i of the inner message.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import as_rng
from .exceptions import RadiusTooLarge, UsageError
from .gf2m import DTYPE
from .gsdecoder import (DecodeResult, _decode, max_list_radius, select_params_nk,
                        unique_radius)
from .opcount import counting
from .rmcode import ERASURE, RmSpec, ml_decode_batch
from .rscode import RsSpec, Word, encode_many


def desk_radius(n: int, k: int) -> int:
    """One symbol beyond unique decoding, capped at the list-decoding limit.

    Keeps the interpolation multiplicity small enough for large Monte Carlo
    runs while still exercising list decoding.
    """
    return min(max_list_radius(n, k), unique_radius(n, k) + 1)


RADIUS_POLICIES = {
    "list": max_list_radius,
    "unique": unique_radius,
    "desk": desk_radius,
}


def radius_rule(tau):
    """Normalise ``tau`` (int, policy name, callable or None) to a function of (n_eff, k)."""
    if tau is None:
        return max_list_radius
    if callable(tau):
        return tau
    if isinstance(tau, str):
        try:
            return RADIUS_POLICIES[tau]
        except KeyError:
            raise UsageError(f"unknown radius policy {tau!r}; pick one of {sorted(RADIUS_POLICIES)}")
    fixed = int(tau)
    return lambda n, k: fixed


@dataclass(frozen=True)
class ConcatSpec:
    inner: RmSpec
    outer: RsSpec

    def __post_init__(self):
        if self.outer.field.m != self.inner.k:
            raise UsageError(
                f"outer symbols have {self.outer.field.m} bits but the inner code carries {self.inner.k}")

    @property
    def n(self) -> int:
        return self.outer.n * self.inner.n

    @property
    def k(self) -> int:
        return self.outer.k * self.inner.k

    @property
    def d_lower(self) -> int:
        return self.outer.d * self.inner.d

    @property
    def shape(self):
        return (self.outer.n, self.inner.n)

    def config_text(self) -> str:
        return f"type=concat inner={self.inner.config_text()} outer={self.outer.config_text()}"


def _blocks(spec: ConcatSpec, received) -> np.ndarray:
    arr = np.asarray(received, dtype=np.uint8)
    if arr.size != spec.n:
        raise UsageError(f"concatenated words have {spec.n} bits, got {arr.size}")
    return arr.reshape(spec.shape)


def concat_encode(spec: ConcatSpec, msg) -> np.ndarray:
    """k_a outer symbols -> (n_a, n_b) bit matrix."""
    msg = np.asarray(msg.coeffs if hasattr(msg, "coeffs") else msg, dtype=DTYPE).reshape(-1)
    if msg.size != spec.outer.k:
        raise UsageError(f"messages have {spec.outer.k} symbols, got {msg.size}")
    symbols = encode_many(spec.outer, msg[None])[0]
    return spec.inner.codebook[symbols].copy()


def inner_decode(spec: ConcatSpec, received, seed=None) -> Word:
    """Decode every row; ties become erasures of the outer word."""
    rows = ml_decode_batch(spec.inner, _blocks(spec, received), seed)
    erased = rows == ERASURE
    return Word(np.where(erased, 0, rows), erased)


def concat_decode(spec: ConcatSpec, received, tau=None, seed=None, strict: bool = False) -> DecodeResult:
    """Inner ML decoding per row, then GS list decoding of the outer word.

    ``tau`` is an int, the name of a radius policy, a callable of
    ``(effective_length, k)`` or None for the largest list radius. In
    ``strict`` mode the outer interpolation keeps its zero-erasure size.
    """
    rng = as_rng(seed)
    outer = spec.outer
    rule = radius_rule(tau)
    with counting() as report:
        word = inner_decode(spec, received, rng)
        if strict:
            radius = rule(outer.n, outer.k)
            params = select_params_nk(outer.n, outer.k, radius)
        else:
            n_eff = outer.n - word.n_erased
            radius = rule(n_eff, outer.k)
            if radius < 0:
                raise RadiusTooLarge(f"{word.n_erased} erasures leave no decoding radius")
            params = select_params_nk(n_eff, outer.k, radius)
        result = _decode(outer, params, word, rng, strict)
    result.op_report = report
    result.word = word
    return result
