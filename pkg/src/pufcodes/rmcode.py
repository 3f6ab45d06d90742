"""Binary Reed-Muller codes with a full-scan maximum-likelihood decoder.

Messages are integers in ``[0, 2^k)`` read little-endian as k bits; the
Plotkin recursion takes the first k(r, m-1) bits for the ``a`` half and the
rest for ``b``. The decoder measures the distance to every codeword in a
freshly permuted order and declares an erasure when the minimum is shared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ._rng import as_rng
from .exceptions import UsageError
from .opcount import tally

ERASURE = -1
MAX_CODEBOOK_K = 16


def rm_dimension(r: int, m: int) -> int:
    return sum(comb(m, i) for i in range(min(r, m) + 1))


def msg_to_bits(msg: int, k: int) -> np.ndarray:
    return ((int(msg) >> np.arange(k)) & 1).astype(np.uint8)


def bits_to_msg(bits) -> int:
    bits = np.asarray(bits, dtype=np.int64)
    return int((bits << np.arange(bits.size)).sum())


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """(..., n) 0/1 array -> (..., ceil(n/64)) uint64 words, little-endian."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    n_words = max(1, -(-n // 64))
    padded = np.zeros(bits.shape[:-1] + (n_words * 64,), dtype=np.uint8)
    padded[..., :n] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(bits.shape[:-1] + (n_words,))


def _plotkin(r: int, m: int, bits: np.ndarray) -> np.ndarray:
    if r == 0:
        return np.repeat(bits[:1], 1 << m)
    if r >= m:
        return bits.copy()
    if r == m - 1:
        return np.concatenate([bits, [np.bitwise_xor.reduce(bits)]]).astype(np.uint8)
    ka = rm_dimension(r, m - 1)
    a = _plotkin(r, m - 1, bits[:ka])
    b = _plotkin(r - 1, m - 1, bits[ka:])
    return np.concatenate([a, a ^ b])


@dataclass(frozen=True, eq=False)
class RmSpec:
    r: int
    m: int
    codebook: np.ndarray = field(default=None, repr=False)
    packed: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if not 0 <= self.r <= self.m:
            raise UsageError(f"need 0 <= r <= m, got r={self.r}, m={self.m}")
        if self.k <= MAX_CODEBOOK_K and self.codebook is None:
            basis = np.array([_plotkin(self.r, self.m, msg_to_bits(1 << i, self.k))
                              for i in range(self.k)], dtype=np.uint8)
            msgs = np.arange(1 << self.k)
            sel = ((msgs[:, None] >> np.arange(self.k)[None, :]) & 1).astype(np.uint8)
            book = (sel.astype(np.int64) @ basis.astype(np.int64)) % 2
            book = book.astype(np.uint8)
            book.setflags(write=False)
            object.__setattr__(self, "codebook", book)
            packed = pack_bits(book)
            packed.setflags(write=False)
            object.__setattr__(self, "packed", packed)

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return rm_dimension(self.r, self.m)

    @property
    def d(self) -> int:
        return 1 << (self.m - self.r)

    @property
    def n_words(self) -> int:
        return max(1, -(-self.n // 64))

    def config_text(self) -> str:
        return f"type=rm r={self.r} m={self.m}"

    def __eq__(self, other):
        return isinstance(other, RmSpec) and (self.r, self.m) == (other.r, other.m)

    def __hash__(self):
        return hash(("rm", self.r, self.m))

    def _need_codebook(self):
        if self.codebook is None:
            raise UsageError(f"RM({self.r},{self.m}) has k={self.k} > {MAX_CODEBOOK_K}; no codebook")


def rm_encode(spec: RmSpec, msg) -> np.ndarray:
    """Encode a k-bit vector (or message integer) into n bits."""
    bits = msg_to_bits(msg, spec.k) if np.isscalar(msg) else np.asarray(msg, dtype=np.uint8)
    if bits.shape != (spec.k,):
        raise UsageError(f"RM({spec.r},{spec.m}) messages have {spec.k} bits, got {bits.size}")
    return _plotkin(spec.r, spec.m, bits)


@dataclass(frozen=True)
class DistanceProfile:
    distances: np.ndarray
    permutation: np.ndarray

    def sorted(self) -> np.ndarray:
        return np.sort(self.distances)


def _distances(spec: RmSpec, received: np.ndarray) -> np.ndarray:
    """(B, n) bits -> (B, 2^k) Hamming distances, full scan."""
    words = pack_bits(received)
    x = words[:, None, :] ^ spec.packed[None, :, :]
    dist = np.bitwise_count(x).sum(axis=2, dtype=np.int64)
    B = received.shape[0]
    tally(bit_ops=2 * B * spec.packed.size)
    return dist


def _received(spec: RmSpec, received) -> np.ndarray:
    arr = np.asarray(received, dtype=np.uint8)
    if arr.shape[-1] != spec.n:
        raise UsageError(f"received blocks must have {spec.n} bits")
    return arr


def ml_decode_batch(spec: RmSpec, received, seed=None, permute: bool = True) -> np.ndarray:
    """Decode each row to a message integer, or ERASURE on a distance tie.

    With ``permute`` every row is scanned in its own random codeword order.
    The outcome never depends on that order; it only hides which index
    attains the minimum.
    """
    spec._need_codebook()
    rx = _received(spec, received).reshape(-1, spec.n)
    dist = _distances(spec, rx)
    B, K = dist.shape
    if permute:
        perm = np.argsort(as_rng(seed).random((B, K)), axis=1)
    else:
        perm = np.broadcast_to(np.arange(K), (B, K))
    prof = np.take_along_axis(dist, perm, axis=1)
    best = prof.min(axis=1)
    ties = (prof == best[:, None]).sum(axis=1)
    where = np.argmin(prof, axis=1)
    tally(bit_ops=2 * B * K)
    msg = perm[np.arange(B), where]
    return np.where(ties == 1, msg, ERASURE).astype(np.int64)


def ml_decode(spec: RmSpec, received, seed=None) -> int:
    return int(ml_decode_batch(spec, np.asarray(received)[None], seed)[0])


def distance_profile(spec: RmSpec, received, seed=None) -> DistanceProfile:
    spec._need_codebook()
    rx = _received(spec, received).reshape(1, spec.n)
    dist = _distances(spec, rx)[0]
    perm = as_rng(seed).permutation(dist.size)
    return DistanceProfile(dist[perm], perm)
