"""Text encodings for bit and symbol vectors.

Bit vectors are packed MSB-first into bytes and written as lowercase hex; the
last byte is zero-padded. Symbol vectors are space-separated hex integers.
"""

from __future__ import annotations

import numpy as np

from .exceptions import UsageError


def bits_to_hex(bits) -> str:
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    return np.packbits(bits, bitorder="big").tobytes().hex()


def hex_to_bits(text: str, n: int) -> np.ndarray:
    text = text.strip()
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"not a hex string: {text[:40]!r}")
    if len(raw) != -(-n // 8):
        raise UsageError(f"expected {-(-n // 8)} bytes for {n} bits, got {len(raw)}")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
    if np.any(bits[n:]):
        raise UsageError("nonzero padding bits")
    return bits[:n].copy()


def symbols_to_text(symbols) -> str:
    return " ".join(format(int(s), "x") for s in np.asarray(symbols).reshape(-1))


def text_to_symbols(text: str) -> np.ndarray:
    try:
        return np.array([int(tok, 16) for tok in text.split()], dtype=np.int64)
    except ValueError:
        raise UsageError(f"not a list of hex symbols: {text[:40]!r}")


def indices_to_hex(indices, bound: int) -> str:
    """Fixed-width hex digits per index, wide enough for ``bound - 1``."""
    width = max(1, len(format(max(bound - 1, 0), "x")))
    return "".join(format(int(i), f"0{width}x") for i in indices)


def hex_to_indices(text: str, bound: int) -> np.ndarray:
    width = max(1, len(format(max(bound - 1, 0), "x")))
    text = text.strip()
    if len(text) % width:
        raise UsageError("index string length is not a multiple of the field width")
    try:
        return np.array([int(text[i: i + width], 16) for i in range(0, len(text), width)], dtype=np.int64)
    except ValueError:
        raise UsageError(f"not a hex string: {text[:40]!r}")
