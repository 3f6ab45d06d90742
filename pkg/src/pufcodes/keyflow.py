"""Code-offset key generation and reproduction on a concatenated code.

Enrollment stores ``w = r + c`` for a random codeword ``c``. Reproduction
hands ``r' + w = c + e`` to the decoder, optionally masked first: a fresh random
codeword is added, or the outer positions are permuted (the decoder is then
given the permuted locators). The nearest candidate is unmasked and ``w``
is added back to obtain the response.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._rng import as_rng
from .concat import ConcatSpec, concat_decode, concat_encode
from .exceptions import RadiusTooLarge, UsageError
from .gf2m import DTYPE
from .hexio import bits_to_hex, hex_to_bits, hex_to_indices, indices_to_hex
from .opcount import OpCountReport

MASK_KINDS = ("none", "codeword", "permutation")


def identity_digest(response: np.ndarray) -> bytes:
    """Default key derivation: the response itself, packed MSB-first."""
    return np.packbits(np.asarray(response, dtype=np.uint8), bitorder="big").tobytes()


def _mask_kind(kind) -> str:
    kind = "none" if kind is None else str(kind).lower()
    if kind not in MASK_KINDS:
        raise UsageError(f"mask must be one of {MASK_KINDS}, got {kind!r}")
    return kind


def _bits(spec: ConcatSpec, v, what: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.uint8).reshape(-1)
    if arr.size != spec.n:
        raise UsageError(f"{what} must have {spec.n} bits, got {arr.size}")
    if np.any(arr > 1):
        raise UsageError(f"{what} must be a 0/1 vector")
    return arr


def random_concat_codeword(spec: ConcatSpec, rng) -> np.ndarray:
    msg = rng.integers(0, spec.outer.field.order, spec.outer.k, dtype=DTYPE)
    return concat_encode(spec, msg).reshape(-1)


@dataclass(frozen=True, eq=False)
class HelperBundle:
    helper: np.ndarray
    mask_kind: str = "none"
    mask_codeword: Optional[np.ndarray] = field(default=None, repr=False)
    mask_permutation: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        kind = _mask_kind(self.mask_kind)
        object.__setattr__(self, "mask_kind", kind)
        object.__setattr__(self, "helper", np.asarray(self.helper, dtype=np.uint8).reshape(-1))
        if (kind == "codeword") != (self.mask_codeword is not None):
            raise UsageError("a codeword mask is required exactly when mask_kind is 'codeword'")
        if (kind == "permutation") != (self.mask_permutation is not None):
            raise UsageError("a permutation is required exactly when mask_kind is 'permutation'")

    def __eq__(self, other):
        if not isinstance(other, HelperBundle) or other.mask_kind != self.mask_kind:
            return False
        same = lambda a, b: (a is None and b is None) or (a is not None and b is not None and np.array_equal(a, b))
        return (np.array_equal(self.helper, other.helper) and same(self.mask_codeword, other.mask_codeword)
                and same(self.mask_permutation, other.mask_permutation))

    def check(self, spec: ConcatSpec) -> "HelperBundle":
        _bits(spec, self.helper, "helper data")
        if self.mask_codeword is not None:
            _bits(spec, self.mask_codeword, "codeword mask")
        if self.mask_permutation is not None:
            perm = np.asarray(self.mask_permutation)
            if not np.array_equal(np.sort(perm), np.arange(spec.outer.n)):
                raise UsageError(f"mask permutation must permute {spec.outer.n} positions")
        return self

    def to_text(self) -> str:
        lines = [f"helper={bits_to_hex(self.helper)}", f"mask={self.mask_kind}"]
        if self.mask_codeword is not None:
            lines.append(f"mask_data={bits_to_hex(self.mask_codeword)}")
        if self.mask_permutation is not None:
            lines.append(f"mask_data={indices_to_hex(self.mask_permutation, self.mask_permutation.size)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, spec: ConcatSpec) -> "HelperBundle":
        kv = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"expected key=value, got {line!r}")
            kv[key.strip()] = value.strip()
        if "helper" not in kv:
            raise UsageError("helper bundle has no helper= line")
        kind = _mask_kind(kv.get("mask", "none"))
        helper = hex_to_bits(kv["helper"], spec.n)
        cw = perm = None
        if kind != "none" and "mask_data" not in kv:
            raise UsageError(f"mask={kind} needs a mask_data= line")
        if kind == "codeword":
            cw = hex_to_bits(kv["mask_data"], spec.n)
        elif kind == "permutation":
            perm = hex_to_indices(kv["mask_data"], spec.outer.n)
        return cls(helper, kind, cw, perm).check(spec)


@dataclass(frozen=True, eq=False)
class DecoderInput:
    """What the decoder sees, plus the mask needed to undo it."""

    bits: np.ndarray
    mask_kind: str = "none"
    mask_codeword: Optional[np.ndarray] = None
    mask_permutation: Optional[np.ndarray] = None


@dataclass
class ReproductionOutcome:
    recovered_response: Optional[np.ndarray]
    key: Optional[bytes]
    op_report: OpCountReport
    failure: Optional[str] = None
    n_candidates: int = 0

    @property
    def ok(self) -> bool:
        return self.failure is None


def enroll(spec: ConcatSpec, response, seed=None, mask: str = "none") -> HelperBundle:
    """Draw a uniform codeword c and store w = r + c (plus mask material)."""
    rng = as_rng(seed)
    r = _bits(spec, response, "response")
    c = random_concat_codeword(spec, rng)
    kind = _mask_kind(mask)
    cw = random_concat_codeword(spec, rng) if kind == "codeword" else None
    perm = rng.permutation(spec.outer.n) if kind == "permutation" else None
    return HelperBundle(r ^ c, kind, cw, perm)


def preprocess_classical(bundle: HelperBundle, noisy_response) -> np.ndarray:
    r = np.asarray(noisy_response, dtype=np.uint8).reshape(-1)
    if r.size != bundle.helper.size:
        raise UsageError(f"response has {r.size} bits, helper data has {bundle.helper.size}")
    return r ^ bundle.helper


def preprocess_masked(spec: ConcatSpec, bundle: HelperBundle, noisy_response, seed=None,
                      mask: str = None) -> DecoderInput:
    """Mask ``c + e`` with material drawn fresh for this call.

    ``mask`` overrides the bundle's mask kind.
    """
    kind = bundle.mask_kind if mask is None else _mask_kind(mask)
    if kind == "none":
        raise UsageError("preprocess_masked needs a mask kind")
    rng = as_rng(seed)
    x = preprocess_classical(bundle, noisy_response)
    if kind == "codeword":
        cw = random_concat_codeword(spec, rng)
        return DecoderInput(x ^ cw, "codeword", mask_codeword=cw)
    perm = rng.permutation(spec.outer.n)
    blocks = x.reshape(spec.shape)[perm]
    return DecoderInput(blocks.reshape(-1), "permutation", mask_permutation=perm)


def _select(cands):
    """Nearest candidate, or None when the two nearest tie."""
    if not cands:
        return None, "empty list"
    if len(cands) > 1 and cands[0][1] == cands[1][1]:
        return None, "distance tie between candidates"
    return cands[0][0], None


def reproduce(spec: ConcatSpec, bundle: HelperBundle, noisy_response, tau=None, seed=None,
              digest: Callable[[np.ndarray], bytes] = identity_digest,
              strict: bool = False, mask: str = None) -> ReproductionOutcome:
    """Recover the enrolled response from a noisy re-measurement.

    ``mask`` overrides the bundle's mask kind. Decoder failures and
    candidate ties are reported in ``failure``; they never raise.
    """
    rng = as_rng(seed)
    kind = bundle.mask_kind if mask is None else _mask_kind(mask)
    if kind == "none":
        inp = DecoderInput(preprocess_classical(bundle, noisy_response))
    else:
        inp = preprocess_masked(spec, bundle, noisy_response, rng, kind)
    dspec = spec
    if inp.mask_kind == "permutation":
        dspec = ConcatSpec(spec.inner, spec.outer.with_locators(spec.outer.locators[inp.mask_permutation]))
    try:
        result = concat_decode(dspec, inp.bits, tau=tau, seed=rng, strict=strict)
    except RadiusTooLarge as exc:
        return ReproductionOutcome(None, None, OpCountReport(), f"no decoding radius: {exc}")
    f, why = _select(result.candidates)
    if f is None:
        return ReproductionOutcome(None, None, result.op_report, why, len(result))
    # re-encoding with the original locators undoes a position permutation
    c_hat = concat_encode(spec, f).reshape(-1)
    if inp.mask_kind == "codeword":
        c_hat = c_hat ^ inp.mask_codeword
    response = c_hat ^ bundle.helper
    return ReproductionOutcome(response, digest(response), result.op_report, None, len(result))
