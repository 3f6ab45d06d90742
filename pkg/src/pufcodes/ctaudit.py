"""Operation-count audits for the decoders.

An audit runs one decoder configuration over many generated inputs, each
inside its own counting context, and passes iff every report is identical.
:func:`predict_counts` gives the same numbers in closed form for the GS
decoder so that audits can also be checked against the formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._rng import as_rng
from .concat import ConcatSpec, concat_decode, concat_encode, radius_rule
from .exceptions import UsageError
from .gf2m import DTYPE
from .gsdecoder import GsParams, decode_list, select_params_nk
from .opcount import OpCountReport, counting
from .rmcode import RmSpec, ml_decode_batch
from .rscode import RsSpec, Word, encode_many, is_codeword

INPUT_CLASSES = ("uniform", "near-codeword", "all-zero", "all-max", "undecodable")


@dataclass
class AuditVerdict:
    label: str
    reports: list
    divergent: Optional[tuple] = None
    predicted: Optional[OpCountReport] = None

    @property
    def passed(self) -> bool:
        if self.divergent is not None:
            return False
        return self.predicted is None or not self.reports or self.reports[0].as_tuple() == self.predicted.as_tuple()

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def lines(self):
        out = [f"run={i} {rep.line()}" for i, rep in enumerate(self.reports)]
        if self.predicted is not None:
            out.append(f"predicted {self.predicted.line()}")
        if self.divergent is not None:
            i, j = self.divergent
            out.append(f"divergent runs {i} and {j}")
        out.append(f"verdict={self.verdict}")
        return out


@dataclass
class AuditTarget:
    """A decoder closure plus the generator of its inputs."""

    label: str
    decode: Callable
    generate: Callable
    predicted: Optional[OpCountReport] = field(default=None)


def audit(target: AuditTarget, runs: int = 100, seed=None) -> AuditVerdict:
    """Run ``target`` on ``runs`` inputs; PASS iff all op-count vectors agree."""
    if runs < 2:
        raise UsageError("an audit needs at least two runs")
    rng = as_rng(seed)
    reports = []
    divergent = None
    for i in range(runs):
        x = target.generate(rng, i)
        with counting() as rep:
            target.decode(x, rng)
        reports.append(rep)
        if divergent is None and rep.as_tuple() != reports[0].as_tuple():
            divergent = (0, i)
    return AuditVerdict(target.label, reports, divergent, target.predicted)


# -- input generators --------------------------------------------------------


def _weight_error(rng, n, weight, q, avoid=None):
    pool = np.arange(n) if avoid is None else np.flatnonzero(~avoid)
    weight = min(weight, pool.size)
    e = np.zeros(n, dtype=DTYPE)
    where = rng.choice(pool, weight, replace=False)
    e[where] = rng.integers(1, q, weight, dtype=DTYPE)
    return e


def rs_inputs(spec: RsSpec, tau: int, erasures: int) -> Callable:
    """Cycle through the input classes; each word carries exactly ``erasures`` erasures."""
    q = spec.field.order

    def gen(rng, i):
        erased = np.zeros(spec.n, dtype=bool)
        erased[rng.choice(spec.n, erasures, replace=False)] = True
        kind = INPUT_CLASSES[i % len(INPUT_CLASSES)]
        if kind == "uniform":
            sym = rng.integers(0, q, spec.n, dtype=DTYPE)
        elif kind == "all-zero":
            sym = np.zeros(spec.n, dtype=DTYPE)
        elif kind == "all-max":
            sym = np.full(spec.n, q - 1, dtype=DTYPE)
        else:
            c = encode_many(spec, rng.integers(0, q, (1, spec.k), dtype=DTYPE))[0]
            t = int(rng.integers(0, tau + 1)) if kind == "near-codeword" else spec.n - spec.k
            sym = c ^ _weight_error(rng, spec.n, t, q, erased)
        return Word(sym, erased)

    return gen


def rm_inputs(spec: RmSpec) -> Callable:
    def gen(rng, i):
        kind = INPUT_CLASSES[i % len(INPUT_CLASSES)]
        if kind == "all-zero":
            return np.zeros(spec.n, dtype=np.uint8)
        if kind == "all-max":
            return np.ones(spec.n, dtype=np.uint8)
        if kind == "uniform":
            return rng.integers(0, 2, spec.n).astype(np.uint8)
        c = spec.codebook[rng.integers(0, 1 << spec.k)]
        w = int(rng.integers(0, spec.d // 2 + 1)) if kind == "near-codeword" else spec.d // 2
        e = np.zeros(spec.n, dtype=np.uint8)
        e[rng.choice(spec.n, w, replace=False)] = 1
        return c ^ e

    return gen


def concat_inputs(spec: ConcatSpec) -> Callable:
    def gen(rng, i):
        kind = INPUT_CLASSES[i % len(INPUT_CLASSES)]
        if kind == "all-zero":
            return np.zeros(spec.n, dtype=np.uint8)
        if kind == "all-max":
            return np.ones(spec.n, dtype=np.uint8)
        if kind == "uniform":
            return rng.integers(0, 2, spec.n).astype(np.uint8)
        msg = rng.integers(0, spec.outer.field.order, spec.outer.k)
        c = concat_encode(spec, msg).reshape(-1)
        p = 0.03 if kind == "near-codeword" else 0.3
        return c ^ (rng.random(spec.n) < p).astype(np.uint8)

    return gen


# -- targets -----------------------------------------------------------------


def gs_target(spec: RsSpec, tau: int, erasures: int = 0, strict: bool = False) -> AuditTarget:
    """GS list decoding at radius ``tau`` on words with ``erasures`` erasures."""
    n_params = spec.n if strict else spec.n - erasures
    params = select_params_nk(n_params, spec.k, tau)
    return AuditTarget(
        f"gs rs({spec.n},{spec.k}) tau={tau} erasures={erasures} strict={strict}",
        lambda w, rng: decode_list(spec, params, w, seed=rng, strict=strict),
        rs_inputs(spec, tau, erasures),
        predict_counts(spec, params, erasures, strict))


def rm_target(spec: RmSpec) -> AuditTarget:
    return AuditTarget(
        f"ml rm({spec.r},{spec.m})",
        lambda x, rng: ml_decode_batch(spec, x[None], rng),
        rm_inputs(spec),
        predict_rm_counts(spec, 1))


def concat_target(spec: ConcatSpec, tau=None, strict: bool = True) -> AuditTarget:
    """Full concatenated decode; with ``strict`` the class is (spec, tau) alone."""
    predicted = None
    if strict:
        radius = radius_rule(tau)(spec.outer.n, spec.outer.k)
        params = select_params_nk(spec.outer.n, spec.outer.k, radius)
        predicted = predict_counts(spec.outer, params, 0, True)
        predicted.merge(predict_rm_counts(spec.inner, spec.outer.n))
    return AuditTarget(
        f"concat n={spec.n} k={spec.k} tau={tau} strict={strict}",
        lambda x, rng: concat_decode(spec, x, tau=tau, seed=rng, strict=strict),
        concat_inputs(spec),
        predicted)


def leaky_decode(spec: RsSpec, params: GsParams, word: Word, seed=None):
    """Negative control: returns early when the word is already a codeword."""
    if word.n_erased == 0 and is_codeword(spec, word):
        return word
    return decode_list(spec, params, word, seed=seed)


def leaky_target(spec: RsSpec, tau: int) -> AuditTarget:
    params = select_params_nk(spec.n, spec.k, tau)
    return AuditTarget(
        f"leaky rs({spec.n},{spec.k}) tau={tau}",
        lambda w, rng: leaky_decode(spec, params, w, rng),
        rs_inputs(spec, tau, 0))


# -- closed forms ------------------------------------------------------------


def predict_counts(spec: RsSpec, params: GsParams, erasures: int = 0, strict: bool = False) -> OpCountReport:
    """Op counts of one GS decode, from the shapes alone.

    ``P`` interpolation points (n, or n - erasures without ``strict``) give an
    R x C system with R = P s(s+1)/2; elimination costs a fixed polynomial in
    (R, C); the root finder runs k depths of ``list_width`` slots.
    """
    P = spec.n if strict else spec.n - erasures
    if params.n != P:
        raise UsageError(f"params were derived for {params.n} points, expected {P}")
    s, ell, k = params.s, params.l, spec.k
    q = spec.field.order
    D = params.d_eta[0]
    R = P * s * (s + 1) // 2
    C = params.unknowns
    L1 = ell + 1
    width = params.list_width
    rep = OpCountReport()
    # constraint matrix: powers of alpha and r, then two products per entry
    rep.muls += P * D + P * ell + 2 * R * C
    # elimination with a zero scratch row
    rep.adds += C * (C + (R + 1) * C)
    rep.muls += C * (2 * C + (R + 1) + (R + 1) * C)
    rep.invs += C
    # root finding: root scan of Q, then k shift steps (root scans between)
    rep.muls += (L1 - 1) * q
    rep.adds += (L1 - 1) * q
    W = D + 1
    for depth in range(1, k + 1):
        rep.muls += width * (ell + L1 * L1 + L1 * L1 * W)
        rep.adds += width * L1 * ell * W
        W += ell
        if depth < k:
            rep.muls += (L1 - 1) * width * q
            rep.adds += (L1 - 1) * width * q
    rep.rr_calls += k * width
    # re-encoding every slot at the interpolation points
    rep.muls += (k - 1) * width * P
    rep.adds += (k - 1) * width * P
    return rep


def predict_rm_counts(spec: RmSpec, blocks: int) -> OpCountReport:
    """Packed-word operations of the full-scan ML decoder over ``blocks`` rows."""
    K = 1 << spec.k
    return OpCountReport(bit_ops=blocks * (2 * K * spec.n_words + 2 * K))
