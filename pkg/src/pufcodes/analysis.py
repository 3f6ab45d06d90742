"""Channel models, failure-rate formulas, finite-length rate bounds and
exhaustive entropy oracles."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._rng import as_rng
from .concat import radius_rule
from .exceptions import InstanceTooLarge, UsageError
from .rmcode import ERASURE, RmSpec, ml_decode_batch

MC_CHUNK = 1 << 16
MAX_ENUMERATION = 1 << 24


@dataclass(frozen=True)
class BscModel:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p < 0.5:
            raise UsageError(f"crossover probability must be in [0, 0.5), got {self.p}")


def _model(model) -> BscModel:
    return model if isinstance(model, BscModel) else BscModel(float(model))


@dataclass(frozen=True)
class InnerChannel:
    """Symbol error/erasure channel seen by the outer decoder."""

    p_error: float
    p_erasure: float
    trials: Optional[int] = None

    def __post_init__(self):
        if self.p_error < 0 or self.p_erasure < 0 or self.p_error + self.p_erasure > 1 + 1e-12:
            raise UsageError(f"invalid channel pe={self.p_error}, pz={self.p_erasure}")

    @property
    def stderr_error(self) -> float:
        return _stderr(self.p_error, self.trials)

    @property
    def stderr_erasure(self) -> float:
        return _stderr(self.p_erasure, self.trials)

    def line(self) -> str:
        out = f"pe={self.p_error:.6f} pz={self.p_erasure:.6f}"
        if self.trials:
            out += f" se_pe={self.stderr_error:.2e} se_pz={self.stderr_erasure:.2e} trials={self.trials}"
        return out


def _stderr(p, trials):
    if not trials:
        return 0.0
    return math.sqrt(p * (1 - p) / trials)


# -- sampling and inner channel ---------------------------------------------


def bsc_sample(model, length, seed=None) -> np.ndarray:
    """Independent Bernoulli(p) bits; ``length`` may be an int or a shape."""
    p = _model(model).p
    return (as_rng(seed).random(length) < p).astype(np.uint8)


def _inner_counts(spec: RmSpec, p: float, trials: int, seed) -> tuple:
    rng = as_rng(seed)
    errors = erasures = 0
    left = trials
    while left:
        b = min(left, MC_CHUNK)
        # the zero codeword suffices by linearity
        noise = (rng.random((b, spec.n)) < p).astype(np.uint8)
        dec = ml_decode_batch(spec, noise, permute=False)
        erasures += int(np.count_nonzero(dec == ERASURE))
        errors += int(np.count_nonzero(dec > 0))
        left -= b
    return errors, erasures


def inner_channel_mc(spec: RmSpec, model, trials: int, seed=None, jobs: int = 1) -> InnerChannel:
    """Monte Carlo estimate of (pe, pz) for ML decoding of ``spec`` over a BSC.

    With ``jobs > 1`` the trials are split over independent child streams
    and worker processes; the result then depends on ``jobs`` as well.
    """
    if trials < 1:
        raise UsageError("need at least one trial")
    p = _model(model).p
    rng = as_rng(seed)
    if jobs <= 1:
        errors, erasures = _inner_counts(spec, p, trials, rng)
    else:
        shares = [trials // jobs + (i < trials % jobs) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_inner_counts, [spec] * jobs, [p] * jobs, shares, rng.spawn(jobs)))
        errors = sum(e for e, _ in parts)
        erasures = sum(z for _, z in parts)
    return InnerChannel(errors / trials, erasures / trials, trials)


def inner_channel_exact(spec: RmSpec, model) -> InnerChannel:
    """Exact (pe, pz) by enumerating all 2^n error patterns (n <= 20)."""
    if spec.n > 20:
        raise InstanceTooLarge(f"2^{spec.n} error patterns is too many to enumerate")
    p = _model(model).p
    pats = ((np.arange(1 << spec.n)[:, None] >> np.arange(spec.n)) & 1).astype(np.uint8)
    w = pats.sum(axis=1)
    prob = p ** w * (1 - p) ** (spec.n - w)
    dec = ml_decode_batch(spec, pats, permute=False)
    return InnerChannel(float(prob[dec > 0].sum()), float(prob[dec == ERASURE].sum()))


# -- outer failure rates -----------------------------------------------------


def _log_binom_pmf(n: int, ks: np.ndarray, p: float) -> np.ndarray:
    ks = np.asarray(ks, dtype=np.float64)
    logc = np.array([math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) for k in ks])
    with np.errstate(divide="ignore"):
        lp = np.log(p) if p > 0 else -np.inf
        lq = np.log1p(-p) if p < 1 else -np.inf
    with np.errstate(invalid="ignore"):
        a = np.where(ks > 0, ks * lp, 0.0)
        b = np.where(n - ks > 0, (n - ks) * lq, 0.0)
    return logc + a + b


def _logsumexp(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0 or np.all(np.isneginf(x)):
        return -np.inf
    top = x.max()
    return float(top + np.log(np.exp(x - top).sum()))


def log_block_error_probability(n: int, k: int, channel: InnerChannel, radius=None,
                                conditional: bool = True) -> float:
    """Natural log of :func:`block_error_probability`."""
    rule = radius_rule(radius)
    pe, pz = channel.p_error, channel.p_erasure
    if conditional:
        q = pe / (1 - pz) if pz < 1 else 0.0
    else:
        q = pe
    terms = []
    log_eps = _log_binom_pmf(n, np.arange(n + 1), pz)
    for i in range(n + 1):
        n_eff = n - i
        tau = rule(n_eff, k) if n_eff >= 1 else -1
        if tau < 0:
            terms.append(log_eps[i])
            continue
        ts = np.arange(tau + 1, n_eff + 1)
        if ts.size == 0:
            continue
        terms.append(log_eps[i] + _logsumexp(_log_binom_pmf(n_eff, ts, q)))
    return _logsumexp(terms)


def block_error_probability(n: int, k: int, channel: InnerChannel, radius=None,
                            conditional: bool = True) -> float:
    """Probability that an RS(n, k) list decoder fails behind an error/erasure channel.

    Positions are independent: erased with probability pz, otherwise wrong
    with probability pe / (1 - pz) (or plain pe with ``conditional=False``).
    With ``i`` erasures decoding succeeds iff the number of errors is at most
    the radius for length n - i; ``radius`` is None (largest list radius),
    a policy name, a callable of (length, k) or a fixed int.
    """
    return math.exp(log_block_error_probability(n, k, channel, radius, conditional))


def block_error_probability_unique(n: int, k: int, channel: InnerChannel,
                                   conditional: bool = True) -> float:
    """Same model with bounded-distance decoding: failure iff 2t + i >= n - k + 1."""
    return block_error_probability(n, k, channel, "unique", conditional)


# -- finite-length rates -----------------------------------------------------


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def capacity(model) -> float:
    p = model.p if isinstance(model, BscModel) else float(model)
    if not 0 <= p <= 0.5:
        raise UsageError(f"crossover probability must be in [0, 0.5], got {p}")
    return 1.0 - binary_entropy(p)


def dispersion(model) -> float:
    p = _model(model).p
    if p == 0:
        return 0.0
    return p * (1 - p) * math.log2((1 - p) / p) ** 2


def q_function(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2))


def q_inverse(y: float, tol: float = 1e-6) -> float:
    """Bisection on the Gaussian tail until the bracket is below ``tol``."""
    if not 0 < y < 1:
        raise UsageError(f"Q^-1 needs 0 < y < 1, got {y}")
    lo, hi = -40.0, 40.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if q_function(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def max_rate(n: int, model, p_err: float) -> float:
    """Normal approximation C - sqrt(V/n) Q^-1(P) + log2(n)/(2n)."""
    if not 0 < p_err < 1:
        raise UsageError("target error probability must be in (0, 1)")
    model = _model(model)
    return capacity(model) - math.sqrt(dispersion(model) / n) * q_inverse(p_err) + math.log2(n) / (2 * n)


@dataclass(frozen=True)
class RateRow:
    label: str
    n: int
    k: int
    p_err: float
    rate: float
    max_rate: float

    @property
    def ratio(self) -> float:
        return self.rate / self.max_rate


REFERENCE_ROWS = (
    ("BCH/Rep", 2226, 174, 1.0e-9),
    ("RS/RM unique", 1152, 132, 1.2e-10),
    ("RS/RM list", 1088, 132, 2.0e-10),
)


def rate_table(rows=REFERENCE_ROWS, model=0.14) -> list:
    return [RateRow(label, n, k, pe, k / n, max_rate(n, model, pe)) for label, n, k, pe in rows]


def format_rate_table(table) -> str:
    head = f"{'code':<14} {'P_err':>8} {'k':>4} {'n':>5} {'R':>7} {'R*':>7} {'R/R*':>7}"
    lines = [head]
    for row in table:
        lines.append(f"{row.label:<14} {row.p_err:>8.1e} {row.k:>4} {row.n:>5} "
                     f"{row.rate:>7.4f} {row.max_rate:>7.4f} {row.ratio:>7.4f}")
    return "\n".join(lines)


# -- exhaustive entropy oracles ----------------------------------------------


def _codewords(generator) -> np.ndarray:
    G = np.atleast_2d(np.asarray(generator, dtype=np.int64)) % 2
    k, n = G.shape
    msgs = ((np.arange(1 << k)[:, None] >> np.arange(k)) & 1)
    words = (msgs @ G) % 2
    ints = (words << np.arange(n)).sum(axis=1)
    return np.unique(ints), n


def _entropy(prob: np.ndarray) -> float:
    prob = prob[prob > 0]
    return float(-(prob * np.log2(prob)).sum())


def _joint_entropy(keys: np.ndarray, prob: np.ndarray) -> float:
    _, inv = np.unique(keys, return_inverse=True)
    return _entropy(np.bincount(inv.reshape(-1), weights=prob.reshape(-1)))


def entropy_bruteforce(generator, model, masking: str = None, include_decoder_input: bool = True) -> float:
    """H(r | observation) in bits for a uniform response and a binary linear code.

    The observation is ``w = r + c`` together with the decoder input
    ``x + e`` (unless ``include_decoder_input`` is False), where ``x`` is
    ``c`` unmasked, ``c' + c`` with codeword masking, or a uniformly
    permuted ``c + e`` with permutation masking. Every combination of r, c,
    mask and e is enumerated.
    """
    code, n = _codewords(generator)
    kind = "none" if masking is None else masking
    p = _model(model).p
    if kind == "none":
        masks = np.zeros(1, dtype=np.int64)
    elif kind == "codeword":
        masks = code
    elif kind == "permutation":
        masks = np.arange(math.factorial(n))
    else:
        raise UsageError(f"unknown masking {masking!r}")
    size = (1 << n) * code.size * masks.size * (1 << n)
    if size > MAX_ENUMERATION:
        raise InstanceTooLarge(f"enumeration of {size} cases exceeds {MAX_ENUMERATION}")

    r = np.arange(1 << n)[:, None, None, None]
    c = code[None, :, None, None]
    e = np.arange(1 << n)[None, None, None, :]
    wt = np.array([bin(v).count("1") for v in range(1 << n)])
    pe = (p ** wt * (1 - p) ** (n - wt))[None, None, None, :]
    prob = np.broadcast_to(pe / ((1 << n) * code.size * masks.size),
                           (1 << n, code.size, masks.size, 1 << n))
    w = r ^ c
    if kind == "permutation":
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        vals = np.arange(1 << n)
        bits = (vals[:, None] >> np.arange(n)) & 1
        permuted = (bits[:, perms] << np.arange(n)).sum(axis=-1).T  # (P, 2^n)
        x = permuted[masks[None, None, :, None], c ^ e]
    elif kind == "codeword":
        x = masks[None, None, :, None] ^ c ^ e
    else:
        x = c ^ e
    x = np.broadcast_to(x, prob.shape)
    w = np.broadcast_to(w, prob.shape)
    rr = np.broadcast_to(r, prob.shape)
    obs = (x << n) | w if include_decoder_input else w
    return _joint_entropy((rr << (2 * n)) | obs, prob) - _joint_entropy(obs, prob)


def distance_multiset_invariant(spec: RmSpec) -> bool:
    """For every received word y and codeword c', y and y + c' have the same
    multiset of distances to the code (checked exhaustively)."""
    if spec.n > 16:
        raise InstanceTooLarge("exhaustive check is limited to n <= 16")
    book = spec.codebook.astype(np.int64)
    ints = (book << np.arange(spec.n)).sum(axis=1)
    ys = np.arange(1 << spec.n)
    wt = np.array([bin(v).count("1") for v in range(1 << spec.n)])
    base = np.sort(wt[ys[:, None] ^ ints[None, :]], axis=1)
    for cw in ints:
        shifted = np.sort(wt[(ys ^ cw)[:, None] ^ ints[None, :]], axis=1)
        if not np.array_equal(base, shifted):
            return False
    return True
