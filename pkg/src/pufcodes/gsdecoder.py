"""Guruswami-Sudan list decoding with input-independent operation counts.

Interpolation solves the full linear system by Gaussian elimination in which
every column triggers the same row operations, whether or not the entries
involved are zero. Root finding is a breadth-first Roth-Ruckenstein search
whose list is topped up with random slots to a fixed width ``l*(k-1)`` at each
depth, so the number of steps never depends on the received word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from ._rng import as_rng
from .exceptions import (InternalSolvabilityViolation, RadiusTooLarge, UsageError,
                         ZeroPolynomial)
from ._kernels import eliminate
from .gf2m import DTYPE, FieldSpec
from .opcount import OpCountReport, counting, tally
from .polyring import BivarPoly, UniPoly, binom_parity, horner, shift_substitute_batch, strip_batch
from .rscode import RsSpec, Word


def johnson_ok(n: int, k: int, tau: int) -> bool:
    """tau < n - sqrt(n(k-1)), in exact integer arithmetic."""
    return 0 <= tau < n and (n - tau) ** 2 > n * (k - 1)


def max_list_radius(n: int, k: int) -> int:
    """Largest tau below the Johnson-type bound, or -1 if there is none."""
    if n <= 0:
        return -1
    tau = n - isqrt(n * (k - 1)) - 1
    return tau if johnson_ok(n, k, tau) else -1


def unique_radius(n: int, k: int) -> int:
    return (n - k) // 2 if n >= k else -1


@dataclass(frozen=True)
class GsParams:
    """Interpolation parameters for ``n`` points (the effective length)."""

    tau: int
    s: int
    l: int
    n: int
    k: int
    d_eta: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "d_eta", tuple(
            self.s * (self.n - self.tau) - 1 - eta * (self.k - 1) for eta in range(self.l + 1)))

    @property
    def unknowns(self) -> int:
        return sum(d + 1 for d in self.d_eta)

    @property
    def constraints(self) -> int:
        return self.n * self.s * (self.s + 1) // 2

    @property
    def list_width(self) -> int:
        """Fixed number of root-finder slots per depth."""
        width = self.l * (self.k - 1)
        return width if width > 0 else max(self.l, 1)

    def validate(self) -> "GsParams":
        if not johnson_ok(self.n, self.k, self.tau):
            raise RadiusTooLarge(
                f"tau={self.tau} is not below n - sqrt(n(k-1)) for n={self.n}, k={self.k}")
        if self.s < 1 or self.l < 0:
            raise UsageError("need s >= 1 and l >= 0")
        if min(self.d_eta) < 0:
            raise UsageError(f"degree cap d_{self.l} is negative for s={self.s}, l={self.l}")
        if self.unknowns <= self.constraints:
            raise UsageError(
                f"(s={self.s}, l={self.l}) gives {self.unknowns} unknowns for {self.constraints} constraints")
        return self


def gs_params(n: int, k: int, tau: int, s: int, l: int) -> GsParams:
    return GsParams(tau, s, l, n, k).validate()


def select_params_nk(n: int, k: int, tau: int) -> GsParams:
    if not johnson_ok(n, k, tau):
        raise RadiusTooLarge(
            f"tau={tau} is not below n - sqrt(n(k-1)) = {n - (n * (k - 1)) ** 0.5:.3f} "
            f"(n={n}, k={k})")
    s = 1
    while True:
        budget = n * s * (s + 1) // 2
        total = 0
        l = 0
        while True:
            d = s * (n - tau) - 1 - l * (k - 1)
            if d < 0:
                break
            total += d + 1
            if total > budget:
                return GsParams(tau, s, l, n, k)
            l += 1
        s += 1


def select_params(spec: RsSpec, tau: int) -> GsParams:
    """Smallest multiplicity s, then smallest list size l, for radius ``tau``."""
    return select_params_nk(spec.n, spec.k, tau)


@dataclass
class DecodeResult:
    candidates: list
    op_report: OpCountReport
    params: GsParams = None
    word: Word = None

    @property
    def messages(self):
        return [f for f, _ in self.candidates]

    def __len__(self):
        return len(self.candidates)


# -- interpolation -----------------------------------------------------------


def _positions(spec: RsSpec, r: Word, strict: bool):
    if strict:
        pos = np.arange(spec.n)
    else:
        pos = np.flatnonzero(~r.erased)
    return pos, (~r.erased[pos]).astype(DTYPE)


def constraint_matrix(spec: RsSpec, params: GsParams, r: Word, strict: bool = False) -> np.ndarray:
    """Rows: (position, h, j) with h + j < s; columns: (eta, mu) eta-major."""
    fld = spec.field
    pos, valid = _positions(spec, r, strict)
    alphas = spec.locators[pos]
    values = r.symbols[pos]
    P = pos.size
    s, ell = params.s, params.l
    D = params.d_eta[0]

    apow = np.ones((P, D + 1), dtype=DTYPE)
    for e in range(1, D + 1):
        apow[:, e] = fld.mul(apow[:, e - 1], alphas)
    rpow = np.ones((P, ell + 1), dtype=DTYPE)
    for e in range(1, ell + 1):
        rpow[:, e] = fld.mul(rpow[:, e - 1], values)

    hj = np.array([(h, j) for h in range(s) for j in range(s - h)], dtype=np.int64)
    h, j = hj[:, 0:1], hj[:, 1:2]
    cols = np.array([(eta, mu) for eta, d in enumerate(params.d_eta) for mu in range(d + 1)],
                    dtype=np.int64)
    eta, mu = cols[None, :, 0], cols[None, :, 1]

    parity = binom_parity(eta, h) & binom_parity(mu, j)  # (rows per point, C)
    a_part = apow[:, np.clip(mu - j, 0, None)]
    r_part = rpow[:, np.clip(eta - h, 0, None)]
    mask = parity[None, :, :] * valid[:, None, None]
    A = fld.mul(fld.mul(a_part, r_part), mask)
    return A.reshape(P * hj.shape[0], cols.shape[0])


def _eliminate_numpy(fld: FieldSpec, M: np.ndarray, pivot_row: np.ndarray) -> None:
    R1, C = M.shape
    R = R1 - 1
    rows = np.arange(R1)
    p = 0
    for col in range(C):
        below = (M[:, col] != 0) & (rows > p)
        sel = int(np.argmax(below)) if below.any() else R
        # multiplications by the 0/1 flags below are field products too
        need = DTYPE(M[p, col] == 0)
        M[p] ^= need * M[sel]
        nz = bool(M[p, col] != 0)
        pinv = fld._inv_raw(np.asarray(M[p, col] if nz else 1, dtype=DTYPE))
        M[p] = fld._mul_raw(M[p], pinv)
        factors = M[:, col] * DTYPE(nz)
        factors[p] = 0
        M ^= fld._outer_raw(factors, M[p])
        pivot_row[col] = p if nz else -1
        p += int(nz)


def kernel_vector(fld: FieldSpec, A: np.ndarray) -> np.ndarray:
    """A nonzero v with A v = 0, from the first non-pivot column.

    Each column costs the same: one conditional row swap-in (as a masked row
    addition), one normalisation, one elimination pass over every row.
    """
    R, C = A.shape
    M = np.zeros((R + 1, C), dtype=DTYPE)  # row R stays zero
    M[:R] = A
    pivot_row = np.full(C, -1)
    if fld.has_tables:
        eliminate(fld, M, pivot_row)
    else:
        _eliminate_numpy(fld, M, pivot_row)
    tally(adds=C * (C + (R + 1) * C), muls=C * (2 * C + (R + 1) + (R + 1) * C), invs=C)
    free = np.flatnonzero(pivot_row < 0)
    if free.size == 0:
        raise InternalSolvabilityViolation("constraint matrix has full column rank")
    f = free[0]
    v = np.zeros(C, dtype=DTYPE)
    v[f] = 1
    pc = np.flatnonzero(pivot_row >= 0)
    v[pc] = M[pivot_row[pc], f]
    return v


def interpolate(spec: RsSpec, params: GsParams, r: Word, strict: bool = False) -> BivarPoly:
    """Nonzero Q(x, y) through the non-erased points with multiplicity s.

    Without ``strict`` the params must be those of the effective length
    n - (erasures); with ``strict`` they are the full-length params and erased
    points contribute all-zero constraint rows.
    """
    expected = spec.n if strict else spec.n - r.n_erased
    if params.n != expected:
        raise UsageError(f"params were derived for {params.n} points, word has {expected}")
    A = constraint_matrix(spec, params, r, strict)
    v = kernel_vector(spec.field, A)
    rows = np.zeros((params.l + 1, params.d_eta[0] + 1), dtype=DTYPE)
    at = 0
    for eta, d in enumerate(params.d_eta):
        rows[eta, : d + 1] = v[at: at + d + 1]
        at += d + 1
    return BivarPoly(spec.field, rows, params.d_eta)


# -- root finding ------------------------------------------------------------


def _roots_mask(fld: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Evaluate every slot's p(y) = M(0, y) at all field elements."""
    vals = horner(fld, M[:, None, :, 0], fld.elements()[None, :])
    return vals == 0


def roth_ruckenstein(fld: FieldSpec, Q_rows: np.ndarray, k: int, ell: int, width: int, rng):
    """Breadth-first root search with fixed list width.

    Returns ``(G, real, is_root)``: the (width, k) candidate coefficients of
    the final depth, which slots descend from genuine roots, and which of
    those satisfy (y - g(x)) | Q(x, y).
    """
    q = fld.order
    L1 = ell + 1
    M, _ = strip_batch(np.asarray(Q_rows, dtype=DTYPE)[None])
    roots = _roots_mask(fld, M)
    G = np.zeros((1, k), dtype=DTYPE)
    real = np.ones(1, dtype=bool)

    for depth in range(1, k + 1):
        picks = [(slot, gamma) for slot in np.flatnonzero(real)
                 for gamma in np.flatnonzero(roots[slot])]
        if len(picks) > width:
            raise InternalSolvabilityViolation(
                f"{len(picks)} partial roots at depth {depth} exceed list width {width}")
        n_real = len(picks)
        n_pad = width - n_real
        src = np.array([s for s, _ in picks], dtype=np.int64)
        W = M.shape[2]

        parents = np.empty((width, L1, W), dtype=DTYPE)
        parents[:n_real] = M[src]
        parents[n_real:] = rng.integers(0, q, (n_pad, L1, W), dtype=DTYPE)
        gammas = np.empty(width, dtype=DTYPE)
        gammas[:n_real] = [g for _, g in picks]
        gammas[n_real:] = rng.integers(0, q, n_pad, dtype=DTYPE)
        G_next = np.zeros((width, k), dtype=DTYPE)
        G_next[:n_real] = G[src]
        G_next[:n_real, depth - 1] = gammas[:n_real]
        G_next[n_real:, :depth] = rng.integers(0, q, (n_pad, depth), dtype=DTYPE)

        tally(rr_calls=width)
        M, _ = strip_batch(shift_substitute_batch(fld, parents, gammas))
        G = G_next
        real = np.arange(width) < n_real
        if depth < k:
            roots = _roots_mask(fld, M)

    is_root = ~np.any(M[:, 0, :], axis=1)
    return G, real, is_root


def root_find(Q: BivarPoly, spec: RsSpec, params: GsParams = None, seed=None) -> list:
    """All f with deg f < k and (y - f(x)) | Q(x, y), sorted by coefficients."""
    if Q.is_zero():
        raise ZeroPolynomial("root finding needs a nonzero polynomial")
    ell = Q.y_degree_cap
    k = spec.k
    width = params.list_width if params is not None else (ell * (k - 1) or max(ell, 1))
    G, real, is_root = roth_ruckenstein(spec.field, Q.rows, k, ell, width, as_rng(seed))
    found = [UniPoly(spec.field, G[i]) for i in np.flatnonzero(real & is_root)]
    return sorted(found, key=lambda f: f.key())


# -- decoding ----------------------------------------------------------------


def _decode(spec: RsSpec, params: GsParams, r: Word, rng, strict: bool) -> DecodeResult:
    if len(r) != spec.n:
        raise UsageError(f"received word has length {len(r)}, code length is {spec.n}")
    fld = spec.field
    with counting() as report:
        Q = interpolate(spec, params, r, strict)
        G, real, is_root = roth_ruckenstein(fld, Q.rows, spec.k, params.l, params.list_width, rng)
        pos, valid = _positions(spec, r, strict)
        enc = horner(fld, G[:, None, :], spec.locators[pos][None, :])
        dist = ((enc != r.symbols[pos][None, :]) & valid.astype(bool)[None, :]).sum(axis=1)
        keep = real & is_root & (dist <= params.tau)
    cands = [(UniPoly(fld, G[i]), int(dist[i])) for i in np.flatnonzero(keep)]
    cands.sort(key=lambda c: (c[1], c[0].key()))
    return DecodeResult(cands, report, params)


def decode_list(spec: RsSpec, params: GsParams, r: Word, seed=None, strict: bool = False) -> DecodeResult:
    """List of all message polynomials within ``params.tau`` of ``r``.

    Distances are counted over non-erased positions. Without ``strict``,
    params are re-derived for the effective length when ``r`` has erasures.
    """
    rng = as_rng(seed)
    eps = r.n_erased
    if strict:
        if params.n != spec.n:
            raise UsageError("strict mode needs params derived for the full length")
    elif params.n != spec.n - eps:
        params = select_params_nk(spec.n - eps, spec.k, params.tau)
    return _decode(spec, params, r, rng, strict)


def decode_unique(spec: RsSpec, r: Word, seed=None) -> DecodeResult:
    """Bounded-distance decoding (s = l = 1) up to floor((d - 1 - erasures) / 2)."""
    n_eff = spec.n - r.n_erased
    tau = unique_radius(n_eff, spec.k)
    if tau < 0:
        raise RadiusTooLarge(f"{r.n_erased} erasures leave fewer than k={spec.k} positions")
    return _decode(spec, gs_params(n_eff, spec.k, tau, 1, 1), r, as_rng(seed), strict=False)
