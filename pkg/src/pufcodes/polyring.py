"""Dense univariate and bivariate polynomials over GF(2^m).

Polynomials carry a *capacity*: the number of coefficient slots that
arithmetic always touches, whatever the actual degree. The mathematical degree
is only computed on request and never steers the arithmetic kernels.

The ``*_batch`` kernels work on stacks of bivariate polynomials shaped
``(slots, y_degree + 1, x_width)``; the root finder drives them directly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .exceptions import FieldMismatchError, UsageError, ZeroPolynomial
from ._kernels import shift_tab
from .gf2m import DTYPE, FieldElement, FieldSpec
from .opcount import tally

#: degree reported for the zero polynomial
ZERO_DEGREE = -1


def binom_parity(a, b):
    """C(a, b) mod 2 by Lucas' theorem; 0 whenever b > a or b < 0."""
    a = np.asarray(a)
    b = np.asarray(b)
    return ((b >= 0) & (b <= a) & ((a & b) == b)).astype(DTYPE)


@dataclass(frozen=True, eq=False)
class UniPoly:
    field: FieldSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=DTYPE).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=DTYPE)
        if np.any(c >= self.field.order):
            raise UsageError("coefficient outside the field")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, field, capacity=0):
        return cls(field, np.zeros(capacity + 1, dtype=DTYPE))

    @classmethod
    def x(cls, field, capacity=1):
        c = np.zeros(max(capacity, 1) + 1, dtype=DTYPE)
        c[1] = 1
        return cls(field, c)

    @property
    def capacity(self) -> int:
        return self.coeffs.size - 1

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else ZERO_DEGREE

    def padded(self, capacity: int) -> "UniPoly":
        if capacity < self.degree:
            raise UsageError("capacity below the polynomial degree")
        c = np.zeros(capacity + 1, dtype=DTYPE)
        n = min(capacity + 1, self.coeffs.size)
        c[:n] = self.coeffs[:n]
        return UniPoly(self.field, c)

    def key(self):
        """Trimmed coefficient tuple, usable for sorting and set membership."""
        return tuple(int(v) for v in self.coeffs[: self.degree + 1])

    def __eq__(self, other):
        return isinstance(other, UniPoly) and other.field == self.field and other.key() == self.key()

    def __hash__(self):
        return hash((self.field, self.key()))

    def __repr__(self):
        return f"UniPoly({list(self.key())})"

    def __call__(self, a):
        return eval_poly(self, a)


def horner(field: FieldSpec, coeffs: np.ndarray, points) -> np.ndarray:
    """Evaluate ``coeffs[..., :]`` (last axis = degree) at ``points``.

    Leading batch axes of ``coeffs`` broadcast against ``points``; every slot
    costs one multiplication and one addition.
    """
    coeffs = np.asarray(coeffs, dtype=DTYPE)
    points = np.asarray(points, dtype=DTYPE)
    acc = np.broadcast_to(coeffs[..., -1], np.broadcast_shapes(coeffs.shape[:-1], points.shape))
    for i in range(coeffs.shape[-1] - 2, -1, -1):
        acc = field.add(field.mul(acc, points), coeffs[..., i])
    return np.asarray(acc, dtype=DTYPE)


def eval_poly(f: UniPoly, a):
    if isinstance(a, FieldElement):
        if a.field != f.field:
            raise FieldMismatchError("point and polynomial live in different fields")
        return FieldElement(f.field, int(horner(f.field, f.coeffs, a.value)))
    scalar = np.isscalar(a)
    out = horner(f.field, f.coeffs, a)
    return int(out) if scalar else out


@dataclass(frozen=True, eq=False)
class BivarPoly:
    """Q(x, y) = sum_eta Q_eta(x) y^eta stored as rows of x-coefficients.

    ``caps[eta]`` is the declared capacity degree of row eta; the stored array
    is as wide as the largest capacity.
    """

    field: FieldSpec
    rows: np.ndarray
    caps: tuple = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=DTYPE)
        if rows.ndim != 2:
            raise UsageError("rows must be a 2-D array (y-degree, x-coefficients)")
        caps = self.caps
        if caps is None:
            caps = (rows.shape[1] - 1,) * rows.shape[0]
        caps = tuple(int(c) for c in caps)
        if len(caps) != rows.shape[0]:
            raise UsageError("need one capacity per row")
        width = max(caps) + 1
        if rows.shape[1] < width:
            rows = np.pad(rows, ((0, 0), (0, width - rows.shape[1])))
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "caps", caps)

    @classmethod
    def from_dict(cls, field, terms: dict, y_degree=None, x_capacity=None):
        """Build from ``{(x_power, y_power): coeff}``."""
        ly = max([j for (_, j) in terms] + [0]) if y_degree is None else y_degree
        wx = max([i for (i, _) in terms] + [0]) if x_capacity is None else x_capacity
        rows = np.zeros((ly + 1, wx + 1), dtype=DTYPE)
        for (i, j), c in terms.items():
            rows[j, i] ^= c
        return cls(field, rows)

    @property
    def y_degree_cap(self) -> int:
        return self.rows.shape[0] - 1

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    def is_zero(self) -> bool:
        return not np.any(self.rows)

    def row(self, eta: int) -> UniPoly:
        return UniPoly(self.field, self.rows[eta, : self.caps[eta] + 1])

    def terms(self) -> dict:
        ys, xs = np.nonzero(self.rows)
        return {(int(i), int(j)): int(self.rows[j, i]) for j, i in zip(ys, xs)}

    def evaluate(self, x0, y0) -> int:
        f = self.field
        row_vals = horner(f, self.rows, x0)
        return int(horner(f, row_vals, y0))

    def substitute_y(self, g: UniPoly) -> UniPoly:
        """Q(x, g(x)) as a univariate polynomial (test and validation helper)."""
        f = self.field
        out = np.zeros(1, dtype=DTYPE)
        power = np.ones(1, dtype=DTYPE)
        for eta in range(self.rows.shape[0]):
            out = _poly_add(f, out, _poly_mul(f, self.rows[eta], power))
            power = _poly_mul(f, power, g.coeffs)
        return UniPoly(f, out)

    def __eq__(self, other):
        return (isinstance(other, BivarPoly) and other.field == self.field
                and other.terms() == self.terms())

    def __repr__(self):
        return f"BivarPoly({self.terms()})"


def _poly_add(field, a, b):
    n = max(a.size, b.size)
    return field.add(np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size)))


def _poly_mul(field, a, b):
    prod = field.mul(np.asarray(a, dtype=DTYPE)[:, None], np.asarray(b, dtype=DTYPE)[None, :])
    out = np.zeros(a.size + b.size - 1, dtype=DTYPE)
    for i in range(a.size):
        out[i: i + b.size] ^= prod[i]
    return out


def bivar_mul(A: BivarPoly, B: BivarPoly) -> BivarPoly:
    f = A.field
    if B.field != f:
        raise FieldMismatchError("polynomials live in different fields")
    ly = A.y_degree_cap + B.y_degree_cap
    wx = A.width + B.width - 1
    rows = np.zeros((ly + 1, wx), dtype=DTYPE)
    for i in range(A.rows.shape[0]):
        for j in range(B.rows.shape[0]):
            p = _poly_mul(f, A.rows[i], B.rows[j])
            rows[i + j, : p.size] ^= p
    return BivarPoly(f, rows)


# -- batch kernels ---------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _shift_pattern(L1: int):
    j_idx = np.arange(L1)[:, None]
    eta_idx = np.arange(L1)[None, :]
    parity = binom_parity(eta_idx, j_idx)
    expo = np.clip(eta_idx - j_idx, 0, None)
    parity.setflags(write=False)
    expo.setflags(write=False)
    return parity, expo


def shift_substitute_batch(field: FieldSpec, M: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """M_s(x, x*y + gamma_s) for every slot s.

    New row j is x^j * sum_{eta >= j} C(eta, j) gamma^(eta - j) M_eta(x), so the
    output is wider by the y-degree. Operation count depends only on the shape.
    """
    S, L1, W = M.shape
    ell = L1 - 1
    gammas = np.asarray(gammas, dtype=DTYPE).reshape(S)
    if not field.has_tables:
        return _shift_numpy(field, M, gammas)
    tally(muls=S * (ell + L1 * L1 + L1 * L1 * W), adds=S * L1 * ell * W)
    return shift_tab(np.ascontiguousarray(M, dtype=DTYPE), gammas, _shift_pattern(L1)[0], field.mul_table)


def _shift_numpy(field: FieldSpec, M: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    S, L1, W = M.shape
    ell = L1 - 1
    gpow = np.ones((S, L1), dtype=DTYPE)
    for e in range(1, L1):
        gpow[:, e] = field.mul(gpow[:, e - 1], gammas)
    parity, expo = _shift_pattern(L1)
    T = field.mul(gpow[:, expo], parity[None, :, :])  # (S, j, eta)
    combined = field.sum(field.mul(T[:, :, :, None], M[:, None, :, :]), axis=2)  # (S, j, W)
    out = np.zeros((S, L1, W + ell), dtype=DTYPE)
    for j in range(L1):
        out[:, j, j: j + W] = combined[:, j, :]
    return out


def strip_batch(M: np.ndarray):
    """Divide every slot by its largest common power of x (index shift only)."""
    S, L1, W = M.shape
    nz_cols = np.any(M != 0, axis=1)  # (S, W)
    r = np.argmax(nz_cols, axis=1)  # 0 for an all-zero slot
    padded = np.zeros((S, L1, 2 * W), dtype=DTYPE)
    padded[:, :, :W] = M
    idx = np.arange(W)[None, :] + r[:, None]
    out = padded[np.arange(S)[:, None, None], np.arange(L1)[None, :, None], idx[:, None, :]]
    return out, r


# -- single-polynomial operations -----------------------------------------


def shift_substitute(M: BivarPoly, gamma) -> BivarPoly:
    if isinstance(gamma, FieldElement):
        if gamma.field != M.field:
            raise FieldMismatchError("gamma lives in a different field")
        gamma = gamma.value
    out = shift_substitute_batch(M.field, M.rows[None], np.array([gamma]))[0]
    caps = tuple(max(M.caps[j:]) + j for j in range(len(M.caps)))
    return BivarPoly(M.field, out, caps)


def strip_x_power(M: BivarPoly):
    if M.is_zero():
        raise ZeroPolynomial("cannot strip x-powers from the zero polynomial")
    rows, r = strip_batch(M.rows[None])
    return BivarPoly(M.field, rows[0], M.caps), int(r[0])


def y_slice_at_zero(M: BivarPoly) -> UniPoly:
    return UniPoly(M.field, M.rows[:, 0])
