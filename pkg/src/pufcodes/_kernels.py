"""Compiled inner loops for table-backed fields.

These mirror the numpy kernels in :mod:`pufcodes.gsdecoder` step for step
(same scans, same masked updates); they exist only because the Python-level
loop dominates the cost of small decodes. Counting stays with the callers.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def eliminate_tab(M, mul_table, inv_table, pivot_row):
    """Column-by-column reduction of ``M`` (last row is zero scratch) in place."""
    R1, C = M.shape
    R = R1 - 1
    p = 0
    for col in range(C):
        sel = R
        for i in range(R - 1, -1, -1):
            take = (M[i, col] != 0) & (i > p)
            sel = i if take else sel
        need = M[p, col] == 0
        for j in range(C):
            M[p, j] ^= need * M[sel, j]
        nz = M[p, col] != 0
        pinv = inv_table[M[p, col] + (1 - nz)]
        for j in range(C):
            M[p, j] = mul_table[M[p, j], pinv]
        for i in range(R1):
            f = M[i, col] * nz * (i != p)
            for j in range(C):
                M[i, j] ^= mul_table[f, M[p, j]]
        pivot_row[col] = p if nz else -1
        p += nz
    return p


def eliminate(fld, M: np.ndarray, pivot_row: np.ndarray) -> None:
    eliminate_tab(M, fld.mul_table, fld.inv_table, pivot_row)


@numba.njit(cache=True)
def shift_tab(M, gammas, parity, mul_table):
    """out[s, j, j + w] = sum_eta parity[j, eta] gamma_s^(eta - j) M[s, eta, w]."""
    S, L1, W = M.shape
    ell = L1 - 1
    out = np.zeros((S, L1, W + ell), dtype=M.dtype)
    gpow = np.empty(L1, dtype=M.dtype)
    for s in range(S):
        gpow[0] = 1
        for e in range(1, L1):
            gpow[e] = mul_table[gpow[e - 1], gammas[s]]
        for j in range(L1):
            for eta in range(L1):
                e = eta - j if eta >= j else 0
                t = mul_table[gpow[e], parity[j, eta]]
                for w in range(W):
                    out[s, j, j + w] ^= mul_table[t, M[s, eta, w]]
    return out
