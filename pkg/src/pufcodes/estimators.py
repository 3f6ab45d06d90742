"""scikit-learn style wrappers around the decoders and the key flow.

Rows of ``X`` are bit vectors. ``fit`` only builds the code (and, for the
extractor, enrolls the responses); the heavy lifting happens in
``predict``/``transform``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._rng import as_rng
from ._validation import check_bits, check_positive_int
from .concat import ConcatSpec, concat_decode
from .gf2m import fast_field
from .keyflow import enroll, reproduce
from .rmcode import RmSpec, _distances, ml_decode_batch
from .rscode import RsSpec


def _concat_spec(inner_r, inner_m, n, k) -> ConcatSpec:
    inner = RmSpec(int(inner_r), check_positive_int(inner_m, "inner_m"))
    outer = RsSpec(fast_field(inner.k), check_positive_int(n, "n"), check_positive_int(k, "k"))
    return ConcatSpec(inner, outer)


class RMDecoder(BaseEstimator, TransformerMixin):
    """Full-scan ML decoding of RM(r, m); ``predict`` gives -1 on a distance tie."""

    def __init__(self, r=1, m=3, random_state=None):
        self.r = r
        self.m = m
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.spec_ = RmSpec(self.r, self.m)
        self.n_features_in_ = self.spec_.n
        self._rng = as_rng(self.random_state)
        return self

    def predict(self, X):
        check_is_fitted(self, "spec_")
        return ml_decode_batch(self.spec_, check_bits(X, self.spec_.n), self._rng)

    def transform(self, X):
        """Distances to every codeword, in message order."""
        check_is_fitted(self, "spec_")
        return _distances(self.spec_, check_bits(X, self.spec_.n))


class ConcatCodeDecoder(BaseEstimator):
    """Inner ML plus outer GS decoding; ``predict`` returns the nearest message.

    Rows whose candidate list is empty or tied come back as all -1.
    """

    def __init__(self, inner_r=1, inner_m=3, n=15, k=5, tau="list", strict=False, random_state=None):
        self.inner_r = inner_r
        self.inner_m = inner_m
        self.n = n
        self.k = k
        self.tau = tau
        self.strict = strict
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.spec_ = _concat_spec(self.inner_r, self.inner_m, self.n, self.k)
        self.n_features_in_ = self.spec_.n
        self._rng = as_rng(self.random_state)
        return self

    def decode(self, x):
        check_is_fitted(self, "spec_")
        return concat_decode(self.spec_, x, tau=self.tau, seed=self._rng, strict=self.strict)

    def predict(self, X):
        check_is_fitted(self, "spec_")
        X = check_bits(X, self.spec_.n)
        out = np.full((X.shape[0], self.spec_.outer.k), -1, dtype=np.int64)
        for i, row in enumerate(X):
            cands = self.decode(row).candidates
            if cands and (len(cands) == 1 or cands[0][1] != cands[1][1]):
                out[i] = cands[0][0].padded(self.spec_.outer.k - 1).coeffs
        return out


class CodeOffsetExtractor(BaseEstimator, TransformerMixin):
    """Enroll responses in ``fit``; ``transform`` recovers them from noisy rows.

    Failed reproductions give rows of -1.
    """

    def __init__(self, inner_r=1, inner_m=3, n=15, k=5, tau="list", mask="none", random_state=None):
        self.inner_r = inner_r
        self.inner_m = inner_m
        self.n = n
        self.k = k
        self.tau = tau
        self.mask = mask
        self.random_state = random_state

    def fit(self, X, y=None):
        self.spec_ = _concat_spec(self.inner_r, self.inner_m, self.n, self.k)
        X = check_bits(X, self.spec_.n)
        self._rng = as_rng(self.random_state)
        self.bundles_ = [enroll(self.spec_, row, self._rng, self.mask) for row in X]
        self.n_features_in_ = self.spec_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "bundles_")
        X = check_bits(X, self.spec_.n)
        if X.shape[0] != len(self.bundles_):
            raise ValueError(f"fit saw {len(self.bundles_)} responses, transform got {X.shape[0]}")
        out = np.full(X.shape, -1, dtype=np.int64)
        for i, (bundle, row) in enumerate(zip(self.bundles_, X)):
            res = reproduce(self.spec_, bundle, row, tau=self.tau, seed=self._rng)
            if res.ok:
                out[i] = res.recovered_response
        return out
