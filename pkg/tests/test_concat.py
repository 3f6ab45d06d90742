import numpy as np
import pytest

from pufcodes.concat import ConcatSpec, concat_decode, concat_encode, desk_radius, inner_decode, radius_rule
from pufcodes.exceptions import UsageError
from pufcodes.gf2m import fast_field
from pufcodes.rmcode import RmSpec
from pufcodes.rscode import RsSpec

SMALL = ConcatSpec(RmSpec(1, 3), RsSpec(fast_field(4), 15, 5))


def test_parameters():
    assert (SMALL.n, SMALL.k) == (120, 20)
    big = ConcatSpec(RmSpec(1, 5), RsSpec(fast_field(6), 64, 22))
    assert (big.n, big.k, big.d_lower) == (2048, 132, 688)
    with pytest.raises(UsageError):
        ConcatSpec(RmSpec(1, 3), RsSpec(fast_field(3), 7, 3))


def test_zero_message():
    assert not concat_encode(SMALL, np.zeros(5)).any()


def test_error_free_decode():
    msg = np.array([1, 2, 3, 4, 5])
    res = concat_decode(SMALL, concat_encode(SMALL, msg), seed=0)
    assert len(res) == 1
    f, dist = res.candidates[0]
    assert dist == 0 and list(f.padded(4).coeffs) == list(msg)


def test_bit_flips_in_four_rows():
    rng = np.random.default_rng(1)
    for _ in range(20):
        msg = rng.integers(0, 16, 5)
        x = concat_encode(SMALL, msg)
        for row in rng.choice(15, 4, replace=False):
            x[row, rng.integers(8)] ^= 1
        res = concat_decode(SMALL, x, seed=rng)
        assert res.candidates[0][0].padded(4).coeffs.tolist() == msg.tolist()


def test_heavy_noise_never_crashes():
    x = concat_encode(SMALL, np.arange(5))
    x[3] = 1
    word = inner_decode(SMALL, x, 0)
    assert len(word) == 15
    concat_decode(SMALL, x, seed=0)


def test_radius_rules():
    assert radius_rule("list")(15, 5) == 7
    assert radius_rule("unique")(15, 5) == 5
    assert radius_rule(None)(15, 5) == 7
    assert radius_rule(4)(15, 5) == 4
    assert desk_radius(15, 5) == 6 and desk_radius(7, 3) == 3
    with pytest.raises(UsageError):
        radius_rule("wide")


def test_inner_ties_become_erasures():
    x = concat_encode(SMALL, np.zeros(5))
    x[0, :2] = 1  # distance 2 from the zero word and from a weight-4 codeword
    book = SMALL.inner.codebook
    assert ((book != x[0]).sum(axis=1) == 2).sum() > 1
    assert inner_decode(SMALL, x, 0).erased[0]


def test_wrong_length():
    with pytest.raises(UsageError):
        concat_decode(SMALL, np.zeros(119))
