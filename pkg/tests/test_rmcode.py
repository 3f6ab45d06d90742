import itertools

import numpy as np
import pytest

from pufcodes.exceptions import UsageError
from pufcodes.opcount import counting
from pufcodes.rmcode import (
    ERASURE,
    RmSpec,
    distance_profile,
    ml_decode,
    ml_decode_batch,
    pack_bits,
    rm_dimension,
    rm_encode,
)

RM13 = RmSpec(1, 3)


def test_parameters():
    s = RmSpec(1, 5)
    assert (s.n, s.k, s.d) == (32, 6, 16)
    assert rm_dimension(2, 4) == 11


def test_encode_examples():
    assert list(rm_encode(RmSpec(0, 3), [1])) == [1] * 8
    assert list(rm_encode(RmSpec(1, 1), [0, 0])) == [0, 0]
    a = rm_encode(RmSpec(1, 2), [1, 0, 0])
    assert list(rm_encode(RM13, [1, 0, 0, 0])) == list(a) + list(a)
    with pytest.raises(UsageError):
        rm_encode(RM13, [1, 0, 0])


@pytest.mark.parametrize("r,m", [(0, 3), (1, 3), (1, 4), (2, 4), (1, 5)])
def test_minimum_distance(r, m):
    s = RmSpec(r, m)
    w = s.codebook[1:].sum(axis=1)
    assert w.min() == s.d
    assert len({row.tobytes() for row in s.codebook}) == 1 << s.k


def test_decode_codewords_and_single_flips():
    rng = np.random.default_rng(0)
    for msg in range(16):
        c = RM13.codebook[msg]
        assert ml_decode(RM13, c, rng) == msg
        for i in range(8):
            e = c.copy()
            e[i] ^= 1
            assert ml_decode(RM13, e, rng) == msg


def test_tie_is_erasure():
    a, b = RM13.codebook[0], RM13.codebook[1]
    diff = np.flatnonzero(a != b)
    y = a.copy()
    y[diff[:2]] ^= 1
    assert ((y != a).sum(), (y != b).sum()) == (2, 2)
    assert ml_decode(RM13, y, 0) == ERASURE


def test_decode_matches_bruteforce_exhaustive():
    ys = np.array(list(itertools.product((0, 1), repeat=8)), dtype=np.uint8)
    got = ml_decode_batch(RM13, ys, seed=1)
    dist = (ys[:, None, :] != RM13.codebook[None]).sum(axis=2)
    best = dist.min(axis=1)
    unique = (dist == best[:, None]).sum(axis=1) == 1
    assert np.array_equal(got[unique], dist.argmin(axis=1)[unique])
    assert np.all(got[~unique] == ERASURE)


def test_profile_properties():
    c = RM13.codebook[5]
    prof = distance_profile(RM13, c, seed=2)
    assert (prof.distances == 0).sum() == 1
    rng = np.random.default_rng(3)
    y = rng.integers(0, 2, 8).astype(np.uint8)
    base = distance_profile(RM13, y, seed=4).sorted()
    for cw in RM13.codebook:
        assert np.array_equal(distance_profile(RM13, y ^ cw, seed=5).sorted(), base)


def test_bit_ops_constant():
    spec = RmSpec(1, 5)
    rng = np.random.default_rng(6)
    counts = set()
    for y in (np.zeros(32), np.ones(32), rng.integers(0, 2, 32), spec.codebook[7]):
        with counting() as rep:
            ml_decode(spec, y.astype(np.uint8), rng)
        counts.add(rep.bit_ops)
    assert len(counts) == 1


def test_pack_bits_roundtrip():
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, (3, 70)).astype(np.uint8)
    packed = pack_bits(bits)
    assert packed.shape == (3, 2)
    back = np.unpackbits(packed.view(np.uint8), axis=-1, bitorder="little")[:, :70]
    assert np.array_equal(back, bits)
