import math

import numpy as np
import pytest

from pufcodes.analysis import (
    BscModel,
    InnerChannel,
    binary_entropy,
    block_error_probability,
    block_error_probability_unique,
    bsc_sample,
    capacity,
    dispersion,
    distance_multiset_invariant,
    entropy_bruteforce,
    format_rate_table,
    inner_channel_exact,
    inner_channel_mc,
    max_rate,
    q_function,
    q_inverse,
    rate_table,
)
from pufcodes.exceptions import InstanceTooLarge, UsageError
from pufcodes.rmcode import RmSpec

REFERENCE_CHANNEL = InnerChannel(0.003170, 0.017605)
TOY = [[1, 0, 1, 1], [0, 1, 0, 1]]


def test_bsc_sample():
    assert not bsc_sample(0.0, 1000, 1).any()
    x = bsc_sample(0.14, 1_000_000, 2)
    assert abs(x.mean() - 0.14) < 0.002
    assert np.array_equal(bsc_sample(0.2, 50, 3), bsc_sample(0.2, 50, 3))
    with pytest.raises(UsageError):
        BscModel(0.7)


def test_inner_channel_zero_noise():
    ch = inner_channel_mc(RmSpec(1, 5), 0.0, 1000, 0)
    assert ch.p_error == 0 and ch.p_erasure == 0


def test_inner_channel_mc_agrees_with_exact():
    spec = RmSpec(1, 3)
    exact = inner_channel_exact(spec, 0.1)
    mc = inner_channel_mc(spec, 0.1, 400_000, 1)
    assert abs(mc.p_error - exact.p_error) < 4 * mc.stderr_error
    assert abs(mc.p_erasure - exact.p_erasure) < 4 * mc.stderr_erasure


def test_inner_channel_jobs():
    ch = inner_channel_mc(RmSpec(1, 3), 0.1, 20_000, 1, jobs=2)
    assert ch.trials == 20_000 and 0 < ch.p_error < 0.1


def test_inner_channel_rm15_short_run():
    ch = inner_channel_mc(RmSpec(1, 5), 0.14, 1_000_000, 3)
    assert abs(ch.p_error - 0.003170) < 4 * ch.stderr_error + 1e-4
    assert abs(ch.p_erasure - 0.017605) < 4 * ch.stderr_erasure + 2e-4


def test_failure_rates():
    assert block_error_probability(64, 22, InnerChannel(0, 0)) == 0
    assert block_error_probability_unique(64, 22, InnerChannel(0, 0)) == 0
    p34 = block_error_probability(34, 22, REFERENCE_CHANNEL)
    assert 0.5 * 1.9981e-10 <= p34 <= 2 * 1.9981e-10
    lst = block_error_probability(64, 22, REFERENCE_CHANNEL)
    uniq = block_error_probability_unique(64, 22, REFERENCE_CHANNEL)
    assert lst <= uniq
    # the published unique-decoding figure (6.79e-37) comes from another decoder
    assert 1e-40 < uniq < 1e-30


def test_failure_rate_matches_direct_sum():
    ch = InnerChannel(0.05, 0.1)
    n, k = 15, 5
    q = ch.p_error / (1 - ch.p_erasure)
    total = 0.0
    for i in range(n + 1):
        pi = math.comb(n, i) * ch.p_erasure ** i * (1 - ch.p_erasure) ** (n - i)
        m = n - i
        tau = m - math.isqrt(m * (k - 1)) - 1
        if m <= 0 or not (m - tau) ** 2 > m * (k - 1) or tau < 0:
            total += pi
            continue
        total += pi * sum(math.comb(m, t) * q ** t * (1 - q) ** (m - t) for t in range(tau + 1, m + 1))
    assert math.isclose(block_error_probability(n, k, ch), total, rel_tol=1e-9)


def test_capacity_and_dispersion():
    assert abs(capacity(0.14) - 0.41576) < 1e-4
    assert capacity(0.0) == 1.0
    assert abs(capacity(0.5)) < 1e-12
    assert abs(binary_entropy(0.14) - 0.5842) < 1e-4
    assert dispersion(0.0) == 0.0 and dispersion(0.14) > 0


def test_q_inverse():
    for y in (0.3, 1e-3, 1e-9, 1.2e-10):
        assert abs(q_function(q_inverse(y)) / y - 1) < 1e-4
    with pytest.raises(UsageError):
        q_inverse(0)


def test_max_rate_rows():
    assert abs(max_rate(2226, 0.14, 1e-9) - 0.3027) <= 5e-4
    assert abs(max_rate(1152, 0.14, 1.2e-10) - 0.2506) <= 5e-4
    assert abs(max_rate(1088, 0.14, 2e-10) - 0.2481) <= 5e-4


def test_rate_table_ratios():
    rows = rate_table()
    assert [round(r.rate, 4) for r in rows] == [0.0782, 0.1146, 0.1213]
    for row, want in zip(rows, (0.2582, 0.4573, 0.4890)):
        assert abs(row.ratio - want) <= 0.002
    text = format_rate_table(rows)
    assert "RS/RM list" in text and len(text.splitlines()) == 4


def test_entropy_codeword_masking_bound():
    for p in (0.0, 0.05, 0.2):
        assert entropy_bruteforce([[1, 1, 1]], p, masking="codeword") >= 1 - 1e-9
        assert entropy_bruteforce(TOY, p, masking="codeword") >= 2 - 1e-9


def test_entropy_without_masking():
    assert abs(entropy_bruteforce([[1, 1, 1]], 0.1, include_decoder_input=False) - 1) < 1e-9
    assert abs(entropy_bruteforce(TOY, 0.1, include_decoder_input=False) - 2) < 1e-9
    assert abs(entropy_bruteforce(TOY, 0.0)) < 1e-9
    assert entropy_bruteforce(TOY, 0.1) < 2


def test_entropy_permutation_masking():
    h = entropy_bruteforce([[1, 1, 1]], 0.1, masking="permutation")
    assert 0 <= h <= 1 + 1e-9
    with pytest.raises(UsageError):
        entropy_bruteforce(TOY, 0.1, masking="shuffle")


def test_entropy_size_limit():
    with pytest.raises(InstanceTooLarge):
        entropy_bruteforce(np.eye(8, 16, dtype=int), 0.1)


def test_multiset_invariance():
    assert distance_multiset_invariant(RmSpec(1, 3))
    assert distance_multiset_invariant(RmSpec(0, 3))
    with pytest.raises(InstanceTooLarge):
        distance_multiset_invariant(RmSpec(1, 5))


def test_failure_rate_monotone():
    grid = np.linspace(0.0, 0.08, 9)
    for k, n in ((5, 15), (22, 34)):
        by_pe = [block_error_probability(n, k, InnerChannel(pe, 0.02)) for pe in grid]
        by_pz = [block_error_probability(n, k, InnerChannel(0.01, pz)) for pz in grid]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(by_pe, by_pe[1:]))
        assert all(a <= b * (1 + 1e-12) for a, b in zip(by_pz, by_pz[1:]))
