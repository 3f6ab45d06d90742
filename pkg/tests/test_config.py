from pathlib import Path

import numpy as np
import pytest

from pufcodes.concat import ConcatSpec
from pufcodes.config import code_text, parse_code, parse_run_settings
from pufcodes.exceptions import ConfigError, UsageError
from pufcodes.gf2m import FieldSpec
from pufcodes.hexio import bits_to_hex, hex_to_bits, hex_to_indices, indices_to_hex, symbols_to_text, text_to_symbols
from pufcodes.rmcode import RmSpec
from pufcodes.rscode import RsSpec

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_simple_codes():
    f = parse_code("m=6 modulus=0x43")
    assert isinstance(f, FieldSpec) and f.modulus == 0x43
    rs = parse_code("type=rs m=4 n=15 k=5")
    assert isinstance(rs, RsSpec) and (rs.n, rs.k) == (15, 5)
    assert parse_code("type=rm r=1 m=5") == RmSpec(1, 5)


def test_concat_multiline_with_comments():
    text = "# comment\ntype=concat\ninner=type=rm r=1 m=3  # inner\nouter=type=rs m=4 n=15 k=5\ntau=desk\n"
    spec = parse_code(text)
    assert isinstance(spec, ConcatSpec) and spec.n == 120
    assert parse_run_settings(text).tau == "desk"


def test_roundtrip_through_text():
    for text in ("type=rm r=1 m=3", "type=rs m=3 n=7 k=3",
                 "type=concat inner=type=rm r=1 m=5 outer=type=rs m=6 n=64 k=22"):
        spec = parse_code(text)
        assert parse_code(code_text(spec)) == spec


@pytest.mark.parametrize("text", [
    "", "type=rs m=4 n=15", "type=rs m=4 n=15 k=5 extra=1", "type=bch m=4", "m=4 modulus=0x15",
    "type=concat inner=type=rm r=1 m=3", "type=concat inner=type=rm r=1 m=3 outer=type=rs m=3 n=7 k=3",
    "type=rs m=4 n=x k=5", "type=rs m=4 n=15 n=14 k=5", "novalue", "type=rs m=4 n=15 k=5 type=concat",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_code(text)


def test_run_settings():
    s = parse_run_settings("p=0.1 tau=5 trials=100 mask=codeword runs=3")
    assert (s.p, s.tau, s.trials, s.mask, s.runs) == (0.1, "5", 100, "codeword", 3)
    with pytest.raises(ConfigError):
        parse_run_settings("p=abc")


def test_shipped_configs_parse():
    files = sorted(CONFIGS.glob("*.cfg"))
    assert files
    for path in files:
        parse_code(path.read_text())


def test_hex_bits():
    rng = np.random.default_rng(0)
    for n in (1, 7, 8, 9, 120):
        bits = rng.integers(0, 2, n).astype(np.uint8)
        assert np.array_equal(hex_to_bits(bits_to_hex(bits), n), bits)
    assert bits_to_hex([1, 0, 0, 0, 0, 0, 0, 1, 1]) == "8180"
    with pytest.raises(UsageError):
        hex_to_bits("81ff", 9)
    with pytest.raises(UsageError):
        hex_to_bits("zz", 8)
    with pytest.raises(UsageError):
        hex_to_bits("8181", 8)


def test_hex_symbols_and_indices():
    assert symbols_to_text([0, 10, 255]) == "0 a ff"
    assert list(text_to_symbols("0 a ff")) == [0, 10, 255]
    perm = np.array([3, 0, 15, 2])
    assert indices_to_hex(perm, 16) == "30f2"
    assert list(hex_to_indices("30f2", 16)) == list(perm)
    assert list(hex_to_indices(indices_to_hex([17, 4], 20), 20)) == [17, 4]
    with pytest.raises(UsageError):
        hex_to_indices("123", 20)
