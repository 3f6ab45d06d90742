"""Flat ``key=value`` configuration text for codes and runs.

    m=6 modulus=0x43                              field
    type=rs m=6 n=64 k=22                         Reed-Solomon (modulus optional)
    type=rm r=1 m=5                               Reed-Muller
    type=concat inner=type=rm r=1 m=5 outer=type=rs m=6 n=64 k=22

Tokens may be spread over several lines; ``#`` starts a comment. Run
settings (``p``, ``tau``, ``trials``, ``mask``, ``runs``) may appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .concat import ConcatSpec
from .exceptions import ConfigError, UsageError
from .gf2m import FieldSpec, fast_field
from .rmcode import RmSpec
from .rscode import RsSpec

RUN_KEYS = ("p", "tau", "trials", "mask", "runs")


def _tokens(text: str) -> list:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        out.extend(line.split())
    return out


def _pairs(tokens) -> dict:
    kv = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not key or not value:
            raise ConfigError(f"expected key=value, got {tok!r}")
        if key in kv:
            raise ConfigError(f"duplicate key {key!r}")
        kv[key] = value
    return kv


def _int(kv, key, base=10):
    if key not in kv:
        raise ConfigError(f"missing {key}=")
    try:
        return int(kv.pop(key), base)
    except ValueError:
        raise ConfigError(f"{key}= must be an integer")


def _field(kv) -> FieldSpec:
    m = _int(kv, "m")
    modulus = _int(kv, "modulus", 0) if "modulus" in kv else None
    try:
        return fast_field(m, modulus)
    except UsageError as exc:
        raise ConfigError(str(exc))


def _leftover(kv, what):
    if kv:
        raise ConfigError(f"unknown keys for {what}: {', '.join(sorted(kv))}")


def _simple(tokens):
    kv = _pairs(tokens)
    kind = kv.pop("type", None)
    try:
        if kind is None:
            fld = _field(kv)
            _leftover(kv, "a field")
            return fld
        if kind == "rs":
            fld = _field(kv)
            n, k = _int(kv, "n"), _int(kv, "k")
            _leftover(kv, "type=rs")
            return RsSpec(fld, n, k)
        if kind == "rm":
            r, m = _int(kv, "r"), _int(kv, "m")
            _leftover(kv, "type=rm")
            return RmSpec(r, m)
    except UsageError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown code type {kind!r}")


def parse_code(text: str):
    """Config text -> FieldSpec, RsSpec, RmSpec or ConcatSpec."""
    tokens = [t for t in _tokens(text) if t.partition("=")[0] not in RUN_KEYS]
    if not tokens:
        raise ConfigError("empty code configuration")
    if tokens[0] != "type=concat" and "type=concat" not in tokens:
        return _simple(tokens)
    if tokens[0] != "type=concat":
        raise ConfigError("type=concat must come first")
    parts = {}
    current = None
    for tok in tokens[1:]:
        for head in ("inner=", "outer="):
            if tok.startswith(head):
                current = head[:-1]
                if current in parts:
                    raise ConfigError(f"duplicate {current}=")
                parts[current] = []
                tok = tok[len(head):]
        if current is None:
            raise ConfigError(f"unexpected token {tok!r} before inner=/outer=")
        if tok:
            parts[current].append(tok)
    if set(parts) != {"inner", "outer"}:
        raise ConfigError("type=concat needs both inner= and outer=")
    inner = _simple(parts["inner"])
    outer = _simple(parts["outer"])
    if not isinstance(inner, RmSpec) or not isinstance(outer, RsSpec):
        raise ConfigError("concatenation needs an rm inner code and an rs outer code")
    try:
        return ConcatSpec(inner, outer)
    except UsageError as exc:
        raise ConfigError(str(exc))


@dataclass(frozen=True)
class RunSettings:
    p: Optional[float] = None
    tau: Optional[str] = None
    trials: Optional[int] = None
    mask: Optional[str] = None
    runs: Optional[int] = None


def parse_run_settings(text: str) -> RunSettings:
    kv = {}
    for tok in _tokens(text):
        key, _, value = tok.partition("=")
        if key in RUN_KEYS:
            kv[key] = value
    try:
        return RunSettings(
            p=float(kv["p"]) if "p" in kv else None,
            tau=kv.get("tau"),
            trials=int(kv["trials"]) if "trials" in kv else None,
            mask=kv.get("mask"),
            runs=int(kv["runs"]) if "runs" in kv else None,
        )
    except ValueError as exc:
        raise ConfigError(f"bad run setting: {exc}")


def code_text(spec) -> str:
    return spec.config_text()
