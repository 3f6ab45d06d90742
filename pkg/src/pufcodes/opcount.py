"""Per-context operation counters.

Every field primitive and every instrumented decoder step reports into the
innermost active :func:`counting` context. Nested contexts fold their totals
into the enclosing one on exit, so an audit around a whole pipeline still sees
the operations of each stage.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, fields


@dataclass
class OpCountReport:
    adds: int = 0
    muls: int = 0
    invs: int = 0
    rr_calls: int = 0
    bit_ops: int = 0

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def merge(self, other: "OpCountReport") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def copy(self) -> "OpCountReport":
        return OpCountReport(*self.as_tuple())

    def line(self) -> str:
        return (f"adds={self.adds} muls={self.muls} invs={self.invs} "
                f"rr={self.rr_calls} bits={self.bit_ops}")


_active: contextvars.ContextVar = contextvars.ContextVar("pufcodes_opcount", default=None)


@contextmanager
def counting():
    """Open a fresh counting context and yield its report."""
    report = OpCountReport()
    token = _active.set(report)
    try:
        yield report
    finally:
        _active.reset(token)
        parent = _active.get()
        if parent is not None:
            parent.merge(report)


def tally(adds: int = 0, muls: int = 0, invs: int = 0, rr_calls: int = 0, bit_ops: int = 0) -> None:
    report = _active.get()
    if report is None:
        return
    report.adds += adds
    report.muls += muls
    report.invs += invs
    report.rr_calls += rr_calls
    report.bit_ops += bit_ops
