"""Uniform pass/fail result for every verifier in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Report:
    """Outcome of an exhaustive check.

    ``witness`` is the first failing basis tuple in lexicographic order and
    ``residual`` the nonzero value found there.  ``checked`` counts the
    tuples that were actually evaluated.  A Report is always truthy; test
    ``ok`` for the outcome.
    """

    check: str
    ok: bool
    witness: Any = None
    residual: Any = None
    detail: str = ""
    checked: int = 0
    extra: dict = field(default_factory=dict)

    def summary(self) -> str:
        if self.ok:
            return f"{self.check}: pass ({self.checked} checked)"
        msg = f"{self.check}: FAIL at {self.witness}"
        if self.detail:
            msg += f" ({self.detail})"
        return msg


def passed(check: str, checked: int = 0, detail: str = "", **extra) -> Report:
    return Report(check, True, checked=checked, detail=detail, extra=extra)


def failed(check: str, witness, residual=None, detail: str = "", checked: int = 0, **extra) -> Report:
    return Report(check, False, witness=witness, residual=residual, detail=detail, checked=checked, extra=extra)


def combine(check: str, reports) -> Report:
    """First failing sub-report wins; otherwise a pass with summed counts."""
    reports = list(reports)
    total = sum(r.checked for r in reports)
    for r in reports:
        if not r.ok:
            return Report(check, False, witness=r.witness, residual=r.residual,
                          detail=f"{r.check}: {r.detail}".rstrip(": "), checked=total,
                          extra={"failed": r.check, "parts": reports})
    return Report(check, True, checked=total, extra={"parts": reports})
