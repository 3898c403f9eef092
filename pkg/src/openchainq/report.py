"""Verification reports shared by the checking layers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exactq import ParamPoint
from .fock import Comparison, Witness


@dataclass
class Report:
    """Outcome of one identity or suite run.

    ``passed`` is true exactly when every compared column agreed; ``witness``
    holds the lexicographically smallest failing basis vector otherwise.
    ``status`` is ``"pass"``, ``"fail"`` or ``"error"``.
    """

    suite: str
    anchor: str = ""
    params: ParamPoint | None = None
    n: int | None = None
    m_max: int | None = None
    passed: bool = True
    witness: Witness | None = None
    failed_check: str | None = None
    checks: int = 0
    seconds: float = 0.0
    status: str = "pass"
    error: str | None = None
    details: dict = field(default_factory=dict)

    def record(self, name: str, cmp: Comparison | bool, witness: Witness | None = None) -> bool:
        """Fold one sub-check into the report; the first failure is kept."""
        ok = bool(cmp)
        self.checks += 1
        if not ok and self.passed:
            self.passed = False
            self.status = "fail"
            self.failed_check = name
            self.witness = cmp.witness if isinstance(cmp, Comparison) else witness
        return ok

    def merge(self, other: "Report", prefix: str = "") -> None:
        self.checks += other.checks
        if other.status == "error" and self.status != "error":
            self.status, self.error, self.passed = "error", other.error, False
        if not other.passed and self.passed:
            self.passed = False
            self.status = other.status
            self.failed_check = prefix + (other.failed_check or other.suite)
            self.witness = other.witness

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "anchor": self.anchor,
            "status": self.status,
            "passed": self.passed,
            "n": self.n,
            "m_max": self.m_max,
            "checks": self.checks,
            "failed_check": self.failed_check,
            "witness": self.witness.to_dict() if self.witness else None,
            "params": self.params.to_dict() if self.params else None,
            "error": self.error,
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }

    def to_json(self, timing: bool = True) -> str:
        d = self.to_dict()
        if not timing:
            d.pop("seconds")
        return json.dumps(d, sort_keys=True)
