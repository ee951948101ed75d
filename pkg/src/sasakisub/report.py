"""Named residual checks and their aggregation."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, INCONCLUSIVE, INFO = "pass", "fail", "inconclusive", "info"


@dataclass
class Check:
    """One measured quantity.

    ``kind`` decides how ``value`` is judged against ``tolerance``:

    - ``identity``: pass iff value <= tolerance (a residual);
    - ``witness``: pass iff value > tolerance, otherwise INCONCLUSIVE;
    - ``info``: recorded only, never affects a verdict.
    """

    name: str
    value: float
    tolerance: float
    kind: str = "identity"
    note: str = ""

    @property
    def verdict(self) -> str:
        if self.kind == "info":
            return INFO
        if self.kind == "witness":
            return PASS if self.value > self.tolerance else INCONCLUSIVE
        return PASS if self.value <= self.tolerance else FAIL

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, INFO)


def combine_verdicts(verdicts) -> str:
    verdicts = [v for v in verdicts if v != INFO]
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


@dataclass
class CheckReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, value: float, tolerance: float, kind: str = "identity", note: str = ""):
        self.checks.append(Check(name, float(value), float(tolerance), kind, note))
        return self

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def residual(self, name: str) -> float:
        return self[name].value

    @property
    def verdict(self) -> str:
        return combine_verdicts(c.verdict for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict == FAIL]


SuiteResult = CheckReport
