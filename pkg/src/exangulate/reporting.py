"""Check results shared by the verifiers and serialized by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


PASS = "pass"
FAIL = "fail"
SKIP = "skipped-with-bound"


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    status: str
    detail: str = ""
    witness: str = ""


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)
    caps: dict = field(default_factory=dict)

    def record(self, check_id: str, ok: bool, detail: str = "", witness: str = "") -> bool:
        self.checks.append(
            CheckResult(check_id, PASS if ok else FAIL, detail, "" if ok else witness)
        )
        return ok

    def skip(self, check_id: str, detail: str) -> None:
        self.checks.append(CheckResult(check_id, SKIP, detail))

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for key, val in other.caps.items():
            self.caps.setdefault(key, val)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def sorted_checks(self) -> list[CheckResult]:
        return sorted(self.checks, key=lambda c: c.check_id)

    def summary(self) -> str:
        n_pass = sum(1 for c in self.checks if c.status == PASS)
        n_fail = len(self.failures)
        n_skip = sum(1 for c in self.checks if c.status == SKIP)
        return f"{n_pass} passed, {n_fail} failed, {n_skip} skipped"
