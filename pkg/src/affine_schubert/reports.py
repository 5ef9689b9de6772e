"""Structured verdicts for single identity checks.

Every verification routine returns a CheckReport rather than a bare bool, so
the sweep harness can stream machine-readable verdicts and keep a witness for
any failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
SKIPPED = "skipped"

_STATUSES = (PASS, FAIL, VACUOUS, SKIPPED)


@dataclass(frozen=True)
class CheckReport:
    """Verdict for one named check at one (n, d) cell.

    A failing report must carry a witness: enough structured data to replay
    the failure by hand.  Passing reports may carry a payload too (for
    example a recovered torus correction).
    """

    name: str
    n: int
    d: int
    status: str
    witness: dict[str, Any] | None = None
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError("failing report requires a witness")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_json(self, include_elapsed: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "type": "check",
            "name": self.name,
            "n": self.n,
            "d": self.d,
            "status": self.status,
            "witness": self.witness,
        }
        if include_elapsed:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def run_check(
    name: str, n: int, d: int, body: Callable[[], tuple[str, dict[str, Any] | None]]
) -> CheckReport:
    """Time ``body()`` and wrap its (status, witness) result in a report."""
    start = time.perf_counter()
    status, witness = body()
    return CheckReport(name, n, d, status, witness, time.perf_counter() - start)
