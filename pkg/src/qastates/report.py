"""Shared verification report record.

Every checker in the package reduces its outcome to the same small record so
the command line tool can serialize batteries of checks uniformly.  The
record is deliberately strict: unknown subjects and verdicts are rejected,
metrics must be finite numbers, and a failing verdict must carry witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

SUBJECTS = (
    "prop1",
    "prop2",
    "cor1",
    "cor2",
    "coarse_grain",
    "lemma1",
    "lemma2",
    "prop3",
    "assumption_1",
    "assumption_2",
    "assumption_3a",
    "assumption_3b",
    "assumption_3c",
    "theorem1",
)

VERDICTS = ("pass", "fail", "undetermined")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one numerical check.

    metrics maps metric names to finite floats; witnesses is a tuple of
    JSON-ready dicts pinpointing concrete failures (indices, values,
    deviations).  A "fail" verdict without at least one witness is invalid.
    """

    subject: str
    verdict: str
    metrics: Mapping[str, float] = field(default_factory=dict)
    witnesses: tuple = ()
    notes: str = ""

    def __post_init__(self) -> None:
        if self.subject not in SUBJECTS:
            raise ValueError(f"unknown report subject {self.subject!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        clean: dict[str, float] = {}
        for key, value in dict(self.metrics).items():
            if not isinstance(key, str):
                raise ValueError("metric names must be strings")
            num = float(value)
            if not math.isfinite(num):
                raise ValueError(f"metric {key!r} is not finite: {value!r}")
            clean[key] = num
        object.__setattr__(self, "metrics", clean)
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if self.verdict == "fail" and not self.witnesses:
            raise ValueError(f"failing report for {self.subject!r} carries no witnesses")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json_dict(self) -> dict[str, Any]:
        """Plain dict with a stable field order, ready for json.dumps."""
        return {
            "subject": self.subject,
            "verdict": self.verdict,
            "metrics": dict(self.metrics),
            "witnesses": [dict(w) for w in self.witnesses],
            "notes": self.notes,
        }


def summarize(reports: Mapping[str, VerificationReport]) -> str:
    """One human-readable line per report, for stderr summaries."""
    lines = []
    for name, rep in reports.items():
        lines.append(f"{name}: {rep.verdict} ({len(rep.witnesses)} witnesses)")
    return "\n".join(lines)
