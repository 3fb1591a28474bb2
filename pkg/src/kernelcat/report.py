"""Law reports: an ordered list of named checks with a status each."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS, FAIL, SKIPPED, UNVERIFIED = "PASS", "FAIL", "SKIPPED", "UNVERIFIED"


@dataclass
class Check:
    law: str
    status: str
    witness: tuple = ()
    note: str = ""

    def line(self) -> str:
        out = f"{self.status} {self.law}"
        if self.witness:
            out += " " + " ".join(str(w) for w in self.witness)
        if self.note:
            out += f"  # {self.note}"
        return out


@dataclass
class LawReport:
    title: str = ""
    checks: list = field(default_factory=list)

    def add(self, law, status, witness=(), note=""):
        if status == FAIL and not witness:
            raise ValueError(f"FAIL of {law} needs a counterexample")
        self.checks.append(Check(law, status, tuple(witness), note))
        return self

    def record(self, law, failure, note=""):
        """PASS when ``failure`` is None, otherwise FAIL with it as witness."""
        if failure is None:
            return self.add(law, PASS, note=note)
        if not isinstance(failure, tuple):
            failure = (failure,)
        return self.add(law, FAIL, failure, note)

    def extend(self, other: "LawReport", prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.law, c.status, c.witness, c.note))
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def get(self, law) -> Check:
        for c in self.checks:
            if c.law == law:
                return c
        raise KeyError(law)

    def status(self, law) -> str:
        return self.get(law).status

    def to_text(self) -> str:
        head = [f"== {self.title}"] if self.title else []
        return "\n".join(head + [c.line() for c in self.checks])

    def to_records(self) -> str:
        """One JSON object per line."""
        return "\n".join(
            json.dumps({"report": self.title, "law": c.law, "status": c.status,
                        "witness": [str(w) for w in c.witness], "note": c.note}, sort_keys=True)
            for c in self.checks)

    def __str__(self):
        return self.to_text()
