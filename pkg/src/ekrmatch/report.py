"""Machine-readable reports: grid sweeps and proof checks.

JSON reports are objects with "params", "results" and "summary" keys and
contain only integers, booleans, strings, lists and null.  Grid CSV uses
the fixed column order in :data:`CSV_COLUMNS` with LF line endings.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

CSV_COLUMNS = (
    "n", "p", "s", "family_size", "star_size", "max_intersecting", "regime", "holds", "elapsed_ms",
)


@dataclass(frozen=True)
class GridRow:
    n: int
    p: int
    s: int
    family_size: int
    star_size: int
    max_intersecting: int | None
    regime: str
    holds: bool | None
    elapsed_ms: int
    skipped: str | None = None  # cap reason when the instance was not searched

    def csv_fields(self) -> list[str]:
        if self.skipped:
            max_field, holds_field = "-", f"skipped-{self.skipped}"
        else:
            max_field, holds_field = str(self.max_intersecting), str(self.holds).lower()
        return [
            str(self.n), str(self.p), str(self.s), str(self.family_size), str(self.star_size),
            max_field, self.regime, holds_field, str(self.elapsed_ms),
        ]

    @classmethod
    def from_csv_fields(cls, fields: list[str]) -> GridRow:
        n, p, s, fam, star, mx, regime, holds, ms = fields
        skipped = holds[len("skipped-"):] if holds.startswith("skipped-") else None
        return cls(
            int(n), int(p), int(s), int(fam), int(star),
            None if skipped else int(mx), regime,
            None if skipped else holds == "true", int(ms), skipped,
        )


@dataclass(frozen=True)
class GridReport:
    max_n: int
    rows: tuple[GridRow, ...]
    cap: int

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.holds is False)

    @property
    def skipped(self) -> int:
        return sum(1 for r in self.rows if r.skipped)

    def summary(self) -> dict:
        return {"instances": len(self.rows), "failures": self.failures, "skipped": self.skipped}

    def to_json(self) -> str:
        return json.dumps(
            {
                "params": {"max_n": self.max_n, "cap": self.cap},
                "results": [asdict(r) for r in self.rows],
                "summary": self.summary(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> GridReport:
        data = json.loads(text)
        rows = tuple(GridRow(**r) for r in data["results"])
        return cls(data["params"]["max_n"], rows, data["params"]["cap"])

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(r.csv_fields()) for r in self.rows]
        return "\n".join(lines) + "\n"

    @staticmethod
    def rows_from_csv(text: str) -> tuple[GridRow, ...]:
        lines = text.rstrip("\n").split("\n")
        if tuple(lines[0].split(",")) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {lines[0]!r}")
        return tuple(GridRow.from_csv_fields(line.split(",")) for line in lines[1:])

    def to_text(self) -> str:
        out = []
        for r in self.rows:
            if r.skipped:
                out.append(f"n={r.n} p={r.p} s={r.s} |H|={r.family_size} skipped ({r.skipped})")
            else:
                out.append(
                    f"n={r.n} p={r.p} s={r.s} |H|={r.family_size} star={r.star_size} "
                    f"max={r.max_intersecting} {r.regime} {'ok' if r.holds else 'FAIL'} {r.elapsed_ms}ms"
                )
        sm = self.summary()
        out.append(f"{sm['instances']} instances, {sm['failures']} failures, {sm['skipped']} skipped")
        return "\n".join(out) + "\n"


PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)
    counterexample: object = None


@dataclass
class ProofCheckReport:
    n: int
    p: int
    s: int
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool | None, counterexample=None, **detail) -> Check:
        status = SKIPPED if ok is None else PASS if ok else FAIL
        check = Check(name, status, detail, None if ok else counterexample)
        self.checks.append(check)
        return check

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.status == FAIL), None)

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            counts[c.status] += 1
        return {"passed": counts[PASS], "failed": counts[FAIL], "skipped": counts[SKIPPED]}

    def to_json(self) -> str:
        return json.dumps(
            {
                "params": {"n": self.n, "p": self.p, "s": self.s},
                "results": [asdict(c) for c in self.checks],
                "summary": self.summary(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> ProofCheckReport:
        data = json.loads(text)
        checks = [Check(**c) for c in data["results"]]
        return cls(**data["params"], checks=checks)

    def to_text(self) -> str:
        out = [f"proof check n={self.n} p={self.p} s={self.s}"]
        for c in self.checks:
            extra = " ".join(f"{k}={v}" for k, v in c.detail.items())
            out.append(f"  {c.status.upper():7} {c.name} {extra}".rstrip())
        return "\n".join(out) + "\n"
