"""Verdict/witness structures shared by all exhaustive checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    """One concrete counterexample: which named property failed, on which
    edges or chambers, and what was expected versus found."""

    axiom: str
    edges: tuple[str, ...]
    expected: str
    found: str

    def describe(self) -> str:
        where = ",".join(self.edges)
        return f"{self.axiom} at [{where}]: expected {self.expected}, found {self.found}"


@dataclass
class Verdict:
    passed: bool = True
    checked: int = 0
    witnesses: list[Witness] = field(default_factory=list)

    def fail(self, witness: Witness, cap: int):
        self.passed = False
        if len(self.witnesses) < cap:
            self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "witnesses": [w.describe() for w in self.witnesses],
        }


def render_verdicts(pairs: list[tuple[str, Verdict]]) -> str:
    lines = []
    for name, v in pairs:
        status = "pass" if v.passed else "FAIL"
        line = f"{name}: {status} ({v.checked} checked)"
        lines.append(line)
        for w in v.witnesses:
            lines.append(f"  witness: {w.describe()}")
    return "\n".join(lines)
