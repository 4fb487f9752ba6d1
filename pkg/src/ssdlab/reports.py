"""Report containers shared by the checking modules.

Every report knows how to turn itself into a plain ``dict`` whose keys are the
frozen JSON field names documented in ``docs/report_schema.md``.  Elements are
serialized through their ring's label so the output is stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

DEFAULT_WITNESS_CAP = 8


def element_label(x) -> Optional[str]:
    if x is None:
        return None
    return x.ring.label(x.value)


@dataclass(frozen=True)
class Witness:
    """A concrete point where an identity fails: ``lhs != rhs`` at ``(x, y[, z])``."""

    identity: str
    x: Any
    y: Any
    lhs: Any
    rhs: Any
    z: Any = None

    def to_dict(self) -> dict:
        out = {
            "identity": self.identity,
            "x": element_label(self.x),
            "y": element_label(self.y),
            "lhs": element_label(self.lhs),
            "rhs": element_label(self.rhs),
        }
        if self.z is not None:
            out["z"] = element_label(self.z)
        return out


@dataclass
class DefectReport:
    """Outcome of checking one or more identities over a domain.

    ``verdict`` is ``"holds"``, ``"fails"`` or ``"precondition-failed"``; the
    last one is used when a required premise (for instance ``g(0) = 0``) is
    violated, so that a broken premise is never mistaken for a broken identity.
    """

    name: str
    verdict: str = "holds"
    witnesses: list[Witness] = field(default_factory=list)
    pairs_checked: int = 0
    notes: list[str] = field(default_factory=list)
    exhaustive: bool = True

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def add_witness(self, w: Witness, cap: int = DEFAULT_WITNESS_CAP) -> None:
        self.verdict = "fails" if self.verdict == "holds" else self.verdict
        if sum(1 for v in self.witnesses if v.identity == w.identity) < cap:
            self.witnesses.append(w)

    def merge(self, other: "DefectReport") -> "DefectReport":
        """Conjunction of two reports; witnesses concatenated in order."""
        order = ["holds", "fails", "precondition-failed"]
        verdict = max(self.verdict, other.verdict, key=order.index)
        return DefectReport(
            name=self.name,
            verdict=verdict,
            witnesses=self.witnesses + other.witnesses,
            pairs_checked=self.pairs_checked + other.pairs_checked,
            notes=self.notes + other.notes,
            exhaustive=self.exhaustive and other.exhaustive,
        )

    def to_dict(self) -> dict:
        return {
            "report": "defect",
            "name": self.name,
            "verdict": self.verdict,
            "holds": self.holds,
            "pairs_checked": self.pairs_checked,
            "exhaustive": self.exhaustive,
            "notes": list(self.notes),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
