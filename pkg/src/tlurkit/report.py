"""Uniform result record for every separability criterion.

``margin`` is always the amount of violation, oriented so that a positive
margin means entanglement was detected; scanning code can therefore treat
all criteria alike.  Detection uses a uniform deadband of 1e-9 against
floating-point noise on exact inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError

DETECTION_TOL = 1e-9


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    lhs: float
    rhs: float
    margin: float
    detected: bool
    components: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.detected != (self.margin > DETECTION_TOL):
            raise ValidationError(
                f"inconsistent report: detected={self.detected} but margin={self.margin}")

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "detected": self.detected,
            "components": dict(self.components),
        }


def make_report(criterion: str, lhs: float, rhs: float, margin: float,
                components: dict | None = None) -> CriterionReport:
    return CriterionReport(criterion, float(lhs), float(rhs), float(margin),
                           bool(margin > DETECTION_TOL),
                           {k: float(v) for k, v in (components or {}).items()})
