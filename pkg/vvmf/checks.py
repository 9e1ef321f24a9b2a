"""
Identity checks return records instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactnum import Cyclotomic, Matrix, matrix_to_json, scalar_to_json


def encode(value: Any) -> Any:
    """JSON form of a check operand."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, Fraction, Cyclotomic)):
        return scalar_to_json(value)
    if isinstance(value, Matrix):
        return matrix_to_json(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return str(value)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: Any = None
    rhs: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "lhs": encode(self.lhs),
            "rhs": encode(self.rhs),
            "detail": self.detail,
        }


def equality(name: str, lhs: Any, rhs: Any, detail: str = "") -> Check:
    return Check(name, bool(lhs == rhs), lhs, rhs, detail)


@dataclass
class CheckList:
    """Ordered collection of checks with an overall verdict."""

    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)
