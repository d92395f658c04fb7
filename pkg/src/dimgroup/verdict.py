"""Three-valued answers for questions that are only semidecidable."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TriState:
    """``value`` is True, False or None (unknown); ``bound`` is the budget used."""

    value: bool | None
    reason: str = ""
    bound: int | None = None
    level: int | None = None

    @classmethod
    def true(cls, reason: str = "", level: int | None = None, bound: int | None = None) -> TriState:
        return cls(True, reason, bound, level)

    @classmethod
    def false(cls, reason: str = "", level: int | None = None, bound: int | None = None) -> TriState:
        return cls(False, reason, bound, level)

    @classmethod
    def unknown(cls, reason: str, bound: int | None = None) -> TriState:
        return cls(None, reason, bound)

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __bool__(self) -> bool:
        raise TypeError("TriState has no truth value; test .is_true / .is_false")

    def label(self) -> str:
        if self.value is None:
            return "Unknown" + (f"(bound={self.bound})" if self.bound is not None else "")
        return "True" if self.value else "False"

    def to_json(self) -> dict:
        out: dict = {"value": self.value}
        if self.reason:
            out["reason"] = self.reason
        if self.bound is not None:
            out["bound"] = self.bound
        if self.level is not None:
            out["level"] = self.level
        return out
