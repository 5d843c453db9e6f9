"""Shared plumbing: lazily evaluated coefficient maps and check reports."""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from threading import Lock
from typing import Any, Hashable


class TruncationError(ValueError):
    """Raised when a coefficient outside the known box is requested."""


class LazyCoefficients(Mapping):
    """Read-only coefficient map evaluated on demand and memoized.

    ``func`` computes the coefficient of a key; ``keys`` enumerates the
    keys of the truncation box (iteration order is the order of ``keys``).
    """

    def __init__(self, func: Callable[[Any], Fraction], keys: Callable[[], Iterable[Hashable]]):
        self._func = func
        self._keys = keys
        self._cache: dict = {}
        self._lock = Lock()

    def __getitem__(self, key):
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = Fraction(self._func(key))
        with self._lock:
            self._cache[key] = value
        return value

    def __iter__(self):
        return iter(self._keys())

    def __len__(self):
        return sum(1 for _ in self._keys())


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str | int) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a 'num/den' string, got {text!r}")
    return Fraction(text.strip())


@dataclass
class CheckReport:
    """Outcome of a coefficient-level check.

    ``checked`` counts verified instances, ``skipped`` those needing data
    outside the truncation box; ``witnesses`` lists violations in
    the (deterministic) scan order of the checker.
    """

    checked: int = 0
    skipped: int = 0
    witnesses: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def fail(self, witness) -> None:
        self.witnesses.append(witness)

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "checked": self.checked,
            "skipped": self.skipped,
            "witnesses": list(self.witnesses),
        }
        out.update(self.extra)
        return out

