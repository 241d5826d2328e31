from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one lemma check.

    ``hypothesis_held`` is False when the check passed vacuously because the
    lemma's hypothesis was not met; ``measure`` carries a numeric defect
    where one makes sense.
    """

    passed: bool
    hypothesis_held: bool = True
    detail: str = ""
    witness: Any = None
    measure: float | None = None

    def __bool__(self) -> bool:
        return self.passed
