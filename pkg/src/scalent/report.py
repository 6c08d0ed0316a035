from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ._rational import certified_le, hi, lo, mid


@dataclass
class InequalityReport:
    """One certified check of ``lhs <= rhs``.

    ``lhs`` and ``rhs`` are interval enclosures (mpmath ``iv``).  ``holds``
    is True/False when the enclosures decide the comparison and None when
    they overlap.  ``exact_inputs`` is False when an entropy entering the
    check was replaced by a one-sided bound in the sound direction.
    """

    name: str
    lhs: Any
    rhs: Any
    exact_inputs: bool = True
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> Optional[bool]:
        verdict = certified_le(self.lhs, self.rhs)
        if verdict is False and not self.exact_inputs:
            # a bound-based refutation is not a refutation of the true values
            return None
        return verdict

    @property
    def slack(self) -> float:
        return lo(self.rhs) - hi(self.lhs)

    def to_json(self) -> dict:
        row = {
            "check": self.name,
            "lhs": mid(self.lhs),
            "rhs": mid(self.rhs),
            "slack": self.slack,
            "holds": self.holds,
            "exact_inputs": self.exact_inputs,
        }
        row.update({k: v for k, v in self.detail.items()})
        return row
