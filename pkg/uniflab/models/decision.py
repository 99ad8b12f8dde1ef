from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from uniflab.util import natural_key
from uniflab.modules.term.term import Term, print_term


@dataclass(frozen=True)
class Decision:
    """Outcome of a solver: a verified substitution or the reason there is none."""

    solvable: bool
    substitution: Optional[Dict[str, Term]] = None
    reason: Optional[str] = None
    backend: str = ""
    fail_rule: Optional[str] = None
    bounded: bool = False
    trace: Tuple[str, ...] = ()
    stats: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.solvable

    def to_json(self, include_trace=False):
        """Report with ``unifier``, ``fail_rule`` and ``trace`` always present, null when absent."""
        out = {"solvable": self.solvable, "backend": self.backend, "unifier": None,
               "fail_rule": self.fail_rule, "trace": list(self.trace) if include_trace else None}
        if self.solvable:
            out["unifier"] = {x: print_term(self.substitution[x])
                              for x in sorted(self.substitution, key=natural_key)}
        else:
            out["reason"] = self.reason
        if self.bounded:
            out["bounded"] = True
        return out


def Solvable(substitution, backend="", **kwargs):
    return Decision(True, dict(substitution), backend=backend, **kwargs)


def Unsolvable(reason, backend="", **kwargs):
    return Decision(False, None, reason=reason, backend=backend, **kwargs)
