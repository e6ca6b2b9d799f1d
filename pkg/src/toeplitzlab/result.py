"""Check results and suite reports.

A CheckResult is the single currency every verifier returns.  Status values:

  Pass          the asserted relation held on the whole reported scope
  Fail          a counterexample was found (always attached)
  Inconclusive  the scope was empty-by-budget or the input lacks the data
                needed to decide (e.g. no tail declaration)
  Vacated       a prerequisite recorded on the skeleton is false, so the
                statement's hypothesis never triggers; the scan still ran
"""

from dataclasses import dataclass, field
from fractions import Fraction

PASS = "Pass"
FAIL = "Fail"
INCONCLUSIVE = "Inconclusive"
VACATED = "Vacated"

_STATUSES = (PASS, FAIL, INCONCLUSIVE, VACATED)


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator),
                "approx": float(value)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        seq = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in seq]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        # json keeps ints exact, but huge group orders read better as strings
        return value if abs(value) < 1 << 53 else str(value)
    if isinstance(value, float):
        return value
    return str(value)


@dataclass
class CheckResult:
    name: str
    status: str
    scope: str
    witnesses: list = field(default_factory=list)
    counterexample: object = None
    millis: float = 0.0

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("Fail result must carry a counterexample")

    @property
    def ok(self):
        return self.status != FAIL

    def to_json(self):
        return {
            "name": self.name,
            "status": self.status,
            "scope": self.scope,
            "witnesses": _jsonable(self.witnesses),
            "counterexample": _jsonable(self.counterexample),
            "millis": round(self.millis, 3),
        }

    def render(self):
        head = f"[{self.status:>12}] {self.name}: {self.scope}"
        if self.counterexample is not None:
            head += f"\n{'':15}counterexample: {self.counterexample}"
        return head


def passed(name, scope, witnesses=None):
    return CheckResult(name, PASS, scope, witnesses or [])


def failed(name, scope, counterexample, witnesses=None):
    return CheckResult(name, FAIL, scope, witnesses or [], counterexample)


def inconclusive(name, scope, witnesses=None):
    return CheckResult(name, INCONCLUSIVE, scope, witnesses or [])


def vacated(name, scope, witnesses=None):
    return CheckResult(name, VACATED, scope, witnesses or [])


@dataclass
class SuiteReport:
    results: list

    @property
    def all_ok(self):
        return all(r.ok for r in self.results)

    def to_json(self):
        return {"all_ok": self.all_ok, "results": [r.to_json() for r in self.results]}

    def render(self):
        lines = [r.render() for r in self.results]
        tally = {}
        for r in self.results:
            tally[r.status] = tally.get(r.status, 0) + 1
        summary = ", ".join(f"{v} {k}" for k, v in sorted(tally.items()))
        lines.append(f"-- {len(self.results)} checks: {summary}")
        return "\n".join(lines)
