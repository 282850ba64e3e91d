"""
Certificates: the machine-readable record of which exact checks ran and passed.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from src import CERTIFICATE_SCHEMA, __version__
from src.errors import VerificationError

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class Certificate:
    command: str
    q: int
    parameters: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def run(self, name: str, fn: Callable[..., Any], *args, **kwargs) -> CheckResult:
        """
        Run one verification. `fn` returns a CheckResult (or a details dict) on
        success and raises VerificationError on failure; either way the outcome
        is recorded under `name`.
        """
        start = time.perf_counter()
        try:
            outcome = fn(*args, **kwargs)
        except VerificationError as e:
            logger.warning("check %s failed: %s", name, e)
            check = CheckResult(name, False, {"error": e.message, "claim": e.claim, "witness": e.witness})
        else:
            if isinstance(outcome, CheckResult):
                check = CheckResult(name, outcome.passed, outcome.details)
            else:
                check = CheckResult(name, True, dict(outcome or {}))
        self.timing[name] = round(time.perf_counter() - start, 6)
        return self.add(check)

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            "schema": CERTIFICATE_SCHEMA,
            "version": __version__,
            "command": self.command,
            "q": self.q,
            "parameters": self.parameters,
            "checks": [check.to_dict() for check in self.checks],
            "passed": self.passed,
        }
        if self.payload:
            data["payload"] = self.payload
        if include_timing:
            data["timing"] = self.timing
        return data

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)


def require(condition: bool, claim: str, message: str, witness: Optional[Dict[str, Any]] = None) -> None:
    """Raise VerificationError unless `condition` holds."""
    if not condition:
        raise VerificationError(claim, message, witness)
