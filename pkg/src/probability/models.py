from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from src.predicates import EventDescriptor


class Method(Enum):
    CLOSED_FORM = 'closed-form'
    QUADRATURE = 'quadrature'
    MONTE_CARLO = 'monte-carlo'


@dataclass(frozen=True)
class ProbabilityEstimate:
    event: Optional[EventDescriptor]
    value: float
    method: Method
    uncertainty: float = 0.0
    n: Optional[int] = None
    seed: Optional[int] = None
    failures: int = 0
    sampler: Optional[str] = None

    def __post_init__(self):
        if not -1e-12 <= self.value <= 1.0 + 1e-12:
            raise ValueError(f"probability {self.value} outside [0, 1]")
        if self.uncertainty < 0.0:
            raise ValueError(f"negative uncertainty {self.uncertainty}")

    def to_record(self) -> Dict[str, Any]:
        """Flat record: one row per (event, method)."""
        return {
            'case': self.event.interpretation.value if self.event else None,
            'predicate': self.event.predicate.value if self.event else None,
            'method': self.method.value,
            'value': self.value,
            'uncertainty': self.uncertainty,
            'n': self.n,
            'seed': self.seed,
            'failures': self.failures,
        }
