"""Run records shared by every estimator."""

from dataclasses import dataclass, field
from typing import Optional, Union

from .grover import GroverLabel
from .sampling import QueryLedger
from .stats import ConfidenceInterval


@dataclass
class RunRecord:
    """One estimation run.

    `success` is left None by the estimators and filled by the harness,
    which knows the true amplitude.  `iterations` = 0 flags the degenerate
    immediate-exit case (target accuracy no tighter than the prior).
    """

    algorithm: str
    a_hat: float
    interval: ConfidenceInterval
    ledger: QueryLedger
    final_state: Union[GroverLabel, str, None]
    iterations: int
    params: dict = field(default_factory=dict)
    seed: Optional[str] = None
    success: Optional[bool] = None
