"""Safe time-dependent vehicle routing (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import (
    BudgetExceeded,
    Error,
    Instance,
    OracleRefusal,
    QueueModel,
    SpecError,
    evaluate,
    generate_instance,
    load_case_study,
    oracle,
    solve,
)

__all__ = [
    "BudgetExceeded",
    "Error",
    "Instance",
    "OracleRefusal",
    "QueueModel",
    "SpecError",
    "evaluate",
    "generate_instance",
    "load_case_study",
    "oracle",
    "solve",
]
