"""Exception types raised by the approximant constructors.

Every error carries a short ``code`` string so that reports and the CLI can
annotate skipped orders without string-matching messages.
"""

from __future__ import annotations


class SelfSimError(Exception):
    code = "error"


class OrderUnavailable(SelfSimError):
    """An approximant cannot be built at the requested order; callers skip it."""

    code = "order-k-unavailable"


class NoSolution(OrderUnavailable):
    code = "no-solution"


class DegenerateNodes(NoSolution):
    code = "degenerate-nodes"


class DepthUnavailable(SelfSimError):
    code = "depth-unavailable"


class BetaDegenerate(SelfSimError):
    code = "beta-degenerate"


class OmegaUnavailable(SelfSimError):
    code = "omega-unavailable"


class InsufficientOrders(SelfSimError):
    code = "insufficient-orders"


class BranchError(SelfSimError, ValueError):
    """Evaluation hit a pole or crossed a branch cut on the real axis."""

    code = "pole-or-branch"


class ScenarioSchemaError(SelfSimError, ValueError):
    code = "schema-violation"

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
