"""Exception types shared across the toolkit.

Every failure mode that callers are expected to catch gets its own class;
generic ValueError/TypeError are reserved for plain programming errors.
"""

from __future__ import annotations


class GokitError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedSystem(GokitError):
    """Root-system family/rank outside the supported table (e.g. D2, D3, E6)."""


class GroupTooLarge(GokitError):
    """Weyl group closure exceeded the configured element cap."""


class DegeneratePlane(GokitError):
    """Plane section requested through proportional (or zero) roots."""


class SearchBudgetExceeded(GokitError):
    """Decomposition search ran out of its node budget.

    The ``nodes`` attribute records how many nodes were expanded before
    the search gave up.
    """

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"search budget exhausted after {nodes} nodes (budget {budget})")
        self.nodes = nodes
        self.budget = budget


class InvalidPartition(GokitError):
    """Triple (R0, R1, R2) violates the structural contract.

    Raised for non-total or overlapping parts, non-symmetric parts, a
    non-closed R0, or an empty R1/R2.
    """


class NotASubalgebra(GokitError):
    """Proposed subalgebra basis is not closed under the bracket."""


class DimensionError(GokitError):
    """Vector or matrix dimensions incompatible with the ambient space."""


class NotARoot(GokitError):
    """Vector expected to be a root of the ambient system is not one."""


class DomainError(GokitError):
    """Argument outside the mathematical domain of the operation (e.g. X = 0)."""


class DegenerateOrbit(GokitError):
    """Rank-2 orbit restriction produced an empty tangent space."""


class InvalidMetric(GokitError):
    """Metric blocks are not invariant under the isotropy action, or
    eigenvalues are not positive."""
