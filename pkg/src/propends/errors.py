"""Exception types shared across the package."""


class PropEndsError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(PropEndsError):
    """A coset enumeration or search exceeded its configured budget."""

    def __init__(self, message, defined=None):
        super().__init__(message)
        self.defined = defined


class MembershipError(PropEndsError):
    """A word does not lie in the subgroup it was rewritten against."""


class ActionInvalid(PropEndsError):
    """Action matrices do not satisfy the group's relators."""


class GroupMismatch(PropEndsError):
    """Two modules over different groups were combined."""


class SubgroupInvalid(PropEndsError):
    """Words do not generate a subgroup of the claimed kind."""


class NonPGroup(PropEndsError):
    """A finite node failed the p-power-order check."""


class NotClassifiable(PropEndsError):
    """An integer lattice is not a permutation lattice of the expected type."""


class IndexInfinite(PropEndsError):
    """A subgroup turned out to have infinite index within budget."""


class DSLSyntaxError(PropEndsError):
    """Group-expression parse error, carrying the offending source span."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.span = span
