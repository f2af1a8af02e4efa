"""Exception types shared across the pipeline."""


class Infeasible(Exception):
    """The (relaxed or integer) problem has no feasible point."""


class BudgetExceeded(RuntimeError):
    """An exhaustive or pseudo-polynomial routine would exceed its configured budget."""


class BoxTooLarge(BudgetExceeded):
    pass


class StateSpaceTooLarge(BudgetExceeded):
    pass


class LiftInfeasible(AssertionError):
    """A lifted kernel solution violates the original instance. Always a bug."""


class NoConfiguration(Infeasible):
    """A block type admits no configuration at all."""
