class BudgetError(RuntimeError):
    """A quadratic-cost operation would exceed its configured work budget."""
