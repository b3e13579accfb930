"""Exception types shared across the package."""


class EquivcatError(Exception):
    pass


class MalformedInputError(EquivcatError, ValueError):
    """Presentation data is dimensionally inconsistent or unparsable."""


class CharacteristicError(EquivcatError, ValueError):
    """The group order is not invertible in the ground field."""


class PreconditionError(EquivcatError, ValueError):
    pass


class StructuralError(EquivcatError):
    """A construction that should exist on valid input does not."""


class ConsistencyError(EquivcatError):
    """An identity that must hold on validated input failed."""


class RootsOfUnityError(EquivcatError, ValueError):
    def __init__(self, order, field):
        super().__init__(f"{field} lacks {order} distinct {order}-th roots of unity")
        self.order = order


class BudgetExceeded(EquivcatError):
    """An enumeration needed more candidates than the budget allows."""

    def __init__(self, what, needed, budget):
        super().__init__(f"{what}: needs {needed} candidates, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget
