"""Exception types shared across the model."""


class ModelDomainError(ValueError):
    """A model quantity left its physically meaningful range."""


class CoilModelError(ModelDomainError):
    """The coil-angle relation produced a cosine outside (0, 1]."""


class IntegrationDiverged(ArithmeticError):
    """A time integration produced a non-finite value.

    Attributes:
        last_state: the last finite state before the failure.
    """

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class SingularConstraintError(ArithmeticError):
    """The volume-preservation ODE hit a vanishing denominator.

    Attributes:
        node: grid index of the first offending node.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
