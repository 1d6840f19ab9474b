class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A construction or evaluation precondition is violated."""


class FidelityConvergenceError(RuntimeError):
    """The fidelity optimizer stopped before reaching its tolerance.

    ``best_F`` is the largest fidelity found, a certified lower bound on the
    true maximum.
    """

    def __init__(self, message: str, best_F: float, y_star: float, k_star: float):
        super().__init__(message)
        self.best_F = best_F
        self.y_star = y_star
        self.k_star = k_star
