"""Exception hierarchy shared across the package.

The CLI maps ConfigError to exit code 2 and NumericError to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid configuration: bad sizes, indices, parameters, or config files."""


class CapabilityError(ConfigError):
    """A request exceeds a hard implementation limit (e.g. dense solves above 10 qubits)."""


class NumericError(ArithmeticError):
    """Numerically invalid input: non-unitary matrices, non-normalized states."""


class UndefinedMetricError(NumericError):
    """A metric is undefined for the given inputs (e.g. relative error with E_g = 0)."""


class BudgetExhaustedError(RuntimeError):
    """An evaluation was charged past the ledger budget.

    Run drivers pre-check affordability at gate boundaries, so hitting this
    indicates a caller bug rather than a normal end-of-budget condition.
    """
