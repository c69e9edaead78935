"""Exception types shared across the toolkit."""


class SabotError(Exception):
    """Base class for all toolkit errors."""


class BudgetExhausted(SabotError):
    """No expensive evaluations remain."""


class OutOfBounds(SabotError):
    """A design vector violates the problem's box bounds."""


class LengthMismatch(SabotError):
    """Two vectors that must share a length do not."""


class DimensionMismatch(SabotError):
    """Query dimensionality differs from what the model/indicator expects."""


class ModelNotFitted(SabotError):
    """A surrogate prediction was requested before fitting."""


class SingularSystem(SabotError):
    """The interpolation system stayed singular through the nugget ladder."""


class DegenerateData(SabotError):
    """Training data has fewer than two distinct rows."""


class AllCandidatesFailed(SabotError):
    """Every candidate surrogate configuration failed to fit."""


class UnknownFront(SabotError):
    """The benchmark problem has no closed-form Pareto front."""


class StateCorrupt(SabotError):
    """An ask was issued while population members lack evaluations."""


class TellMismatch(SabotError):
    """tell() received solutions that are not the ones from the last ask()."""


class EmptySet(SabotError):
    """An indicator was called with an empty point set."""


class ProtocolError(SabotError):
    """The external evaluator wrote a malformed response line."""


class EvaluatorCrashed(SabotError):
    """The external evaluator process exited unexpectedly."""


class EvaluatorTimeout(SabotError):
    """The external evaluator did not answer within the wall-clock limit."""


class ConfigError(SabotError):
    """A run configuration failed strict validation."""


class MismatchedExperiment(SabotError):
    """compare() was given configs that differ in problem, budget, or seeds."""
