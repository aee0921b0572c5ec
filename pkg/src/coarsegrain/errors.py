"""Exception hierarchy shared by every module."""


class CoarseGrainError(Exception):
    pass


class StructuralError(CoarseGrainError, ValueError):
    """Shapes or dimensions do not line up."""


class ConfigurationError(CoarseGrainError, ValueError):
    pass


class InsufficientDataError(CoarseGrainError):
    """Not enough observations (or qualifying pairs) to answer the query.

    ``max_pair_distance`` is set when a pair scan found no pair at the
    requested scale; it reports the largest distance that was available.
    """

    def __init__(self, message, max_pair_distance=None):
        super().__init__(message)
        self.max_pair_distance = max_pair_distance


class DegenerateInputError(CoarseGrainError, ValueError):
    pass


class UsageError(CoarseGrainError):
    pass


class InfeasibleParametersError(CoarseGrainError, ValueError):
    pass
