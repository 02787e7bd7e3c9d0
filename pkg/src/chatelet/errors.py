"""Exception hierarchy shared by every module of the package."""


class ChateletError(Exception):
    """Base class for all library errors."""


class PrecisionError(ChateletError):
    pass


class BudgetExhausted(ChateletError):
    """An effort bound ran out before a conclusion was reached.

    This is never a certificate of absence.
    """


class NotSquarefree(ChateletError, ValueError):
    pass


class DegenerateField(ChateletError, ValueError):
    pass


class FieldMismatch(ChateletError, ValueError):
    pass


class NotRealField(ChateletError, ValueError):
    pass


class NotSeparable(ChateletError, ValueError):
    pass


class ReducibleFactor(ChateletError, ValueError):
    def __init__(self, index, witness):
        self.index = index
        self.witness = witness
        super().__init__(f"factor {index} is reducible: {witness}")


class DepthCapReached(ChateletError):
    def __init__(self, prime, depth):
        self.prime = prime
        self.depth = depth
        super().__init__(f"local analysis at p={prime} did not finish by depth {depth}")


class OnBadFibre(ChateletError, ValueError):
    pass


class Incomplete(ChateletError):
    pass


class HypothesisViolation(ChateletError, ValueError):
    pass


class InternalContradiction(ChateletError):
    pass


class Disagreement(ChateletError):
    pass


class SearchLimitExhausted(ChateletError):
    def __init__(self, uncovered, limit):
        self.uncovered = uncovered
        self.limit = limit
        super().__init__(f"classes {sorted(uncovered)} uncovered below {limit}")


class ConstructionFailed(ChateletError):
    pass


class Inconsistent(ChateletError, ValueError):
    pass
