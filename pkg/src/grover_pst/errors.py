"""Exception types shared across the package."""


class GroverPstError(Exception):
    """Base class for all errors raised by grover_pst."""


class ParameterError(GroverPstError, ValueError):
    """A family or operation parameter is outside its valid range."""


class CapacityError(GroverPstError):
    """The requested instance exceeds the dense-storage limits."""


class DisconnectedGraphError(GroverPstError, ValueError):
    pass


class IsolatedVertexError(GroverPstError, ValueError):
    pass


class NotDistanceRegularError(GroverPstError, ValueError):
    pass


class SchemeHypothesisError(GroverPstError, ValueError):
    """The graph does not satisfy the hypothesis of the scheme criterion."""


class EdgeListParseError(GroverPstError, ValueError):
    pass
