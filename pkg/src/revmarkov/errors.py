"""Exception hierarchy.

Input problems (bad graphs, paths, files) derive from :class:`InputError`;
numbers outside a formula's domain derive from :class:`NumericalDomainError`.
The CLI maps the two families to exit codes 2 and 3.
"""


class InputError(ValueError):
    pass


class GraphError(InputError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class UnknownLabelError(GraphError):
    pass


class InadmissiblePathError(InputError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class StartMismatchError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, position=None, char=None):
        super().__init__(message)
        self.position = position
        self.char = char


class CapExceededError(InputError):
    pass


class NumericalDomainError(ArithmeticError):
    pass
