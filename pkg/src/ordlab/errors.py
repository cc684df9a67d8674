"""Exception types shared across the package."""


class OrdlabError(Exception):
    pass


class ParseError(OrdlabError):
    pass


class DomainError(OrdlabError, ValueError):
    """An element code is malformed or not a member of the order."""


class SortError(OrdlabError):
    """Terms with atoms of incompatible sorts were compared."""


class WitnessError(OrdlabError):
    """A supplied descending-chain witness is not descending."""


class RewriteError(OrdlabError):
    def __init__(self, message, stuck=None):
        super().__init__(message)
        self.stuck = stuck


class RenderError(OrdlabError):
    pass


class EvalError(OrdlabError):
    pass


class RankError(OrdlabError):
    pass


class SaturationError(OrdlabError):
    pass
