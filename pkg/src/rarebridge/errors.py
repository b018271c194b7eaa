"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A parameter lies outside its documented range."""


class DomainError(ValueError):
    """The input is valid but the requested quantity is undefined for it,
    e.g. effective resistance on a disconnected graph."""


class ContractError(ValueError):
    """An input violates a structural precondition (non-symmetric matrix)."""


class EdgeListFormatError(OSError):
    """Malformed edge-list or frequency file; carries the offending line."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
