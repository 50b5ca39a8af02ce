"""Exception hierarchy shared by the library and the CLI.

The CLI maps :class:`InputError` to exit code 1 and
:class:`ContractError` / :class:`ResourceError` to exit code 2.
"""


class DomcoreError(Exception):
    exit_code = 2


class InputError(DomcoreError):
    """Unreadable or malformed input data."""

    exit_code = 1


class ParseError(InputError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class ContractError(DomcoreError, ValueError):
    """A precondition of an operation was violated."""


class ResourceError(DomcoreError):
    """A computation would exceed its configured budget."""
