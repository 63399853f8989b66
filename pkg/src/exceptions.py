"""
Error types shared by every module

Each error carries the process exit code the CLI maps it to.
"""


class DomainError(ValueError):
    """
    A precondition of an operation is violated by its input
    """

    exit_code = 2

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class InvariantError(RuntimeError):
    """
    An internal consistency check failed; never expected in practice
    """

    exit_code = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail
