"""Exception types shared across the package.

The CLI maps these onto distinct exit codes: bad input (2), enumeration
caps (3) and detected internal contract violations (4).
"""


class InputError(Exception):
    """User-supplied data is malformed or out of the supported domain."""

    def __init__(self, message: str, code: str = "input"):
        super().__init__(message)
        self.code = code


class CapExceededError(Exception):
    """An enumeration grew past its configured element cap."""


class InvariantError(Exception):
    """An internal invariant failed; results must not be trusted."""


class ComponentInvisibleError(InputError):
    """A state projects to zero in the requested invariant component."""

    def __init__(self, message: str):
        super().__init__(message, code="component_invisible")
