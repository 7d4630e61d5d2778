"""Exception hierarchy shared by all modules.

The CLI maps these to distinct exit codes: InputError -> 2,
WindowError -> 3, InternalCheckError -> 4.
"""


class JGammaError(Exception):
    pass


class InputError(JGammaError):
    """Rejected input: malformed data or violated precondition."""


class WindowError(JGammaError):
    """A computation needed objects outside the enumerated window."""


class InternalCheckError(JGammaError):
    """An invariant that must hold by construction failed."""
