"""Exception hierarchy shared by every module."""


class ChoiceAftError(Exception):
    """Base class for all library errors."""


class SignatureMismatch(ChoiceAftError, ValueError):
    pass


class InvalidChoiceAtom(ChoiceAftError, ValueError):
    pass


class ResourceCapExceeded(ChoiceAftError):
    """An exponential enumeration would exceed a configured cap."""


class InconsistentPairError(ChoiceAftError, ValueError):
    pass


class UnsupportedProgram(ChoiceAftError, ValueError):
    """The program falls outside the fragment an operation is defined on."""


class AssumptionViolation(ChoiceAftError):
    """An operator produced an empty family at some pair."""

    def __init__(self, operator, pair, bound):
        self.operator = operator
        self.pair = pair
        self.bound = bound
        super().__init__(
            f"empty {bound} image of operator {operator} at pair {pair}: "
            "program is outside the supported fragment"
        )


class DialectError(ChoiceAftError):
    """Disjunctive heads mixed with choice atoms in one file."""


class ParseError(ChoiceAftError):
    def __init__(self, message, line, column, token=""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"{line}:{column}"
        tok = f" near {token!r}" if token else ""
        super().__init__(f"{where}: {message}{tok}")
