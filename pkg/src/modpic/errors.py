"""Exception hierarchy for modpic."""


class ModpicError(ValueError):
    """Base class for all errors raised by modpic."""


class InvalidSpace(ModpicError):
    pass


class InvalidBoundary(ModpicError):
    pass


class InvalidMark(ModpicError):
    pass


class SpaceMismatch(ModpicError):
    pass


class OutOfRange(ModpicError):
    pass


class ParseError(ModpicError):
    pass


class InvalidFamily(ModpicError):
    pass


class ParityError(ModpicError):
    pass
