class ZeroSumError(Exception):
    pass


class SequenceError(ZeroSumError):
    pass


class SequenceParseError(SequenceError):
    pass


class ValueOutOfRangeError(SequenceError):
    pass


class IntervalError(SequenceError):
    pass


class IntervalMismatchError(SequenceError):
    pass


class NotASubsequenceError(SequenceError):
    pass


class LengthOverflowError(SequenceError):
    pass


class PreconditionError(ZeroSumError):
    pass


class NotInSpectrumError(ZeroSumError):
    pass


class InstanceTooLargeError(ZeroSumError):
    pass


class InvariantViolation(ZeroSumError):
    pass


class BudgetExhausted(ZeroSumError):
    def __init__(self, message, verified_lengths=(), stats=None):
        super().__init__(message)
        self.verified_lengths = tuple(verified_lengths)
        self.stats = stats
