import re
from dataclasses import dataclass

from .exceptions import (
    IntervalError,
    IntervalMismatchError,
    LengthOverflowError,
    NotASubsequenceError,
    SequenceParseError,
    ValueOutOfRangeError,
)

MAX_K = 64
MAX_LENGTH = 2**32

_separator = re.compile(r"[,\s]+")
_term = re.compile(r"^([+-]?\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class Interval:
    """The integer interval [-k, k]."""

    k: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise IntervalError(f"k must be in [1, {MAX_K}], not {self.k}")

    def __contains__(self, value):
        return -self.k <= value <= self.k

    @property
    def values(self):
        """The values in canonical order, k down to -k."""
        return range(self.k, -self.k - 1, -1)

    @property
    def davenport(self):
        return max(2, 2 * self.k - 1)


class Seq:
    """An unordered sequence (multiset) of integers drawn from [-k, k].

    Multiplicities are stored in a tuple indexed by k - v, so that index 0
    holds the multiplicity of k and the last index that of -k. That tuple,
    read as is, is also the canonical ordering key of the multiset.
    """

    __slots__ = ("interval", "_mult", "_length", "_sum")

    def __init__(self, k, multiplicities=None):
        self.interval = k if isinstance(k, Interval) else Interval(k)
        k = self.interval.k
        if multiplicities is None:
            multiplicities = (0,) * (2 * k + 1)
        multiplicities = tuple(int(m) for m in multiplicities)
        if len(multiplicities) != 2 * k + 1:
            raise SequenceParseError(
                f"Expected {2 * k + 1} multiplicities, got {len(multiplicities)}"
            )
        if any(m < 0 for m in multiplicities):
            raise SequenceParseError("Multiplicities must be nonnegative")
        self._mult = multiplicities
        self._length = sum(multiplicities)
        if self._length > MAX_LENGTH:
            raise LengthOverflowError(
                f"Sequence length {self._length} exceeds {MAX_LENGTH}"
            )
        self._sum = sum(
            v * m for v, m in zip(self.interval.values, multiplicities)
        )

    @classmethod
    def from_mapping(cls, k, mapping):
        interval = k if isinstance(k, Interval) else Interval(k)
        mult = [0] * (2 * interval.k + 1)
        for value, multiplicity in mapping.items():
            if value not in interval:
                raise ValueOutOfRangeError(
                    f"Value {value} is outside [-{interval.k}, {interval.k}]"
                )
            if multiplicity < 0:
                raise SequenceParseError(f"Negative multiplicity for {value}")
            mult[interval.k - value] += multiplicity
        return cls(interval, mult)

    @classmethod
    def parse(cls, text, k):
        mapping = {}
        for value, multiplicity in parse_terms(text):
            mapping[value] = mapping.get(value, 0) + multiplicity
        return cls.from_mapping(k, mapping)

    @property
    def k(self):
        return self.interval.k

    @property
    def length(self):
        return self._length

    @property
    def sum(self):
        return self._sum

    @property
    def key(self):
        return self._mult

    def __len__(self):
        return self._length

    def __getitem__(self, value):
        if value not in self.interval:
            return 0
        return self._mult[self.k - value]

    def items(self):
        """Yield (value, multiplicity) pairs with nonzero multiplicity,
        values descending."""
        for value, multiplicity in zip(self.interval.values, self._mult):
            if multiplicity:
                yield value, multiplicity

    def as_dict(self):
        return dict(self.items())

    def is_zero_sum(self):
        return self._sum == 0

    def __eq__(self, other):
        if not isinstance(other, Seq):
            return NotImplemented
        return self.interval == other.interval and self._mult == other._mult

    def __hash__(self):
        return hash((self.k, self._mult))

    def __repr__(self):
        return f"Seq(k={self.k}, {self.format() or 'empty'})"

    def __str__(self):
        return self.format()

    def format(self):
        return format_terms(self.items())

    def negate(self):
        return Seq(self.interval, reversed(self._mult))

    def _check_interval(self, other):
        if self.interval != other.interval:
            raise IntervalMismatchError(
                f"Cannot combine sequences over I_{self.k} and I_{other.k}"
            )

    def concat(self, other):
        self._check_interval(other)
        return Seq(self.interval, [a + b for a, b in zip(self._mult, other._mult)])

    def is_subsequence_of(self, other):
        self._check_interval(other)
        return all(a <= b for a, b in zip(self._mult, other._mult))

    def remove(self, sub):
        if not sub.is_subsequence_of(self):
            raise NotASubsequenceError(f"{sub!r} is not a subsequence of {self!r}")
        return Seq(self.interval, [a - b for a, b in zip(self._mult, sub._mult)])

    def power(self, x):
        """R^[x], the concatenation of x copies."""
        if x < 0:
            raise SequenceParseError("Power must be nonnegative")
        return Seq(self.interval, [m * x for m in self._mult])

    def canonicalize_sign(self):
        """Return self or its negation, whichever has the greater key.

        The greater key is the positive-heavy representative; the choice is
        the same for S and -S.
        """
        negated = self.negate()
        return self if self._mult >= negated._mult else negated

    def is_sign_canonical(self):
        return self._mult >= self._mult[::-1]


def parse_terms(text):
    """Parse the sequence grammar into (value, multiplicity) pairs, in the
    order written."""
    result = []
    text = text.strip()
    if not text:
        return result
    for token in _separator.split(text):
        match = _term.match(token)
        if not match:
            raise SequenceParseError(f"Malformed term '{token}'")
        value = int(match.group(1))
        multiplicity = int(match.group(2)) if match.group(2) is not None else 1
        if multiplicity < 1:
            raise SequenceParseError(
                f"Multiplicity must be positive in term '{token}'"
            )
        result.append((value, multiplicity))
    return result


def parse_integers(text):
    """Parse the sequence grammar into a flat, ordered list of integers."""
    return [v for v, m in parse_terms(text) for _ in range(m)]


def format_terms(pairs):
    return ",".join(f"{v}^{m}" if m > 1 else str(v) for v, m in pairs)


def parse(text, k):
    return Seq.parse(text, k)
