import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import InstanceTooLargeError, NotInSpectrumError
from .sequence import Seq

logger = logging.getLogger("zerosum.detect")

BRUTE_FORCE_LIMIT = 2**24


def _shift(mask, delta):
    return mask << delta if delta >= 0 else mask >> -delta


def binary_chunks(multiplicity):
    """Split a multiplicity into powers of two plus a remainder; any count
    in [0, multiplicity] is the sum of a sub-collection of the chunks."""
    chunk = 1
    while multiplicity > 0:
        size = min(chunk, multiplicity)
        yield size
        multiplicity -= size
        chunk *= 2


class ReachabilityTable:
    """Which (count, sum) pairs are realized by sub-multisets seen so far.

    Layer c is an integer used as a bit-vector over the shifted sum axis:
    bit offset + s is set iff some sub-multiset of c terms has sum s. Only
    counts up to max_count are kept. The offset must be at least the
    magnitude of the most negative reachable sum.

    Tables are never mutated after being returned; add() returns a new
    table.
    """

    __slots__ = ("offset", "max_count", "layers")

    def __init__(self, offset, max_count, layers=None):
        self.offset = offset
        self.max_count = max_count
        if layers is None:
            layers = [1 << offset] + [0] * max_count
        self.layers = layers

    def add(self, value, multiplicity):
        if not multiplicity:
            return self
        layers = list(self.layers)
        top = self.max_count
        for size in binary_chunks(multiplicity):
            if size > top:
                break
            delta = size * value
            for count in range(top - size, -1, -1):
                layer = layers[count]
                if layer:
                    layers[count + size] |= _shift(layer, delta)
        return ReachabilityTable(self.offset, self.max_count, layers)

    def add_naive(self, value, multiplicity):
        """Reference update, one term at a time."""
        table = self
        for _ in range(multiplicity):
            layers = list(table.layers)
            for count in range(table.max_count - 1, -1, -1):
                layers[count + 1] |= _shift(layers[count], value)
            table = ReachabilityTable(self.offset, self.max_count, layers)
        return table

    def reaches(self, count, total=0):
        if count < 0 or count > self.max_count:
            return False
        position = self.offset + total
        if position < 0:
            return False
        return bool((self.layers[count] >> position) & 1)

    def zero_sum_lengths(self):
        """Bit-vector over counts: bit c set iff sum 0 is reachable with c
        terms."""
        mask = 0
        for count, layer in enumerate(self.layers):
            if (layer >> self.offset) & 1:
                mask |= 1 << count
        return mask

    def __eq__(self, other):
        if not isinstance(other, ReachabilityTable):
            return NotImplemented
        return (
            self.offset == other.offset
            and self.max_count == other.max_count
            and self.layers == other.layers
        )


def negative_mass(seq):
    return sum(-v * m for v, m in seq.items() if v < 0)


def build_table(seq, max_count):
    table = ReachabilityTable(negative_mass(seq), max_count)
    for value, multiplicity in seq.items():
        table = table.add(value, multiplicity)
    return table


@dataclass(frozen=True)
class Spectrum:
    """The lengths of the zero-sum subsequences of a sequence of length n.

    member is a bit-vector: bit l is set iff a zero-sum subsequence of
    length exactly l exists.
    """

    n: int
    member: int

    @classmethod
    def from_lengths(cls, n, lengths):
        member = 0
        for length in lengths:
            member |= 1 << length
        return cls(n, member)

    def __contains__(self, length):
        return 0 <= length <= self.n and bool((self.member >> length) & 1)

    @property
    def lengths(self):
        return [length for length in range(self.n + 1) if length in self]

    def __iter__(self):
        return iter(self.lengths)

    def min_positive(self):
        rest = self.member >> 1
        if not rest:
            return None
        return (rest & -rest).bit_length()

    def proper_lengths(self):
        return [length for length in self.lengths if 0 < length < self.n]


@dataclass(frozen=True)
class Witness:
    sub: Seq
    target_length: int

    def is_valid_for(self, seq):
        return (
            self.sub.is_subsequence_of(seq)
            and self.sub.sum == 0
            and self.sub.length == self.target_length
        )


def spectrum(seq):
    table = build_table(seq, seq.length)
    return Spectrum(seq.length, table.zero_sum_lengths())


def _effective_length(seq, t):
    """The length actually queried: for a zero-sum sequence, a zero-sum
    subsequence of length t exists iff one of length |S| - t does."""
    if seq.sum == 0:
        return min(t, seq.length - t)
    return t


def contains_length(seq, t):
    if t < 0 or t > seq.length:
        return False
    target = _effective_length(seq, t)
    if target == 0:
        return True
    table = ReachabilityTable(negative_mass(seq), target)
    for value, multiplicity in seq.items():
        table = table.add(value, multiplicity)
        if table.reaches(target):
            return True
    return False


def witness(seq, t):
    """A zero-sum subsequence of length t; the one with the smallest
    canonical key."""
    if not contains_length(seq, t):
        raise NotInSpectrumError(f"{seq!r} has no zero-sum subsequence of length {t}")
    classes = list(seq.items())
    offset = negative_mass(seq)

    # suffixes[i] covers the classes from i onwards
    suffixes = [ReachabilityTable(offset, t)]
    for value, multiplicity in reversed(classes):
        suffixes.append(suffixes[-1].add(value, multiplicity))
    suffixes.reverse()

    chosen = {}
    remaining_length, remaining_sum = t, 0
    for i, (value, multiplicity) in enumerate(classes):
        for count in range(min(multiplicity, remaining_length) + 1):
            if suffixes[i + 1].reaches(
                remaining_length - count, remaining_sum - count * value
            ):
                break
        else:
            raise AssertionError("Reachability table lost the witness")
        if count:
            chosen[value] = count
        remaining_length -= count
        remaining_sum -= count * value
    return Witness(Seq.from_mapping(seq.interval, chosen), t)


def brute_spectrum(seq):
    """Spectrum by enumerating every sub-multiset; a test oracle."""
    classes = list(seq.items())
    size = int(np.prod([m + 1 for _, m in classes], dtype=object)) if classes else 1
    if size > BRUTE_FORCE_LIMIT:
        raise InstanceTooLargeError(
            f"{size} sub-multisets exceed the oracle limit of {BRUTE_FORCE_LIMIT}"
        )
    lengths = np.zeros(1, dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for value, multiplicity in classes:
        counts = np.arange(multiplicity + 1, dtype=np.int64)
        lengths = (lengths[:, None] + counts[None, :]).ravel()
        sums = (sums[:, None] + value * counts[None, :]).ravel()
    zero_lengths = np.unique(lengths[sums == 0])
    logger.debug("Brute force enumerated %d sub-multisets", size)
    return Spectrum.from_lengths(seq.length, zero_lengths.tolist())
