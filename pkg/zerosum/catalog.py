import functools
import logging
from dataclasses import dataclass, field

from .detect import spectrum
from .enumeration import ZeroSumEnumerator
from .exceptions import PreconditionError
from .sequence import Interval, Seq

logger = logging.getLogger("zerosum.catalog")


def is_minimal(seq):
    if seq.length == 0 or seq.sum != 0:
        return False
    return not spectrum(seq).proper_lengths()


def length_cap(k):
    return max(4 * k, 2 * k + 3)


def _minimal_branch(k, length, root):
    """The sign-canonical minimal sequences in which k has multiplicity
    root."""
    enumerator = ZeroSumEnumerator(
        k, length, forbidden=frozenset(range(1, length)), allow_zero=False
    )
    return list(enumerator.iterate(root=root))


@functools.lru_cache(maxsize=None)
def _enumerate_minimal(k, length):
    if length == 1:
        return (Seq.from_mapping(k, {0: 1}),)
    found = set()
    for root in range(length + 1):
        for seq in _minimal_branch(k, length, root):
            found.add(seq)
            found.add(seq.negate())
    return tuple(sorted(found, key=lambda s: s.key, reverse=True))


def enumerate_minimal(k, length):
    """All minimal zero-sum sequences of the given length over [-k, k].

    The result is negation-closed and sorted by descending canonical key.
    The singleton 0 counts as the only minimal sequence of length 1.
    """
    Interval(k)
    if length < 1:
        raise PreconditionError("Length must be positive")
    if length > length_cap(k):
        raise PreconditionError(
            f"Length {length} exceeds the enumeration cap {length_cap(k)}"
        )
    result = list(_enumerate_minimal(k, length))
    logger.debug("%d minimal sequences of length %d over I_%d", len(result), length, k)
    return result


@dataclass
class MinimalCatalog:
    k: int
    by_length: dict = field(default_factory=dict)
    max_checked: int = 0

    @classmethod
    def build(cls, k, max_length):
        catalog = cls(k)
        for length in range(1, max_length + 1):
            catalog.by_length[length] = enumerate_minimal(k, length)
        catalog.max_checked = max_length
        return catalog

    @property
    def davenport(self):
        return max(
            (length for length, seqs in self.by_length.items() if seqs), default=0
        )


@dataclass(frozen=True)
class DavenportResult:
    k: int
    value: int
    witness: Seq
    cap: int
    verified_empty: tuple

    @property
    def fully_verified(self):
        """Whether every length in (value, cap] was enumerated and found
        empty."""
        return self.verified_empty == tuple(range(self.value + 1, self.cap + 1))


def davenport(k, cap=None):
    """The largest length <= cap of a minimal zero-sum sequence over [-k, k].

    Lengths above cap are not examined; max(2, 2k - 1) is known to be the
    value for every k.
    """
    if cap is None:
        cap = 2 * k + 3
    if cap < 2 * k + 2:
        raise PreconditionError(f"cap must be at least {2 * k + 2}, not {cap}")
    verified_empty = []
    for length in range(cap, 0, -1):
        seqs = enumerate_minimal(k, length)
        if seqs:
            logger.info("D(I_%d) = %d (lengths up to %d examined)", k, length, cap)
            return DavenportResult(
                k, length, seqs[0], cap, tuple(reversed(verified_empty))
            )
        verified_empty.append(length)
    raise AssertionError("The singleton 0 is always minimal")
