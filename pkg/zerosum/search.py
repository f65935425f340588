import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat

from sympy import factorint

from .detect import contains_length
from .enumeration import Budget, SearchStats, ZeroSumEnumerator
from .exceptions import BudgetExhausted, InvariantViolation, PreconditionError
from .sequence import Interval, Seq

logger = logging.getLogger("zerosum.search")


def lcm_bound(k):
    """lcm(1, ..., D(I_k)); s'_t(I_k) is finite iff this divides t."""
    return math.lcm(*range(1, Interval(k).davenport + 1))


def finiteness(k, t):
    """Return (True, None) if s'_t(I_k) is finite, otherwise (False, d)
    with d the smallest integer in [1, D(I_k)] not dividing t."""
    if t < 1:
        raise PreconditionError("t must be positive")
    for d in range(1, Interval(k).davenport + 1):
        if t % d:
            return False, d
    return True, None


def bounds(k, t):
    is_finite, divisor = finiteness(k, t)
    if not is_finite:
        raise PreconditionError(
            f"s'_{t}(I_{k}) is infinite: {divisor} does not divide {t}"
        )
    return t + k * (k - 1), t + (2 * k - 2) * (2 * k - 3)


def lemma30_witnesses(k, t):
    """Two zero-sum sequences of length t + k(k-1) - 1 with no zero-sum
    subsequence of length t.

    With U = k.(-1)^[k] and V = (k-1).(-1)^[k-1] they are
    S = U^[t/(k+1) - 1] . V^[k] and R = U^[k-1] . V^[t/k - 1].
    """
    if k < 2:
        raise PreconditionError("The construction needs k >= 2")
    if t % k or t % (k + 1):
        raise PreconditionError(f"Both {k} and {k + 1} must divide {t}")
    u = Seq.from_mapping(k, {k: 1, -1: k})
    v = Seq.from_mapping(k, {k - 1: 1, -1: k - 1})
    s = u.power(t // (k + 1) - 1).concat(v.power(k))
    r = u.power(k - 1).concat(v.power(t // k - 1))
    for seq in (s, r):
        report = verify_construction(seq, t)
        if seq.length != t + k * (k - 1) - 1 or not report.avoiding:
            raise InvariantViolation(f"{seq!r} does not avoid length {t}")
    return s, r


def prime_power_block(k, q):
    """A zero-sum block over [-k, k] of length q whose zero-sum subsequences
    all have lengths divisible by q; q is a prime power <= D(I_k)."""
    if q == 2:
        mapping = {1: 1, -1: 1}
    elif q % 2:
        c = (q + 1) // 2
        mapping = {c: c - 1, -(c - 1): c}
    else:
        half = q // 2
        mapping = {half - 1: half + 1, -(half + 1): half - 1}
    return Seq.from_mapping(k, mapping)


@dataclass(frozen=True)
class FamilyBlock:
    divisor: int
    prime_power: int
    block: Seq

    @property
    def description(self):
        return f"({self.block.format()})^[x]"


def family_block(k, t):
    is_finite, divisor = finiteness(k, t)
    if is_finite:
        raise PreconditionError(f"s'_{t}(I_{k}) is finite")
    # The smallest non-divisor is always a prime power; the general rule
    # picks the largest prime power dividing it that fails to divide t.
    q = max(
        p**e for p, e in factorint(divisor).items() if t % (p**e)
    )
    return FamilyBlock(divisor, q, prime_power_block(k, q))


def infinite_family(k, t, x):
    """W^[x], an arbitrarily long zero-sum sequence with no zero-sum
    subsequence of length t."""
    if x < 1:
        raise PreconditionError("x must be positive")
    return family_block(k, t).block.power(x)


@dataclass(frozen=True)
class ConstructionReport:
    t: int
    sum: int
    length: int
    contains: bool

    @property
    def avoiding(self):
        return self.sum == 0 and not self.contains

    def as_dict(self):
        return {
            "t": self.t,
            "sum": self.sum,
            "length": self.length,
            "contains": self.contains,
            "avoiding": self.avoiding,
        }


def verify_construction(seq, t):
    return ConstructionReport(t, seq.sum, seq.length, contains_length(seq, t))


@dataclass(frozen=True)
class SprimeOutcome:
    kind: str
    k: int
    t: int
    value: int = None
    extremal: Seq = None
    verified_upper: int = None
    verified_lengths: tuple = ()
    divisor: int = None
    family: str = None

    @property
    def matches_lower_bound(self):
        return self.kind == "finite" and self.value == self.t + self.k * (self.k - 1)

    def as_dict(self):
        return {
            "kind": self.kind,
            "k": self.k,
            "t": self.t,
            "value": self.value,
            "extremal": self.extremal.format() if self.extremal is not None else None,
            "verified_upper": self.verified_upper,
            "verified_lengths": list(self.verified_lengths),
            "divisor": self.divisor,
            "family": self.family,
        }


def _forbidden_lengths(t, length):
    # A zero-sum sequence of length m has a zero-sum subsequence of length t
    # iff it has one of length m - t.
    if length < t:
        return frozenset()
    return frozenset({min(t, length - t)})


def iter_avoiding(k, t, length, budget=None, stats=None, root=None):
    """The sign-canonical zero-sum sequences of the given length with no
    zero-sum subsequence of length t, in ascending key order."""
    enumerator = ZeroSumEnumerator(
        k, length, forbidden=_forbidden_lengths(t, length), budget=budget
    )
    if stats is not None:
        enumerator.stats = stats
    return enumerator.iterate(root=root)


def _search_root(k, t, length, root, budget):
    stats = SearchStats()
    found = next(iter_avoiding(k, t, length, budget, stats, root=root), None)
    logger.debug(
        "Length %d, root %d: %s after %d nodes", length, root, found, stats.nodes
    )
    return (found.key if found is not None else None), stats


class SprimeSearch:
    """Exact computation of s'_t(I_k) for finite cases.

    Lengths are searched downwards from the proven upper bound; the first
    length with an avoiding sequence gives the value. Each length is split
    by the multiplicity of k into independent branches.
    """

    def __init__(self, k, t, budget=None, threads=1):
        self.k = k
        self.t = t
        self.budget = budget or Budget()
        self.threads = threads
        self.stats = SearchStats()

    def run(self):
        start = time.monotonic()
        self._deadline = start + self.budget.seconds
        try:
            return self._run()
        finally:
            self.stats.wall_time = time.monotonic() - start

    def _run(self):
        k, t = self.k, self.t
        is_finite, divisor = finiteness(k, t)
        if not is_finite:
            block = family_block(k, t)
            return SprimeOutcome(
                "infinite", k, t, divisor=divisor, family=block.description
            )
        lower, upper = bounds(k, t)
        verified = []
        for length in range(upper, lower - 2, -1):
            logger.info("Searching length %d for s'_%d(I_%d)", length, t, k)
            try:
                key = self._search_length(length)
            except BudgetExhausted as e:
                logger.warning("%s at length %d", str(e), length)
                raise BudgetExhausted(
                    f"{str(e)} at length {length}",
                    verified_lengths=verified,
                    stats=self.stats,
                )
            if key is not None:
                extremal = Seq(k, key)
                outcome = SprimeOutcome(
                    "finite",
                    k,
                    t,
                    value=length + 1,
                    extremal=extremal,
                    verified_upper=upper,
                    verified_lengths=tuple(verified),
                )
                self._check_certificate(outcome, lower, upper)
                return outcome
            logger.info("No avoiding sequence of length %d", length)
            verified.append(length)
        raise InvariantViolation(
            f"No avoiding sequence of length {lower - 1} for k={k}, t={t}"
        )

    def _remaining_budget(self):
        return Budget(
            seconds=max(0.0, self._deadline - time.monotonic()),
            nodes=max(0, self.budget.nodes - self.stats.nodes),
        )

    def _search_length(self, length):
        roots = range(length + 1)
        if self.threads <= 1:
            for root in roots:
                key, stats = _search_root(
                    self.k, self.t, length, root, self._remaining_budget()
                )
                self.stats.merge(stats)
                if key is not None:
                    return key
                self._check_budget()
            return None
        budget = self._remaining_budget()
        with ProcessPoolExecutor(max_workers=self.threads) as executor:
            results = list(
                executor.map(
                    _search_root,
                    repeat(self.k),
                    repeat(self.t),
                    repeat(length),
                    roots,
                    repeat(budget),
                )
            )
        for _, stats in results:
            self.stats.merge(stats)
        key = next((key for key, _ in results if key is not None), None)
        if key is None:
            self._check_budget()
        return key

    def _check_budget(self):
        if self.stats.nodes > self.budget.nodes:
            raise BudgetExhausted("Node budget exhausted", stats=self.stats)
        if time.monotonic() > self._deadline:
            raise BudgetExhausted("Time budget exhausted", stats=self.stats)

    def _check_certificate(self, outcome, lower, upper):
        report = verify_construction(outcome.extremal, self.t)
        if not report.avoiding or report.length != outcome.value - 1:
            raise InvariantViolation(f"Extremal witness fails: {report.as_dict()}")
        if not lower <= outcome.value <= upper:
            raise InvariantViolation(
                f"Value {outcome.value} outside [{lower}, {upper}]"
            )


def sprime(k, t, budget=None, threads=1):
    """Return (SprimeOutcome, SearchStats)."""
    search = SprimeSearch(k, t, budget=budget, threads=threads)
    outcome = search.run()
    return outcome, search.stats
