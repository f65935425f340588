import logging
import math
from collections import Counter
from dataclasses import dataclass

from .detect import spectrum, witness
from .exceptions import PreconditionError
from .search import finiteness

logger = logging.getLogger("zerosum.factorize")


@dataclass(frozen=True)
class Profile:
    """Part lengths of a factorization: L, alpha = max L, n[l] = number of
    parts of length l."""

    L: frozenset
    alpha: int
    n: dict

    @property
    def total_length(self):
        return sum(length * count for length, count in self.n.items())

    @property
    def part_count(self):
        return sum(self.n.values())

    def max_count(self):
        return max(self.n.values(), default=0)

    def part_sums(self):
        """Lengths obtained by concatenating some of the parts; each one is
        the length of a zero-sum subsequence of the source."""
        reachable = 1
        for length, count in self.n.items():
            for _ in range(count):
                reachable |= reachable << length
        return [s for s in range(self.total_length + 1) if (reachable >> s) & 1]


@dataclass(frozen=True)
class Factorization:
    source: object
    parts: tuple

    def profile(self):
        counts = Counter(part.length for part in self.parts)
        return Profile(frozenset(counts), max(counts, default=0), dict(counts))


def factorize_minimal(seq):
    """Split a zero-sum sequence into minimal zero-sum parts.

    Each step removes a shortest nonempty zero-sum subsequence, which is
    necessarily minimal; among those of that length, the one with the
    smallest canonical key.
    """
    if seq.sum != 0:
        raise PreconditionError(f"{seq!r} is not a zero-sum sequence")
    parts = []
    rest = seq
    while rest.length:
        shortest = spectrum(rest).min_positive()
        part = witness(rest, shortest).sub
        parts.append(part)
        rest = rest.remove(part)
    logger.debug("Factorized %r into %d parts", seq, len(parts))
    return Factorization(seq, tuple(parts))


def profile(factorization):
    return factorization.profile()


def _rotate(mask, shift, beta, full):
    shift %= beta
    return ((mask << shift) | (mask >> (beta - shift))) & full


@dataclass(frozen=True)
class BetaFactorization:
    beta: int
    X0: tuple
    parts: tuple

    def is_valid_for(self, values):
        beta = self.beta
        if len(self.X0) > beta - 1 or _has_zero_residue_subset(self.X0, beta):
            return False
        for part in self.parts:
            if not part or len(part) > beta or sum(part) % beta:
                return False
        together = list(self.X0) + [x for part in self.parts for x in part]
        return Counter(together) == Counter(values)


def _has_zero_residue_subset(values, beta):
    full = (1 << beta) - 1
    seen = 0
    for x in values:
        seen |= _rotate(seen, x, beta, full) | (1 << (x % beta))
    return bool(seen & 1)


def _shortest_zero_residue_subset(values, beta):
    """Indices of a minimum-cardinality nonempty subsequence with sum
    divisible by beta, lexicographically earliest among those; None if
    there is none of at most beta terms."""
    full = (1 << beta) - 1
    top = min(beta, len(values))
    # suffix[i][c]: residues reachable with exactly c terms of values[i:]
    suffix = [[1] + [0] * top]
    for x in reversed(values):
        previous = suffix[-1]
        current = list(previous)
        for count in range(1, top + 1):
            current[count] |= _rotate(previous[count - 1], x, beta, full)
        suffix.append(current)
    suffix.reverse()

    size = next((c for c in range(1, top + 1) if suffix[0][c] & 1), None)
    if size is None:
        return None
    indices = []
    needed, residue = size, 0
    for i, x in enumerate(values):
        if not needed:
            break
        rest_residue = (residue - x) % beta
        if (suffix[i + 1][needed - 1] >> rest_residue) & 1:
            indices.append(i)
            needed -= 1
            residue = rest_residue
    return indices


def beta_factorize(values, beta):
    """Split values into X0 * X1 * ... * Xr, each Xj of at most beta terms
    with sum divisible by beta, X0 having no nonempty subsequence with sum
    divisible by beta."""
    if beta < 1:
        raise PreconditionError("beta must be positive")
    rest = list(values)
    parts = []
    while rest:
        indices = _shortest_zero_residue_subset(rest, beta)
        if indices is None:
            break
        taken = set(indices)
        parts.append(tuple(rest[i] for i in indices))
        rest = [x for i, x in enumerate(rest) if i not in taken]
    return BetaFactorization(beta, tuple(rest), tuple(parts))


def lemma37_bound(prof, t, beta):
    """t - beta + (beta - 1) * max(L - {beta}); the max of nothing is 0."""
    others = [length for length in prof.L if length != beta]
    return t - beta + (beta - 1) * max(others, default=0)


def alpha_bound(t, alpha):
    """Longest possible t-avoiding sequence whose factorization has largest
    part length alpha."""
    return t - alpha + (alpha - 1) ** 2


def part_count_bound(prof):
    """A lower bound on the number of parts: ceil(|S| / alpha)."""
    if not prof.alpha:
        return 0
    return math.ceil(prof.total_length / prof.alpha)


def pigeonhole_count(prof):
    """A lower bound on the largest n[l]: ceil(|S| / (alpha * |L|)).

    The parts number at least |S| / alpha and fall into |L| length classes.
    """
    if not prof.alpha:
        return 0
    return math.ceil(prof.total_length / (prof.alpha * len(prof.L)))


@dataclass(frozen=True)
class Prediction:
    predicted: bool
    beta: int
    bound: int
    profile: Profile


def analyze37(seq, t, strict=False):
    """Decide from one factorization profile that seq has a zero-sum
    subsequence of length t.

    A positive answer is a proof: for beta in L with beta | t and
    n[beta] >= alpha - 1, a sequence avoiding t has length at most
    lemma37_bound(beta). A negative answer proves nothing.
    """
    if seq.sum != 0:
        raise PreconditionError(f"{seq!r} is not a zero-sum sequence")
    if t < 1:
        raise PreconditionError("t must be positive")
    if strict:
        if seq.k < 2:
            raise PreconditionError("k must be at least 2")
        is_finite, divisor = finiteness(seq.k, t)
        if not is_finite:
            raise PreconditionError(f"{divisor} does not divide {t}")
    prof = factorize_minimal(seq).profile()
    for beta in sorted(prof.L):
        if t % beta or prof.n[beta] < prof.alpha - 1:
            continue
        bound = lemma37_bound(prof, t, beta)
        if seq.length > bound:
            return Prediction(True, beta, bound, prof)
    return Prediction(False, None, None, prof)


def lemma37_predict(seq, t, strict=False):
    return analyze37(seq, t, strict=strict).predicted
