import time
from dataclasses import dataclass, field

from .detect import ReachabilityTable
from .exceptions import BudgetExhausted
from .sequence import Interval, Seq

BUDGET_CHECK_INTERVAL = 4096


@dataclass(frozen=True)
class Budget:
    seconds: float = 7200
    nodes: int = 10**10

    def deadline(self):
        return time.monotonic() + self.seconds


@dataclass
class SearchStats:
    nodes: int = 0
    pruned_monotone: int = 0
    pruned_sign: int = 0
    pruned_feasibility: int = 0
    wall_time: float = 0.0

    def merge(self, other):
        self.nodes += other.nodes
        self.pruned_monotone += other.pruned_monotone
        self.pruned_sign += other.pruned_sign
        self.pruned_feasibility += other.pruned_feasibility

    def as_dict(self):
        return {
            "nodes": self.nodes,
            "pruned_monotone": self.pruned_monotone,
            "pruned_sign": self.pruned_sign,
            "pruned_feasibility": self.pruned_feasibility,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class ZeroSumEnumerator:
    """Depth-first enumeration of the sign-canonical zero-sum multisets of
    a given length over [-k, k].

    Multiplicities are chosen in value order k, k-1, ..., -k, each in
    ascending order, so sequences come out in ascending key order. A branch
    is cut as soon as the partial multiset has a zero-sum subsequence whose
    length is in ``forbidden``; since adding terms only adds zero-sum
    subsequences, no completion of such a branch can escape.
    """

    k: int
    length: int
    forbidden: frozenset = frozenset()
    allow_zero: bool = True
    budget: Budget = None
    stats: SearchStats = field(default_factory=SearchStats)

    def __post_init__(self):
        interval = Interval(self.k)
        self._interval = interval
        self._values = [v for v in interval.values if v or self.allow_zero]
        self._forbidden_mask = 0
        for length in self.forbidden:
            self._forbidden_mask |= 1 << length
        max_count = max(self.forbidden, default=0)
        self._root_table = ReachabilityTable(self.k * self.length, max_count)
        self._deadline = self.budget.deadline() if self.budget else None

    def __iter__(self):
        return self.iterate()

    def iterate(self, root=None):
        """Yield the sequences; if root is given, only those in which k has
        multiplicity root."""
        if self._is_pruned(self._root_table):
            self.stats.pruned_monotone += 1
            return
        yield from self._descend(0, [], self.length, 0, self._root_table, root)

    def _is_pruned(self, table):
        return bool(table.zero_sum_lengths() & self._forbidden_mask)

    def _tick(self):
        self.stats.nodes += 1
        if self.budget is None or self.stats.nodes % BUDGET_CHECK_INTERVAL:
            return
        if self.stats.nodes > self.budget.nodes:
            raise BudgetExhausted("Node budget exhausted", stats=self.stats)
        if time.monotonic() > self._deadline:
            raise BudgetExhausted("Time budget exhausted", stats=self.stats)

    def _descend(self, index, prefix, remaining, total, table, root=None):
        self._tick()
        value = self._values[index]
        if index == len(self._values) - 1:
            yield from self._leaf(prefix, remaining, total, table)
            return
        next_max = self._values[index + 1]
        counts = range(remaining + 1) if root is None else (root,)
        for count in counts:
            if count > remaining:
                break
            new_total = total + count * value
            rest = remaining - count
            # The rest terms lie in [-k, next_max] and must bring the sum to 0.
            # Raising count relaxes the first condition and tightens the second.
            if -new_total > next_max * rest:
                self.stats.pruned_feasibility += 1
                continue
            if -new_total < -self.k * rest:
                self.stats.pruned_feasibility += 1
                break
            top = count if index == 0 else prefix[0]
            if self._forces_negation(top, new_total, rest):
                self.stats.pruned_sign += 1
                break
            new_table = table.add(value, count)
            if self._is_pruned(new_table):
                # more copies of value only reach more lengths
                self.stats.pruned_monotone += 1
                break
            prefix.append(count)
            yield from self._descend(index + 1, prefix, rest, new_total, new_table)
            prefix.pop()

    def _forces_negation(self, top, total, rest):
        """Whether every completion has more copies of -k than of k, so that
        its negation has the greater key.

        The rest terms sum to -total; each is at least -k and all but the
        copies of -k are at least -(k - 1), so there are at least
        total - (k - 1) * rest copies of -k. Each added copy of the current
        value raises that bound at least as much as the count of k.
        """
        return top < total - (self.k - 1) * rest

    def _leaf(self, prefix, remaining, total, table):
        value = self._values[-1]
        if total + remaining * value != 0:
            self.stats.pruned_feasibility += 1
            return
        if self._is_pruned(table.add(value, remaining)):
            self.stats.pruned_monotone += 1
            return
        seq = self._make_seq(prefix + [remaining])
        if not seq.is_sign_canonical():
            self.stats.pruned_sign += 1
            return
        yield seq

    def _make_seq(self, counts):
        if self.allow_zero:
            return Seq(self._interval, counts)
        return Seq(self._interval, counts[: self.k] + [0] + counts[self.k :])
