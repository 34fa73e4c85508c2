"""Frequent-itemset mining over the largest cluster.

Each learner in the chosen cluster becomes a transaction of five items,
one per profile attribute; strategy and presentation stay categorical
ids for counting and learning time is carried as its decade bin.
Level-wise Apriori (candidate join plus subset pruning) finds every
itemset whose support meets the threshold, and the tag for the resource
is the maximal itemset of highest cardinality, then highest support,
with all co-maximal itemsets returned when tied.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .ingest import LearnerProfile, TimeBin, discretize_time

N_ATTRIBUTES = 5


@dataclass(frozen=True, slots=True)
class Item:
    """One attribute-value token: (attribute index 1..5, level/id/bin)."""

    attribute: int
    value: int | TimeBin

    def sort_key(self) -> tuple[int, int]:
        v = self.value.lower if isinstance(self.value, TimeBin) else self.value
        return (self.attribute, v)


@dataclass(frozen=True)
class Transaction:
    """One learner's five attribute items."""

    learner_id: str
    items: frozenset[Item]


@dataclass(frozen=True)
class FrequentItemset:
    items: frozenset[Item]
    support: float
    count: int


def transaction_from_profile(profile: LearnerProfile) -> Transaction:
    """Build the five-item transaction for one learner.

    Hours below 1 fall into the first bin [1-10]; the bins are 1-based.
    """
    items = frozenset(
        {
            Item(1, profile.current_skill),
            Item(2, profile.target_skill),
            Item(3, profile.strategy),
            Item(4, profile.presentation),
            Item(5, discretize_time(max(profile.hours, 1))),
        }
    )
    return Transaction(profile.learner_id, items)


def itemset_key(items: frozenset[Item]) -> tuple[tuple[int, int], ...]:
    """Deterministic ordering key for an itemset."""
    return tuple(sorted(i.sort_key() for i in items))


def apriori(transactions: list[Transaction], sl: float) -> list[FrequentItemset]:
    """Every itemset with support >= sl, mined level-wise.

    Candidates of size k are joined from frequent (k-1)-itemsets sharing
    a (k-2)-prefix and pruned unless all their (k-1)-subsets are
    frequent; itemsets never carry two items of the same attribute.
    Support compares inclusively so an itemset exactly at the threshold
    counts as frequent.  Output is sorted by size then item key for
    reproducible files.
    """
    if not transactions:
        raise ValueError("no transactions")
    if not 0 < sl <= 1:
        raise ValueError(f"support level must be in (0, 1], got {sl}")
    n = len(transactions)
    min_count = sl * n

    counts = Counter()
    for t in transactions:
        for item in t.items:
            counts[frozenset([item])] += 1
    frequent: dict[frozenset[Item], int] = {
        s: c for s, c in counts.items() if c >= min_count
    }
    level = sorted(frequent, key=itemset_key)

    size = 2
    while level and size <= N_ATTRIBUTES:
        prev = set(level)
        # Join step on sorted-tuple representations sharing the prefix.
        tuples = [tuple(sorted(s, key=Item.sort_key)) for s in level]
        tuples.sort(key=lambda t: tuple(i.sort_key() for i in t))
        candidates = set()
        for a, b in combinations(tuples, 2):
            if a[:-1] != b[:-1]:
                continue
            joined = a + (b[-1],)
            if len({i.attribute for i in joined}) != size:
                continue
            cand = frozenset(joined)
            if all(frozenset(sub) in prev for sub in combinations(joined, size - 1)):
                candidates.add(cand)

        counts = Counter()
        for t in transactions:
            for cand in candidates:
                if cand <= t.items:
                    counts[cand] += 1
        level = sorted((c for c in candidates if counts[c] >= min_count), key=itemset_key)
        for s in level:
            frequent[s] = counts[s]
        size += 1

    ordered = sorted(frequent, key=lambda s: (len(s), itemset_key(s)))
    return [FrequentItemset(s, frequent[s] / n, frequent[s]) for s in ordered]


def maximal_itemsets(frequent: list[FrequentItemset]) -> list[FrequentItemset]:
    """Drop every itemset that has a frequent proper superset."""
    all_sets = [f.items for f in frequent]
    return [
        f
        for f in frequent
        if not any(f.items < other for other in all_sets)
    ]


def select_tag(frequent: list[FrequentItemset]) -> list[FrequentItemset]:
    """The tag-cloud content: maximal itemsets of top cardinality, then
    top support, all co-maximal ties included."""
    if not frequent:
        return []
    maximal = maximal_itemsets(frequent)
    top_size = max(len(f.items) for f in maximal)
    biggest = [f for f in maximal if len(f.items) == top_size]
    top_support = max(f.support for f in biggest)
    winners = [f for f in biggest if f.support == top_support]
    return sorted(winners, key=lambda f: itemset_key(f.items))
