"""Shared corpus builders and independent oracles for the test suite.

The oracle functions deliberately avoid the library's own algorithms:
brute-force pair enumeration, exhaustive subset counting, and direct
rescans, so test expectations are derived independently of the code
under test.
"""
from __future__ import annotations

from collections import Counter
from itertools import combinations

import numpy as np
from hypothesis import HealthCheck, settings

from learntags import (
    LearnerProfile,
    RatingRecord,
    Tag,
    generate_profiles,
)
from learntags.cluster import FeaturePoint
from learntags.mine import Item, Transaction
from learntags.ingest import discretize_time

settings.register_profile(
    "suite", derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


def synth_corpus(
    n_learners: int,
    n_resources: int,
    n_ratings: int,
    seed: int,
    skew: float = 0.0,
) -> tuple[list[RatingRecord], dict[str, LearnerProfile]]:
    """Random ratings plus one profile per learner.

    ``skew`` > 0 draws resources from a zipf-like popularity law so a
    few resources collect most ratings, as in real rating data; 0 keeps
    resource choice uniform.  Id strings are pooled so big corpora stay
    cheap.
    """
    rng = np.random.default_rng(seed)
    learner_ids = [f"u{i:06d}" for i in range(n_learners)]
    resource_ids = [f"b{i:06d}" for i in range(n_resources)]
    li = rng.integers(n_learners, size=n_ratings)
    if skew > 0:
        w = 1.0 / (np.arange(1, n_resources + 1) + 10.0) ** skew
        ri = rng.choice(n_resources, size=n_ratings, p=w / w.sum())
    else:
        ri = rng.integers(n_resources, size=n_ratings)
    scores = rng.integers(1, 11, size=n_ratings)
    records = [
        RatingRecord(learner_ids[li[j]], resource_ids[ri[j]], int(scores[j]))
        for j in range(n_ratings)
    ]
    profiles = {p.learner_id: p for p in generate_profiles(learner_ids, seed + 1)}
    return records, profiles


def random_transactions(rng: np.random.Generator, n: int) -> list[Transaction]:
    """n transactions over a 15-item universe (5 attributes x 3 values)."""
    out = []
    for t in range(n):
        items = frozenset(
            {
                Item(1, int(rng.integers(1, 4))),
                Item(2, int(rng.integers(1, 4))),
                Item(3, int(rng.integers(1, 4))),
                Item(4, int(rng.integers(1, 4))),
                Item(5, discretize_time(int(rng.integers(1, 4)) * 10)),
            }
        )
        out.append(Transaction(f"t{t:03d}", items))
    return out


def brute_force_frequent(
    transactions: list[Transaction], sl: float
) -> dict[frozenset, tuple[int, float]]:
    """Exhaustive support counts: enumerate every subset per transaction."""
    n = len(transactions)
    counts: Counter = Counter()
    for t in transactions:
        items = sorted(t.items, key=Item.sort_key)
        for size in range(1, len(items) + 1):
            for combo in combinations(items, size):
                counts[frozenset(combo)] += 1
    return {
        s: (c, c / n) for s, c in counts.items() if c >= sl * n
    }


def items_from_tag(
    tag: Tag,
    strategy_values: dict[int, float],
    presentation_values: dict[int, float],
) -> list[frozenset]:
    """All itemsets a rendered tag could denote.

    The nominal fields store quantified values; every parameter whose
    value matches exactly is a candidate, so value collisions yield more
    than one candidate itemset.
    """
    fixed = []
    if tag.current_skill is not None:
        fixed.append([Item(1, tag.current_skill)])
    if tag.target_skill is not None:
        fixed.append([Item(2, tag.target_skill)])
    if tag.strategy_value is not None:
        fixed.append(
            [Item(3, p) for p, v in sorted(strategy_values.items())
             if v == tag.strategy_value]
        )
    if tag.presentation_value is not None:
        fixed.append(
            [Item(4, p) for p, v in sorted(presentation_values.items())
             if v == tag.presentation_value]
        )
    if tag.time_bin is not None:
        fixed.append([Item(5, tag.time_bin)])

    candidates = [frozenset()]
    for choices in fixed:
        candidates = [c | {item} for c in candidates for item in choices]
    return candidates


def recover_clusters(records, profiles, config):
    """Replay the run() stages to recover each resource's mined cluster.

    Determinism of the pipeline makes the replay exact; the supports
    recounted from these transactions are computed directly in the
    tests, independent of the mining code.
    """
    from learntags import (
        apply_normalization,
        build_all_subsets,
        fit_normalization,
        largest_cluster,
        quantify_attribute,
        select_k,
        to_feature_points,
        transaction_from_profile,
    )

    subsets = build_all_subsets(records, config.delta0)
    ordered = [subsets[rid] for rid in sorted(subsets)]
    strategy_values = quantify_attribute(ordered, profiles, "strategy", config)
    presentation_values = quantify_attribute(ordered, profiles, "presentation", config)
    clusters = {}
    for rid in sorted(subsets):
        subset = subsets[rid]
        if len(subset) < config.min_subset:
            continue
        points = to_feature_points(subset, profiles, strategy_values,
                                   presentation_values)
        if len(points) < 2:
            ids = set(subset.members)
        else:
            normalized = apply_normalization(points, fit_normalization(points))
            selection = select_k(normalized, config.k_max, config.gamma, config.seed)
            ids = largest_cluster(selection.clustering)
        clusters[rid] = [transaction_from_profile(profiles[lid]) for lid in sorted(ids)]
    return clusters, strategy_values, presentation_values


def make_blobs(
    centers: list[tuple[float, ...]],
    per_blob: int,
    sigma: float,
    seed: int,
) -> list[FeaturePoint]:
    """Tight Gaussian blobs in 5-D for the k-selection tests."""
    rng = np.random.default_rng(seed)
    points = []
    for b, center in enumerate(centers):
        offsets = rng.normal(0.0, sigma, size=(per_blob, len(center)))
        for i in range(per_blob):
            coords = tuple(float(c + o) for c, o in zip(center, offsets[i]))
            points.append(FeaturePoint(f"u{b:02d}{i:03d}", coords))
    return points
