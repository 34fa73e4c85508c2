"""
Quantifying a nominal attribute with NMF
========================================

Learning strategy ids 1..5 are categories with no inherent order.  This
walks the chain that turns them into comparable numbers: co-occurrence
counting over the high-rating subsets, non-negative factorization,
feature-based orderings, symmetrization, and the final per-id values.
"""

import os

import numpy as np

from learntags import (
    PipelineConfig,
    build_all_subsets,
    export_values,
    extreme_pairs,
    generate_profiles,
    quantify_attribute_detail,
)
from learntags.ingest import RatingRecord

rng = np.random.default_rng(8)
learners = [f"u{i:03d}" for i in range(120)]
profiles = {p.learner_id: p for p in generate_profiles(learners, seed=8)}
records = [
    RatingRecord(lid, f"b{rng.integers(12):02d}", int(rng.integers(1, 11)))
    for lid in learners for _ in range(6)
]

config = PipelineConfig(seed=8)
subsets = build_all_subsets(records, config.delta0)
ordered = [subsets[rid] for rid in sorted(subsets)]
detail = quantify_attribute_detail(ordered, profiles, "strategy", config)

print("co-occurrence of strategy ids across subset members:")
print(detail.cooccurrence.entries.astype(int))

trace = detail.factors.error_trace
print(f"\nNMF error: {trace[0]:.2f} -> {trace[-1]:.2f} "
      f"over {len(trace) - 1} iterations")

print("\nsymmetrized similarity:")
print(np.round(detail.similarity, 2))

print("\nquantified values (row means of the similarity):")
for sid in sorted(detail.values):
    print(f"  strategy {sid}: {detail.values[sid]:.3f}")

nearest, farthest = extreme_pairs(detail.values)
print(f"\nmost similar strategies: {nearest}")
print(f"least similar strategies: {farthest}")

os.makedirs("demos/out", exist_ok=True)
export_values(detail.values, "strategy", "demos/out/strategy_values.svg")
print("wrote demos/out/strategy_values.svg")
