"""
Ingesting ratings and building high-rating learner subsets
==========================================================

Parses a semicolon-delimited ratings file in the Book-Crossing shape,
shows what gets dropped and why, then builds the per-resource subsets
of learners whose rating clears the threshold delta0.
"""

from learntags import build_all_subsets, discretize_time, parse_ratings

raw = '''"User-ID";"ISBN";"Book-Rating"
"276725";"034545104X";"0"
"276726";"0155061224";"5"
"276727";"0446520802";"8"
"276729";"052165615X";"3"
"276729";"0521795028";"6"
"276733";"0446520802";"9"
"276736";"0446520802";"7"
"276737";"0600570967";"6"
"not;a;rating"
"276744";"038550120X";"7"
'''

result = parse_ratings(raw)
print(f"kept {len(result.records)} ratings")
print(f"dropped {result.dropped_zero} implicit zero ratings")
print(f"skipped {result.malformed} malformed rows")

# delta0 = 6: "high rating" means >= 6 on the 0..10 scale
subsets = build_all_subsets(result.records, delta0=6)
for rid in sorted(subsets):
    print(f"{rid}: {sorted(subsets[rid].members)}")

# study time in hours lands in fixed 10-hour bins for the tags
for hours in (1, 45, 50, 51):
    print(f"{hours:>3} hours -> {discretize_time(hours).label()}")
