"""Numeric quantification of the nominal attributes.

Learning strategy and presentation style have no inherent order, so
Euclidean geometry cannot compare them directly.  This module assigns
each of the five parameter values of a nominal attribute a numeric
score in four steps:

1. count, over all resource subsets, the unordered pairs of learners
   that share a subset, bucketed by the two learners' parameter values
   (a symmetric 5x5 co-occurrence matrix);
2. factor that matrix into non-negative weights x features with
   multiplicative-update NMF;
3. for each parameter pick its dominant feature row, stacking the picks
   into an ordering matrix;
4. symmetrize the ordering matrix with elementwise minima and average
   each row.

The row averages are the quantified values used as coordinates and tag
fields downstream.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

import numpy as np

from .ingest import LearnerProfile, LearnerSubset

if TYPE_CHECKING:
    from .pipeline import PipelineConfig

N_PARAMS = 5

# Attribute selectors and the LearnerProfile field each one reads.
ATTRIBUTES = {"strategy": "strategy", "presentation": "presentation"}

# Guards multiplicative-update denominators against division by zero.
_EPS = 1e-12

AttributeValueMap = dict[int, float]


@dataclass
class CooccurrenceMatrix:
    """Symmetric 5x5 pair counts for one nominal attribute."""

    entries: np.ndarray  # (5, 5) non-negative ints
    attribute: str       # "strategy" or "presentation"


@dataclass
class FactorPair:
    """Non-negative factors A ~ weights @ features and the error trace.

    ``error_trace[0]`` is the Frobenius error of the random initialization;
    one entry is appended per multiplicative-update iteration.
    """

    weights: np.ndarray    # B, (5, k)
    features: np.ndarray   # C, (k, 5)
    k: int
    final_error: float
    error_trace: list[float]


@dataclass
class QuantifyDetail:
    """Every intermediate artifact of the quantification chain."""

    cooccurrence: CooccurrenceMatrix
    factors: FactorPair
    orderings: np.ndarray      # D, one dominant feature row per parameter
    similarity: np.ndarray     # symmetrized D
    values: AttributeValueMap


def _seed_offset(attribute: str) -> int:
    # The two attributes get independent derived seeds (seed, seed + 1).
    return list(ATTRIBUTES).index(attribute)


def build_cooccurrence(
    subsets: list[LearnerSubset],
    profiles: Mapping[str, LearnerProfile],
    attribute: str,
) -> CooccurrenceMatrix:
    """Count learner pairs sharing a subset, bucketed by parameter values.

    entry[i][j] is the number of unordered pairs of distinct learners
    (u, v) that co-occur in at least one common subset where u carries
    parameter i+1 and v carries parameter j+1.  Each pair is counted
    once globally no matter how many subsets it shares, so the counts
    are comparable across resources.
    """
    if attribute not in ATTRIBUTES:
        raise ValueError(f"unknown attribute {attribute!r}, expected one of {list(ATTRIBUTES)}")
    field = ATTRIBUTES[attribute]

    ids = sorted({m for s in subsets for m in s.members})
    for lid in ids:
        if lid not in profiles:
            raise KeyError(f"no profile for learner {lid!r}")
    index = {lid: i for i, lid in enumerate(ids)}
    params = np.array([getattr(profiles[lid], field) for lid in ids], dtype=np.int64)

    subset_arrays = [
        np.fromiter(sorted(index[m] for m in s.members), dtype=np.int64, count=len(s.members))
        for s in subsets
    ]
    containing: list[list[int]] = [[] for _ in ids]
    for si, arr in enumerate(subset_arrays):
        for u in arr:
            containing[u].append(si)

    counts = np.zeros((N_PARAMS, N_PARAMS), dtype=np.int64)
    for u in range(len(ids)):
        if not containing[u]:
            continue
        # Partners are deduplicated across subsets; v > u counts each
        # unordered pair exactly once.
        partners = np.unique(np.concatenate([subset_arrays[si] for si in containing[u]]))
        partners = partners[partners > u]
        if partners.size == 0:
            continue
        p_u = int(params[u]) - 1
        partner_counts = np.bincount(params[partners] - 1, minlength=N_PARAMS)
        for p_v in range(N_PARAMS):
            c = int(partner_counts[p_v])
            if c == 0:
                continue
            counts[p_u, p_v] += c
            if p_v != p_u:
                counts[p_v, p_u] += c
    return CooccurrenceMatrix(entries=counts, attribute=attribute)


def nmf(
    A: CooccurrenceMatrix | np.ndarray,
    k: int,
    max_iters: int,
    tol: float,
    seed: int,
) -> FactorPair:
    """Factor a non-negative square matrix with multiplicative updates.

    Minimizes the squared Frobenius error ||A - B C||, which makes the
    per-iteration error non-increasing.  Both factors are initialized
    uniformly in (0, 1] from ``seed``; iteration stops when the relative
    error improvement drops below ``tol`` or after ``max_iters``.
    An all-zero input short-circuits to zero factors with zero error.
    """
    a = np.asarray(A.entries if isinstance(A, CooccurrenceMatrix) else A, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if np.any(a < 0):
        raise ValueError("matrix must be non-negative")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")

    n_rows, n_cols = a.shape
    if not a.any():
        zeros_b = np.zeros((n_rows, k))
        zeros_c = np.zeros((k, n_cols))
        return FactorPair(zeros_b, zeros_c, k, 0.0, [0.0])

    rng = np.random.default_rng(seed)
    # 1 - random() maps [0, 1) to (0, 1]: strictly positive entries never
    # get stuck at zero under multiplicative updates.
    b = 1.0 - rng.random((n_rows, k))
    c = 1.0 - rng.random((k, n_cols))

    err = float(np.linalg.norm(a - b @ c))
    trace = [err]
    for _ in range(max_iters):
        c *= (b.T @ a) / (b.T @ b @ c + _EPS)
        b *= (a @ c.T) / (b @ c @ c.T + _EPS)
        new_err = float(np.linalg.norm(a - b @ c))
        trace.append(new_err)
        improvement = (err - new_err) / err if err > 0 else 0.0
        err = new_err
        if improvement < tol:
            break
    return FactorPair(b, c, k, err, trace)


def derive_orderings(factors: FactorPair) -> np.ndarray:
    """Pick each parameter's dominant feature row out of the features matrix.

    Row i of the result is the feature row with the largest weight for
    parameter i; argmax ties (including all-zero weight rows) resolve to
    the smallest feature index.
    """
    dominant = np.argmax(factors.weights, axis=1)
    return factors.features[dominant, :].copy()


def symmetrize(D: np.ndarray) -> np.ndarray:
    """Replace each entry with min(D[i][j], D[j][i]).

    Two parameters cannot be similar to each other by two different
    amounts; taking the minimum keeps the more conservative score.
    """
    d = np.asarray(D, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {d.shape}")
    return np.minimum(d, d.T)


def attribute_values(D_sym: np.ndarray) -> AttributeValueMap:
    """Average each row of the symmetric similarity matrix.

    The mean runs over all entries including the diagonal; value i+1 is
    the average similarity of parameter i+1 to every parameter.
    """
    d = np.asarray(D_sym, dtype=np.float64)
    if not np.array_equal(d, d.T):
        raise ValueError("matrix must be symmetric")
    return {i + 1: float(d[i].mean()) for i in range(d.shape[0])}


def quantify_attribute_detail(
    subsets: list[LearnerSubset],
    profiles: Mapping[str, LearnerProfile],
    attribute: str,
    config: "PipelineConfig",
) -> QuantifyDetail:
    """Run the full chain and keep every intermediate artifact."""
    cooc = build_cooccurrence(subsets, profiles, attribute)
    factors = nmf(
        cooc,
        k=config.nmf_k,
        max_iters=config.nmf_max_iters,
        tol=config.nmf_tol,
        seed=config.seed + _seed_offset(attribute),
    )
    orderings = derive_orderings(factors)
    similarity = symmetrize(orderings)
    return QuantifyDetail(
        cooccurrence=cooc,
        factors=factors,
        orderings=orderings,
        similarity=similarity,
        values=attribute_values(similarity),
    )


def quantify_attribute(
    subsets: list[LearnerSubset],
    profiles: Mapping[str, LearnerProfile],
    attribute: str,
    config: "PipelineConfig",
) -> AttributeValueMap:
    """Numeric value per parameter of one nominal attribute (pure in seed)."""
    return quantify_attribute_detail(subsets, profiles, attribute, config).values


def quantification_report(details: Mapping[str, QuantifyDetail]) -> dict:
    """JSON-ready dump of A, B, C, D, the symmetrized D, and the value maps."""
    report = {}
    for attribute in sorted(details):
        d = details[attribute]
        report[attribute] = {
            "cooccurrence": d.cooccurrence.entries.tolist(),
            "weights": d.factors.weights.tolist(),
            "features": d.factors.features.tolist(),
            "orderings": d.orderings.tolist(),
            "similarity": d.similarity.tolist(),
            "final_error": d.factors.final_error,
            "values": {str(p): v for p, v in sorted(d.values.items())},
        }
    return report
