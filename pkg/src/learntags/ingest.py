"""Rating and profile ingestion.

Parses the semicolon-delimited ratings file and the comma-separated
profiles file, synthesizes missing profiles with a seeded generator,
discretizes learning time into decade bins, and builds per-resource
subsets of learners who rated a resource at or above a threshold.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

RATINGS_HEADER = ("User-ID", "ISBN", "Book-Rating")
PROFILES_HEADER = ("learner_id", "a1", "a2", "a3", "a4", "a5_hours")

SKILL_LEVELS = range(1, 7)       # a1, a2
STRATEGY_IDS = range(1, 6)       # a3
PRESENTATION_IDS = range(1, 6)   # a4


class MalformedRowError(ValueError):
    """A data row that cannot be parsed, raised only in strict mode."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True, slots=True)
class RatingRecord:
    """One (learner, resource, rating) triple with rating in 1..10."""

    learner_id: str
    resource_id: str
    rating: int


@dataclass(frozen=True, slots=True)
class LearnerProfile:
    """One learner's five attributes.

    current_skill/target_skill are 1..6 proficiency levels with
    target_skill strictly above current_skill; strategy and presentation
    are categorical ids 1..5; hours is available learning time.
    """

    learner_id: str
    current_skill: int   # a1
    target_skill: int    # a2
    strategy: int        # a3, nominal
    presentation: int    # a4, nominal
    hours: int           # a5


@dataclass(frozen=True, slots=True, order=True)
class TimeBin:
    """Decade-width, 1-based learning-time bin: [1-10], [11-20], ..."""

    lower: int
    upper: int

    def __contains__(self, hours: int) -> bool:
        return self.lower <= hours <= self.upper

    def label(self) -> str:
        return f"[{self.lower}-{self.upper}]"


@dataclass(frozen=True)
class LearnerSubset:
    """Learners who rated one resource at or above the threshold."""

    resource_id: str
    members: frozenset[str]

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class RatingsResult:
    records: list[RatingRecord]
    dropped_zero: int = 0      # implicit rating-0 rows
    malformed: int = 0


@dataclass
class ProfilesResult:
    profiles: list[LearnerProfile]
    rejected: list[tuple[int, str]] = field(default_factory=list)  # (line, reason)
    duplicates: int = 0


def _profile_violation(p: LearnerProfile) -> str | None:
    """Return the first constraint a profile violates, or None."""
    if p.current_skill not in SKILL_LEVELS:
        return "a1 out of range 1..6"
    if p.target_skill not in SKILL_LEVELS:
        return "a2 out of range 1..6"
    if p.target_skill <= p.current_skill:
        return "a2 must exceed a1"
    if p.strategy not in STRATEGY_IDS:
        return "a3 out of range 1..5"
    if p.presentation not in PRESENTATION_IDS:
        return "a4 out of range 1..5"
    if p.hours < 0:
        return "a5 must be non-negative"
    return None


def parse_ratings(stream: Iterable[str] | str, strict: bool = False) -> RatingsResult:
    """Parse a semicolon-delimited, fully quoted ratings file.

    Rows carrying rating 0 are implicit interactions and are dropped
    (counted in ``dropped_zero``).  Malformed rows abort with their line
    number when ``strict`` is set, otherwise they are skipped and counted.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream, delimiter=";", quotechar='"')
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("ratings stream is empty, expected a header row") from None
    if tuple(header) != RATINGS_HEADER:
        raise ValueError(
            f"unexpected ratings header {header!r}, expected {list(RATINGS_HEADER)!r}"
        )

    result = RatingsResult(records=[])
    for row in reader:
        if not row:
            continue
        reason = None
        if len(row) != 3:
            reason = f"expected 3 fields, got {len(row)}"
        else:
            learner_id, resource_id, rating_text = row
            if not learner_id or not resource_id:
                reason = "empty learner or resource id"
            else:
                try:
                    rating = int(rating_text)
                except ValueError:
                    reason = f"rating {rating_text!r} is not an integer"
                else:
                    if not 0 <= rating <= 10:
                        reason = f"rating {rating} outside 0..10"
        if reason is not None:
            if strict:
                raise MalformedRowError(reader.line_num, reason)
            result.malformed += 1
            continue
        if rating == 0:
            result.dropped_zero += 1
            continue
        result.records.append(RatingRecord(learner_id, resource_id, rating))
    return result


def render_ratings(records: Iterable[RatingRecord]) -> str:
    """Write records back to the ratings file format (inverse of parse)."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=";", quoting=csv.QUOTE_ALL, lineterminator="\n")
    writer.writerow(RATINGS_HEADER)
    for r in records:
        writer.writerow([r.learner_id, r.resource_id, r.rating])
    return out.getvalue()


def parse_profiles(stream: Iterable[str] | str) -> ProfilesResult:
    """Parse the comma-separated profiles file.

    Rows violating the attribute constraints are rejected with a reason;
    duplicate learner ids keep the last occurrence and bump ``duplicates``.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("profiles stream is empty, expected a header row") from None
    if tuple(header) != PROFILES_HEADER:
        raise ValueError(
            f"unexpected profiles header {header!r}, expected {list(PROFILES_HEADER)!r}"
        )

    result = ProfilesResult(profiles=[])
    by_id: dict[str, LearnerProfile] = {}
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 6:
            result.rejected.append((line, f"expected 6 fields, got {len(row)}"))
            continue
        learner_id = row[0]
        if not learner_id:
            result.rejected.append((line, "empty learner id"))
            continue
        try:
            a1, a2, a3, a4, a5 = (int(v) for v in row[1:])
        except ValueError:
            result.rejected.append((line, "non-integer attribute value"))
            continue
        profile = LearnerProfile(learner_id, a1, a2, a3, a4, a5)
        reason = _profile_violation(profile)
        if reason is not None:
            result.rejected.append((line, reason))
            continue
        if learner_id in by_id:
            result.duplicates += 1
        by_id[learner_id] = profile
    result.profiles = list(by_id.values())
    return result


def render_profiles(profiles: Iterable[LearnerProfile]) -> str:
    """Write profiles back to the profiles file format (inverse of parse)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PROFILES_HEADER)
    for p in profiles:
        writer.writerow(
            [p.learner_id, p.current_skill, p.target_skill, p.strategy, p.presentation, p.hours]
        )
    return out.getvalue()


def generate_profiles(learner_ids: list[str], seed: int) -> list[LearnerProfile]:
    """Synthesize one random profile per learner id, deterministically.

    a1 is uniform in 1..5, a2 uniform in (a1+1)..6 so target always
    exceeds current skill, a3 and a4 uniform in 1..5, and a5 uniform in
    1..60 hours.  The output is a pure function of (learner_ids, seed).
    """
    if not learner_ids:
        return []
    rng = np.random.default_rng(seed)
    n = len(learner_ids)
    a1 = rng.integers(1, 6, size=n)
    a2 = rng.integers(a1 + 1, 7)
    a3 = rng.integers(1, 6, size=n)
    a4 = rng.integers(1, 6, size=n)
    a5 = rng.integers(1, 61, size=n)
    return [
        LearnerProfile(lid, int(a1[i]), int(a2[i]), int(a3[i]), int(a4[i]), int(a5[i]))
        for i, lid in enumerate(learner_ids)
    ]


def discretize_time(hours: int) -> TimeBin:
    """Return the decade bin containing ``hours`` (45 falls in [41-50])."""
    if hours < 1:
        raise ValueError("time must be positive")
    lower = (hours - 1) // 10 * 10 + 1
    return TimeBin(lower, lower + 9)


def build_subset(ratings: Iterable[RatingRecord], resource_id: str, delta0: int) -> LearnerSubset:
    """Collect the learners who rated ``resource_id`` at or above ``delta0``.

    A learner qualifies if any of their ratings for the resource meets
    the threshold; an absent resource yields an empty subset.
    """
    if not 1 <= delta0 <= 10:
        raise ValueError(f"delta0 must be in 1..10, got {delta0}")
    members = frozenset(
        r.learner_id for r in ratings if r.resource_id == resource_id and r.rating >= delta0
    )
    return LearnerSubset(resource_id, members)


def build_all_subsets(ratings: Iterable[RatingRecord], delta0: int) -> dict[str, LearnerSubset]:
    """Single-pass variant of build_subset over every rated resource.

    Only resources with at least one qualifying learner appear in the
    result; equivalent to calling build_subset per resource, but linear
    in the number of ratings.
    """
    if not 1 <= delta0 <= 10:
        raise ValueError(f"delta0 must be in 1..10, got {delta0}")
    members: dict[str, set[str]] = {}
    for r in ratings:
        if r.rating >= delta0:
            members.setdefault(r.resource_id, set()).add(r.learner_id)
    return {
        rid: LearnerSubset(rid, frozenset(learners))
        for rid, learners in members.items()
    }
