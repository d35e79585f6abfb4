"""Observables computed from an event log.

Per-emotion tie-strength preferences under three definitions (mean
common-friends strength, proportion of reciprocal edges, normalized
prior-retweet counts), user vitality with dominance labels, and the
retweet/tweet/user share vectors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

from .emotions import EMOTIONS, Emotion
from .engine import PostEvent, RetweetEvent
from .graph import NetworkGraph


@dataclass(frozen=True)
class StrengthPreference:
    """Average tie strength carried by one emotion's retweets.

    All three means are None when the emotion produced no retweets.
    """

    emotion: Emotion
    mean_common_friends: Optional[float]
    reciprocity_proportion: Optional[float]
    mean_normalized_retweet_strength: Optional[float]
    event_count: int


def strength_preferences(events, graph: NetworkGraph) -> dict[Emotion, StrengthPreference]:
    """One-pass computation of all four emotions' preferences.

    The prior-retweet count of an event counts retweets on the same
    directed edge strictly earlier in the log; min/max normalization pools
    every retweet of every emotion so the emotions share one scale. When
    all prior counts coincide the normalized values are defined as 0.
    """
    strengths: dict[Emotion, list[float]] = {e: [] for e in EMOTIONS}
    reciprocal: dict[Emotion, int] = {e: 0 for e in EMOTIONS}
    prior_counts: dict[Emotion, list[int]] = {e: [] for e in EMOTIONS}
    per_edge: dict[tuple[int, int], int] = {}
    s_min, s_max = None, None
    for event in events:
        if not isinstance(event, RetweetEvent):
            continue
        edge = (event.reader, event.followee)
        prior = per_edge.get(edge, 0)
        per_edge[edge] = prior + 1
        s_min = prior if s_min is None else min(s_min, prior)
        s_max = prior if s_max is None else max(s_max, prior)
        e = event.emotion
        strengths[e].append(event.strength)
        prior_counts[e].append(prior)
        if graph.is_reciprocal(event.reader, event.followee):
            reciprocal[e] += 1

    spread = None
    if s_max is not None and s_max > s_min:
        spread = s_max - s_min

    out = {}
    for e in EMOTIONS:
        n = len(strengths[e])
        if n == 0:
            out[e] = StrengthPreference(e, None, None, None, 0)
            continue
        if spread is None:
            mean_retweet = 0.0
        else:
            mean_retweet = sum((s - s_min) / spread for s in prior_counts[e]) / n
        out[e] = StrengthPreference(
            emotion=e,
            mean_common_friends=sum(strengths[e]) / n,
            reciprocity_proportion=reciprocal[e] / n,
            mean_normalized_retweet_strength=mean_retweet,
            event_count=n,
        )
    return out


def strength_preference(events, graph: NetworkGraph, emotion: Emotion) -> StrengthPreference:
    return strength_preferences(events, graph)[emotion]


def classify_dominance(counts) -> Optional[Emotion]:
    """The unique emotion with strictly maximal count; None on ties or silence."""
    best = max(counts[e] for e in EMOTIONS)
    if best == 0:
        return None
    winners = [e for e in EMOTIONS if counts[e] == best]
    return winners[0] if len(winners) == 1 else None


@dataclass(frozen=True)
class VitalityRecord:
    user: int
    vitality: int  # posts + reposts over the whole run
    dominant: Optional[Emotion]


def build_vitality_records(post_counts: Sequence[Sequence[int]]) -> list[VitalityRecord]:
    return [
        VitalityRecord(user, sum(counts), classify_dominance(counts))
        for user, counts in enumerate(post_counts)
    ]


@dataclass(frozen=True)
class VitalityDistribution:
    """Histogram and survival function of vitality within one dominance group."""

    values: tuple[int, ...]   # sorted distinct vitalities
    counts: tuple[int, ...]   # histogram aligned with values
    ccdf: tuple[float, ...]   # P(V >= value) aligned with values

    @property
    def total(self) -> int:
        return sum(self.counts)

    def survival(self, x: float) -> float:
        """P(V >= x) for arbitrary x."""
        n = self.total
        if n == 0:
            return 0.0
        return sum(c for v, c in zip(self.values, self.counts) if v >= x) / n

    def mean(self) -> Optional[float]:
        n = self.total
        if n == 0:
            return None
        return sum(v * c for v, c in zip(self.values, self.counts)) / n


def vitality_distribution(records: Sequence[VitalityRecord], emotion: Emotion) -> VitalityDistribution:
    """Distribution of vitality over the users dominated by ``emotion``."""
    histogram: dict[int, int] = {}
    for r in records:
        if r.dominant is emotion:
            histogram[r.vitality] = histogram.get(r.vitality, 0) + 1
    values = tuple(sorted(histogram))
    counts = tuple(histogram[v] for v in values)
    total = sum(counts)
    ccdf = []
    remaining = total
    for c in counts:
        ccdf.append(remaining / total)
        remaining -= c
    return VitalityDistribution(values, counts, tuple(ccdf))


@dataclass(frozen=True)
class ProportionReport:
    """Per-emotion shares of retweets, of all messages, and of dominated users.

    User shares are over classified users only; the denominator is kept in
    ``classified_users``. Empty denominators give all-zero share vectors.
    """

    retweet_share: dict[Emotion, float]
    tweet_share: dict[Emotion, float]
    user_share: dict[Emotion, float]
    total_posts: int
    total_retweets: int
    classified_users: int


def proportion_report(events, post_counts: Sequence[Sequence[int]]) -> ProportionReport:
    retweets = {e: 0 for e in EMOTIONS}
    posts = {e: 0 for e in EMOTIONS}
    for event in events:
        if isinstance(event, PostEvent):
            posts[event.emotion] += 1
        else:
            retweets[event.emotion] += 1
    total_posts = sum(posts.values())
    total_retweets = sum(retweets.values())
    total_all = total_posts + total_retweets

    dominated = {e: 0 for e in EMOTIONS}
    for counts in post_counts:
        label = classify_dominance(counts)
        if label is not None:
            dominated[label] += 1
    classified = sum(dominated.values())

    def share(counts: dict, denom: int) -> dict[Emotion, float]:
        if denom == 0:
            return {e: 0.0 for e in EMOTIONS}
        return {e: counts[e] / denom for e in EMOTIONS}

    return ProportionReport(
        retweet_share=share(retweets, total_retweets),
        tweet_share=share({e: posts[e] + retweets[e] for e in EMOTIONS}, total_all),
        user_share=share(dominated, classified),
        total_posts=total_posts,
        total_retweets=total_retweets,
        classified_users=classified,
    )


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def write_metrics_report(path, preferences: dict[Emotion, StrengthPreference],
                         report: ProportionReport) -> None:
    """One CSV row per emotion: strength metrics, event counts, shares."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(
            f"# totals: posts={report.total_posts} retweets={report.total_retweets} "
            f"classified_users={report.classified_users}\n"
        )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["emotion", "mean_common_friends", "reciprocity_proportion",
             "mean_normalized_retweet_strength", "event_count",
             "retweet_share", "tweet_share", "user_share"]
        )
        for e in EMOTIONS:
            p = preferences[e]
            writer.writerow(
                [e.label, _fmt(p.mean_common_friends), _fmt(p.reciprocity_proportion),
                 _fmt(p.mean_normalized_retweet_strength), p.event_count,
                 _fmt(report.retweet_share[e]), _fmt(report.tweet_share[e]),
                 _fmt(report.user_share[e])]
            )


def write_vitality_csv(path, records: Sequence[VitalityRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user", "vitality", "dominant"])
        for r in records:
            label = r.dominant.label if r.dominant is not None else ""
            writer.writerow([r.user, r.vitality, label])
