"""Core simulation loop.

One step activates a uniformly random user, who either posts a fresh
message (probability p_new) or reads everything on their screen and
reposts each entry whose repost tendency clears the global threshold.
Posted and reposted messages are pushed onto followers' bounded FIFO
screens. All randomness flows from one seeded generator, so a (graph,
config) pair fully determines the event log.
"""

from __future__ import annotations

import csv
import json
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .emotions import (
    EMOTIONS,
    Emotion,
    SimulationConfig,
    config_to_dict,
    ensure_valid,
    sample_emotion,
)
from .errors import ParseError, ValidationError
from .graph import NetworkGraph

# Identifier of the pseudo-random generator backing every run; recorded in
# run metadata so logs stay attributable and reproducible across builds.
RNG_ALGORITHM = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class Message(NamedTuple):
    id: int
    author: int
    emotion: Emotion
    born_step: int


class ScreenEntry(NamedTuple):
    message_id: int
    sender: int


class PostEvent(NamedTuple):
    step: int
    message_id: int
    emotion: Emotion
    author: int


class RetweetEvent(NamedTuple):
    step: int
    message_id: int
    emotion: Emotion
    author: int
    reader: int      # the follower doing the repost
    followee: int    # whose post/repost sat on the reader's screen
    strength: float  # common-friends strength of edge (reader, followee)


Event = Union[PostEvent, RetweetEvent]


def tendency(strength: float, correlation: float) -> float:
    """Repost tendency: strength * e^(correlation - 1)."""
    return strength * math.exp(correlation - 1.0)


def min_passable_strength(tau: float, correlation: float) -> float:
    """Smallest edge strength whose tendency can clear tau: tau * e^(1 - correlation)."""
    return tau * math.exp(1.0 - correlation)


class EngineState:
    """Mutable state of one run; confined to a single thread.

    Owns the screens, the message store, per-user and per-edge counters,
    the append-only event log, and the seeded generator.
    """

    def __init__(self, graph: NetworkGraph, config: SimulationConfig):
        ensure_valid(config)
        if graph.node_count < 1:
            raise ValidationError("graph must contain at least one node")
        self.graph = graph
        self.config = config
        self.rng = make_rng(config.seed)
        self.step_index = 0
        self.messages: list[Message] = []
        self.events: list[Event] = []
        self.screens: list[deque] = [
            deque(maxlen=config.screen_size) for _ in range(graph.node_count)
        ]
        self.post_counts: list[list[int]] = [
            [0] * len(EMOTIONS) for _ in range(graph.node_count)
        ]
        self.edge_retweet_counts: dict[tuple[int, int], int] = {}
        self.reposted: list[set[int]] = [set() for _ in range(graph.node_count)]
        # e^(c - 1) per emotion; tendency(s, c) == s * _factor[emotion].
        self._factor = [math.exp(c - 1.0) for c in config.emotion_params.correlation_tuple()]

    def push_to_followers(self, poster: int, message_id: int) -> None:
        """Place the message on every follower's screen, evicting oldest first."""
        entry = ScreenEntry(message_id, poster)
        screens = self.screens
        for follower in self.graph.followers[poster]:
            screens[follower].append(entry)

    def publish(self, u: int) -> Message:
        """u posts a fresh message with a sampled emotion."""
        emotion = sample_emotion(self.config.emotion_params, self.rng)
        message = Message(len(self.messages), u, emotion, self.step_index)
        self.messages.append(message)
        self.events.append(PostEvent(self.step_index, message.id, emotion, u))
        self.post_counts[u][emotion] += 1
        self.push_to_followers(u, message.id)
        return message

    def republish(self, u: int) -> list[RetweetEvent]:
        """u reads the whole screen and reposts every entry that clears tau.

        Entries are evaluated oldest first. A message the user already
        reposted is skipped even if it arrived again via another followee.
        The screen is drained afterwards.
        """
        screen = self.screens[u]
        if not screen:
            return []
        entries = list(screen)
        screen.clear()
        reposted = self.reposted[u]
        strengths = self.graph.strengths
        tau = self.config.tau
        factor = self._factor
        messages = self.messages
        step = self.step_index
        out: list[RetweetEvent] = []
        for message_id, sender in entries:
            if message_id in reposted:
                continue
            s = strengths[(u, sender)]
            message = messages[message_id]
            emotion = message.emotion
            if s * factor[emotion] > tau:
                reposted.add(message_id)
                event = RetweetEvent(step, message_id, emotion, message.author, u, sender, s)
                self.events.append(event)
                out.append(event)
                self.post_counts[u][emotion] += 1
                edge = (u, sender)
                self.edge_retweet_counts[edge] = self.edge_retweet_counts.get(edge, 0) + 1
                self.push_to_followers(u, message_id)
        return out

    def step(self) -> None:
        """Activate one uniformly random user to publish or republish."""
        u = int(self.rng.integers(self.graph.node_count))
        if self.rng.random() < self.config.p_new:
            self.publish(u)
        else:
            self.republish(u)
        self.step_index += 1


@dataclass
class RunResult:
    """Event log plus the final counters a metrics pass needs."""

    events: list
    post_counts: list[list[int]]
    edge_retweet_counts: dict[tuple[int, int], int]
    config: SimulationConfig
    graph_hash: str
    duration_s: float

    @property
    def message_count(self) -> int:
        return sum(1 for e in self.events if isinstance(e, PostEvent))

    @property
    def retweet_count(self) -> int:
        return len(self.events) - self.message_count


def run(graph: NetworkGraph, config: SimulationConfig) -> RunResult:
    """Execute config.steps activations from a fresh state."""
    started = time.perf_counter()
    state = EngineState(graph, config)
    step = state.step
    for _ in range(config.steps):
        step()
    return RunResult(
        events=state.events,
        post_counts=state.post_counts,
        edge_retweet_counts=state.edge_retweet_counts,
        config=config,
        graph_hash=graph.content_hash(),
        duration_s=time.perf_counter() - started,
    )


EVENT_LOG_HEADER = ["step", "type", "msg_id", "emotion", "author", "reader", "followee", "strength"]


def write_event_log(events, path) -> None:
    """CSV log; post rows leave reader/followee/strength empty."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EVENT_LOG_HEADER)
        for e in events:
            if isinstance(e, PostEvent):
                writer.writerow([e.step, "post", e.message_id, e.emotion.label, e.author, "", "", ""])
            else:
                writer.writerow(
                    [e.step, "retweet", e.message_id, e.emotion.label, e.author,
                     e.reader, e.followee, f"{e.strength:.6f}"]
                )


def read_event_log(path) -> list[Event]:
    events: list[Event] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != EVENT_LOG_HEADER:
            raise ParseError(f"{path}: unexpected event log header {header!r}")
        for lineno, row in enumerate(reader, 2):
            if len(row) != len(EVENT_LOG_HEADER):
                raise ParseError(f"{path}: malformed event row", line_number=lineno)
            step, kind, msg_id, emotion, author = (
                int(row[0]), row[1], int(row[2]), Emotion.from_label(row[3]), int(row[4]),
            )
            if kind == "post":
                events.append(PostEvent(step, msg_id, emotion, author))
            elif kind == "retweet":
                events.append(
                    RetweetEvent(step, msg_id, emotion, author, int(row[5]), int(row[6]), float(row[7]))
                )
            else:
                raise ParseError(f"{path}: unknown event type {kind!r}", line_number=lineno)
    return events


def write_run_metadata(path, result: RunResult) -> None:
    """Companion document for one event log."""
    meta = {
        "config": config_to_dict(result.config),
        "seed": result.config.seed,
        "graph_hash": result.graph_hash,
        "rng_algorithm": RNG_ALGORITHM,
        "duration_s": result.duration_s,
        "posts": result.message_count,
        "retweets": result.retweet_count,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
