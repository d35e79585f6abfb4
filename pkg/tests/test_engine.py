import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from emosim.emotions import (
    Emotion,
    SimulationConfig,
    default_params,
    params_with_proportions,
)
from emosim.engine import (
    EngineState,
    PostEvent,
    RetweetEvent,
    min_passable_strength,
    read_event_log,
    run,
    tendency,
    write_event_log,
)
from emosim.graph import GeneratorParams, NetworkGraph, generate_network


def line_graph(strength=0.5, n=4):
    """Chain where node i follows node i+1; all strengths pinned."""
    edges = [(i, i + 1) for i in range(n - 1)]
    return NetworkGraph(n, edges, strengths={e: strength for e in edges})


def fan_graph(strength=0.5, followers=3):
    """Nodes 1..k follow node 0."""
    edges = [(i, 0) for i in range(1, followers + 1)]
    return NetworkGraph(followers + 1, edges, strengths={e: strength for e in edges})


ALL_JOY = params_with_proportions(0.0, 1.0, 0.0, 0.0)


class TestTendency:
    def test_zero_strength(self):
        assert tendency(0.0, 0.41) == 0.0

    def test_hand_value(self):
        assert tendency(0.1, 0.41) == pytest.approx(0.0554327, abs=1e-7)

    def test_unit_point(self):
        assert tendency(1.0, 1.0) == 1.0

    def test_matches_direct_evaluation_on_grid(self):
        for i in range(100):
            s = i / 99
            for c in (0.03, 0.04, 0.35, 0.41, 0.77):
                assert abs(tendency(s, c) - s * math.exp(c - 1.0)) < 1e-12

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_threshold_monotone_in_tau(self, s, c, tau1, tau2):
        lo, hi = min(tau1, tau2), max(tau1, tau2)
        if tendency(s, c) > hi:
            assert tendency(s, c) > lo

    def test_min_passable_values(self):
        assert min_passable_strength(0.05, 0.41) == pytest.approx(0.0901994, abs=1e-6)
        assert min_passable_strength(0.05, 0.35) == pytest.approx(0.0957771, abs=1e-6)
        assert min_passable_strength(0.05, 0.41) < min_passable_strength(0.05, 0.35)


class TestPushToFollowers:
    def test_no_followers_no_change(self):
        g = line_graph()
        state = EngineState(g, SimulationConfig(steps=10))
        msg = state.publish(0)  # node 0 has no followers (it follows 1)
        assert all(len(s) == 0 for s in state.screens)

    def test_fifo_eviction_keeps_newest(self):
        g = fan_graph(followers=1)
        cfg = SimulationConfig(screen_size=3, steps=10, p_new=1.0)
        state = EngineState(g, cfg)
        for _ in range(5):
            state.publish(0)
        screen = state.screens[1]
        assert len(screen) == 3
        assert [entry.message_id for entry in screen] == [2, 3, 4]

    def test_all_followers_receive(self):
        g = fan_graph(followers=3)
        state = EngineState(g, SimulationConfig(steps=10))
        msg = state.publish(0)
        for follower in (1, 2, 3):
            assert state.screens[follower][-1] == (msg.id, 0)


class TestPublish:
    def test_emotion_from_params(self):
        g = fan_graph()
        cfg = SimulationConfig(emotion_params=ALL_JOY, steps=10)
        state = EngineState(g, cfg)
        assert all(state.publish(0).emotion is Emotion.JOY for _ in range(20))

    def test_ids_strictly_increasing(self):
        g = fan_graph()
        state = EngineState(g, SimulationConfig(steps=10))
        ids = [state.publish(0).id for _ in range(10)]
        assert ids == sorted(ids) == list(range(10))

    def test_post_count_and_event_logged(self):
        g = fan_graph()
        state = EngineState(g, SimulationConfig(emotion_params=ALL_JOY, steps=10))
        state.publish(0)
        assert state.post_counts[0][Emotion.JOY] == 1
        assert isinstance(state.events[0], PostEvent)


class TestRepublish:
    def test_tau_zero_reposts_all_distinct(self):
        g = fan_graph(strength=0.5, followers=1)
        cfg = SimulationConfig(tau=0.0, steps=10, screen_size=20)
        state = EngineState(g, cfg)
        for _ in range(3):
            state.publish(0)
        events = state.republish(1)
        assert len(events) == 3
        assert len(state.screens[1]) == 0

    def test_tau_zero_blocks_zero_strength_edges(self):
        g = fan_graph(strength=0.0, followers=1)
        state = EngineState(g, SimulationConfig(tau=0.0, steps=10))
        state.publish(0)
        assert state.republish(1) == []

    def test_tau_one_blocks_everything(self):
        # max tendency = 1 * e^(0.41 - 1) < 1 for the default correlations
        g = fan_graph(strength=1.0, followers=1)
        state = EngineState(g, SimulationConfig(tau=1.0, steps=10))
        for _ in range(5):
            state.publish(0)
        assert state.republish(1) == []
        assert len(state.screens[1]) == 0  # screen still drained

    def test_duplicate_message_skipped_after_first_pass(self):
        # 2 follows both 0 and 1; the same message arrives twice
        edges = [(2, 0), (2, 1), (1, 0)]
        g = NetworkGraph(3, edges, strengths={e: 0.9 for e in edges})
        cfg = SimulationConfig(tau=0.0, emotion_params=ALL_JOY, steps=10)
        state = EngineState(g, cfg)
        msg = state.publish(0)          # reaches screens of 1 and 2
        state.republish(1)              # 1 reposts it -> reaches 2 again
        assert [e.message_id for e in state.screens[2]] == [msg.id, msg.id]
        events = state.republish(2)
        assert len(events) == 1

    def test_second_arrival_can_pass_when_first_blocked(self):
        # weak edge to followee 0, strong edge to followee 1
        edges = [(2, 0), (2, 1), (1, 0)]
        strengths = {(2, 0): 0.05, (2, 1): 0.9, (1, 0): 0.9}
        g = NetworkGraph(3, edges, strengths=strengths)
        cfg = SimulationConfig(tau=0.3, emotion_params=ALL_JOY, steps=10)
        state = EngineState(g, cfg)
        msg = state.publish(0)
        state.republish(1)
        events = state.republish(2)
        assert len(events) == 1
        assert events[0].followee == 1
        assert events[0].strength == 0.9

    def test_cutoff_bracketing(self):
        tau, corr = 0.05, default_params().correlation[Emotion.ANGER]
        cutoff = min_passable_strength(tau, corr)
        for s, expected in ((cutoff * 0.999, 0), (cutoff * 1.001, 1)):
            g = fan_graph(strength=s, followers=1)
            cfg = SimulationConfig(
                tau=tau, steps=10,
                emotion_params=params_with_proportions(1.0, 0.0, 0.0, 0.0))
            state = EngineState(g, cfg)
            state.publish(0)
            assert len(state.republish(1)) == expected

    def test_retweet_event_fields(self):
        g = fan_graph(strength=0.7, followers=1)
        cfg = SimulationConfig(tau=0.0, emotion_params=ALL_JOY, steps=10)
        state = EngineState(g, cfg)
        msg = state.publish(0)
        ev = state.republish(1)[0]
        assert ev == RetweetEvent(0, msg.id, Emotion.JOY, 0, 1, 0, 0.7)
        assert state.edge_retweet_counts[(1, 0)] == 1
        assert state.post_counts[1][Emotion.JOY] == 1


class TestStep:
    def test_p_new_one_always_publishes(self):
        g = line_graph()
        cfg = SimulationConfig(p_new=1.0, steps=50)
        state = EngineState(g, cfg)
        for _ in range(50):
            state.step()
        assert len(state.messages) == 50
        assert all(isinstance(e, PostEvent) for e in state.events)

    def test_p_new_zero_empty_screens_no_events(self):
        g = line_graph()
        cfg = SimulationConfig(p_new=0.0, steps=50)
        state = EngineState(g, cfg)
        for _ in range(50):
            state.step()
        assert state.events == []


class TestRun:
    def test_zero_steps_empty_log(self):
        g = line_graph()
        result = run(g, SimulationConfig(steps=0))
        assert result.events == []

    def test_determinism_and_identical_logs(self, tmp_path):
        g = generate_network(GeneratorParams(200, 6, 0.5, seed=4))
        cfg = SimulationConfig(steps=4000, tau=0.03, seed=17)
        r1, r2 = run(g, cfg), run(g, cfg)
        assert r1.events == r2.events
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_event_log(r1.events, p1)
        write_event_log(r2.events, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_conservation_and_edge_consistency(self):
        g = generate_network(GeneratorParams(200, 6, 0.5, seed=4))
        cfg = SimulationConfig(steps=5000, tau=0.02, seed=3)
        result = run(g, cfg)
        posts = [e for e in result.events if isinstance(e, PostEvent)]
        retweets = [e for e in result.events if isinstance(e, RetweetEvent)]
        assert len(posts) == result.message_count
        for ev in retweets:
            assert g.has_edge(ev.reader, ev.followee)
            assert ev.strength == g.strengths[(ev.reader, ev.followee)]
        # per-node totals equal post + retweet events per node
        totals = {u: 0 for u in range(g.node_count)}
        for e in posts:
            totals[e.author] += 1
        for e in retweets:
            totals[e.reader] += 1
        for u in range(g.node_count):
            assert sum(result.post_counts[u]) == totals[u]

    def test_no_user_reposts_same_message_twice(self):
        g = generate_network(GeneratorParams(150, 6, 0.6, seed=8))
        result = run(g, SimulationConfig(steps=6000, tau=0.0, seed=5))
        seen = set()
        for e in result.events:
            if isinstance(e, RetweetEvent):
                assert (e.reader, e.message_id) not in seen
                seen.add((e.reader, e.message_id))

    def test_edge_counters_match_events(self):
        g = generate_network(GeneratorParams(150, 6, 0.6, seed=8))
        result = run(g, SimulationConfig(steps=4000, tau=0.02, seed=6))
        recount = {}
        for e in result.events:
            if isinstance(e, RetweetEvent):
                edge = (e.reader, e.followee)
                recount[edge] = recount.get(edge, 0) + 1
        assert recount == result.edge_retweet_counts


class TestScreenBound:
    @given(st.integers(min_value=0, max_value=10_000),
           st.integers(min_value=1, max_value=6),
           st.floats(min_value=0.1, max_value=0.9))
    @settings(max_examples=20, deadline=None)
    def test_screens_never_exceed_bound(self, seed, screen_size, p_new):
        g = generate_network(GeneratorParams(60, 5, 0.6, seed=2))
        cfg = SimulationConfig(p_new=p_new, screen_size=screen_size,
                               steps=300, tau=0.0, seed=seed)
        state = EngineState(g, cfg)
        for _ in range(cfg.steps):
            state.step()
            assert all(len(s) <= screen_size for s in state.screens)


class TestEventLogIO:
    def test_roundtrip(self, tmp_path):
        g = generate_network(GeneratorParams(120, 5, 0.6, seed=3))
        result = run(g, SimulationConfig(steps=3000, tau=0.02, seed=9))
        path = tmp_path / "events.csv"
        write_event_log(result.events, path)
        back = read_event_log(path)
        assert len(back) == len(result.events)
        for original, parsed in zip(result.events, back):
            if isinstance(original, PostEvent):
                assert parsed == original
            else:
                assert parsed[:-1] == original[:-1]
                assert parsed.strength == pytest.approx(original.strength, abs=5e-7)
