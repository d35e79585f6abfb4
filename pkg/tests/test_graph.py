import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emosim.errors import ParseError, ValidationError
from emosim.graph import (
    GeneratorParams,
    NetworkGraph,
    common_friends_strength,
    compute_common_friends_strengths,
    generate_network,
    load_edge_list,
    save_edge_list,
)


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")


class TestLoadEdgeList:
    def test_basic_load_with_reciprocal_edge(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["0 1", "1 0", "2 1"])
        g = load_edge_list(p)
        assert g.node_count == 3
        assert g.edge_count == 3
        assert g.is_reciprocal(0, 1) and g.is_reciprocal(1, 0)
        assert not g.is_reciprocal(2, 1)

    def test_self_loop_rejected(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["0 0"])
        with pytest.raises(ValidationError, match="self-loop"):
            load_edge_list(p)

    def test_duplicates_collapsed(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["0 1", "0 1"])
        assert load_edge_list(p).edge_count == 1

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["# header", "", "0 1", "  ", "# tail"])
        assert load_edge_list(p).edge_count == 1

    def test_malformed_line_reports_line_number(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["0 1", "1 2 3"])
        with pytest.raises(ParseError, match="line 2"):
            load_edge_list(p)

    def test_non_integer_reports_line_number(self, tmp_path):
        p = tmp_path / "g.edges"
        write_lines(p, ["0 x"])
        with pytest.raises(ParseError, match="line 1"):
            load_edge_list(p)

    def test_roundtrip_via_save(self, tmp_path):
        g = generate_network(GeneratorParams(60, 5, 0.4, seed=3))
        p = tmp_path / "g.edges"
        save_edge_list(g, p)
        g2 = load_edge_list(p)
        assert g2.edges == g.edges
        assert g2.strengths == g.strengths
        strengths_file = (tmp_path / "g.edges.strengths").read_text().splitlines()
        assert len(strengths_file) == g.edge_count
        u, v, s = strengths_file[0].split()
        assert abs(float(s) - g.strengths[(int(u), int(v))]) < 5e-7


class TestGraphValidation:
    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError, match="self-loop"):
            NetworkGraph(2, [(0, 0)])

    def test_out_of_range_endpoint_rejected(self):
        with pytest.raises(ValidationError, match="outside"):
            NetworkGraph(2, [(0, 5)])

    def test_provided_strengths_must_cover_edges(self):
        with pytest.raises(ValidationError, match="strengths"):
            NetworkGraph(3, [(0, 1)], strengths={(1, 2): 0.5})

    def test_provided_strengths_must_be_in_range(self):
        with pytest.raises(ValidationError, match="strengths"):
            NetworkGraph(2, [(0, 1)], strengths={(0, 1): 1.5})


class TestCommonFriendsStrength:
    def test_hand_worked_five_node_example(self):
        # 0 neighbors {1,2,3}; 1 neighbors {0,2,4} -> one shared (2):
        # 1 / (2 + 2 - 1) = 1/3
        g = NetworkGraph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4)])
        assert common_friends_strength(0, 1, g) == pytest.approx(1 / 3)

    def test_complete_triad_all_strengths_one(self):
        edges = [(a, b) for a in range(3) for b in range(3) if a != b]
        g = NetworkGraph(3, edges)
        assert all(s == pytest.approx(1.0) for s in g.strengths.values())

    def test_star_all_strengths_zero(self):
        g = NetworkGraph(5, [(0, i) for i in range(1, 5)])
        assert all(s == 0.0 for s in g.strengths.values())

    def test_zero_common_neighbors(self):
        # 0-1 edge, 0 also knows 2, 1 also knows 3: no shared context
        g = NetworkGraph(4, [(0, 1), (0, 2), (1, 3)])
        assert common_friends_strength(0, 1, g) == 0.0

    def test_mutual_only_dyad_is_zero(self):
        g = NetworkGraph(2, [(0, 1), (1, 0)])
        assert common_friends_strength(0, 1, g) == 0.0

    def test_unknown_node_raises(self):
        g = NetworkGraph(2, [(0, 1)])
        with pytest.raises(ValidationError, match="unknown node"):
            common_friends_strength(0, 7, g)

    def test_empty_edge_set_gives_empty_map(self):
        assert compute_common_friends_strengths(NetworkGraph(3, [])) == {}

    def test_symmetry(self):
        g = generate_network(GeneratorParams(80, 6, 0.5, seed=9))
        for u, v in list(g.edges)[:200]:
            assert common_friends_strength(u, v, g) == common_friends_strength(v, u, g)

    def test_equals_one_iff_identical_nonempty_neighbor_sets(self):
        edges = [(a, b) for a in range(3) for b in range(3) if a != b]
        g = NetworkGraph(3, edges)
        assert common_friends_strength(0, 1, g) == 1.0
        g2 = NetworkGraph(4, [(0, 1), (0, 2), (1, 3)])
        assert common_friends_strength(0, 1, g2) < 1.0


def naive_strength(u, v, edges, n):
    """Independent recomputation from the raw edge list."""
    nbrs = {i: set() for i in range(n)}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    common = len((nbrs[u] - {v}) & (nbrs[v] - {u}))
    k_u = len(nbrs[u]) - (1 if v in nbrs[u] else 0)
    k_v = len(nbrs[v]) - (1 if u in nbrs[v] else 0)
    denom = k_u + k_v - common
    return common / denom if denom > 0 else 0.0


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_strengths_match_naive_recomputation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 21))
    possible = [(a, b) for a in range(n) for b in range(n) if a != b]
    k = int(rng.integers(1, min(len(possible), 3 * n)))
    idx = rng.choice(len(possible), size=k, replace=False)
    edges = [possible[i] for i in idx]
    g = NetworkGraph(n, edges)
    for u, v in g.edges:
        assert g.strengths[(u, v)] == naive_strength(u, v, edges, n)


class TestGenerator:
    def test_determinism(self):
        params = GeneratorParams(1000, 5, 0.3, seed=7)
        a = generate_network(params)
        b = generate_network(params)
        assert a.edges == b.edges
        assert a.strengths == b.strengths

    def test_zero_reciprocity_means_zero_mutual_pairs(self):
        g = generate_network(GeneratorParams(1000, 5, 0.0, seed=7))
        edge_set = set(g.edges)
        assert not any((v, u) in edge_set for u, v in g.edges)

    def test_heavy_tailed_in_degree(self):
        g = generate_network(GeneratorParams(10_000, 10, 0.3, seed=1))
        degrees = g.in_degrees()
        assert degrees.max() > 10 * np.median(degrees)

    def test_weakly_connected(self):
        g = generate_network(GeneratorParams(500, 8, 0.5, seed=2))
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in g.undirected_neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        assert len(seen) == g.node_count

    def test_all_strengths_in_range(self):
        g = generate_network(GeneratorParams(800, 10, 0.6, seed=5))
        assert all(0.0 <= s <= 1.0 for s in g.strengths.values())

    def test_too_few_nodes_rejected(self):
        with pytest.raises(ValidationError, match="node_count"):
            generate_network(GeneratorParams(5, 10, 0.3, seed=1))

    def test_bad_probability_rejected(self):
        with pytest.raises(ValidationError, match="reciprocity_prob"):
            GeneratorParams(100, 5, 1.5, seed=1).validate()

    def test_serialized_byte_identical_for_same_seed(self, tmp_path):
        params = GeneratorParams(400, 6, 0.4, seed=11)
        p1, p2 = tmp_path / "a.edges", tmp_path / "b.edges"
        save_edge_list(generate_network(params), p1)
        save_edge_list(generate_network(params), p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert (tmp_path / "a.edges.strengths").read_bytes() == \
            (tmp_path / "b.edges.strengths").read_bytes()
