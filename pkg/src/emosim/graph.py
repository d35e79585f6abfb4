"""Directed follower network with common-friends tie strengths.

Edge direction convention: edge (u, v) means u follows v, so messages
posted by v land on u's screen. Tie strength is the neighborhood overlap
of the two endpoints, computed on the undirected view of the graph.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for the synthetic follower-network generator.

    out_degree_target is the follow count of ordinary community members;
    members of tight circles also carry their circle ties, so their
    realized out-degree is higher. clustered_fraction sets the share of
    users placed in tight circles rather than large loose communities;
    circles are what give the network its strong-tie mass, large
    communities and hub spokes supply the weak-tie reservoir.
    """

    node_count: int
    out_degree_target: int = 20
    reciprocity_prob: float = 0.7
    seed: int = 1
    clustered_fraction: float = 0.4

    def validate(self) -> None:
        if self.node_count < 2:
            raise ValidationError(f"node_count = {self.node_count} must be >= 2")
        if self.out_degree_target < 1:
            raise ValidationError(f"out_degree_target = {self.out_degree_target} must be >= 1")
        if self.node_count < self.out_degree_target + 1:
            raise ValidationError(
                f"node_count = {self.node_count} must be at least "
                f"out_degree_target + 1 = {self.out_degree_target + 1}"
            )
        if not (0.0 <= self.reciprocity_prob <= 1.0):
            raise ValidationError(f"reciprocity_prob = {self.reciprocity_prob} must be in [0, 1]")
        if not (0.0 <= self.clustered_fraction <= 1.0):
            raise ValidationError(
                f"clustered_fraction = {self.clustered_fraction} must be in [0, 1]"
            )


class NetworkGraph:
    """Immutable directed follower graph with per-edge strengths.

    Construction validates and indexes the edge list; afterwards the graph
    is read-only and safe to share across parallel runs. Node ids are the
    dense range [0, node_count); nodes without edges are allowed.
    """

    def __init__(self, node_count: int, edges, strengths: dict | None = None):
        if node_count < 0:
            raise ValidationError(f"node_count = {node_count} must be >= 0")
        self.node_count = int(node_count)
        canonical = sorted(edges)
        seen = set()
        followees = [[] for _ in range(self.node_count)]
        followers = [[] for _ in range(self.node_count)]
        undirected = [set() for _ in range(self.node_count)]
        for u, v in canonical:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValidationError(f"edge ({u}, {v}) references a node outside [0, {self.node_count})")
            if u == v:
                raise ValidationError(f"self-loop ({u}, {u}) is not allowed")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            followees[u].append(v)
            followers[v].append(u)
            undirected[u].add(v)
            undirected[v].add(u)
        self.edges: list[tuple[int, int]] = canonical
        self._edge_set = seen
        self.followees: list[list[int]] = followees
        self.followers: list[list[int]] = followers
        self.undirected_neighbors: list[set[int]] = undirected
        if strengths is None:
            self.strengths = compute_common_friends_strengths(self)
        else:
            if set(strengths) != seen:
                raise ValidationError("strengths map must cover exactly the edge set")
            bad = [e for e, s in strengths.items() if not (0.0 <= s <= 1.0)]
            if bad:
                raise ValidationError(f"strengths out of [0, 1] on edges: {bad[:5]}")
            self.strengths = dict(strengths)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_set

    def is_reciprocal(self, u: int, v: int) -> bool:
        return (v, u) in self._edge_set

    def strength(self, u: int, v: int) -> float:
        return self.strengths[(u, v)]

    def in_degrees(self) -> np.ndarray:
        return np.array([len(f) for f in self.followers], dtype=np.int64)

    def content_hash(self) -> str:
        """SHA-256 over the canonical edge list; identifies the structure."""
        h = hashlib.sha256()
        h.update(f"{self.node_count}\n".encode())
        for u, v in self.edges:
            h.update(f"{u} {v}\n".encode())
        return h.hexdigest()


def common_friends_strength(i: int, j: int, graph: NetworkGraph) -> float:
    """Neighborhood overlap of nodes i and j on the undirected view.

    With c common neighbors and undirected neighbor counts k_i, k_j
    (each reduced by one when the pair is itself adjacent), the strength
    is c / (k_i + k_j - c): the Jaccard overlap of the two neighbor sets
    with the endpoints excluded. Dyads with no outside context get 0.
    """
    n = graph.node_count
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"unknown node in pair ({i}, {j}); graph has {n} nodes")
    ni = graph.undirected_neighbors[i]
    nj = graph.undirected_neighbors[j]
    # Neither endpoint can appear in the intersection (no self-loops), so
    # dropping j from ni and i from nj only affects the set sizes.
    common = len(ni & nj)
    size_i = len(ni) - (1 if j in ni else 0)
    size_j = len(nj) - (1 if i in nj else 0)
    denominator = size_i + size_j - common
    if denominator <= 0:
        return 0.0
    return common / denominator


def compute_common_friends_strengths(graph: NetworkGraph) -> dict[tuple[int, int], float]:
    """Strength of every directed edge; reciprocal edges share one value."""
    strengths: dict[tuple[int, int], float] = {}
    for u, v in graph.edges:
        mirrored = strengths.get((v, u))
        if mirrored is not None:
            strengths[(u, v)] = mirrored
        else:
            strengths[(u, v)] = common_friends_strength(u, v, graph)
    return strengths


# Tight-circle catalogue: (circle size, outward spokes per member,
# fraction of clustered users). A member knows the whole circle plus its
# spokes, so an inner tie's neighborhood overlap is
# (size - 2) / (size - 2 + 2 * spokes), which grades circle cohesion from
# ~0.075 up to ~0.21. Masses decay toward stronger circles so strong
# pockets stay rare, mirroring how cohesive cliques sit inside a much
# looser follower fabric.
CIRCLE_CATALOGUE = (
    (3, 20, 0.030),   # overlap 0.024
    (4, 26, 0.050),   # overlap 0.037
    (5, 30, 0.040),   # overlap 0.048
    (6, 28, 0.030),   # overlap 0.067
    (8, 37, 0.190),   # overlap 0.075
    (9, 40, 0.040),   # overlap 0.080
    (10, 44, 0.035),  # overlap 0.083
    (10, 40, 0.150),  # overlap 0.091
    (10, 36, 0.035),  # overlap 0.100
    (14, 48, 0.220),  # overlap 0.111
    (12, 36, 0.008),  # overlap 0.122
    (11, 30, 0.012),  # overlap 0.130
    (12, 32, 0.006),  # overlap 0.135
    (12, 28, 0.030),  # overlap 0.152
    (13, 28, 0.018),  # overlap 0.164
    (14, 26, 0.008),  # overlap 0.187
    (15, 24, 0.006),  # overlap 0.213
)

_COMMUNITY_CAP_RANGE = (400.0, 1600.0)
_COMMUNITY_INTRA_SHARE = 0.4


def generate_network(params: GeneratorParams) -> NetworkGraph:
    """Build a weakly connected follower network of loose communities,
    tight circles and preferential hub spokes.

    Users are partitioned into large sparse communities (weak ties,
    overlap mostly below 0.05) and small tight circles drawn from
    CIRCLE_CATALOGUE (strong ties, overlap 0.05-0.21). Community members
    follow ~out_degree_target users, mostly inside their community;
    circle members follow their whole circle plus outward spokes. All
    spokes attach preferentially by in-degree, producing follower hubs.
    Every directed follow except the guaranteed circle/community backbone
    is reciprocated with probability ``reciprocity_prob``. Deterministic
    for a fixed seed.
    """
    params.validate()
    rng = np.random.Generator(np.random.PCG64(params.seed))
    n = params.node_count
    m = params.out_degree_target
    recip = params.reciprocity_prob

    # Partition nodes into units: (kind, first_id, size, spokes).
    # clustered_fraction governs node mass, so circle/community unit
    # draws are weighted by how much of each budget remains.
    units: list[tuple[str, int, int, int]] = []
    catalogue_mass = np.array([row[2] for row in CIRCLE_CATALOGUE])
    catalogue_mass = catalogue_mass / catalogue_mass.sum()
    circle_budget = int(round(params.clustered_fraction * n))
    lo, hi = _COMMUNITY_CAP_RANGE
    next_id = 0
    while next_id < n:
        remaining = n - next_id
        if remaining < 2 * m:
            units.append(("community", next_id, remaining, 0))
            next_id = n
            continue
        if rng.random() * remaining < circle_budget:
            idx = int(rng.choice(len(CIRCLE_CATALOGUE), p=catalogue_mass))
            size, spokes, _ = CIRCLE_CATALOGUE[idx]
            size = min(size, remaining)
            units.append(("circle", next_id, size, spokes))
            circle_budget = max(0, circle_budget - size)
        else:
            cap = int(round(lo * (hi / lo) ** rng.random()))
            size = min(cap, remaining)
            units.append(("community", next_id, size, 0))
        next_id += units[-1][2]

    edges: set[tuple[int, int]] = set()
    # Spoke pool: every community node once, plus entries per spoke
    # follower gained, so spoke draws land preferentially on well-followed
    # nodes and hubs emerge. Circle members are not spoke targets: their
    # followers are exactly their circle, which keeps circle tie
    # strengths at the catalogue values.
    pool: list[int] = [
        node
        for kind, first, size, _ in units
        if kind == "community"
        for node in range(first, first + size)
    ]
    if not pool:
        pool = list(range(n))

    def add_edge(u: int, v: int, reciprocate: bool) -> None:
        if u == v:
            return
        edges.add((u, v))
        if reciprocate and rng.random() < recip and (v, u) not in edges:
            edges.add((v, u))

    def add_spokes(member: int, count: int, taken: set[int] | None = None) -> None:
        # ``taken`` coordinates a whole circle so no two members share a
        # spoke target; shared targets would silently raise the circle's
        # internal overlap above its catalogue value. Pairs already
        # connected in either direction are skipped so a mutual pair can
        # only arise from an explicit reciprocation draw.
        chosen: set[int] = set()
        guard = 0
        while len(chosen) < count and guard < 50 * count:
            guard += 1
            pick = pool[int(rng.integers(len(pool)))]
            if pick == member or pick in chosen or (taken is not None and pick in taken):
                continue
            if (member, pick) in edges or (pick, member) in edges:
                continue
            chosen.add(pick)
            add_edge(member, pick, reciprocate=True)
            pool.extend((pick, pick, pick))
        if taken is not None:
            taken.update(chosen)

    for kind, first, size, spokes in units:
        members = range(first, first + size)
        if kind == "circle":
            # Full mutual adjacency: lower id follows higher id, reverse
            # edge drawn with reciprocity_prob.
            circle_taken: set[int] = set()
            for a in members:
                for b in range(a + 1, first + size):
                    add_edge(a, b, reciprocate=True)
                add_spokes(a, spokes, taken=circle_taken)
        else:
            # Density-aware quota: undersized communities follow fewer
            # members so their neighborhood overlaps stay in the weak-tie
            # band regardless of size.
            density_cap = max(1, int(np.sqrt(2.0 * size) / 1.7))
            intra_quota = max(1, min(int(round(_COMMUNITY_INTRA_SHARE * m)),
                                     density_cap, size - 1))
            spoke_quota = max(0, m - intra_quota)
            for a in members:
                chosen: set[int] = set()
                guard = 0
                while len(chosen) < intra_quota and guard < 50 * intra_quota:
                    guard += 1
                    pick = first + int(rng.integers(size))
                    if pick == a or pick in chosen:
                        continue
                    if (a, pick) in edges or (pick, a) in edges:
                        continue
                    chosen.add(pick)
                    add_edge(a, pick, reciprocate=True)
                add_spokes(a, spoke_quota)

    graph = NetworkGraph(n, edges)
    return _ensure_weakly_connected(graph, params)


def _ensure_weakly_connected(graph: NetworkGraph, params: GeneratorParams) -> NetworkGraph:
    """Attach any stray weak component to node 0 deterministically."""
    n = graph.node_count
    if n == 0:
        return graph
    seen = [False] * n
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in graph.undirected_neighbors[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    missing = [v for v in range(n) if not seen[v]]
    if not missing:
        return graph
    edges = set(graph.edges)
    while missing:
        root = missing[0]
        edges.add((root, 0))
        comp = [root]
        seen[root] = True
        while comp:
            u = comp.pop()
            for v in graph.undirected_neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
        missing = [v for v in missing if not seen[v]]
    return NetworkGraph(n, edges)


def load_edge_list(path) -> NetworkGraph:
    """Read a plain-text edge list and compute strengths.

    Each non-empty, non-comment line holds two whitespace-separated
    integers "follower followee". Duplicate edges are collapsed; node
    count is max id + 1, so ids may be sparse (gaps become isolated
    nodes).
    """
    edges: set[tuple[int, int]] = set()
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(
                    f"expected 'follower followee', got {line!r}", line_number=lineno
                )
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(
                    f"non-integer node id in {line!r}", line_number=lineno
                ) from None
            if u < 0 or v < 0:
                raise ParseError(f"negative node id in {line!r}", line_number=lineno)
            if u == v:
                raise ValidationError(f"line {lineno}: self-loop ({u}, {u}) is not allowed")
            edges.add((u, v))
            max_id = max(max_id, u, v)
    return NetworkGraph(max_id + 1, edges)


def save_edge_list(graph: NetworkGraph, path) -> None:
    """Write the canonical edge list plus a companion strength file.

    The companion file at ``<path>.strengths`` holds "u v strength" rows
    with strengths printed to 6 decimal places.
    """
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in graph.edges:
            fh.write(f"{u} {v}\n")
    with open(path + ".strengths", "w", encoding="utf-8") as fh:
        for u, v in graph.edges:
            fh.write(f"{u} {v} {graph.strengths[(u, v)]:.6f}\n")
