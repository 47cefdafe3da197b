"""Social and bipartite graphs plus maximum-modularity community detection.

The social graph is directed: an edge A->B means A's tweets mention or
retweet B. The bipartite graph links accounts to the entities they
mention, weighted by mention count, and is what community detection runs
on (as a plain weighted undirected graph, so accounts and entities end
up sharing community ids).

Detection is greedy modularity maximization: repeated local-move passes
over nodes in ascending id order, then aggregation of communities into
super-nodes, iterated to a fixed point. The seed only breaks ties among
moves with equal gain, so results are deterministic given (graph, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .corpus import AccountRegistry, Corpus
from .entities import EntityIndex

ACCOUNT_PREFIX = "account::"
ENTITY_PREFIX = "entity::"

_TOL = 1e-12


class GraphError(ValueError):
    pass


class WeightedGraph:
    """Undirected weighted graph; self-loops only arise from aggregation."""

    def __init__(self):
        self._adj: dict[str, dict[str, float]] = {}
        self._self: dict[str, float] = {}

    def add_node(self, node: str) -> None:
        self._adj.setdefault(node, {})
        self._self.setdefault(node, 0.0)

    def add_edge(self, u: str, v: str, weight: float) -> None:
        if weight <= 0:
            raise GraphError(f"edge weight must be positive: {u}-{v} = {weight}")
        self.add_node(u)
        self.add_node(v)
        if u == v:
            self._self[u] += weight
        else:
            self._adj[u][v] = self._adj[u].get(v, 0.0) + weight
            self._adj[v][u] = self._adj[v].get(u, 0.0) + weight

    def nodes(self) -> list[str]:
        return sorted(self._adj)

    def neighbors(self, node: str) -> dict[str, float]:
        return self._adj[node]

    def self_loop(self, node: str) -> float:
        return self._self.get(node, 0.0)

    def degree(self, node: str) -> float:
        return sum(self._adj[node].values()) + 2.0 * self._self.get(node, 0.0)

    def total_weight(self) -> float:
        pair_weight = sum(sum(nbrs.values()) for nbrs in self._adj.values()) / 2.0
        return pair_weight + sum(self._self.values())

    def edge_count(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2 + sum(
            1 for w in self._self.values() if w
        )


def modularity(
    graph: WeightedGraph, partition: dict[str, int], resolution: float = 1.0
) -> float:
    """Weighted modularity of a partition.

    Q = sum over communities of [w_in/m - resolution * (deg/2m)^2], with
    w_in the intra-community edge weight (each edge once) and deg the
    summed weighted degrees.
    """
    m = graph.total_weight()
    if m <= 0:
        raise GraphError("modularity is undefined for zero total edge weight")
    nodes = graph.nodes()
    missing = [n for n in nodes if n not in partition]
    if missing:
        raise GraphError(f"partition misses nodes: {missing[:3]}")
    w_in: dict[int, float] = {}
    deg: dict[int, float] = {}
    for node in nodes:
        c = partition[node]
        deg[c] = deg.get(c, 0.0) + graph.degree(node)
        w_in[c] = w_in.get(c, 0.0) + graph.self_loop(node)
        for nbr, w in graph.neighbors(node).items():
            if partition[nbr] == c and node < nbr:
                w_in[c] = w_in.get(c, 0.0) + w
    q = 0.0
    for c in deg:
        q += w_in.get(c, 0.0) / m - resolution * (deg[c] / (2.0 * m)) ** 2
    return q


@dataclass
class CommunityAssignment:
    membership: dict[str, int]
    modularity: float

    def communities(self) -> dict[int, list[str]]:
        groups: dict[int, list[str]] = {}
        for node, cid in self.membership.items():
            groups.setdefault(cid, []).append(node)
        return {cid: sorted(members) for cid, members in sorted(groups.items())}

    def __eq__(self, other) -> bool:
        if not isinstance(other, CommunityAssignment):
            return NotImplemented
        return (
            self.membership == other.membership
            and abs(self.modularity - other.modularity) < 1e-12
        )


def _local_move(
    adj: dict[str, dict[str, float]],
    loops: dict[str, float],
    m: float,
    node_comm: dict[str, int],
    comm_tot: dict[int, float],
    rng: random.Random,
    resolution: float,
) -> bool:
    """One phase of greedy node moves; returns True if anything moved."""
    degrees = {
        n: sum(nbrs.values()) + 2.0 * loops[n] for n, nbrs in adj.items()
    }
    order = sorted(adj)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for node in order:
            current = node_comm[node]
            k_i = degrees[node]
            w_to: dict[int, float] = {}
            for nbr, w in adj[node].items():
                c = node_comm[nbr]
                w_to[c] = w_to.get(c, 0.0) + w
            comm_tot[current] -= k_i

            def gain(c: int) -> float:
                return w_to.get(c, 0.0) / m - resolution * comm_tot.get(
                    c, 0.0
                ) * k_i / (2.0 * m * m)

            stay = gain(current)
            best_gain = stay
            best: list[int] = []
            for c in sorted(w_to):
                if c == current:
                    continue
                g = gain(c)
                if g > best_gain + _TOL:
                    best_gain = g
                    best = [c]
                elif best and abs(g - best_gain) <= _TOL:
                    best.append(c)
            if best:
                target = best[0] if len(best) == 1 else rng.choice(best)
                node_comm[node] = target
                comm_tot[target] += k_i
                improved = True
                moved_any = True
            else:
                node_comm[node] = current
                comm_tot[current] += k_i
    return moved_any


def _aggregate(
    adj: dict[str, dict[str, float]],
    loops: dict[str, float],
    node_comm: dict[str, int],
) -> tuple[dict[str, dict[str, float]], dict[str, float], dict[str, str]]:
    """Collapse communities into super-nodes named by their smallest member."""
    members: dict[int, list[str]] = {}
    for node, c in node_comm.items():
        members.setdefault(c, []).append(node)
    rep = {c: min(ns) for c, ns in members.items()}
    new_adj: dict[str, dict[str, float]] = {rep[c]: {} for c in members}
    new_loops: dict[str, float] = {rep[c]: 0.0 for c in members}
    node_to_rep = {node: rep[c] for node, c in node_comm.items()}
    for u, nbrs in adj.items():
        ru = node_to_rep[u]
        new_loops[ru] += loops[u]
        for v, w in nbrs.items():
            rv = node_to_rep[v]
            if ru == rv:
                new_loops[ru] += w / 2.0  # each undirected edge visited twice
            else:
                new_adj[ru][rv] = new_adj[ru].get(rv, 0.0) + w
    return new_adj, new_loops, node_to_rep


def detect_communities(
    graph: WeightedGraph, seed: int = 0, resolution: float = 1.0
) -> CommunityAssignment:
    """Greedy modularity maximization (local moves + aggregation)."""
    m = graph.total_weight()
    if m <= 0:
        raise GraphError("community detection requires at least one edge")
    rng = random.Random(seed)
    adj = {n: dict(graph.neighbors(n)) for n in graph.nodes()}
    loops = {n: graph.self_loop(n) for n in graph.nodes()}
    super_of: dict[str, str] = {n: n for n in graph.nodes()}

    while True:
        nodes = sorted(adj)
        node_comm = {n: i for i, n in enumerate(nodes)}
        comm_tot = {
            node_comm[n]: sum(adj[n].values()) + 2.0 * loops[n] for n in nodes
        }
        if not _local_move(adj, loops, m, node_comm, comm_tot, rng, resolution):
            break
        adj, loops, node_to_rep = _aggregate(adj, loops, node_comm)
        super_of = {orig: node_to_rep[sup] for orig, sup in super_of.items()}

    groups: dict[str, list[str]] = {}
    for orig, sup in super_of.items():
        groups.setdefault(sup, []).append(orig)
    ordered = sorted(groups.values(), key=min)
    membership = {
        node: cid for cid, members in enumerate(ordered) for node in members
    }
    q = modularity(graph, membership, resolution=resolution)
    if q < 0.0:
        # The trivial single community (Q = 0) beats anything negative.
        membership = {node: 0 for node in membership}
        q = modularity(graph, membership, resolution=resolution)
    return CommunityAssignment(membership=membership, modularity=q)


class SocialGraph:
    """Directed mention/retweet graph over registered accounts."""

    def __init__(self, nodes: set[str], edges: dict[tuple[str, str], int]):
        for (src, dst), weight in edges.items():
            if src == dst:
                raise GraphError(f"self-loop not allowed: {src}")
            if weight < 1:
                raise GraphError(f"edge weight must be >= 1: {src}->{dst}")
            if src not in nodes or dst not in nodes:
                raise GraphError(f"edge endpoint outside node set: {src}->{dst}")
        self.nodes = set(nodes)
        self.edges = dict(edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def out_edges(self, account_id: str) -> list[tuple[str, int]]:
        found = [(dst, w) for (src, dst), w in self.edges.items() if src == account_id]
        return sorted(found, key=lambda e: (-e[1], e[0]))

    def in_edges(self, account_id: str) -> list[tuple[str, int]]:
        found = [(src, w) for (src, dst), w in self.edges.items() if dst == account_id]
        return sorted(found, key=lambda e: (-e[1], e[0]))


def build_social_graph(corpus: Corpus, registry: AccountRegistry) -> SocialGraph:
    """Edge A->B with weight = number of A's tweets referencing B.

    A tweet references B when it mentions B or is a retweet of B; only
    registered targets count and self-references are dropped.
    """
    edges: dict[tuple[str, str], int] = {}
    for tweet in corpus:
        handles = list(tweet.mentions)
        if tweet.retweet_of:
            handles.append(tweet.retweet_of)
        targets = set()
        for handle in handles:
            account = registry.get(handle)
            if account is not None and account.id != tweet.account_id:
                targets.add(account.id)
        for target in targets:
            key = (tweet.account_id, target)
            edges[key] = edges.get(key, 0) + 1
    return SocialGraph(nodes={a.id for a in registry}, edges=edges)


def account_neighbors(
    graph: SocialGraph, account_id: str
) -> tuple[list[tuple[str, int]], list[tuple[str, int]]]:
    """(incoming, outgoing) weighted edge lists, heaviest first."""
    if account_id not in graph.nodes:
        raise GraphError(f"unknown account in social graph: {account_id!r}")
    return graph.in_edges(account_id), graph.out_edges(account_id)


@dataclass
class BipartiteGraph:
    """Account-entity mention graph; edges only cross the two sides."""

    accounts: set[str] = field(default_factory=set)
    entities: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def as_weighted(self) -> WeightedGraph:
        graph = WeightedGraph()
        for (account_id, canonical), weight in self.edges.items():
            graph.add_edge(ACCOUNT_PREFIX + account_id, ENTITY_PREFIX + canonical, weight)
        return graph


def build_bipartite(index: EntityIndex) -> BipartiteGraph:
    graph = BipartiteGraph()
    for canonical, per_account in index.counts.items():
        for account_id, count in per_account.items():
            if count < 1:
                raise GraphError(
                    f"bipartite weight must be >= 1: {account_id}/{canonical}"
                )
            graph.accounts.add(account_id)
            graph.entities.add(canonical)
            graph.edges[(account_id, canonical)] = count
    return graph


def detect_bipartite_communities(
    bipartite: BipartiteGraph, seed: int = 0, resolution: float = 1.0
) -> CommunityAssignment:
    """Communities over the mixed account/entity node set."""
    return detect_communities(bipartite.as_weighted(), seed=seed, resolution=resolution)


def account_community(assignment: CommunityAssignment, account_id: str) -> int | None:
    return assignment.membership.get(ACCOUNT_PREFIX + account_id)


def community_accounts(assignment: CommunityAssignment, community_id: int) -> list[str]:
    return [
        node[len(ACCOUNT_PREFIX):]
        for node, cid in sorted(assignment.membership.items())
        if cid == community_id and node.startswith(ACCOUNT_PREFIX)
    ]


def community_entity_cloud(
    assignment: CommunityAssignment,
    index: EntityIndex,
    community_id: int,
    k: int,
) -> list[tuple[str, int]]:
    """Top-k entities by summed mention count over a community's accounts."""
    if community_id not in set(assignment.membership.values()):
        raise GraphError(f"unknown community id: {community_id}")
    accounts = set(community_accounts(assignment, community_id))
    totals: dict[str, int] = {}
    for canonical, per_account in index.counts.items():
        count = sum(c for a, c in per_account.items() if a in accounts)
        if count:
            totals[canonical] = count
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]
