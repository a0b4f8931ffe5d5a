"""Topologies and grade-filtered minimum-hop path selection."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .classifier import Grade
from .expert import ClassificationTable

__all__ = [
    "Tier",
    "Topology",
    "TopologySpec",
    "RoutePath",
    "paper_grid",
    "random_geometric",
    "from_links",
    "parse_link_list",
    "build_topology",
    "allowed_subgraph",
    "select_path",
    "shortest_path",
]


class Tier(str, Enum):
    HIGH_ONLY = "high-only"
    MED_FALLBACK = "med-fallback"
    UNFILTERED = "unfiltered"


_TIER_GRADES = {
    Tier.HIGH_ONLY: frozenset({Grade.HIGH}),
    Tier.MED_FALLBACK: frozenset({Grade.HIGH, Grade.MED}),
}


def _link(a: Hashable, b: Hashable) -> tuple:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Topology:
    """Static undirected graph; ``expert`` optionally names the expert node."""

    nodes: frozenset
    links: frozenset
    expert: Hashable | None = None

    def __post_init__(self) -> None:
        nodes = frozenset(self.nodes)
        links = frozenset(_link(a, b) for a, b in self.links)
        for a, b in links:
            if a == b:
                raise ValueError(f"self-link on node {a!r}")
            if a not in nodes or b not in nodes:
                raise ValueError(f"link ({a!r}, {b!r}) references an unknown node")
        if self.expert is not None and self.expert not in nodes:
            raise ValueError(f"expert {self.expert!r} is not a topology node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "links", links)

    @cached_property
    def adjacency(self) -> dict[Hashable, tuple]:
        adj: dict[Hashable, list] = {n: [] for n in self.nodes}
        for a, b in self.links:
            adj[a].append(b)
            adj[b].append(a)
        return {n: tuple(sorted(v)) for n, v in adj.items()}

    def neighbors(self, node: Hashable) -> tuple:
        return self.adjacency[node]

    def has_link(self, a: Hashable, b: Hashable) -> bool:
        return _link(a, b) in self.links

    def subgraph(self, keep: Iterable[Hashable]) -> "Topology":
        keep = frozenset(keep) & self.nodes
        links = frozenset(l for l in self.links if l[0] in keep and l[1] in keep)
        expert = self.expert if self.expert in keep else None
        return Topology(keep, links, expert)

    def to_link_list(self) -> str:
        """One ``a b`` pair per line; isolated nodes appear alone on a line."""
        lines = [f"{a} {b}" for a, b in sorted(self.links)]
        linked = {n for l in self.links for n in l}
        lines += [f"{n}" for n in sorted(self.nodes - linked)]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class RoutePath:
    nodes: tuple
    tier: Tier

    @property
    def relays(self) -> tuple:
        return self.nodes[1:-1]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1


def _parse_node(token: str) -> Hashable:
    try:
        return int(token)
    except ValueError:
        return token


def parse_link_list(text: str, expert: Hashable | None = None) -> Topology:
    """Parse the link-list text form (``#`` starts a comment)."""
    nodes: set = set()
    links: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            nodes.add(_parse_node(parts[0]))
        elif len(parts) == 2:
            a, b = (_parse_node(p) for p in parts)
            if a == b:
                raise ValueError(f"line {lineno}: self-link on node {a!r}")
            nodes.update((a, b))
            links.add(_link(a, b))
        else:
            raise ValueError(f"line {lineno}: expected 'node_a node_b', got {raw!r}")
    return Topology(frozenset(nodes), frozenset(links), expert)


def from_links(pairs: Iterable[tuple], nodes: Iterable[Hashable] = (), expert: Hashable | None = None) -> Topology:
    pairs = list(pairs)
    all_nodes = set(nodes) | {n for p in pairs for n in p}
    return Topology(frozenset(all_nodes), frozenset(pairs), expert)


def paper_grid() -> Topology:
    """Nine-node 3x3 grid with the expert (node 0) in the centre.

    Nodes 1-8 fill the remaining cells row by row and are linked to their
    orthogonal neighbours; the expert is linked to all eight.
    """
    layout = [[1, 2, 3], [4, 0, 5], [6, 7, 8]]
    links = set()
    for r in range(3):
        for c in range(3):
            if c < 2:
                links.add(_link(layout[r][c], layout[r][c + 1]))
            if r < 2:
                links.add(_link(layout[r][c], layout[r + 1][c]))
    links.update(_link(0, n) for n in range(1, 9))
    return Topology(frozenset(range(9)), frozenset(links), expert=0)


def random_geometric(n: int, radius: float, seed: int) -> Topology:
    """``n`` nodes (ids 1..n) uniform in the unit square, linked within ``radius``."""
    if n < 2:
        raise ValueError("random-geometric topology needs n >= 2")
    if radius <= 0:
        raise ValueError("radius must be positive")
    pos = np.random.default_rng(seed).random((n, 2))
    d2 = ((pos[:, None, :] - pos[None, :, :]) ** 2).sum(axis=-1)
    i, j = np.nonzero(np.triu(d2 <= radius * radius, k=1))
    links = frozenset((int(a) + 1, int(b) + 1) for a, b in zip(i, j))
    return Topology(frozenset(range(1, n + 1)), links)


@dataclass(frozen=True)
class TopologySpec:
    """Declarative topology description as it appears in scenario files."""

    kind: str = "paper-grid"
    n: int | None = None
    radius: float | None = None
    seed: int | None = None
    links: str | None = None
    expert: Hashable | None = None


def build_topology(spec: TopologySpec, default_seed: int = 0) -> Topology:
    if spec.kind == "paper-grid":
        return paper_grid()
    if spec.kind == "random-geometric":
        if spec.n is None or spec.radius is None:
            raise ValueError("random-geometric topology needs n and radius")
        seed = default_seed if spec.seed is None else spec.seed
        return random_geometric(spec.n, spec.radius, seed)
    if spec.kind == "links":
        if not spec.links:
            raise ValueError("links topology needs a non-empty link list")
        topo = parse_link_list(spec.links)
        if spec.expert is not None:
            topo = Topology(topo.nodes, topo.links, spec.expert)
        return topo
    raise ValueError(f"unknown topology kind {spec.kind!r}")


def _relay_set(
    topo: Topology, table: ClassificationTable, tier: Tier, expert_relay: bool
) -> frozenset:
    if tier is Tier.UNFILTERED:
        keep = set(topo.nodes)
    else:
        grades = _TIER_GRADES[tier]
        keep = {n for n in topo.nodes if table.outcome(n) in grades}
    if topo.expert is not None:
        if expert_relay:
            keep.add(topo.expert)
        else:
            keep.discard(topo.expert)
    return frozenset(keep)


def allowed_subgraph(
    topo: Topology,
    table: ClassificationTable,
    tier: Tier | str,
    endpoints: Iterable[Hashable] = (),
    *,
    expert_relay: bool = False,
) -> Topology:
    """Restrict ``topo`` to the nodes a tier may relay through.

    High-only keeps HIGH nodes, med-fallback keeps HIGH and MED. Nodes that
    are LOW, verbatim errors or absent from ``table`` are dropped along with
    their links. ``endpoints`` are kept whatever their grade. The expert is
    kept only when ``expert_relay`` is set.
    """
    keep = _relay_set(topo, table, Tier(tier), expert_relay) | frozenset(endpoints)
    return topo.subgraph(keep)


def shortest_path(
    topo: Topology, src: Hashable, dst: Hashable, can_relay: Callable[[Hashable], bool] | None = None
) -> tuple | None:
    """Minimum-hop path, ties broken by the lexicographically smallest sequence.

    Intermediate nodes must satisfy ``can_relay``; endpoints are exempt.
    """
    if src == dst:
        raise ValueError("source and destination must differ")
    if src not in topo.nodes or dst not in topo.nodes:
        raise KeyError(f"endpoint not in topology: {src!r} -> {dst!r}")
    adj = topo.adjacency
    # BFS from dst so the walk from src can pick the smallest next hop greedily
    dist = {dst: 0}
    queue = deque([dst])
    while queue:
        v = queue.popleft()
        if v == src:
            break
        for u in adj[v]:
            if u in dist:
                continue
            if u != src and can_relay is not None and not can_relay(u):
                continue
            dist[u] = dist[v] + 1
            queue.append(u)
    if src not in dist:
        return None
    path = [src]
    cur = src
    while cur != dst:
        want = dist[cur] - 1
        cur = next(u for u in adj[cur] if dist.get(u) == want)
        path.append(cur)
    return tuple(path)


def select_path(
    topo: Topology,
    table: ClassificationTable,
    src: Hashable,
    dst: Hashable,
    *,
    expert_relay: bool = False,
) -> RoutePath | None:
    """Pick a HIGH-only route, else a HIGH+MED route, else None."""
    for tier in (Tier.HIGH_ONLY, Tier.MED_FALLBACK):
        relays = _relay_set(topo, table, tier, expert_relay)
        path = shortest_path(topo, src, dst, relays.__contains__)
        if path is not None:
            return RoutePath(path, tier)
    return None


def select_unfiltered(
    topo: Topology, src: Hashable, dst: Hashable, *, expert_relay: bool = False
) -> RoutePath | None:
    """Baseline route: minimum hops over every node (expert per ``expert_relay``)."""
    expert = topo.expert
    can_relay = None if expert is None or expert_relay else (lambda n: n != expert)
    path = shortest_path(topo, src, dst, can_relay)
    return None if path is None else RoutePath(path, Tier.UNFILTERED)
