"""Seeded graph families for tests and benchmarks.

All generators return (edge list, delta_cap) with every degree strictly
respecting the cap, so the edges can be fed straight into the engine.
"""

from __future__ import annotations

import random


def random_graph(
    n: int, delta_cap: int, density: float, seed: int
) -> list[tuple[int, int]]:
    """~density * n * delta_cap / 2 random edges under the degree cap."""
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    rng = random.Random(seed)
    target = int(density * n * delta_cap / 2)
    edges: set[tuple[int, int]] = set()
    deg = [0] * (n + 1)
    misses = 0
    while len(edges) < target and misses < 50 * target + 1000:
        u = rng.randint(1, n)
        v = rng.randint(1, n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) in edges or deg[u] >= delta_cap or deg[v] >= delta_cap:
            misses += 1
            continue
        edges.add((u, v))
        deg[u] += 1
        deg[v] += 1
    return sorted(edges)


def random_sparse_graph(
    n: int, delta_cap: int, avg_deg: float, seed: int
) -> list[tuple[int, int]]:
    """Low-density random graph with expected average degree avg_deg."""
    density = min(1.0, avg_deg / delta_cap)
    return random_graph(n, delta_cap, density, seed)


def planted_clique_graph(
    n: int,
    delta_cap: int,
    seed: int,
    num_cliques: int = 1,
    clique_size: int | None = None,
    anti_edges_per_clique: int | None = None,
    noise_avg_deg: float = 4.0,
    cross_avg_deg: float = 0.0,
) -> tuple[list[tuple[int, int]], list[set[int]]]:
    """Disjoint near-cliques on a prefix of the vertices plus sparse noise.

    Each planted set has clique_size vertices (default delta_cap - 2) with
    anti_edges_per_clique internal non-edges removed at random; remaining
    vertices get random low-degree noise edges that avoid raising planted
    degrees past the cap.  Returns (edges, planted vertex sets).
    """
    rng = random.Random(seed)
    size = clique_size if clique_size is not None else delta_cap - 2
    if size < 2 or num_cliques * size > n:
        raise ValueError("planted cliques do not fit")
    if size > delta_cap + 1:
        raise ValueError("clique size exceeds delta_cap + 1")
    anti = (
        anti_edges_per_clique
        if anti_edges_per_clique is not None
        else max(1, size // 20)
    )

    edges: set[tuple[int, int]] = set()
    deg = [0] * (n + 1)
    planted: list[set[int]] = []
    base = 1
    for _ in range(num_cliques):
        members = list(range(base, base + size))
        base += size
        planted.append(set(members))
        full = [
            (u, v) for i, u in enumerate(members) for v in members[i + 1 :]
        ]
        removed = set(rng.sample(full, min(anti, len(full))))
        for e in full:
            if e not in removed:
                edges.add(e)
                deg[e[0]] += 1
                deg[e[1]] += 1

    rest = list(range(base, n + 1))
    clique_vertices = list(range(1, base))
    if rest and clique_vertices and cross_avg_deg > 0:
        # sparse-to-clique edges give denser vertices external neighbors
        want = int(cross_avg_deg * len(rest) / 2)
        misses = 0
        while want > 0 and misses < 50 * want + 1000:
            u = rng.choice(rest)
            v = rng.choice(clique_vertices)
            k = (min(u, v), max(u, v))
            if k in edges or deg[u] >= delta_cap or deg[v] >= delta_cap:
                misses += 1
                continue
            edges.add(k)
            deg[u] += 1
            deg[v] += 1
            want -= 1
    if len(rest) >= 2 and noise_avg_deg > 0:
        want = int(noise_avg_deg * len(rest) / 2)
        misses = 0
        while want > 0 and misses < 50 * want + 1000:
            u, v = rng.sample(rest, 2)
            if u > v:
                u, v = v, u
            if (u, v) in edges or deg[u] >= delta_cap or deg[v] >= delta_cap:
                misses += 1
                continue
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
            want -= 1
    return sorted(edges), planted


def mixed_graph(
    n: int, delta_cap: int, seed: int
) -> tuple[list[tuple[int, int]], list[set[int]]]:
    """Planted near-cliques covering about half the vertices plus noise."""
    size = delta_cap - 2
    num = max(1, (n // 2) // max(2, size))
    return planted_clique_graph(
        n,
        delta_cap,
        seed,
        num_cliques=num,
        clique_size=size,
        noise_avg_deg=min(8.0, delta_cap / 4),
    )


def fuzz_graph(n: int, seed: int) -> tuple[list[tuple[int, int]], int]:
    """Small arbitrary graph for oracle fuzzing: random density and cap."""
    rng = random.Random(seed)
    delta_cap = rng.randint(1, max(1, n - 1))
    density = rng.random()
    return random_graph(n, delta_cap, max(0.01, density), seed + 1), delta_cap
