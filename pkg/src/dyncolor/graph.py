"""Dynamic graph on a fixed vertex set [1..n] with a hard degree cap."""

from __future__ import annotations

from array import array


class GraphError(Exception):
    pass


class DuplicateEdge(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class DegreeCapExceeded(GraphError):
    pass


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class DynamicGraph:
    """Adjacency-set graph; updates are rejected rather than clamped.

    Besides the per-vertex adjacency sets, a flat edge list with a
    position index is maintained so edges can be enumerated (and the
    whole edge set scanned by the verifier) without touching the
    adjacency structure.
    """

    def __init__(self, n: int, delta_cap: int) -> None:
        if n < 1:
            raise ValueError("n must be positive")
        if delta_cap < 1 or delta_cap > n - 1:
            raise ValueError("delta_cap must be in [1, n-1]")
        self.n = n
        self.delta_cap = delta_cap
        self.adj: list[set[int]] = [set() for _ in range(n + 1)]
        self.edge_count = 0
        self._edges: list[tuple[int, int]] = []
        self._edge_pos: dict[tuple[int, int], int] = {}
        # flat copies of the edge list; zero-copy viewable as numpy arrays
        # so the verifier can sweep propriety without a python loop
        self._eu = array("i")
        self._ev = array("i")

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside [1, {self.n}]")

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def edges(self) -> list[tuple[int, int]]:
        """Live edges as (min, max) pairs, unspecified order."""
        return list(self._edges)

    def insert_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError("self-loops are not allowed")
        if v in self.adj[u]:
            raise DuplicateEdge(f"edge {{{u},{v}}} already present")
        if len(self.adj[u]) >= self.delta_cap or len(self.adj[v]) >= self.delta_cap:
            raise DegreeCapExceeded(
                f"inserting {{{u},{v}}} would exceed degree cap {self.delta_cap}"
            )
        self.adj[u].add(v)
        self.adj[v].add(u)
        k = _key(u, v)
        self._edge_pos[k] = len(self._edges)
        self._edges.append(k)
        self._eu.append(k[0])
        self._ev.append(k[1])
        self.edge_count += 1

    def delete_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if v not in self.adj[u]:
            raise MissingEdge(f"edge {{{u},{v}}} not present")
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        k = _key(u, v)
        i = self._edge_pos.pop(k)
        last = self._edges.pop()
        self._eu.pop()
        self._ev.pop()
        if last != k:
            self._edges[i] = last
            self._eu[i] = last[0]
            self._ev[i] = last[1]
            self._edge_pos[last] = i
        self.edge_count -= 1

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.n, self.delta_cap)
        g.adj = [set(s) for s in self.adj]
        g.edge_count = self.edge_count
        g._edges = list(self._edges)
        g._edge_pos = dict(self._edge_pos)
        g._eu = array("i", self._eu)
        g._ev = array("i", self._ev)
        return g

    def assert_consistent(self) -> None:
        """Debug check: symmetry, no self-loops, cap, edge-list agreement."""
        seen = set()
        for v in range(1, self.n + 1):
            assert len(self.adj[v]) <= self.delta_cap, f"degree cap broken at {v}"
            for u in self.adj[v]:
                assert u != v, f"self-loop at {v}"
                assert v in self.adj[u], f"asymmetry {u}-{v}"
                seen.add(_key(u, v))
        assert seen == set(self._edges), "edge list out of sync"
        assert self.edge_count == len(self._edges)
