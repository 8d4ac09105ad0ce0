"""Color assignment plus every indexed view the recolorer samples from.

All views (global classes, per-clique classes, clique palettes, the
redundant-color sets) are derived from phi and the frozen partition;
they are updated in lockstep by set_color so a full rebuild always
matches the incremental state.  Redundant sets are never mutated
directly: a color enters M_D exactly when its per-clique class reaches
two holders, which is what makes floor(8*a_D) comparisons testable.
"""

from __future__ import annotations

import numpy as np

from .decomposition import Decomposition
from .graph import DynamicGraph
from .sets import SampleSet


class ColorOutOfRange(Exception):
    pass


class ColoringState:
    def __init__(self, n: int, num_colors: int, decomp: Decomposition) -> None:
        self.n = n
        self.num_colors = num_colors
        self.decomp = decomp
        self.phi: list[int | None] = [None] * (n + 1)
        self.classes: list[set[int]] = [set() for _ in range(num_colors + 1)]
        self.clique_classes: list[dict[int, set[int]]] = [
            {} for _ in decomp.cliques
        ]
        # sampleable so the fresh-coloring stage can draw uniformly from L(D)
        self.clique_palette: list[SampleSet] = [
            SampleSet(range(1, num_colors + 1)) for _ in decomp.cliques
        ]
        self.redundant: list[set[int]] = [set() for _ in decomp.cliques]
        self.matched: list[int | None] = [None] * (n + 1)
        # integer mirror of phi (0 = uncolored) for vectorized sweeps
        self.phi_np = np.zeros(n + 1, dtype=np.int32)

    # -- core mutation ------------------------------------------------------

    def set_color(self, v: int, chi: int | None) -> None:
        if chi is not None and not 1 <= chi <= self.num_colors:
            raise ColorOutOfRange(f"color {chi} outside [1, {self.num_colors}]")
        old = self.phi[v]
        if old == chi:
            return
        ci = self.decomp.part[v]
        if old is not None:
            self.classes[old].discard(v)
            if ci is not None:
                holders = self.clique_classes[ci][old]
                holders.discard(v)
                if len(holders) == 1:
                    self.redundant[ci].discard(old)
                elif not holders:
                    del self.clique_classes[ci][old]
                    self.clique_palette[ci].add(old)
        self.phi[v] = chi
        self.phi_np[v] = 0 if chi is None else chi
        if chi is not None:
            self.classes[chi].add(v)
            if ci is not None:
                holders = self.clique_classes[ci].setdefault(chi, set())
                if not holders:
                    self.clique_palette[ci].discard(chi)
                holders.add(v)
                if len(holders) == 2:
                    self.redundant[ci].add(chi)

    def match(self, u: int, v: int) -> None:
        assert self.matched[u] is None and self.matched[v] is None
        self.matched[u] = v
        self.matched[v] = u

    def unmatch(self, u: int) -> None:
        w = self.matched[u]
        if w is not None:
            self.matched[u] = None
            self.matched[w] = None

    # -- derived queries ----------------------------------------------------

    def color_of(self, v: int) -> int | None:
        return self.phi[v]

    def matching_size(self, ci: int) -> int:
        return len(self.redundant[ci])

    def clique_holders(self, ci: int, chi: int) -> set[int]:
        return self.clique_classes[ci].get(chi, set())

    def sparse_palette(self, g: DynamicGraph, v: int) -> set[int]:
        """Colors not used by any sparser neighbor of v."""
        used = {
            self.phi[u]
            for u in g.adj[v]
            if self.decomp.part[u] is None and self.phi[u] is not None
        }
        return set(range(1, self.num_colors + 1)) - used

    def accounting_lower_bound(self, g: DynamicGraph, v: int) -> int:
        """Guaranteed (possibly negative) size of L(D) intersect L(v)."""
        ci = self.decomp.part[v]
        assert ci is not None, "accounting bound applies to denser vertices"
        c = self.decomp.cliques[ci]
        uncolored = sum(1 for u in c.members if self.phi[u] is None)
        uncolored += sum(1 for u in self.decomp.ext[v] if self.phi[u] is None)
        return (
            g.delta_cap
            - g.degree(v)
            + self.matching_size(ci)
            - len(self.decomp.anti[v])
            + uncolored
        )

    # -- serialization / rebuild -------------------------------------------

    def to_dict(self) -> dict:
        return {
            "phi": self.phi[1:],
            "matched": self.matched[1:],
        }

    @classmethod
    def rebuild(
        cls,
        n: int,
        num_colors: int,
        decomp: Decomposition,
        phi: list[int | None],
        matched: list[int | None],
    ) -> "ColoringState":
        """Reconstruct every view from phi alone (oracle for consistency)."""
        st = cls(n, num_colors, decomp)
        for v in range(1, n + 1):
            if phi[v] is not None:
                st.set_color(v, phi[v])
        st.matched = list(matched)
        return st
