"""Independent brute-force oracles and invariant sweeps.

Everything here recomputes from the graph and phi alone, never trusting
the engine's incremental views; the sweeps are what the acceptance runs
execute after every update (or at phase boundaries for large n).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .config import Config
from .decomposition import Decomposition, sparsity
from .graph import DynamicGraph
from .report import Violation
from .state import ColoringState


def brute_force_sparsity(g: DynamicGraph, v: int) -> Fraction:
    """Triple-loop edge count inside G[N(v)]; oracle twin of sparsity()."""
    nbrs = sorted(g.adj[v])
    m = 0
    for i, u in enumerate(nbrs):
        for w in nbrs[i + 1 :]:
            if w in g.adj[u]:
                m += 1
    d = g.delta_cap
    return Fraction(d * (d - 1) // 2 - m, d)


def brute_palette(g: DynamicGraph, state: ColoringState, v: int) -> set[int]:
    """L(v): colors unused by any neighbor."""
    used = {state.phi[u] for u in g.adj[v] if state.phi[u] is not None}
    return set(range(1, state.num_colors + 1)) - used


def brute_clique_palette(state: ColoringState, members: set[int]) -> set[int]:
    """L(D): colors unused inside the clique."""
    used = {state.phi[u] for u in members if state.phi[u] is not None}
    return set(range(1, state.num_colors + 1)) - used


def brute_sparse_palette(
    g: DynamicGraph, decomp: Decomposition, state: ColoringState, v: int
) -> set[int]:
    used = {
        state.phi[u]
        for u in g.adj[v]
        if decomp.part[u] is None and state.phi[u] is not None
    }
    return set(range(1, state.num_colors + 1)) - used


# ---------------------------------------------------------------------------
# sweeps


def check_proper_fast(g: DynamicGraph, state: ColoringState) -> list[Violation]:
    """Vectorized propriety sweep; falls back to the slow scan only to
    describe a violation once one is detected."""
    phi = state.phi_np
    if g.n and (phi[1:] == 0).any():
        return check_proper(g, state)
    if g.edge_count:
        eu = np.frombuffer(g._eu, dtype=np.int32)
        ev = np.frombuffer(g._ev, dtype=np.int32)
        if (phi[eu] == phi[ev]).any():
            return check_proper(g, state)
    return []


def check_proper(g: DynamicGraph, state: ColoringState) -> list[Violation]:
    """Every edge bi-colored with distinct colors; every vertex colored."""
    out: list[Violation] = []
    phi = state.phi
    for v in range(1, g.n + 1):
        if phi[v] is None:
            out.append(Violation("propriety", f"v={v}", "uncolored vertex"))
    for u, v in g.edges():
        if phi[u] is not None and phi[u] == phi[v]:
            out.append(
                Violation("propriety", f"edge={{{u},{v}}}", f"both colored {phi[u]}")
            )
    return out


def check_view_consistency(
    g: DynamicGraph, decomp: Decomposition, state: ColoringState
) -> list[Violation]:
    """Incremental views must equal a from-scratch rebuild over phi."""
    out: list[Violation] = []
    rebuilt = ColoringState.rebuild(
        g.n, state.num_colors, decomp, state.phi, state.matched
    )
    for chi in range(1, state.num_colors + 1):
        if state.classes[chi] != rebuilt.classes[chi]:
            out.append(Violation("view-consistency", f"chi={chi}", "class drift"))
    for c in decomp.cliques:
        ci = c.index
        if state.clique_classes[ci] != rebuilt.clique_classes[ci]:
            out.append(Violation("view-consistency", f"clique={ci}", "clique class drift"))
        if set(state.clique_palette[ci]) != set(rebuilt.clique_palette[ci]):
            out.append(Violation("view-consistency", f"clique={ci}", "palette drift"))
        if state.redundant[ci] != rebuilt.redundant[ci]:
            out.append(Violation("view-consistency", f"clique={ci}", "redundant drift"))
    return out


def check_invariants(
    g: DynamicGraph, decomp: Decomposition, state: ColoringState, cfg: Config
) -> list[Violation]:
    """Dense Balance, Matching, matched-array sanity, accounting bound."""
    out: list[Violation] = []
    for c in decomp.cliques:
        ci = c.index
        for chi, holders in state.clique_classes[ci].items():
            if len(holders) > 2:
                out.append(
                    Violation(
                        "dense-balance",
                        f"clique={ci},chi={chi}",
                        f"{len(holders)} holders",
                    )
                )
        target = c.matching_target()
        if state.matching_size(ci) < target:
            out.append(
                Violation(
                    "matching",
                    f"clique={ci}",
                    f"|M_D|={state.matching_size(ci)} < floor(8a_D)={target}",
                )
            )
        # redundant set must be exactly the multiplicity->=2 colors
        truth = {chi for chi, h in state.clique_classes[ci].items() if len(h) >= 2}
        if state.redundant[ci] != truth:
            out.append(Violation("view-consistency", f"clique={ci}", "M_D drift"))

    for u in range(1, g.n + 1):
        w = state.matched[u]
        if w is None:
            continue
        if state.matched[w] != u:
            out.append(Violation("matched-symmetry", f"u={u}", f"partner {w} disagrees"))
            continue
        if u < w:
            if decomp.part[u] is None or decomp.part[u] != decomp.part[w]:
                out.append(
                    Violation("matched-symmetry", f"pair=({u},{w})", "not co-clique")
                )
            if g.has_edge(u, w):
                out.append(Violation("matched-symmetry", f"pair=({u},{w})", "adjacent"))
            if (
                state.phi[u] is not None
                and state.phi[w] is not None
                and state.phi[u] != state.phi[w]
            ):
                out.append(
                    Violation("matched-symmetry", f"pair=({u},{w})", "colors differ")
                )

    for c in decomp.cliques:
        palette = brute_clique_palette(state, c.members)
        for v in sorted(c.members):
            lhs = len(palette & brute_palette(g, state, v))
            bound = state.accounting_lower_bound(g, v)
            if lhs < bound:
                out.append(
                    Violation("accounting", f"v={v}", f"|L(D) cap L(v)|={lhs} < {bound}")
                )
    return out


def check_balance(
    state: ColoringState,
    decomp: Decomposition,
    cfg: Config,
    phase_elapsed: int,
) -> list[Violation]:
    """Mid-phase color-class size bound for the sparse part, plus the
    two-per-clique cap."""
    out: list[Violation] = []
    n = state.n
    cap = cfg.c_bal * (
        Fraction(n, cfg.zeta)
        + Fraction(phase_elapsed, cfg.zeta)
        + Fraction(math.ceil(math.log2(max(2, n))))
    )
    for chi in range(1, state.num_colors + 1):
        sparse_size = sum(1 for v in state.classes[chi] if decomp.part[v] is None)
        if sparse_size > cap:
            out.append(Violation("balance", f"chi={chi}", f"{sparse_size} > {cap}"))
        for c in decomp.cliques:
            if len(state.clique_classes[c.index].get(chi, ())) > 2:
                out.append(
                    Violation("balance", f"chi={chi},clique={c.index}", "over 2 holders")
                )
    return out


def check_all(
    g: DynamicGraph,
    decomp: Decomposition,
    state: ColoringState,
    cfg: Config,
) -> list[Violation]:
    return (
        check_proper_fast(g, state)
        + check_invariants(g, decomp, state, cfg)
        + check_view_consistency(g, decomp, state)
    )
