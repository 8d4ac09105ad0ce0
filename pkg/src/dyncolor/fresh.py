"""Phase-boundary recoloring of the whole graph.

Sparser vertices are seeded by a one-shot random coloring (creating
palette slack), then finished in a uniformly random order through the
engine's sparse recolorer.  Cliques are handled in index order: build
the colorful matching, color outliers, then inliers, all by sampling
from the clique palette.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from .config import Config
from .decomposition import Decomposition
from .graph import DynamicGraph
from .report import Violation
from .state import ColoringState

if TYPE_CHECKING:
    from .engine import Engine


class FreshFailed(Exception):
    pass


@dataclass
class FreshReport:
    trial_count: int
    sparse_trials: int
    one_shot_colored: int
    matching_sizes: list[int]
    min_sparse_slack: int | None = None
    max_sparse_class: int | None = None

    def to_dict(self) -> dict:
        return {
            "trial_count": self.trial_count,
            "sparse_trials": self.sparse_trials,
            "one_shot_colored": self.one_shot_colored,
            "matching_sizes": self.matching_sizes,
            "min_sparse_slack": self.min_sparse_slack,
            "max_sparse_class": self.max_sparse_class,
        }


def fresh_coloring(eng: "Engine") -> FreshReport:
    """Total recoloring of the current graph over the frozen partition.

    The caller provides a blank ColoringState; raises PhaseRestart or
    FreshFailed if any sub-procedure exhausts its retry budget.
    """
    st = eng.state
    trials_at_start = eng.meter.color_trials

    colored = one_shot_coloring(eng)

    sparse = [v for v in range(1, eng.g.n + 1) if eng.decomp.part[v] is None]
    uncolored = [v for v in sparse if st.phi[v] is None]
    eng.rng.shuffle(uncolored)
    sparse_before = eng.meter.color_trials
    for v in uncolored:
        eng.recolor_sparse(v)
    sparse_trials = eng.meter.color_trials - sparse_before

    for c in eng.decomp.cliques:
        target = c.matching_target()
        while st.matching_size(c.index) < target:
            eng.add_anti_edge_matching(c.index)
        outliers = sorted(c.members - c.inliers)
        for v in outliers:
            if st.phi[v] is None:
                color_dense(eng, v)
        for v in sorted(c.inliers):
            if st.phi[v] is None:
                color_dense(eng, v)

    report = FreshReport(
        trial_count=eng.meter.color_trials - trials_at_start,
        sparse_trials=sparse_trials,
        one_shot_colored=colored,
        matching_sizes=[st.matching_size(c.index) for c in eng.decomp.cliques],
    )
    if eng.verify != "off":
        report.min_sparse_slack = min(
            (len(st.sparse_palette(eng.g, v)) for v in sparse), default=None
        )
        report.max_sparse_class = max(
            (
                sum(1 for v in st.classes[chi] if eng.decomp.part[v] is None)
                for chi in range(1, st.num_colors + 1)
            ),
            default=0,
        )
    return report


def one_shot_coloring(eng: "Engine") -> int:
    """Each sparser vertex tries one random color with probability 1/8;
    adjacent same-colored pairs are then both uncolored."""
    st = eng.state
    g = eng.g
    for v in range(1, g.n + 1):
        if eng.decomp.part[v] is not None:
            continue
        if eng.rng.random() < 0.125:
            eng.meter.color_trials += 1
            st.set_color(v, eng.rng.randint(1, st.num_colors))
    conflicted: set[int] = set()
    for chi in range(1, st.num_colors + 1):
        members = sorted(st.classes[chi])
        for i, u in enumerate(members):
            adj_u = g.adj[u]
            for v in members[i + 1 :]:
                eng.meter.class_scans += 1
                if v in adj_u:
                    conflicted.add(u)
                    conflicted.add(v)
    for v in sorted(conflicted):
        st.set_color(v, None)
    return sum(len(st.classes[chi]) for chi in range(1, st.num_colors + 1))


def color_dense(eng: "Engine", v: int) -> None:
    """Sample from the clique palette until a color unused by N(v) appears."""
    st = eng.state
    ci = eng.decomp.part[v]
    palette = st.clique_palette[ci]
    log_n = max(1, math.ceil(math.log2(max(2, eng.g.n))))
    adj_v = eng.g.adj[v]
    cap = eng.cfg.retry_scale * max(1, len(palette)) * log_n
    for _ in range(cap):
        if not len(palette):
            raise FreshFailed(f"clique palette exhausted in clique {ci}")
        eng.meter.color_trials += 1
        chi = palette.sample(eng.rng)
        ok = True
        for u in sorted(st.classes[chi]):
            eng.meter.class_scans += 1
            if u in adj_v:
                ok = False
                break
        if ok:
            eng._color(v, chi)
            return
    raise FreshFailed(f"retry cap in clique {ci} while coloring {v}")


def verify_fresh_properties(
    g: DynamicGraph, decomp: Decomposition, state: ColoringState, cfg: Config
) -> list[Violation]:
    """Slack, balance and matching checks on a completed fresh coloring."""
    out: list[Violation] = []
    slack_floor = cfg.slack_coeff * cfg.gamma * cfg.zeta
    for v in range(1, g.n + 1):
        if decomp.part[v] is None:
            slack = len(state.sparse_palette(g, v))
            if slack < slack_floor:
                out.append(
                    Violation("sparse-slack", f"v={v}", f"{slack} < {slack_floor}")
                )
    class_cap = cfg.c_bal * (
        Fraction(g.n, cfg.zeta) + Fraction(math.ceil(math.log2(max(2, g.n))))
    )
    for chi in range(1, state.num_colors + 1):
        size = sum(1 for v in state.classes[chi] if decomp.part[v] is None)
        if size > class_cap:
            out.append(Violation("sparse-balance", f"chi={chi}", f"{size} > {class_cap}"))
    for c in decomp.cliques:
        for chi, holders in state.clique_classes[c.index].items():
            if len(holders) > 2:
                out.append(
                    Violation(
                        "dense-balance",
                        f"clique={c.index},chi={chi}",
                        f"{len(holders)} holders",
                    )
                )
        target = c.matching_target()
        if state.matching_size(c.index) < target:
            out.append(
                Violation(
                    "matching",
                    f"clique={c.index}",
                    f"|M_D|={state.matching_size(c.index)} < {target}",
                )
            )
    return out
