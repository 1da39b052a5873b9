"""Cohesion metrics over probabilistic graphs.

Probabilistic density is the expected number of present edges divided by
the number of vertex pairs. The probabilistic clustering coefficient is
three times the expected triangle count over the expected wedge count,
each wedge counted once at its center vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import ProbabilisticGraph, connected_components, induced_subgraph, row_sums
from .peeling import Decomposition


def probabilistic_density(g: ProbabilisticGraph) -> float:
    if g.n < 2:
        raise ValueError("density needs at least two vertices")
    total = float(g.probs.sum()) / 2.0
    return total / (g.n * (g.n - 1) / 2.0)


def _wedge_mass(g: ProbabilisticGraph) -> float:
    psum = row_sums(g.indptr, g.probs)
    p2sum = row_sums(g.indptr, g.probs * g.probs)
    return float(np.sum(psum * psum - p2sum)) / 2.0


def _triangle_mass(g: ProbabilisticGraph) -> float:
    total = 0.0
    indptr, indices, probs = g.indptr, g.indices, g.probs
    for u in range(g.n):
        row_u = indices[indptr[u] : indptr[u + 1]]
        p_u = probs[indptr[u] : indptr[u + 1]]
        for k in range(row_u.shape[0]):
            v = int(row_u[k])
            if v <= u:
                continue
            row_v = indices[indptr[v] : indptr[v + 1]]
            p_v = probs[indptr[v] : indptr[v + 1]]
            # common neighbours beyond v close a triangle counted here once
            common, iu, iv = np.intersect1d(row_u, row_v, assume_unique=True, return_indices=True)
            sel = common > v
            if np.any(sel):
                total += float(p_u[k]) * float(np.sum(p_u[iu[sel]] * p_v[iv[sel]]))
    return total


def probabilistic_clustering_coefficient(g: ProbabilisticGraph) -> float:
    wedges = _wedge_mass(g)
    if wedges <= 0.0:
        raise ValueError("graph has no wedge")
    return 3.0 * _triangle_mass(g) / wedges


@dataclass
class ComponentCohesion:
    tokens: tuple[str, ...]
    size: int
    pd: float
    pcc: float
    flag: str  # "ok", "wedge_free" or "singleton"


@dataclass
class CohesionReport:
    k_max: int
    components: list[ComponentCohesion]
    pd_avg: float
    pcc_avg: float


def max_core_report(g: ProbabilisticGraph, dec: Decomposition) -> CohesionReport:
    """Per-component density and clustering of the maximum core.

    Components are reported in order of their smallest member; averages
    are unweighted. A wedge-free component reports clustering 0 by
    convention and is flagged; a singleton component (possible only when
    k_max is 0) additionally reports density 0.
    """
    if not dec.core:
        raise ValueError("empty decomposition")
    member_ids = [g.id_of(t) for t, k in dec.core.items() if k == dec.k_max]
    mask = np.zeros(g.n, dtype=bool)
    mask[member_ids] = True
    sub = induced_subgraph(g, mask)
    comps: list[ComponentCohesion] = []
    for comp_mask in connected_components(sub):
        csub = induced_subgraph(sub, comp_mask)
        if csub.n < 2:
            comps.append(
                ComponentCohesion(tuple(csub.vertex_tokens), csub.n, 0.0, 0.0, "singleton")
            )
            continue
        pd = probabilistic_density(csub)
        if _wedge_mass(csub) <= 0.0:
            comps.append(ComponentCohesion(tuple(csub.vertex_tokens), csub.n, pd, 0.0, "wedge_free"))
        else:
            pcc = probabilistic_clustering_coefficient(csub)
            comps.append(ComponentCohesion(tuple(csub.vertex_tokens), csub.n, pd, pcc, "ok"))
    pd_avg = float(np.mean([c.pd for c in comps]))
    pcc_avg = float(np.mean([c.pcc for c in comps]))
    return CohesionReport(dec.k_max, comps, pd_avg, pcc_avg)


def write_cohesion_report(report: CohesionReport, out):
    """``key TAB value`` lines: k_max, per-component stats, then averages."""
    out.write(f"k_max\t{report.k_max}\n")
    out.write(f"component_count\t{len(report.components)}\n")
    for i, c in enumerate(report.components, start=1):
        out.write(f"component_{i}_size\t{c.size}\n")
        out.write(f"component_{i}_pd\t{c.pd:.6g}\n")
        out.write(f"component_{i}_pcc\t{c.pcc:.6g}\n")
        out.write(f"component_{i}_flag\t{c.flag}\n")
    out.write(f"pd_avg\t{report.pd_avg:.6g}\n")
    out.write(f"pcc_avg\t{report.pcc_avg:.6g}\n")
