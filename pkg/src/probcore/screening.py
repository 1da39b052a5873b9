"""Two-stage vertex screening.

Stage 1 keeps vertices whose incident probability mass is substantial in
both directions: sum of p and sum of (1 - p) at least tau1 (the classical
normality rule of thumb, which also guarantees the normal approximation
used next is trustworthy). Stage 2 computes a normal-approximation lower
bound of each survivor's eta-degree, restricted to edges between stage-1
survivors, and keeps vertices whose bound reaches tau2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .degrees import _check_eta, normal_quantile
from .graph import ProbabilisticGraph, row_sums


@dataclass
class ScreeningReport:
    eta: float
    tau1: float
    tau2: int
    removed_stage1: np.ndarray  # bool mask
    removed_stage2: np.ndarray  # bool mask
    survivors: np.ndarray  # bool mask
    initial_bounds: np.ndarray  # int64; -1 where stage 1 removed the vertex


def stage1_filter(g: ProbabilisticGraph, tau1: float) -> np.ndarray:
    """Mask of vertices with sum(p) >= tau1 and sum(1 - p) >= tau1."""
    if tau1 < 0:
        raise ValueError("tau1 must be nonnegative")
    psum = row_sums(g.indptr, g.probs)
    qsum = row_sums(g.indptr, 1.0 - g.probs)
    return (psum >= tau1) & (qsum >= tau1)


def clt_bounds(g: ProbabilisticGraph, alive: np.ndarray, eta: float) -> np.ndarray:
    """Per-vertex eta-degree lower bound over alive-to-alive edges.

    Matches eta_degree_clt_bound applied to each vertex's alive-restricted
    incident probabilities, vectorized over the whole graph.
    """
    eta = _check_eta(eta)
    alive = np.asarray(alive, dtype=bool)
    entry = alive[g.indices]
    mu = row_sums(g.indptr, np.where(entry, g.probs, 0.0))
    var = row_sums(g.indptr, np.where(entry, g.probs * (1.0 - g.probs), 0.0))
    dv = np.rint(row_sums(g.indptr, entry.astype(np.float64))).astype(np.int64)
    if eta == 0.0:
        raw = dv.astype(np.float64)
    elif eta == 1.0:
        raw = np.where(var == 0.0, dv, 0).astype(np.float64)
    else:
        z = normal_quantile(1.0 - eta)
        raw = np.floor(mu + np.sqrt(var) * z)
        raw = np.where(var == 0.0, dv, np.clip(raw, 0, dv))
    return raw.astype(np.int64)


def safe_floors(g: ProbabilisticGraph, alive: np.ndarray, eta: float) -> np.ndarray:
    """Certified per-vertex eta-degree lower bounds over alive-to-alive edges.

    Vectorized eta_degree_safe_floor: unlike the normal-approximation
    bound this never exceeds the true eta-degree, which is what the
    peeling scan requires of its initial values.
    """
    eta = _check_eta(eta)
    alive = np.asarray(alive, dtype=bool)
    entry = alive[g.indices]
    mu = row_sums(g.indptr, np.where(entry, g.probs, 0.0))
    var = row_sums(g.indptr, np.where(entry, g.probs * (1.0 - g.probs), 0.0))
    dv = np.rint(row_sums(g.indptr, entry.astype(np.float64))).astype(np.int64)
    if eta == 0.0:
        return dv.copy()
    if eta == 1.0:
        return np.where(var == 0.0, dv, 0)
    if eta <= 1.0 - 1e-6:
        certain = np.rint(
            row_sums(g.indptr, (entry & (g.probs == 1.0)).astype(np.float64))
        ).astype(np.int64)
    else:
        certain = np.zeros(g.n, dtype=np.int64)
    beta = -math.log1p(-eta)
    t = beta / 3.0 + np.sqrt(beta * beta / 9.0 + 2.0 * beta * var)
    level = np.floor(mu + 1.0 - t - 1e-9).astype(np.int64)
    floors = np.minimum(np.maximum(np.maximum(level, certain), 0), dv)
    return np.where(var == 0.0, dv, floors)


def stage2_filter(
    g: ProbabilisticGraph, stage1_mask: np.ndarray, eta: float, tau2: int
) -> tuple[np.ndarray, np.ndarray]:
    """Survivor mask and the bounds computed for every stage-1 survivor.

    Bounds count only edges whose other endpoint also survived stage 1;
    they double as the peeling initialization. Vertices removed by stage 1
    get bound -1 (not computed).
    """
    if tau2 < 0:
        raise ValueError("tau2 must be nonnegative")
    stage1_mask = np.asarray(stage1_mask, dtype=bool)
    if stage1_mask.shape != (g.n,):
        raise ValueError("stage-1 mask has wrong size")
    raw = clt_bounds(g, stage1_mask, eta)
    bounds = np.where(stage1_mask, raw, -1)
    survivors = stage1_mask & (bounds >= tau2)
    return survivors, bounds


def run_screening(g: ProbabilisticGraph, eta: float, tau1: float, tau2: int) -> ScreeningReport:
    s1 = stage1_filter(g, tau1)
    survivors, bounds = stage2_filter(g, s1, eta, tau2)
    return ScreeningReport(
        eta=float(eta),
        tau1=float(tau1),
        tau2=int(tau2),
        removed_stage1=~s1,
        removed_stage2=s1 & ~survivors,
        survivors=survivors,
        initial_bounds=bounds,
    )


def write_screening_report(report: ScreeningReport, g: ProbabilisticGraph, out):
    """Rows of ``vertex TAB status TAB bound`` sorted by token.

    Status is kept, removed_stage1 or removed_stage2; the bound column is
    a dash for vertices removed before any bound was computed.
    """
    out.write(f"# eta\t{report.eta:.6g}\n")
    out.write(f"# tau1\t{report.tau1:.6g}\n")
    out.write(f"# tau2\t{report.tau2}\n")
    out.write(f"# kept\t{int(report.survivors.sum())}\n")
    out.write(f"# removed_stage1\t{int(report.removed_stage1.sum())}\n")
    out.write(f"# removed_stage2\t{int(report.removed_stage2.sum())}\n")
    for token in sorted(g.vertex_tokens):
        v = g.id_of(token)
        if report.removed_stage1[v]:
            out.write(f"{token}\tremoved_stage1\t-\n")
        elif report.removed_stage2[v]:
            out.write(f"{token}\tremoved_stage2\t{int(report.initial_bounds[v])}\n")
        else:
            out.write(f"{token}\tkept\t{int(report.initial_bounds[v])}\n")
