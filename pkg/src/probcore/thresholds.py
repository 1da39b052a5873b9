"""Screening threshold suggestion.

Both stages follow the same recipe: if the bulk of the per-vertex
statistic is already small (75th or 80th percentile under the default),
use the default threshold; otherwise look for an inflection in the
log-scaled sorted values with a two-piece continuous regression and use
the sample value at the detected breakpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import ProbabilisticGraph, row_sums
from .screening import clt_bounds

# gates for the segmented fit: minimum relative SSE improvement to accept a
# breakpoint, relative tie window resolved toward the largest rank, and a
# floor under which the single line already explains the data
MIN_RELATIVE_IMPROVEMENT = 0.01
TIE_WINDOW = 1e-3
FLAT_SSE_FLOOR = 1e-10

STAGE1_DEFAULT = 5.0
STAGE2_DEFAULT = 10


def percentile(values, q: float) -> float:
    """Nearest-rank percentile: the ceil(q*n)-th smallest value."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("percentile of empty data")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be inside (0, 1), got {q}")
    # snap near-integer products so q*n landing on an exact rank stays there
    rank = math.ceil(q * v.size - 1e-9)
    rank = min(max(rank, 1), v.size)
    return float(np.sort(v)[rank - 1])


@dataclass
class BreakpointFit:
    breakpoint_rank: int  # 1-based rank in the sorted values
    threshold_value: float  # sample value at that rank
    sse_single: float
    sse_segmented: float
    accepted: bool


def segmented_breakpoint(values) -> BreakpointFit:
    """Two-piece continuous fit of log(value) against rank.

    Scans every breakpoint rank 2..n-2, keeps the SSE-optimal one (ties
    within TIE_WINDOW resolved toward the largest rank) and accepts it only
    when the segmented fit improves on a single line by at least
    MIN_RELATIVE_IMPROVEMENT.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    if n < 10:
        raise ValueError(f"need at least 10 values, got {n}")
    if np.any(v <= 0.0):
        raise ValueError("values must be positive")
    s = np.sort(v)
    y = np.log(s)
    x = np.arange(1, n + 1, dtype=np.float64)
    xs = x / n  # scaled ranks keep the normal equations well conditioned

    ty = float(y.sum())
    tyy = float((y * y).sum())
    tx = float(xs.sum())
    tx2 = float((xs * xs).sum())
    txy = float((xs * y).sum())

    # single line first
    det = n * tx2 - tx * tx
    b1 = (n * txy - tx * ty) / det
    a1 = (ty - b1 * tx) / n
    sse_single = tyy - (a1 * ty + b1 * txy)

    # suffix sums over ranks j > r for every candidate r
    r = np.arange(2, n - 1, dtype=np.float64)  # ranks 2..n-2
    cx = np.cumsum(xs)
    cx2 = np.cumsum(xs * xs)
    cy = np.cumsum(y)
    cxy = np.cumsum(xs * y)
    ri = np.arange(1, n - 2)  # prefix index for rank r
    s1 = n - np.arange(2, n - 1, dtype=np.float64)
    sx = cx[-1] - cx[ri]
    sx2 = cx2[-1] - cx2[ri]
    sy = cy[-1] - cy[ri]
    sxy = cxy[-1] - cxy[ri]
    rs = r / n
    sramp = sx - rs * s1
    sramp2 = sx2 - 2.0 * rs * sx + rs * rs * s1
    sxramp = sx2 - rs * sx
    syramp = sxy - rs * sy

    k = r.shape[0]
    xtx = np.empty((k, 3, 3), dtype=np.float64)
    xtx[:, 0, 0] = n
    xtx[:, 0, 1] = xtx[:, 1, 0] = tx
    xtx[:, 0, 2] = xtx[:, 2, 0] = sramp
    xtx[:, 1, 1] = tx2
    xtx[:, 1, 2] = xtx[:, 2, 1] = sxramp
    xtx[:, 2, 2] = sramp2
    xty = np.stack([np.full(k, ty), np.full(k, txy), syramp], axis=1)
    # trailing axis keeps solve batched across every numpy version
    beta = np.linalg.solve(xtx, xty[:, :, np.newaxis])[:, :, 0]
    sse = tyy - np.einsum("ij,ij->i", beta, xty)

    best = float(sse.min())
    # additive dust term keeps the window nonempty when the best SSE is
    # zero or negative from rounding
    cutoff = best + TIE_WINDOW * abs(best) + 1e-15 * max(tyy, 1.0)
    window = np.flatnonzero(sse <= cutoff)
    pick = int(window[-1])
    rank = pick + 2
    sse_seg = float(sse[pick])

    floor = FLAT_SSE_FLOOR * max(tyy, 1.0)
    accepted = sse_single > floor and (sse_single - sse_seg) >= MIN_RELATIVE_IMPROVEMENT * sse_single
    return BreakpointFit(
        breakpoint_rank=rank,
        threshold_value=float(s[rank - 1]),
        sse_single=float(sse_single),
        sse_segmented=sse_seg,
        accepted=bool(accepted),
    )


def suggest_stage1(g: ProbabilisticGraph) -> tuple[float, dict]:
    """Stage-1 threshold from the distribution of per-vertex sum(p).

    Returns the suggestion and a diagnostics dict.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    sums = row_sums(g.indptr, g.probs)
    p75 = percentile(sums, 0.75)
    diag: dict = {"percentile75": p75}
    if p75 <= STAGE1_DEFAULT:
        diag["rule"] = "default"
        return STAGE1_DEFAULT, diag
    positive = sums[sums > 0.0]
    if positive.size < 10:
        diag["rule"] = "default"
        return STAGE1_DEFAULT, diag
    fit = segmented_breakpoint(positive)
    diag.update(
        rule="breakpoint" if fit.accepted else "default",
        breakpoint_rank=fit.breakpoint_rank,
        breakpoint_value=fit.threshold_value,
        sse_single=fit.sse_single,
        sse_segmented=fit.sse_segmented,
        accepted=fit.accepted,
    )
    return (fit.threshold_value if fit.accepted else STAGE1_DEFAULT), diag


def suggest_stage2(g: ProbabilisticGraph, eta: float) -> tuple[int, dict]:
    """Stage-2 threshold from the eta-degree bounds over the full graph."""
    if g.n == 0:
        raise ValueError("empty graph")
    bounds = clt_bounds(g, np.ones(g.n, dtype=bool), eta).astype(np.float64)
    p80 = percentile(bounds, 0.80)
    diag: dict = {"percentile80": p80}
    if p80 <= STAGE2_DEFAULT:
        diag["rule"] = "default"
        return STAGE2_DEFAULT, diag
    positive = bounds[bounds > 0.0]
    if positive.size < 10:
        diag["rule"] = "default"
        return STAGE2_DEFAULT, diag
    fit = segmented_breakpoint(positive)
    diag.update(
        rule="breakpoint" if fit.accepted else "default",
        breakpoint_rank=fit.breakpoint_rank,
        breakpoint_value=fit.threshold_value,
        sse_single=fit.sse_single,
        sse_segmented=fit.sse_segmented,
        accepted=fit.accepted,
    )
    return (int(math.floor(fit.threshold_value)) if fit.accepted else STAGE2_DEFAULT), diag
