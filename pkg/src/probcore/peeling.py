"""Core decomposition by peeling.

core_compute runs the bucket-array peeling kernel over a chosen alive set
with given initial degree estimates. run_pa peels the whole graph (the
baseline), run_mpa screens first and peels the survivors; both initialize
the peeling with the normal-approximation bounds from the screening pass.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .degrees import _check_eta
from .graph import ProbabilisticGraph, row_sums
from .screening import ScreeningReport, safe_floors, stage1_filter, stage2_filter


@dataclass
class Decomposition:
    eta: float
    mode: str  # "pa" or "mpa"
    tau1: float
    tau2: int
    core: dict[str, int]  # vertex token -> core number, survivors only
    k_max: int
    timings: dict[str, float] = field(default_factory=dict)  # seconds per phase
    core_by_id: np.ndarray | None = None  # int64 per internal id, -1 if screened out


def _alive_degrees(g: ProbabilisticGraph, alive: np.ndarray) -> np.ndarray:
    entry = alive[g.indices].astype(np.float64)
    return np.rint(row_sums(g.indptr, entry)).astype(np.int64)


def core_compute(
    g: ProbabilisticGraph,
    eta: float,
    alive: np.ndarray,
    initial_bounds: np.ndarray,
    *,
    mode: str = "pa",
    tau1: float = 0.0,
    tau2: int = 0,
    timings: dict[str, float] | None = None,
) -> Decomposition:
    """Peel the alive vertices and return their core numbers.

    initial_bounds must lie within [0, alive-restricted degree] for every
    alive vertex; any such values produce the same core map, they only
    steer how much exact recomputation the peeling needs.

    The scan trusts initial values only from below (a vertex seeded above
    its true eta-degree could sit out the early rounds and be finalized
    too high), so the given bounds are capped by a certified lower bound
    before seeding the buckets. That cap is what makes the output
    independent of the bounds handed in.
    """
    eta = _check_eta(eta)
    alive = np.asarray(alive, dtype=bool)
    if alive.shape != (g.n,):
        raise ValueError("alive mask has wrong size")
    bounds = np.asarray(initial_bounds, dtype=np.int64)
    if bounds.shape != (g.n,):
        raise ValueError("initial bounds have wrong size")
    if alive.any():
        deg_alive = _alive_degrees(g, alive)
        ab = bounds[alive]
        if ab.min() < 0 or np.any(ab > deg_alive[alive]):
            raise ValueError("initial bound outside [0, alive-restricted degree]")
        bounds = np.minimum(bounds, safe_floors(g, alive, eta))
    t0 = time.perf_counter()
    cores = _backend.impl().peel(
        g.indptr, g.indices, g.probs, alive.astype(np.uint8), bounds, eta
    )
    dt = time.perf_counter() - t0
    out_timings = dict(timings or {})
    out_timings["peel"] = dt
    core_map = {g.vertex_tokens[v]: int(cores[v]) for v in np.flatnonzero(alive)}
    k_max = int(cores.max()) if core_map else 0
    return Decomposition(
        eta=eta,
        mode=mode,
        tau1=float(tau1),
        tau2=int(tau2),
        core=core_map,
        k_max=k_max,
        timings=out_timings,
        core_by_id=cores,
    )


def run_mpa(
    g: ProbabilisticGraph, eta: float, tau1: float, tau2: int
) -> tuple[Decomposition, ScreeningReport]:
    """Screen, then peel the survivors with the screening bounds."""
    eta = _check_eta(eta)
    t0 = time.perf_counter()
    s1 = stage1_filter(g, tau1)
    t1 = time.perf_counter()
    survivors, bounds = stage2_filter(g, s1, eta, tau2)
    t2 = time.perf_counter()
    report = ScreeningReport(
        eta=eta,
        tau1=float(tau1),
        tau2=int(tau2),
        removed_stage1=~s1,
        removed_stage2=s1 & ~survivors,
        survivors=survivors,
        initial_bounds=bounds,
    )
    # stage-2 bounds were computed against stage-1 survivors; cap them by
    # the degree restricted to the final alive set before peeling
    start = np.where(survivors, bounds, 0)
    start = np.minimum(start, _alive_degrees(g, survivors))
    timings = {"screen1": t1 - t0, "screen2": t2 - t1}
    dec = core_compute(
        g, eta, survivors, start, mode="mpa", tau1=tau1, tau2=tau2, timings=timings
    )
    return dec, report


def run_pa(g: ProbabilisticGraph, eta: float) -> Decomposition:
    """Baseline: peel every vertex (screening thresholds zero)."""
    dec, _ = run_mpa(g, eta, 0.0, 0)
    dec.mode = "pa"
    return dec


def write_decomposition(dec: Decomposition, out):
    """Header comments, then ``vertex TAB core`` rows sorted by token."""
    out.write(f"# eta\t{dec.eta:.6g}\n")
    out.write(f"# mode\t{dec.mode}\n")
    out.write(f"# tau1\t{dec.tau1:.6g}\n")
    out.write(f"# tau2\t{dec.tau2}\n")
    out.write(f"# k_max\t{dec.k_max}\n")
    for phase in ("screen1", "screen2", "peel"):
        if phase in dec.timings:
            out.write(f"# timing_{phase}_ms\t{dec.timings[phase] * 1e3:.6g}\n")
    for token in sorted(dec.core):
        out.write(f"{token}\t{dec.core[token]}\n")


def read_decomposition(source) -> Decomposition:
    """Parse the write_decomposition format back into a Decomposition."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source
    meta: dict[str, str] = {}
    core: dict[str, int] = {}
    timings: dict[str, float] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split("\t")
            if len(parts) == 2:
                meta[parts[0]] = parts[1]
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {line_no}: expected 'vertex<TAB>core'")
        try:
            core[parts[0]] = int(parts[1])
        except ValueError:
            raise ValueError(f"line {line_no}: unreadable core number {parts[1]!r}") from None
    for key, val in meta.items():
        if key.startswith("timing_") and key.endswith("_ms"):
            timings[key[len("timing_") : -len("_ms")]] = float(val) / 1e3
    k_max = int(meta.get("k_max", max(core.values(), default=0)))
    return Decomposition(
        eta=float(meta.get("eta", "nan")),
        mode=meta.get("mode", "pa"),
        tau1=float(meta.get("tau1", 0.0)),
        tau2=int(meta.get("tau2", 0)),
        core=core,
        k_max=k_max,
        timings=timings,
    )
