"""Command-line interface.

Subcommands: decompose, metrics, bench, suggest, generate, degree.
Data goes to files or standard output, timings and progress notes go to
standard error. Output files are written to a temporary sibling and
renamed into place, so a failed run never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import os
import statistics
import sys
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from .cohesion import max_core_report, write_cohesion_report
from .degrees import degree_pmf, eta_degree_clt_bound, eta_degree_exact
from .graph import ProbabilisticGraph, generate_random, parse_edge_list, write_edge_list
from .peeling import Decomposition, read_decomposition, run_mpa, run_pa, write_decomposition
from .screening import write_screening_report
from .thresholds import suggest_stage1, suggest_stage2

PHASES = ("screen1", "screen2", "peel")


class CLIError(Exception):
    """User-facing failure: message printed to stderr, exit status 1."""


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    eta: float = 0.5
    tau1: float = 0.0
    tau2: int = 0
    mode: str = "pa"
    n: int = 0
    m: int = 0
    prob_law: str = "uniform"
    seed: int = 0
    vertex: str | None = None
    eta_grid: tuple[float, ...] = ()
    repeat: int = 1
    decompositions: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise CLIError(f"--eta must be inside [0, 1], got {self.eta}")
        if self.tau1 < 0.0:
            raise CLIError(f"--t1 must be >= 0, got {self.tau1}")
        if self.tau2 < 0:
            raise CLIError(f"--t2 must be >= 0, got {self.tau2}")
        if self.repeat < 1:
            raise CLIError(f"--repeat must be >= 1, got {self.repeat}")
        for e in self.eta_grid:
            if not 0.0 <= e <= 1.0:
                raise CLIError(f"--eta-grid values must be inside [0, 1], got {e}")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _atomic_write(path: str, write) -> None:
    """Run `write(handle)` against a temp file, then rename over `path`."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".probcore-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(path: str | None, write) -> None:
    if path is None:
        write(sys.stdout)
    else:
        _atomic_write(path, write)


def _load_graph(path: str | None) -> ProbabilisticGraph:
    if path is None:
        raise CLIError("--input is required")
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_edge_list(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc


def _print_timings(dec: Decomposition) -> None:
    total = 0.0
    for phase in PHASES:
        if phase in dec.timings:
            ms = dec.timings[phase] * 1e3
            total += ms
            print(f"{phase}_ms\t{_fmt(ms)}", file=sys.stderr)
    print(f"total_ms\t{_fmt(total)}", file=sys.stderr)


def cmd_decompose(cfg: RunConfig) -> int:
    g = _load_graph(cfg.input)
    if cfg.mode == "pa":
        dec = run_pa(g, cfg.eta)
        report = None
    else:
        dec, report = run_mpa(g, cfg.eta, cfg.tau1, cfg.tau2)
    _emit(cfg.output, lambda fh: write_decomposition(dec, fh))
    if report is not None and cfg.output is not None:
        path = cfg.output + ".screening"
        _atomic_write(path, lambda fh: write_screening_report(report, g, fh))
        print(f"screening_report\t{path}", file=sys.stderr)
    _print_timings(dec)
    return 0


def _load_decomposition(path: str) -> Decomposition:
    try:
        with open(path, encoding="utf-8") as fh:
            return read_decomposition(fh)
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc}") from exc


def _cohesion(g: ProbabilisticGraph, dec: Decomposition):
    try:
        return max_core_report(g, dec)
    except KeyError as exc:
        raise CLIError(f"decomposition vertex {exc.args[0]!r} is not in the graph") from exc
    except ValueError as exc:
        raise CLIError(str(exc)) from exc


def cmd_metrics(cfg: RunConfig) -> int:
    g = _load_graph(cfg.input)
    if not 1 <= len(cfg.decompositions) <= 2:
        raise CLIError("metrics takes one or two decomposition files")
    reports = []
    for path in cfg.decompositions:
        reports.append(_cohesion(g, _load_decomposition(path)))

    def write(fh) -> None:
        if len(reports) == 1:
            write_cohesion_report(reports[0], fh)
            return
        base, other = reports
        fh.write(f"# baseline\t{cfg.decompositions[0]}\n")
        write_cohesion_report(base, fh)
        fh.write(f"# variant\t{cfg.decompositions[1]}\n")
        write_cohesion_report(other, fh)
        for name, a, b in (("pd", base.pd_avg, other.pd_avg), ("pcc", base.pcc_avg, other.pcc_avg)):
            if a == 0.0:
                fh.write(f"{name}_change_pct\t-\n")
            else:
                fh.write(f"{name}_change_pct\t{_fmt(100.0 * (b - a) / a)}\n")

    _emit(cfg.output, write)
    return 0


def cmd_suggest(cfg: RunConfig) -> int:
    g = _load_graph(cfg.input)
    t1, diag1 = suggest_stage1(g)
    t2, diag2 = suggest_stage2(g, cfg.eta)

    def write(fh) -> None:
        fh.write(f"t1\t{_fmt(t1)}\n")
        fh.write(f"t2\t{_fmt(t2)}\n")
        for prefix, diag in (("stage1", diag1), ("stage2", diag2)):
            for key, value in diag.items():
                fh.write(f"{prefix}_{key}\t{_fmt(value)}\n")

    _emit(cfg.output, write)
    return 0


def cmd_generate(cfg: RunConfig) -> int:
    if cfg.n <= 0:
        raise CLIError("--n must be positive")
    if cfg.output is None:
        raise CLIError("--output is required")
    g = generate_random(cfg.n, cfg.m, prob_law=cfg.prob_law, seed=cfg.seed)
    comments = (
        f"n\t{cfg.n}",
        f"m\t{cfg.m}",
        f"prob_law\t{cfg.prob_law}",
        f"seed\t{cfg.seed}",
    )
    _emit(cfg.output, lambda fh: write_edge_list(g, fh, comments=comments))
    return 0


def cmd_degree(cfg: RunConfig) -> int:
    g = _load_graph(cfg.input)
    if cfg.vertex is None:
        raise CLIError("--vertex is required")
    try:
        v = g.id_of(cfg.vertex)
    except KeyError:
        raise CLIError(f"unknown vertex {cfg.vertex!r}") from None
    probs = g.incident_probs(v)
    dist = degree_pmf(probs)

    def write(fh) -> None:
        fh.write(f"vertex\t{cfg.vertex}\n")
        fh.write(f"degree\t{probs.size}\n")
        fh.write(f"prob_sum\t{_fmt(float(probs.sum()))}\n")
        fh.write(f"comp_sum\t{_fmt(float((1.0 - probs).sum()))}\n")
        fh.write(f"eta\t{_fmt(cfg.eta)}\n")
        fh.write(f"eta_degree\t{eta_degree_exact(probs, cfg.eta)}\n")
        fh.write(f"clt_bound\t{eta_degree_clt_bound(probs, cfg.eta)}\n")
        for t in range(dist.tail.size):
            fh.write(f"tail_{t}\t{_fmt(float(dist.tail[t]))}\n")

    _emit(cfg.output, write)
    return 0


def _median_timings(runs: list[Decomposition]) -> dict[str, float]:
    out = {}
    for phase in PHASES:
        values = [dec.timings[phase] for dec in runs if phase in dec.timings]
        if values:
            out[phase] = statistics.median(values)
    return out


def _max_core_cohesion(g: ProbabilisticGraph, dec: Decomposition):
    """PD/PCC averages of the max core, or None when nothing survived."""
    if not dec.core:
        return None
    report = max_core_report(g, dec)
    return report.pd_avg, report.pcc_avg


def cmd_bench(cfg: RunConfig) -> int:
    if cfg.input is not None:
        g = _load_graph(cfg.input)
    else:
        if cfg.n <= 0:
            raise CLIError("bench needs --input or generator parameters (--n, --m)")
        t0 = time.perf_counter()
        g = generate_random(cfg.n, cfg.m, prob_law=cfg.prob_law, seed=cfg.seed)
        print(f"generate_ms\t{_fmt((time.perf_counter() - t0) * 1e3)}", file=sys.stderr)
    print(f"graph\tn={g.n} m={g.m}", file=sys.stderr)

    grid = cfg.eta_grid or (0.1, 0.3, 0.5, 0.7, 0.9)
    rows = []
    for eta in grid:
        pa_runs = [run_pa(g, eta) for _ in range(cfg.repeat)]
        mpa_runs = [run_mpa(g, eta, cfg.tau1, cfg.tau2)[0] for _ in range(cfg.repeat)]
        pa, mpa = pa_runs[0], mpa_runs[0]
        pa_cohesion = _max_core_cohesion(g, pa)
        mpa_cohesion = _max_core_cohesion(g, mpa)
        for mode, dec, runs, cohesion in (
            ("pa", pa, pa_runs, pa_cohesion),
            ("mpa", mpa, mpa_runs, mpa_cohesion),
        ):
            timings = _median_timings(runs)
            ms = {phase: timings.get(phase, 0.0) * 1e3 for phase in PHASES}
            row = {
                "eta": eta,
                "mode": mode,
                "t1": dec.tau1,
                "t2": dec.tau2,
                "survivors": len(dec.core),
                "k_max": dec.k_max,
                "screen1_ms": ms["screen1"],
                "screen2_ms": ms["screen2"],
                "peel_ms": ms["peel"],
                "total_ms": sum(ms.values()),
                "pd": cohesion[0] if cohesion else None,
                "pcc": cohesion[1] if cohesion else None,
                "pd_change_pct": None,
                "pcc_change_pct": None,
            }
            if mode == "mpa" and pa_cohesion and mpa_cohesion:
                base_pd, base_pcc = pa_cohesion
                if base_pd != 0.0:
                    row["pd_change_pct"] = 100.0 * (mpa_cohesion[0] - base_pd) / base_pd
                if base_pcc != 0.0:
                    row["pcc_change_pct"] = 100.0 * (mpa_cohesion[1] - base_pcc) / base_pcc
            rows.append(row)
        print(f"eta\t{_fmt(eta)}\tdone", file=sys.stderr)

    columns = list(rows[0].keys())

    def write(fh) -> None:
        fh.write("\t".join(columns) + "\n")
        for row in rows:
            fh.write("\t".join("-" if row[c] is None else _fmt(row[c]) for c in columns) + "\n")

    _emit(cfg.output, write)
    return 0


def _parse_eta_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise CLIError(f"bad --eta-grid value {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probcore",
        description="Core decomposition of probabilistic graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, eta=False, thresholds=False, generator=False, output=True):
        if eta:
            p.add_argument("--eta", type=float, default=0.5, help="probability threshold in [0, 1]")
        if thresholds:
            p.add_argument("--t1", type=float, default=0.0, help="stage-1 screening threshold")
            p.add_argument("--t2", type=int, default=0, help="stage-2 screening threshold")
        if generator:
            p.add_argument("--n", type=int, default=0, help="vertex count")
            p.add_argument("--m", type=int, default=0, help="edge count")
            p.add_argument("--prob-law", default="uniform",
                           help="uniform, constant[:c], or beta:a,b")
            p.add_argument("--seed", type=int, default=0, help="generator seed")
        if output:
            p.add_argument("--output", help="output file (default: standard output)")

    p = sub.add_parser("decompose", help="run the core decomposition")
    p.add_argument("--input", required=True, help="edge list file")
    p.add_argument("--mode", choices=("pa", "mpa"), default="pa")
    add_common(p, eta=True, thresholds=True)

    p = sub.add_parser("metrics", help="cohesion metrics of the max core")
    p.add_argument("--input", required=True, help="edge list file")
    p.add_argument("decompositions", nargs="+", metavar="DECOMPOSITION",
                   help="decomposition file; pass a second one to compare against the first")
    add_common(p)

    p = sub.add_parser("bench", help="time pa against mpa over an eta grid")
    p.add_argument("--input", help="edge list file (otherwise generate)")
    p.add_argument("--eta-grid", default="", help="comma-separated eta values")
    p.add_argument("--repeat", type=int, default=1, help="runs per configuration, median reported")
    add_common(p, thresholds=True, generator=True)
    p.set_defaults(t1=5.0, t2=10)

    p = sub.add_parser("suggest", help="suggest screening thresholds")
    p.add_argument("--input", required=True, help="edge list file")
    add_common(p, eta=True)

    p = sub.add_parser("generate", help="write a random probabilistic graph")
    add_common(p, generator=True)

    p = sub.add_parser("degree", help="degree diagnostics for one vertex")
    p.add_argument("--input", required=True, help="edge list file")
    p.add_argument("--vertex", required=True, help="vertex token")
    add_common(p, eta=True)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        eta=getattr(args, "eta", 0.5),
        tau1=getattr(args, "t1", 0.0),
        tau2=getattr(args, "t2", 0),
        mode=getattr(args, "mode", "pa"),
        n=getattr(args, "n", 0),
        m=getattr(args, "m", 0),
        prob_law=getattr(args, "prob_law", "uniform"),
        seed=getattr(args, "seed", 0),
        vertex=getattr(args, "vertex", None),
        eta_grid=_parse_eta_grid(getattr(args, "eta_grid", "")),
        repeat=getattr(args, "repeat", 1),
        decompositions=tuple(getattr(args, "decompositions", ())),
    )


COMMANDS = {
    "decompose": cmd_decompose,
    "metrics": cmd_metrics,
    "bench": cmd_bench,
    "suggest": cmd_suggest,
    "generate": cmd_generate,
    "degree": cmd_degree,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
