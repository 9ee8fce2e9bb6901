"""Benchmark harness: run reuse strategies over one matrix sequence and report.

Usage::

    python -m amgreuse.bench --generate slow --grid 128 --steps 25 \\
        --strategies none,full,partial --format markdown

Exit status is 0 on success, 1 for configuration or I/O errors and 2 for
anything unexpected.  Solver non-convergence is data, not an error.
"""

from __future__ import annotations

import argparse
import csv
import io
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import AmgError
from .hierarchy import AmgParams
from .krylov import SolveParams
from .mmio import read_sequence
from .problems import PRESETS, DiffusionSequenceSpec, gen_diffusion_sequence, preset
from .reuse import FULL_BUILD, PARTIAL_UPDATE, STRATEGIES, RunReport, StrategyConfig, run_sequence, speedup

STRATEGY_NAMES = {"none": "No reuse", "full": "Full reuse", "partial": "Partial reuse"}
PHASE_ROWS = (
    ("transfer_ops", "Transfer operators"),
    ("galerkin", "Galerkin operator"),
    ("smoother", "Smoother"),
    ("coarse_solver", "Direct solver for the coarsest system"),
)
STEP_FIELDS = ("strategy", "step", "action", "setup_time", "solve_time", "iterations",
               "converged", "relative_residual", "transfer_ops", "galerkin", "smoother",
               "coarse_solver")


class ConfigError(Exception):
    pass


@dataclass
class BenchConfig:
    generate: Optional[str] = None
    sequence: Optional[Path] = None
    grid: int = 128
    steps: int = 25
    seed: int = 0
    contrast: Optional[float] = None
    path_speed: Optional[float] = None
    blob_sigma: Optional[float] = None
    strategies: Tuple[str, ...] = ("none", "full", "partial")
    amg: AmgParams = field(default_factory=AmgParams)
    solve: SolveParams = field(default_factory=SolveParams)
    reuse_iter_limit: Optional[int] = None
    rebuild_every: Optional[int] = None
    format: str = "markdown"
    output: Optional[Path] = None
    steps_csv: Optional[Path] = None
    repeat: int = 1
    parallel_strategies: bool = False
    echo: Dict[str, str] = field(default_factory=dict)

    def sequence_spec(self) -> DiffusionSequenceSpec:
        overrides = {k: v for k, v in (("contrast", self.contrast),
                                       ("path_speed", self.path_speed),
                                       ("blob_sigma", self.blob_sigma)) if v is not None}
        return preset(self.generate, grid_n=self.grid, steps=self.steps, seed=self.seed,
                      **overrides)

    def strategy(self, kind) -> StrategyConfig:
        return StrategyConfig(kind, self.reuse_iter_limit, self.rebuild_every)

    def describe(self) -> str:
        if self.generate:
            s = self.sequence_spec()
            return (f"generated '{self.generate}' sequence: grid {s.grid_n}x{s.grid_n}, "
                    f"{s.steps} steps, contrast {s.contrast:g}, path speed {s.path_speed:g}, "
                    f"blob sigma {s.sigma:g}, seed {s.seed}")
        return f"sequence directory {self.sequence}"


@dataclass
class BenchResult:
    config: BenchConfig
    reports: Dict[str, RunReport]
    solutions: Dict[str, list]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="amgreuse-bench",
                description="Compare AMG setup reuse strategies on a sequence of linear systems.")
    src = p.add_argument_group("problem source")
    src.add_argument("--generate", choices=sorted(PRESETS), help="synthetic diffusion preset")
    src.add_argument("--sequence", type=Path, help="directory with step_NNNN.mtx files")
    src.add_argument("--grid", type=int, default=128)
    src.add_argument("--steps", type=int, default=25)
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--contrast", type=float)
    src.add_argument("--path-speed", type=float)
    src.add_argument("--blob-sigma", type=float)

    st = p.add_argument_group("strategies")
    st.add_argument("--strategies", default="none,full,partial",
                    help="comma separated subset of none,full,partial")
    st.add_argument("--reuse-iter-limit", type=int)
    st.add_argument("--rebuild-every", type=int)

    amg = p.add_argument_group("AMG")
    amg.add_argument("--eps", type=float, default=AmgParams.eps)
    amg.add_argument("--omega", type=float, default=AmgParams.omega)
    amg.add_argument("--pre-sweeps", type=int, default=AmgParams.pre_sweeps)
    amg.add_argument("--post-sweeps", type=int, default=AmgParams.post_sweeps)
    amg.add_argument("--coarse-enough", type=int, default=AmgParams.coarse_enough)
    amg.add_argument("--max-direct-size", type=int, default=AmgParams.max_direct_size)

    sv = p.add_argument_group("solver")
    sv.add_argument("--tol", type=float, default=SolveParams.tol)
    sv.add_argument("--max-iter", type=int, default=SolveParams.max_iter)

    out = p.add_argument_group("output")
    out.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    out.add_argument("--output", type=Path, help="report file (default: stdout)")
    out.add_argument("--steps-csv", type=Path, help="per-step metrics CSV file")
    out.add_argument("--repeat", type=int, default=1, help="rerun N times, report median timings")
    out.add_argument("--parallel-strategies", action="store_true")
    p.add_argument("--config", type=Path, help="key = value file; its values win over flags")
    return p


def read_config_file(path) -> Dict[str, str]:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_args(argv=None) -> BenchConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    echo = {}
    if ns.config is not None:
        file_values = read_config_file(ns.config)
        actions = {a.dest: a for a in parser._actions}
        for key, raw in file_values.items():
            if key == "config" or key not in actions:
                raise ConfigError(f"unknown key {key!r} in {ns.config}")
            act = actions[key]
            try:
                if isinstance(act, argparse._StoreTrueAction):
                    value = raw.lower() in ("1", "true", "yes", "on")
                else:
                    value = act.type(raw) if act.type else raw
            except (TypeError, ValueError):
                raise ConfigError(f"bad value {raw!r} for {key} in {ns.config}") from None
            if act.choices and value not in act.choices:
                raise ConfigError(f"{key} must be one of {sorted(act.choices)}, got {raw!r}")
            setattr(ns, key, value)
            echo[key] = raw
        # the file's choice of source replaces the command line's
        if "generate" in file_values and "sequence" not in file_values:
            ns.sequence = None
        if "sequence" in file_values and "generate" not in file_values:
            ns.generate = None

    if (ns.generate is None) == (ns.sequence is None):
        raise ConfigError("give exactly one of --generate or --sequence")
    kinds = tuple(dict.fromkeys(s.strip() for s in ns.strategies.split(",") if s.strip()))
    if not kinds:
        raise ConfigError("at least one strategy is required")
    bad = [k for k in kinds if k not in STRATEGIES]
    if bad:
        raise ConfigError(f"unknown strategies {bad}; choose from {list(STRATEGIES)}")
    if kinds != ("none",) and "none" not in kinds:
        kinds = ("none",) + kinds       # baseline for the speedup columns
    if ns.repeat < 1:
        raise ConfigError("--repeat must be >= 1")
    try:
        cfg = BenchConfig(
            generate=ns.generate, sequence=ns.sequence, grid=ns.grid, steps=ns.steps,
            seed=ns.seed, contrast=ns.contrast, path_speed=ns.path_speed,
            blob_sigma=ns.blob_sigma, strategies=kinds,
            amg=AmgParams(ns.eps, ns.omega, ns.pre_sweeps, ns.post_sweeps,
                          ns.coarse_enough, ns.max_direct_size),
            solve=SolveParams(ns.tol, ns.max_iter),
            reuse_iter_limit=ns.reuse_iter_limit, rebuild_every=ns.rebuild_every,
            format=ns.format, output=ns.output, steps_csv=ns.steps_csv,
            repeat=ns.repeat, parallel_strategies=ns.parallel_strategies, echo=echo)
        for k in kinds:
            cfg.strategy(k).iter_limit(cfg.solve)
        if cfg.generate:
            cfg.sequence_spec()
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return cfg


def load_systems(config: BenchConfig):
    if config.generate:
        return list(gen_diffusion_sequence(config.sequence_spec()))
    return list(read_sequence(config.sequence))


def _median_report(runs: List[RunReport]) -> RunReport:
    if len(runs) == 1:
        return runs[0]
    return replace(runs[0],
                   total_setup=statistics.median(r.total_setup for r in runs),
                   total_solve=statistics.median(r.total_solve for r in runs))


def warm_up():
    """Load the compiled kernels so the first timed setup does not pay for it."""
    from .problems import poisson2d
    A = poisson2d(12)
    f = np.ones(A.nrows)
    run_sequence([(A, f), (A, f)], StrategyConfig("partial"), AmgParams(coarse_enough=10))
    run_sequence([(A, f)], StrategyConfig("none"), AmgParams(coarse_enough=10))


def run_benchmark(config: BenchConfig, systems=None) -> BenchResult:
    """Run every configured strategy on the same systems."""
    if systems is None:
        systems = load_systems(config)
    warm_up()

    def one(kind):
        runs, sols = [], None
        for _ in range(config.repeat):
            s, r = run_sequence(systems, config.strategy(kind), config.amg, config.solve)
            runs.append(r)
            sols = sols if sols is not None else s
        return kind, _median_report(runs), sols

    if config.parallel_strategies and len(config.strategies) > 1:
        with ThreadPoolExecutor(max_workers=len(config.strategies)) as pool:
            results = list(pool.map(one, config.strategies))
    else:
        results = [one(k) for k in config.strategies]
    return BenchResult(config,
                       {k: r for k, r, _ in results},
                       {k: s for k, _, s in results})


def comparison_rows(reports: Dict[str, RunReport]):
    """Rows of the strategy comparison table as (label, report, total %, setup %)."""
    base = reports.get("none")
    rows = []
    for kind, r in reports.items():
        if base is None or kind == "none":
            rows.append((STRATEGY_NAMES[kind], r, None, None))
        else:
            rows.append((STRATEGY_NAMES[kind], r, speedup(base, r, "total"),
                         speedup(base, r, "setup")))
    return rows


def phase_breakdown(reports: Dict[str, RunReport]):
    """Percentage of setup time per phase, for full builds and partial updates."""
    columns = {}
    for action, label in ((FULL_BUILD, "Full build"), (PARTIAL_UPDATE, "Partial update")):
        total = None
        for r in reports.values():
            if any(s.action == action for s in r.steps):
                t = r.phase_totals(action)
                total = t if total is None else total + t
        if total is not None:
            columns[label] = {k: 100.0 * v for k, v in total.shares().items()}
    return columns


def _header(config: BenchConfig):
    lines = [f"AMG setup reuse benchmark: {config.describe()}",
             f"amg: {config.amg}",
             f"solve: {config.solve}",
             f"strategy knobs: reuse_iter_limit={config.reuse_iter_limit}, "
             f"rebuild_every={config.rebuild_every}, repeat={config.repeat}"]
    if config.echo:
        lines.append("config file: " + ", ".join(f"{k} = {v}" for k, v in config.echo.items()))
    if config.parallel_strategies and len(config.strategies) > 1:
        lines.append("WARNING: strategies ran concurrently; timings are contended")
    return lines


def _fmt_pct(x):
    return "" if x is None else f"{x:.0f}%"


def render_markdown(result: BenchResult) -> str:
    out = ["# " + _header(result.config)[0], ""]
    out += [f"- {line}" for line in _header(result.config)[1:]]
    out += ["", "## Strategy comparison", ""]
    rows = comparison_rows(result.reports)
    with_speedup = any(t is not None for _, _, t, _ in rows)
    cols = ["Strategy", "Setup (s)", "Solve (s)", "Rebuilds", "Average iterations"]
    if with_speedup:
        cols += ["Total speedup (%)", "Setup speedup (%)"]
    out.append("| " + " | ".join(cols) + " |")
    out.append("|" + "|".join(["---"] * len(cols)) + "|")
    for label, r, tot, sup in rows:
        cells = [label, f"{r.total_setup:.3f}", f"{r.total_solve:.3f}", str(r.full_rebuilds),
                 f"{r.avg_iterations:.1f}"]
        if with_speedup:
            cells += [_fmt_pct(tot), _fmt_pct(sup)]
        out.append("| " + " | ".join(cells) + " |")

    breakdown = phase_breakdown(result.reports)
    out += ["", "## Setup phase breakdown", ""]
    labels = list(breakdown)
    out.append("| Step | " + " | ".join(labels) + " |")
    out.append("|" + "|".join(["---"] * (len(labels) + 1)) + "|")
    for key, name in PHASE_ROWS:
        out.append(f"| {name} | " + " | ".join(f"{breakdown[c][key]:.1f}%" for c in labels) + " |")
    return "\n".join(out) + "\n"


def render_csv(result: BenchResult) -> str:
    buf = io.StringIO()
    for line in _header(result.config):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    rows = comparison_rows(result.reports)
    w.writerow(["strategy", "setup_s", "solve_s", "rebuilds", "avg_iterations",
                "total_speedup_pct", "setup_speedup_pct"])
    for label, r, tot, sup in rows:
        w.writerow([label, repr(r.total_setup), repr(r.total_solve), r.full_rebuilds,
                    repr(r.avg_iterations), "" if tot is None else repr(tot),
                    "" if sup is None else repr(sup)])
    buf.write("\n")
    breakdown = phase_breakdown(result.reports)
    w.writerow(["phase"] + list(breakdown))
    for key, name in PHASE_ROWS:
        w.writerow([name] + [repr(breakdown[c][key]) for c in breakdown])
    return buf.getvalue()


def write_steps_csv(result: BenchResult, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(STEP_FIELDS)
    for kind, r in result.reports.items():
        for s in r.steps:
            p = s.phase_timings
            w.writerow([kind, s.step, s.action, repr(s.setup_time), repr(s.solve_time),
                        s.iterations, int(s.converged), repr(s.relative_residual),
                        repr(p.transfer_ops), repr(p.galerkin), repr(p.smoother),
                        repr(p.coarse_solver)])


def run(config: BenchConfig) -> int:
    result = run_benchmark(config)
    text = render_markdown(result) if config.format == "markdown" else render_csv(result)
    if config.output is None:
        sys.stdout.write(text)
    else:
        config.output.write_text(text)
    if config.steps_csv is not None:
        with open(config.steps_csv, "w", newline="") as fh:
            write_steps_csv(result, fh)
    return 0


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
        return run(config)
    except (ConfigError, AmgError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
