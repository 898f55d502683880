"""Command-line front end: single runs, strategy comparisons, self checks.

Exit codes: 0 on success, 1 on failed self checks, 2 on configuration
errors, 3 on objective evaluation errors.  Output files are only opened
after configuration has validated, so a bad config never leaves a
partial trace behind.  All delimited output is formatted with
round-trip float representations; rerunning an identical configuration
reproduces the files byte for byte.
"""

from __future__ import annotations

import configparser
import csv
import sys

import click
import numpy as np

from . import checks as checks_module
from .core import ConfigError, NonFiniteObjectiveError, SolverConfig, validate_config
from .directions import STRATEGY_KINDS, make_strategy
from .optimizer import relative_trajectory, run, run_ensemble
from .problems import PROBLEM_NAMES, get_problem

# every key a config file may set, per section
_SECTION_KEYS = {
    "problem": (
        "name", "x0", "weight", "score", "levels", "pdhg_iters",
        "threshold_approx", "image", "clean_image", "image_seed", "noise_sigma",
    ),
    "solver": (
        "tau_min", "tau_max", "eps", "eta", "stall_m", "max_iters", "sigma",
        "budget_evals", "max_expansions", "max_parabolic", "max_clamp",
    ),
    "directions": ("strategy", "seed"),
    "output": ("trace", "summary", "plot"),
}

_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_bool(section: str, key: str, raw: str) -> bool:
    word = raw.strip().lower()
    if word not in _BOOL_WORDS:
        raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")
    return _BOOL_WORDS[word]


def _parse_number(section: str, key: str, raw: str, kind):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(
            f"{section}.{key}: expected {kind.__name__}, got {raw!r}"
        ) from None


def _parse_x0(raw: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in raw.split(",")])
    except ValueError:
        raise ConfigError(f"problem.x0: expected comma-separated numbers, got {raw!r}") from None


def load_config_file(path: str) -> dict:
    """Strictly parse a sectioned key-value config file.

    Unknown sections or keys are configuration errors naming the
    offender; values stay raw strings for the caller to convert.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from None
    except configparser.Error as err:
        raise ConfigError(f"malformed config file {path}: {err}") from None
    out: dict = {}
    for section in parser.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(
                f"unknown config section [{section}], expected one of "
                f"{sorted(_SECTION_KEYS)}"
            )
        out[section] = {}
        for key, value in parser.items(section):
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(
                    f"unknown config key {key!r} in section [{section}]"
                )
            out[section][key] = value
    return out


def _first(*values):
    for v in values:
        if v is not None:
            return v
    return None


class RunSpec:
    """Fully resolved configuration for one run or comparison."""

    def __init__(self, setup, x0, cfg, strategy_kind, seed, budget, outputs):
        self.setup = setup
        self.x0 = x0
        self.cfg = cfg
        self.strategy_kind = strategy_kind
        self.seed = seed
        self.budget = budget
        self.outputs = outputs


def _assemble(flags: dict) -> RunSpec:
    """Merge config file and flags (flags win) into a validated RunSpec."""
    filecfg = load_config_file(flags["config"]) if flags.get("config") else {}
    prob = filecfg.get("problem", {})
    solv = filecfg.get("solver", {})
    dirs = filecfg.get("directions", {})
    outs = filecfg.get("output", {})

    name = _first(flags.get("problem"), prob.get("name"))
    if name is None:
        raise ConfigError("no problem selected: pass --problem or set problem.name")
    setup = get_problem(
        name,
        weight=_first(flags.get("weight"),
                      _parse_number("problem", "weight", prob["weight"], float)
                      if "weight" in prob else None, 10.0),
        score=_first(flags.get("score"), prob.get("score"), "l2"),
        levels=_first(flags.get("levels"),
                      _parse_number("problem", "levels", prob["levels"], int)
                      if "levels" in prob else None, 3),
        pdhg_iters=_first(flags.get("pdhg_iters"),
                          _parse_number("problem", "pdhg_iters", prob["pdhg_iters"], int)
                          if "pdhg_iters" in prob else None, 300),
        threshold_approx=_first(flags.get("threshold_approx"),
                                _parse_bool("problem", "threshold_approx",
                                            prob["threshold_approx"])
                                if "threshold_approx" in prob else None, False),
        image=_first(flags.get("image"), prob.get("image"), "synthetic"),
        clean_image=_first(flags.get("clean_image"), prob.get("clean_image")),
        image_seed=_first(flags.get("image_seed"),
                          _parse_number("problem", "image_seed", prob["image_seed"], int)
                          if "image_seed" in prob else None, 0),
        noise_sigma=_first(flags.get("noise_sigma"),
                           _parse_number("problem", "noise_sigma", prob["noise_sigma"], float)
                           if "noise_sigma" in prob else None, 0.1),
    )

    raw_x0 = _first(flags.get("x0"), prob.get("x0"))
    x0 = _parse_x0(raw_x0) if raw_x0 is not None else setup.default_x0
    if x0.shape != (setup.dimension,):
        raise ConfigError(
            f"problem.x0 has {x0.size} entries, problem {name!r} needs {setup.dimension}"
        )

    def solver_num(key, kind):
        if key in solv:
            return _parse_number("solver", key, solv[key], kind)
        return None

    seed = _first(flags.get("seed"),
                  _parse_number("directions", "seed", dirs["seed"], int)
                  if "seed" in dirs else None, 0)
    defaults = SolverConfig()
    cfg = SolverConfig(
        tau_min=_first(flags.get("tau_min"), solver_num("tau_min", float), defaults.tau_min),
        tau_max=_first(flags.get("tau_max"), solver_num("tau_max", float), defaults.tau_max),
        probe_eps=_first(flags.get("eps"), solver_num("eps", float), defaults.probe_eps),
        eta=_first(flags.get("eta"), solver_num("eta", float), defaults.eta),
        max_stall=_first(flags.get("stall_m"), solver_num("stall_m", int)),
        max_iters=_first(flags.get("max_iters"), solver_num("max_iters", int),
                         defaults.max_iters),
        sigma=_first(flags.get("sigma"), solver_num("sigma", float), defaults.sigma),
        seed=seed,
        max_expansions=_first(solver_num("max_expansions", int), defaults.max_expansions),
        max_parabolic=_first(solver_num("max_parabolic", int), defaults.max_parabolic),
        max_clamp=_first(solver_num("max_clamp", int), defaults.max_clamp),
    )
    validate_config(cfg)

    strategy_kind = _first(flags.get("directions"), dirs.get("strategy"), "cyclic")
    if strategy_kind not in STRATEGY_KINDS:
        raise ConfigError(
            f"directions.strategy must be one of {STRATEGY_KINDS}, got {strategy_kind!r}"
        )
    budget = _first(flags.get("budget_evals"), solver_num("budget_evals", int))
    if budget is not None and budget < 1:
        raise ConfigError(f"budget_evals must be >= 1, got {budget}")
    outputs = {
        "trace": _first(flags.get("out_trace"), outs.get("trace")),
        "summary": _first(flags.get("out_summary"), outs.get("summary")),
        "plot": _first(flags.get("out_plot"), outs.get("plot")),
    }
    return RunSpec(setup, x0, cfg, strategy_kind, seed, budget, outputs)


def _fmt(value) -> str:
    """Round-trip decimal text for floats (nan prints as nan)."""
    return repr(float(value))


def write_trace_csv(trace, path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "cum_evals", "f", "step_norm",
                         "tau_implied", "status", "dir_index"])
        for rec in trace:
            writer.writerow([
                rec.iteration, rec.cumulative_evals, _fmt(rec.f_value),
                _fmt(rec.step_norm), _fmt(rec.tau_implied),
                rec.status.value, rec.direction_index,
            ])


def write_summary_csv(result, path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["final_f", "iters", "evals", "stop_reason"])
        writer.writerow([_fmt(result.final_value), result.iterations,
                         result.total_evals, result.stop_reason.value])


def _config_fail(err: ConfigError):
    click.echo(f"config error: {err}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Derivative-free descent with discrete-gradient line steps."""


def _run_options(fn):
    for opt in reversed([
        click.option("--problem", type=click.Choice(PROBLEM_NAMES), default=None,
                     help="Objective to minimise."),
        click.option("--config", type=click.Path(), default=None,
                     help="Sectioned key-value config file; flags override it."),
        click.option("--seed", type=int, default=None, help="Direction-strategy seed."),
        click.option("--tau-min", type=float, default=None),
        click.option("--tau-max", type=float, default=None),
        click.option("--eps", type=float, default=None, help="Probe displacement."),
        click.option("--eta", type=float, default=None, help="Stall decrease threshold."),
        click.option("--stall-m", type=int, default=None,
                     help="Consecutive stalled iterations before stopping (default: dimension)."),
        click.option("--max-iters", type=int, default=None),
        click.option("--budget-evals", type=int, default=None,
                     help="Stop once this many evaluations have been spent."),
        click.option("--sigma", type=float, default=None, help="Geometric rescale factor."),
        click.option("--x0", type=str, default=None, help="Comma-separated start point."),
        click.option("--weight", type=float, default=None, help="narrow: coordinate weight."),
        click.option("--score", type=click.Choice(["l2", "ssim"]), default=None,
                     help="bilevel: reconstruction score."),
        click.option("--levels", type=int, default=None, help="bilevel-wavelet: transform depth."),
        click.option("--pdhg-iters", type=int, default=None, help="bilevel-tv: inner iterations."),
        click.option("--threshold-approx", is_flag=True, default=None,
                     help="bilevel-wavelet: also shrink the approximation band."),
        click.option("--noise-sigma", type=float, default=None,
                     help="bilevel: synthetic noise level."),
        click.option("--image", type=str, default=None,
                     help="bilevel: 'synthetic' or path to a noisy PGM."),
        click.option("--clean-image", type=str, default=None,
                     help="bilevel: ground-truth PGM when --image is a path."),
        click.option("--image-seed", type=int, default=None,
                     help="bilevel: seed for the synthetic pair."),
    ]):
        fn = opt(fn)
    return fn


@main.command("run")
@_run_options
@click.option("--directions", type=click.Choice(STRATEGY_KINDS), default=None,
              help="Direction strategy.")
@click.option("--out-trace", type=click.Path(), default=None,
              help="Write the per-iteration trace CSV here.")
@click.option("--out-summary", type=click.Path(), default=None,
              help="Write the one-line summary CSV here.")
@click.option("--out-plot", type=click.Path(), default=None,
              help="Render the trace as a figure (format from extension).")
def cmd_run(**flags):
    """Minimise one problem and write trace / summary / figure files."""
    try:
        spec = _assemble(flags)
        strategy = make_strategy(spec.strategy_kind, spec.setup.dimension, spec.seed)
    except ConfigError as err:
        _config_fail(err)
    objective = spec.setup.objective_factory()
    try:
        result = run(objective, spec.x0, strategy, spec.cfg, eval_budget=spec.budget)
    except NonFiniteObjectiveError as err:
        if spec.outputs["trace"]:
            write_trace_csv(err.partial_trace, spec.outputs["trace"])
        click.echo(f"objective error: {err}", err=True)
        sys.exit(3)
    if spec.outputs["trace"]:
        write_trace_csv(result.trace, spec.outputs["trace"])
    if spec.outputs["summary"]:
        write_summary_csv(result, spec.outputs["summary"])
    if spec.outputs["plot"]:
        from .plots import save_trace_plot

        save_trace_plot(result.trace, spec.outputs["plot"],
                        title=f"{spec.setup.name} / {spec.strategy_kind}")
    click.echo(
        f"final_f={_fmt(result.final_value)} iters={result.iterations} "
        f"evals={result.total_evals} stop_reason={result.stop_reason.value}"
    )


@main.command("compare")
@_run_options
@click.option("--strategies", type=str, default="cyclic,random,rotated",
              help="Comma-separated strategy kinds.")
@click.option("--seeds", type=str, default=None, required=False,
              help="Comma-separated seeds, one run per (strategy, seed).")
@click.option("--out-csv", type=click.Path(), default=None,
              help="Write the tidy comparison CSV here.")
@click.option("--out-plot", type=click.Path(), default=None,
              help="Render the comparison figure here (format from extension).")
def cmd_compare(**flags):
    """Run several strategies and seeds on one problem; tabulate and plot."""
    try:
        spec = _assemble(flags)
        strategies = [s for s in (flags["strategies"] or "").split(",") if s]
        if not strategies:
            raise ConfigError("compare needs a non-empty --strategies list")
        for kind in strategies:
            if kind not in STRATEGY_KINDS:
                raise ConfigError(
                    f"unknown strategy {kind!r} in --strategies, "
                    f"expected one of {STRATEGY_KINDS}"
                )
        if flags.get("seeds"):
            try:
                seeds = [int(s) for s in flags["seeds"].split(",") if s]
            except ValueError:
                raise ConfigError(
                    f"--seeds must be comma-separated integers, got {flags['seeds']!r}"
                ) from None
        else:
            seeds = [spec.seed]
        if not seeds:
            raise ConfigError("compare needs a non-empty --seeds list")
    except ConfigError as err:
        _config_fail(err)

    cells = run_ensemble(
        spec.setup.objective_factory, spec.x0, strategies, spec.cfg, seeds,
        eval_budget=spec.budget,
    )
    rows = []
    failures = 0
    for cell in cells:
        if not cell.ok:
            failures += 1
            click.echo(
                f"warning: {cell.strategy} seed {cell.seed} aborted: {cell.result}",
                err=True,
            )
            continue
        for cum_evals, rel in relative_trajectory(cell.result, spec.setup.v_star):
            rows.append((cell.strategy, cell.seed, cum_evals, rel))
    if flags.get("out_csv"):
        with open(flags["out_csv"], "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["strategy", "seed", "cum_evals", "rel_obj"])
            for strategy, seed, cum_evals, rel in rows:
                writer.writerow([strategy, seed, cum_evals, _fmt(rel)])
    if flags.get("out_plot"):
        from .plots import save_comparison_plot

        save_comparison_plot(rows, flags["out_plot"], title=spec.setup.name)
    for cell in cells:
        if cell.ok:
            click.echo(
                f"{cell.strategy} seed={cell.seed} "
                f"final_f={_fmt(cell.result.final_value)} "
                f"evals={cell.result.total_evals} "
                f"stop_reason={cell.result.stop_reason.value}"
            )
    if failures == len(cells):
        sys.exit(3)


@main.command("check")
@click.argument("suite", type=click.Choice(["dg", "step", "bilevel", "all"]),
                default="all")
def cmd_check(suite):
    """Run built-in self checks and report one line per check."""
    results = checks_module.run_suite(suite)
    failed = 0
    for name, passed, detail in results:
        mark = "ok" if passed else "FAIL"
        failed += 0 if passed else 1
        click.echo(f"{mark} - {name} ({detail})")
    if failed:
        click.echo(f"{failed} of {len(results)} checks failed", err=True)
        sys.exit(1)
    click.echo(f"all {len(results)} checks passed")


if __name__ == "__main__":
    main()
