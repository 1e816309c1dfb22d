"""
llm_slice Command Line Interface

This module provides the ``llmslice`` command: run a scenario in one scheduler mode,
compare two modes over a set of seeds, validate a scenario, or list the bundled
scenarios.

.. code-block:: console

    $ llmslice
    Usage: llmslice [OPTIONS] COMMAND [ARGS]...

    Options:
      --version  Show the version and exit.
      --help     Show this message and exit.

    Commands:
      compare    Compare two scheduler modes over several seeds.
      run        Run a scenario once and write its metrics.
      scenarios  List the scenarios bundled with the package.
      validate   Check a scenario without running it.

Exit codes: 0 success, 1 runtime or output failure, 2 invalid configuration.
Diagnostics go to standard error when LLMSLICE_LOG is "info" or "debug".
"""

import logging
import os
import sys
from typing import Dict, List

import click

from llm_slice.config.assets import Assets
from llm_slice.config.utils import configure_logging, get_package_version
from llm_slice.errors import ConfigurationError, LlmSliceError
from llm_slice.mac.scheduler import SchedulerMode
from llm_slice.metrics.summary import RunSummary

logger = logging.getLogger(__name__)


def _fail(stage: str, exc: BaseException) -> None:
    code = 2 if isinstance(exc, ConfigurationError) else 1
    click.echo(f"llmslice: {stage} failed: {exc}", err=True)
    sys.exit(code)


def _scenario_path(name_or_path: str) -> str:
    if os.path.exists(name_or_path):
        return name_or_path
    bundled = Assets.get_path(name_or_path)
    return bundled[0] if bundled else name_or_path


def parse_seeds(text: str) -> List[int]:
    """``"1..10"`` -> [1, ..., 10]; ``"3,5,8"`` -> [3, 5, 8]."""

    try:
        if ".." in text:
            first, last = (int(part) for part in text.split("..", 1))
            seeds = list(range(first, last + 1))
        else:
            seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"seeds must look like 'a..b' or 'a,b,c', got {text!r}") from None
    if not seeds or min(seeds) < 0:
        raise ConfigurationError(f"seeds must be non-negative and non-empty, got {text!r}")
    return seeds


def _run_summary(scenario, seed: int, allow_empty: bool = False):
    from llm_slice.engine.simulation import run
    from llm_slice.metrics import summarize_trace

    trace = run(scenario, seed, keep_records=False, hash_records=False)
    return summarize_trace(trace, allow_empty=allow_empty)


@click.group()
@click.version_option(get_package_version())
def llmslice():
    """
    LLM-dedicated 5G downlink slicing simulator.
    """

    configure_logging()


@llmslice.command(no_args_is_help=True)
@click.option("--scenario", "-s", required=True, help="Scenario JSON file, or the name of a bundled scenario.")
@click.option("--seed", type=int, default=None, help="Master seed. Defaults to the first seed of the scenario.")
@click.option("--mode", "-m", default=None, help="Override the scheduler mode: shared, static or dynamic.")
@click.option("--trace/--no-trace", default=False, show_default=True, help="Also write the event log (trace.log).")
@click.option("--out", "-o", "out_dir", required=True, help="Directory for summary.json and deliveries.csv.")
@click.option(
    "--allow-empty/--no-allow-empty",
    default=False,
    show_default=True,
    help="Write a summary even if no LLM response stream started.",
)
def run(scenario, seed, mode, trace, out_dir, allow_empty):
    """
    Run a scenario once and write its metrics.

    Examples:\n
        $ llmslice run --scenario tab1.json --seed 1 --mode static --out results/static-1
    """

    from llm_slice.config.scenario import load_scenario
    from llm_slice.engine.simulation import Simulation
    from llm_slice.metrics import summarize_trace, write_outputs

    try:
        parsed = load_scenario(_scenario_path(scenario))
    except LlmSliceError as exc:
        _fail("parse", exc)
    try:
        if mode is not None:
            parsed = parsed.with_mode(mode)
        seed = parsed.seeds[0] if seed is None else seed
        if seed < 0:
            raise ConfigurationError(f"seeds must be non-negative, got {seed = }")
        simulation = Simulation(parsed, seed, keep_records=trace, hash_records=True)
    except LlmSliceError as exc:
        _fail("validate", exc)
    try:
        result = simulation.run()
        summary = summarize_trace(result, allow_empty=allow_empty)
    except LlmSliceError as exc:
        _fail("run", exc)
    try:
        paths = write_outputs(out_dir, summary=summary, records=result.deliveries)
        if trace:
            paths.append(result.write_log(os.path.join(out_dir, "trace.log")))
    except (LlmSliceError, OSError) as exc:
        _fail("write", exc)

    click.echo(f"trace digest: {result.digest()}")
    for path in paths:
        click.echo(f"wrote {path}")


@llmslice.command(no_args_is_help=True)
@click.option("--scenario", "-s", required=True, help="Scenario JSON file, or the name of a bundled scenario.")
@click.option("--baseline", "-b", default="static", show_default=True, help="Baseline scheduler mode.")
@click.option("--treatment", "-t", default="dynamic", show_default=True, help="Treatment scheduler mode.")
@click.option("--seeds", default=None, help="Seeds as 'a..b' or 'a,b,c'. Defaults to the scenario's seeds.")
@click.option("--out", "-o", "out_dir", required=True, help="Directory for comparison.json and comparison.txt.")
@click.option("--jobs", "-j", type=int, default=1, show_default=True, help="Runs executed concurrently.")
@click.option("--progress-bar/--no-progress-bar", default=True, show_default=True, help="Show a progress bar.")
def compare(scenario, baseline, treatment, seeds, out_dir, jobs, progress_bar):
    """
    Compare two scheduler modes over several seeds.

    Every seed runs in both modes; per-mode metrics are averaged over the seeds
    and the relative improvements are written as JSON and as a fixed-width table.\n
    Examples:\n
        $ llmslice compare --scenario tab1.json --baseline static --treatment dynamic --seeds 1..10 --out results/
    """

    from llm_slice.config.scenario import load_scenario
    from llm_slice.metrics import average_summaries, compare as compare_summaries, render_table, write_outputs
    from llm_slice.utils import threaded_map

    try:
        parsed = load_scenario(_scenario_path(scenario))
    except LlmSliceError as exc:
        _fail("parse", exc)
    try:
        variants = {label: parsed.with_mode(name) for label, name in (("baseline", baseline), ("treatment", treatment))}
        seed_list = parse_seeds(seeds) if seeds else list(parsed.seeds)
        if jobs < 1:
            raise ConfigurationError(f"--jobs must be >= 1, got {jobs}")
        for variant in variants.values():
            variant.build_registry()
    except LlmSliceError as exc:
        _fail("validate", exc)

    # identical modes run once
    by_mode = {variant.mode: variant for variant in variants.values()}
    ordered = sorted(by_mode, key=lambda m: (m.name, m.work_conserving))
    job_args = [(by_mode[mode], seed) for mode in ordered for seed in seed_list]
    try:
        summaries = threaded_map(
            _run_summary,
            job_args,
            max_n_threads=jobs,
            progress_bar=progress_bar,
            leave=False,
            desc="Running seeds",
        )
    except LlmSliceError as exc:
        _fail("run", exc)

    grouped: Dict[SchedulerMode, List[RunSummary]] = {}
    for (variant, _), summary in zip(job_args, summaries):
        grouped.setdefault(variant.mode, []).append(summary)

    try:
        report = compare_summaries(
            average_summaries(grouped[variants["baseline"].mode]),
            average_summaries(grouped[variants["treatment"].mode]),
        )
    except LlmSliceError as exc:
        _fail("run", exc)
    try:
        paths = write_outputs(out_dir, report=report)
    except (LlmSliceError, OSError) as exc:
        _fail("write", exc)

    click.echo(render_table(report), nl=False)
    for path in paths:
        click.echo(f"wrote {path}")


@llmslice.command(no_args_is_help=True)
@click.option("--scenario", "-s", required=True, help="Scenario JSON file, or the name of a bundled scenario.")
def validate(scenario):
    """
    Check a scenario without running it.

    Prints the slice set, the admission result and the offered load of every service.
    """

    from llm_slice.config.scenario import load_scenario, scenario_summary
    from llm_slice.workload import expected_token_count, offered_load_bytes_per_s

    try:
        parsed = load_scenario(_scenario_path(scenario))
    except LlmSliceError as exc:
        _fail("parse", exc)
    try:
        registry = parsed.build_registry()
    except LlmSliceError as exc:
        _fail("validate", exc)

    info = scenario_summary(parsed)
    click.echo(f"scenario {info['name']}: {info['ues']} UEs, {info['horizon_ms']:g} ms, mode {info['mode']}")
    for desc in registry:
        click.echo(
            f"  slice {desc.slice_id:<12} service {desc.service_id or '-':<10} "
            f"share [{desc.min_share:.2f}, {desc.max_share:.2f}] static {desc.fixed_share:.2f}"
        )
    click.echo(f"  admission ok, reserved share {registry.reserved_share:.2f}")
    for profile in parsed.services:
        load = sum(
            offered_load_bytes_per_s(profile, spec.process)
            for spec in parsed.arrivals
            if spec.service_id == profile.service_id
        )
        click.echo(
            f"  service {profile.service_id:<10} mean tokens {expected_token_count(profile):8.1f}"
            f"  offered {load / 1000:10.1f} kB/s"
        )
    background = sum(flow.rate_bytes_per_s for flow in parsed.background)
    if background:
        click.echo(f"  background offered {background / 1000:10.1f} kB/s")


@llmslice.command()
def scenarios():
    """
    List the scenarios bundled with the package.
    """

    for name in Assets.get_ids(r".*\.json"):
        click.echo(name)
