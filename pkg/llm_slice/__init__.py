"""
llm_slice
=========

Deterministic discrete-event simulator and control plane for LLM-dedicated 5G downlink
slices. A gNB MAC scheduler partitions the PRB grid per slice, a slice-session state
machine gates which UEs may use an LLM slice, and a RIC-style controller re-computes
the per-slice quotas from periodic KPI reports.

Usage
-----

.. code-block:: python

    import llm_slice as ls

    scenario = ls.load_scenario(ls.Assets.get_path("tab1.json")[0])

    static = ls.summarize_trace(ls.run(scenario.with_mode("static"), 1))
    dynamic = ls.summarize_trace(ls.run(scenario.with_mode("dynamic"), 1))

    report = ls.compare(static, dynamic)
    print(ls.render_table(report))

    # identical inputs always produce an identical trace
    assert ls.run(scenario, 7).digest() == ls.run(scenario, 7).digest()
"""

from llm_slice import config, engine, mac, metrics, radio, ric, slicectl, utils, workload
from llm_slice.config import enums
from llm_slice.config.assets import Assets
from llm_slice.config.enums import SchedulerModes
from llm_slice.config.scenario import Scenario, load_scenario, parse_scenario
from llm_slice.config.settings import Settings
from llm_slice.config.utils import get_package_version
from llm_slice.engine.simulation import Simulation, build_workload, run
from llm_slice.metrics import average_summaries, compare, render_table, summarize_trace

__version__ = get_package_version()

__all__ = [
    # modules
    "config",
    "engine",
    "enums",
    "mac",
    "metrics",
    "radio",
    "ric",
    "slicectl",
    "utils",
    "workload",
    # classes
    "Assets",
    "Scenario",
    "SchedulerModes",
    "Settings",
    "Simulation",
    # functions
    "average_summaries",
    "build_workload",
    "compare",
    "load_scenario",
    "parse_scenario",
    "render_table",
    "run",
    "summarize_trace",
]
