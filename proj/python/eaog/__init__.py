"""Task-motion planning over expanding AND/OR graph networks."""

import json

from ._core import (
    PlannerError,
    RunResult,
    Scenario,
    ScenarioSyntaxError,
    dot,
    gen_habitat,
    gen_hanoi,
    mask_timings_jsonl,
    parse_scenario,
    run,
)


def metrics(result):
    """Metrics document of a run as a dict."""
    return json.loads(result.metrics_json)


def trace_records(result):
    return [json.loads(line) for line in result.trace.splitlines() if line]


__all__ = [
    "PlannerError",
    "RunResult",
    "Scenario",
    "ScenarioSyntaxError",
    "dot",
    "gen_habitat",
    "gen_hanoi",
    "mask_timings_jsonl",
    "metrics",
    "parse_scenario",
    "run",
    "trace_records",
]
