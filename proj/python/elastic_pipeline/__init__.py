"""Python bindings for the elastic image-classification pipeline.

The heavy lifting lives in the C++ core; this package re-exports it and adds
dict-friendly wrappers around the simulator.
"""

import json

from ._core import (
    BlobStore,
    Clock,
    ElasticError,
    Fabric,
    WorkQueue,
    analytic_response_time,
    classify,
    default_label_table,
    desired_app_instances,
    fnv1a64,
    mean_boot_time,
    reconcile,
    run_scenario_json,
)

__all__ = [
    "BlobStore",
    "Clock",
    "ElasticError",
    "Fabric",
    "WorkQueue",
    "analytic_response_time",
    "classify",
    "default_label_table",
    "desired_app_instances",
    "fnv1a64",
    "mean_boot_time",
    "reconcile",
    "run_scenario",
    "run_scenario_json",
]


def run_scenario(scenario):
    """Run a simulated scenario (dict or JSON string) and return the report dict."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(run_scenario_json(text))
