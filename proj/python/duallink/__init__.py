# SPDX-License-Identifier: Apache-2.0
"""Weighted sum-rate maximization for MIMO B-MAC networks."""

import json as _json

from ._core import (
    Algorithm,
    InitKind,
    IterationRecord,
    NetworkSpec,
    NumericalError,
    SolveResult,
    SpecError,
    forward_to_reverse,
    generate_network,
    mac_capacity,
    make_network,
    residual,
    reverse_to_forward,
    reverse_weighted_sum_rate,
    rng_version,
    saddle_point_check,
    solve,
    solve_from,
    water_fill,
    weighted_sum_rate,
)
from ._core import bench as _bench


def bench(**config):
    """Runs the iterations-to-threshold table and returns the report as a dict."""
    return _json.loads(_bench(_json.dumps(config)))


__all__ = [
    "Algorithm",
    "InitKind",
    "IterationRecord",
    "NetworkSpec",
    "NumericalError",
    "SolveResult",
    "SpecError",
    "bench",
    "forward_to_reverse",
    "generate_network",
    "mac_capacity",
    "make_network",
    "residual",
    "reverse_to_forward",
    "reverse_weighted_sum_rate",
    "rng_version",
    "saddle_point_check",
    "solve",
    "solve_from",
    "water_fill",
    "weighted_sum_rate",
]
