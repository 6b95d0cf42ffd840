"""Circle-map cocycles over hyperbolic base dynamics.

Thin wrapper around the compiled extension: scenario execution, the bundled
scenario catalog, and a small fiber-layer API for exploration.
"""

from ._core import (
    CircleMap,
    ConfigError,
    bundled_config,
    circle_distance,
    list_scenarios,
    run_scenario,
)

__all__ = [
    "CircleMap",
    "ConfigError",
    "bundled_config",
    "circle_distance",
    "list_scenarios",
    "run_scenario",
]
