"""Floquet-code simulation and resource estimation for networked devices."""

from floqnet.codes import BivariateSpec, CssCode, build_bb_code, css_validate
from floqnet.config import ConfigError, ExperimentConfig, load_config
from floqnet.floquet import (
    CheckSchedule,
    honeycomb_schedule,
    pairwise_decompose,
    verify_period,
)
from floqnet.honeycomb import build_honeycomb
from floqnet.network import (
    PhysicalParams,
    herald_time,
    purify,
    simulate_heralding,
)
from floqnet.noise_mc import (
    NoiseModel,
    estimate_crossing,
    estimate_logical_error,
    run_sweep,
)
from floqnet.resource import estimate_cycle, throughput_report

__version__ = "0.1.0"

__all__ = [
    "BivariateSpec",
    "CheckSchedule",
    "ConfigError",
    "CssCode",
    "ExperimentConfig",
    "NoiseModel",
    "PhysicalParams",
    "build_bb_code",
    "build_honeycomb",
    "css_validate",
    "estimate_crossing",
    "estimate_cycle",
    "estimate_logical_error",
    "herald_time",
    "honeycomb_schedule",
    "load_config",
    "pairwise_decompose",
    "purify",
    "run_sweep",
    "simulate_heralding",
    "throughput_report",
    "verify_period",
]
