"""Flat key-value experiment configuration.

A config file is plain text: one ``key = value`` per line, ``#`` starts
a comment, blank lines are ignored.  Keys that carry a physical unit
spell it out in the name (``tau_attempt_ns``, ``t2_n_ms``) so a file is
a complete, diff-able record of an experiment.  Unknown or duplicate
keys are rejected by name rather than silently dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

from floqnet.codes import BivariateSpec, CssCode, build_bb_code
from floqnet.floquet import CheckSchedule, honeycomb_schedule, pairwise_decompose
from floqnet.gf2 import BinaryMatrix
from floqnet.honeycomb import build_honeycomb
from floqnet.network import (
    NodePartition,
    PhysicalParams,
    bisect_lattice,
    block_partition,
    round_robin,
    single_node,
)
from floqnet.noise_mc import NoiseModel


class ConfigError(ValueError):
    """Raised for any malformed, unknown, or inconsistent config input."""


CODE_KINDS = ("honeycomb", "bb", "matrix")
PARTITION_KINDS = ("auto", "single", "bisect", "blocks", "round_robin")

# config key -> (PhysicalParams field, scale to seconds/Hz)
PARAM_KEYS = {
    "tau_attempt_ns": ("tau_attempt", 1e-9),
    "eta": ("eta", 1.0),
    "f_target": ("f_target", 1.0),
    "tau_gate_ns": ("tau_gate", 1e-9),
    "tau_meas_ns": ("tau_meas", 1e-9),
    "p_gate_err": ("p_gate_err", 1.0),
    "p_meas_err": ("p_meas_err", 1.0),
    "bell_fidelity": ("bell_fidelity", 1.0),
    "purcell": ("purcell", 1.0),
    "mw_rabi_mhz": ("mw_rabi", 1e6),
    "t2_e_ms": ("t2_e", 1e-3),
    "t2_n_ms": ("t2_n", 1e-3),
    "t1_e_ms": ("t1_e", 1e-3),
    "linewidth_mhz": ("linewidth", 1e6),
    "zfs_d_mhz": ("zfs_d", 1e6),
    "zfs_e_mhz": ("zfs_e", 1e6),
    "classical_latency_ns": ("classical_latency", 1e-9),
}

NOISE_KEYS = ("p_check", "p_meas_flip", "p_bell", "p_idle", "p_skip")

_TERM_RE = re.compile(r"^(?:1|(x\^?(\d+)?)?(y\^?(\d+)?)?)$")


def parse_poly(text: str) -> tuple:
    """Monomial terms of a bivariate polynomial like ``x3+y+y2``.

    Returns ``((i, j), ...)`` exponent pairs.  ``1`` is the identity
    term; ``x^3`` and ``x3`` are both accepted.
    """
    terms = []
    for raw in text.replace(" ", "").split("+"):
        m = _TERM_RE.match(raw)
        if not m or not raw:
            raise ConfigError(f"bad polynomial term {raw!r} in {text!r}")
        i = int(m.group(2) or 1) if m.group(1) else 0
        j = int(m.group(4) or 1) if m.group(3) else 0
        terms.append((i, j))
    return tuple(terms)


def _parse_lattice(label: str) -> tuple:
    m = re.match(r"^(\d+)x(\d+)$", label.strip())
    if not m:
        raise ConfigError(f"bad lattice size {label!r}, expected like 2x2")
    return int(m.group(1)), int(m.group(2))


def _split_list(value: str) -> list:
    return [part.strip() for part in value.split(",") if part.strip()]


@dataclass
class ExperimentConfig:
    """One experiment, fully determined: code, partition, noise, budget.

    ``params`` holds hardware figures already converted to base units;
    ``noise`` holds per-location error probabilities.  Everything else
    is orchestration: what to build, how hard to sample, where to write.
    """

    code: str = "honeycomb"
    lx: int = 2
    ly: int = 2
    bb_ell: int = 12
    bb_m: int = 6
    bb_a: str = "x3+y+y2"
    bb_b: str = "y3+x+x2"
    hx_file: str = ""
    hz_file: str = ""
    nodes: int = 1
    partition: str = "auto"
    channels_per_node: int = 1
    distill_rounds: int = 0
    shots: int = 1000
    cycles: int = 4
    seed: int = 0
    out: str = "results"
    p_checks: tuple = (1e-3, 3e-3, 1e-2, 3e-2, 1e-1)
    lattices: tuple = ("2x2", "4x4")
    eta_sweep: tuple = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    params: PhysicalParams = field(default_factory=PhysicalParams)
    noise: NoiseModel = field(default_factory=NoiseModel)

    def __post_init__(self):
        if self.code not in CODE_KINDS:
            raise ConfigError(f"code must be one of {CODE_KINDS}, got {self.code!r}")
        if self.partition not in PARTITION_KINDS:
            raise ConfigError(
                f"partition must be one of {PARTITION_KINDS}, got {self.partition!r}"
            )
        for name in ("lx", "ly", "bb_ell", "bb_m", "nodes", "channels_per_node",
                     "shots", "cycles"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.distill_rounds < 0:
            raise ConfigError(f"distill_rounds must be >= 0, got {self.distill_rounds}")
        if self.code == "matrix" and not (self.hx_file and self.hz_file):
            raise ConfigError("code = matrix needs hx_file and hz_file")
        for p in self.p_checks:
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"p_checks entry {p} outside [0, 1]")
        for label in self.lattices:
            _parse_lattice(label)
        for eta in self.eta_sweep:
            if not 0.0 < eta <= 1.0:
                raise ConfigError(f"eta_sweep entry {eta} outside (0, 1]")

    # construction --------------------------------------------------------

    def build_code(self) -> CssCode | None:
        """The parent CSS code, or None for the native honeycomb path."""
        if self.code == "honeycomb":
            return None
        if self.code == "bb":
            spec = BivariateSpec(self.bb_ell, self.bb_m,
                                 parse_poly(self.bb_a), parse_poly(self.bb_b))
            return build_bb_code(spec)
        return CssCode.from_checks(BinaryMatrix.load(self.hx_file),
                                   BinaryMatrix.load(self.hz_file))

    def build_schedule(self) -> CheckSchedule:
        if self.code == "honeycomb":
            return honeycomb_schedule(build_honeycomb(self.lx, self.ly))
        return pairwise_decompose(self.build_code())

    def build_partition(self, n: int) -> NodePartition:
        kind = self.partition
        if kind == "auto":
            if self.nodes == 1:
                kind = "single"
            elif self.code == "honeycomb" and self.nodes == 2:
                kind = "bisect"
            else:
                kind = "blocks"
        if kind == "single":
            return single_node(n, self.channels_per_node)
        if kind == "bisect":
            if self.code != "honeycomb" or self.nodes != 2:
                raise ConfigError("partition = bisect needs a honeycomb code and nodes = 2")
            return bisect_lattice(build_honeycomb(self.lx, self.ly),
                                  self.channels_per_node)
        if kind == "blocks":
            return block_partition(n, self.nodes, self.channels_per_node)
        return round_robin(n, self.nodes, self.channels_per_node)

    def lattice_schedules(self) -> dict:
        """label -> honeycomb schedule, for the Monte Carlo sweep axes."""
        out = {}
        for label in self.lattices:
            lx, ly = _parse_lattice(label)
            out[label] = honeycomb_schedule(build_honeycomb(lx, ly))
        return out


# parsing -------------------------------------------------------------------

_INT_KEYS = ("lx", "ly", "bb_ell", "bb_m", "nodes", "channels_per_node",
             "distill_rounds", "shots", "cycles", "seed")
_STR_KEYS = ("code", "bb_a", "bb_b", "hx_file", "hz_file", "partition", "out")


def parse_config(text: str) -> dict:
    """Raw key -> string value mapping, with line-level diagnostics."""
    pairs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _convert(key: str, value: str, kind, item=None):
    try:
        if kind is tuple:
            return tuple(item(part) for part in _split_list(value))
        return kind(value)
    except ConfigError:
        raise
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None


def config_from_mapping(pairs: dict) -> ExperimentConfig:
    """Typed config from raw string pairs; unknown keys rejected by name."""
    kwargs: dict = {}
    overrides: dict = {}
    noise: dict = {}
    for key, value in pairs.items():
        if key in _INT_KEYS:
            kwargs[key] = _convert(key, value, int)
        elif key in _STR_KEYS:
            kwargs[key] = value
        elif key == "p_checks":
            kwargs[key] = _convert(key, value, tuple, float)
        elif key == "eta_sweep":
            kwargs[key] = _convert(key, value, tuple, float)
        elif key == "lattices":
            kwargs[key] = tuple(_split_list(value))
        elif key in PARAM_KEYS:
            name, scale = PARAM_KEYS[key]
            overrides[name] = _convert(key, value, float) * scale
        elif key in NOISE_KEYS:
            noise[key] = _convert(key, value, float)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    try:
        kwargs["params"] = PhysicalParams().override(**overrides)
        kwargs["noise"] = NoiseModel(**noise)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_mapping(parse_config(fh.read()))


def dump_config(cfg: ExperimentConfig) -> str:
    """Round-trippable text for the resolved config, in declaration order."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "params":
            for key, (name, scale) in PARAM_KEYS.items():
                lines.append(f"{key} = {getattr(value, name) / scale:.12g}")
        elif f.name == "noise":
            for key in NOISE_KEYS:
                lines.append(f"{key} = {getattr(value, key):.12g}")
        elif isinstance(value, tuple):
            lines.append(f"{f.name} = {','.join(str(v) for v in value)}")
        elif value != "":  # unset paths have no value to record
            lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"
