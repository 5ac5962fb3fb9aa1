"""Loading and writing simulation configurations.

Documents are TOML with flat dotted keys (``mt.speed = 10``); ``[mt]``-style
tables are equivalent. Recognized keys:

==========================  ====================================================
``preset``                  base scenario; other keys override it
``carrier_freq``            Hz
``sample_rate``             Hz; omit for the Doppler-derived default
``duration``                s
``paths``                   number of paths N
``rays``                    rays per path M
``seed``                    non-negative integer
``power_as_amplitude``      weight gains by P_n (true) or sqrt(P_n) (false)
``los``                     must be false; no line-of-sight model exists
``mt.*`` / ``mr.*``         ``speed``, ``acceleration``, ``heading``,
                            ``turn_rate``, ``kappa``, and either ``antennas``
                            plus ``antenna_spacing`` (m, ULA along y) or
                            ``elements`` (list of ``[x, y]`` in m)
``clusters.*``              ``mt_distance``, ``mt_angle``, ``mr_distance``,
                            ``mr_angle``; a scalar applies to every path, a
                            list gives one value per path
``power.*``                 ``r_tau``, ``sigma_tau``, ``shadow_std_db``,
                            ``virtual_delay`` (scalar or per-path list),
                            ``coherence_time``, ``innovation_std``
==========================  ====================================================

Filled-in defaults are reported on the ``v2vsim.provenance`` logger.
"""
from __future__ import annotations

import logging
import math
import re
import sys
from typing import Any, Dict, Optional

from .chanmodel import SimulationConfig, Terminal
from .errors import ConfigError, DomainError
from .geometry import AntennaArray, ClusterGeometry, VelocityProfile
from .params import PowerDelayParams
from .presets import PRESETS, preset

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("v2vsim.provenance")

_TOP = ("preset", "carrier_freq", "sample_rate", "duration", "paths", "rays", "seed",
        "power_as_amplitude", "los")
_TERMINAL = ("speed", "acceleration", "heading", "turn_rate", "kappa", "antennas",
             "antenna_spacing", "elements")
_CLUSTER = ("mt_distance", "mt_angle", "mr_distance", "mr_angle")
_POWER = ("r_tau", "sigma_tau", "shadow_std_db", "virtual_delay", "coherence_time",
          "innovation_std")
KNOWN_KEYS = frozenset(
    list(_TOP)
    + [f"{side}.{k}" for side in ("mt", "mr") for k in _TERMINAL]
    + [f"clusters.{k}" for k in _CLUSTER]
    + [f"power.{k}" for k in _POWER]
)
_REQUIRED = ("carrier_freq", "duration", "rays") + tuple(f"clusters.{k}" for k in _CLUSTER)

_DEFAULTS: Dict[str, Any] = {
    "seed": 0,
    "power_as_amplitude": True,
    "los": False,
    "paths": None,
    "sample_rate": None,
    **{f"{side}.{k}": 0.0 for side in ("mt", "mr")
       for k in ("speed", "acceleration", "heading", "turn_rate")},
    "mt.kappa": 1.0,
    "mr.kappa": 1.0,
    **{f"power.{k}": getattr(PowerDelayParams(), k) for k in _POWER},
}
_DEFAULTS["power.virtual_delay"] = 0.0


def _flatten(table: dict, prefix: str = "") -> Dict[str, Any]:
    flat = {}
    for key, value in table.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _parse(text: str) -> Dict[str, Any]:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r"line (\d+), column (\d+)", str(exc))
        err = ConfigError(f"config parse error: {exc}")
        err.line, err.column = (int(match[1]), int(match[2])) if match else (None, None)
        raise err from None
    flat = _flatten(doc)
    unknown = sorted(set(flat) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return flat


def _per_path(name: str, value, paths: int):
    if isinstance(value, (list, tuple)):
        if len(value) != paths:
            raise ConfigError(f"{name} has {len(value)} entries for {paths} paths")
        return [float(v) for v in value]
    return [float(value)] * paths


def _array(flat: Dict[str, Any], side: str) -> AntennaArray:
    elements = flat.get(f"{side}.elements")
    count = flat.get(f"{side}.antennas")
    if elements is not None:
        if count is not None:
            raise ConfigError(f"give either {side}.elements or {side}.antennas, not both")
        return AntennaArray(tuple(tuple(e) for e in elements))
    count = 1 if count is None else int(count)
    spacing = flat.get(f"{side}.antenna_spacing")
    if spacing is None:
        if count > 1:
            raise ConfigError(f"{side}.antenna_spacing is required when {side}.antennas > 1")
        spacing = 0.0
    if count < 1:
        raise ConfigError(f"{side}.antennas must be >= 1, got {count}")
    return AntennaArray.linear_y(count, float(spacing))


def _build(flat: Dict[str, Any]) -> SimulationConfig:
    missing = [k for k in _REQUIRED if k not in flat]
    if missing:
        raise ConfigError(f"missing required config keys: {', '.join(missing)}")
    for key, value in _DEFAULTS.items():
        if key not in flat:
            if value is not None:
                log.info("%s = %r (default)", key, value)
            flat[key] = value

    paths = flat["paths"]
    if paths is None:
        lists = [len(flat[f"clusters.{k}"]) for k in _CLUSTER
                 if isinstance(flat[f"clusters.{k}"], (list, tuple))]
        paths = lists[0] if lists else 1
    paths = int(paths)
    if paths < 1:
        raise ConfigError(f"paths must be >= 1, got {paths}")

    cols = [_per_path(f"clusters.{k}", flat[f"clusters.{k}"], paths) for k in _CLUSTER]
    vd = flat["power.virtual_delay"]
    vd = tuple(_per_path("power.virtual_delay", vd, paths)) if isinstance(vd, (list, tuple)) else float(vd)

    terminals = {}
    for side in ("mt", "mr"):
        profile = VelocityProfile(*(float(flat[f"{side}.{k}"])
                                    for k in ("speed", "acceleration", "heading", "turn_rate")))
        terminals[side] = Terminal(profile, _array(flat, side), float(flat[f"{side}.kappa"]))
    power = PowerDelayParams(
        r_tau=float(flat["power.r_tau"]),
        sigma_tau=float(flat["power.sigma_tau"]),
        shadow_std_db=float(flat["power.shadow_std_db"]),
        virtual_delay=vd,
        coherence_time=float(flat["power.coherence_time"]),
        innovation_std=float(flat["power.innovation_std"]),
    )
    sr = flat["sample_rate"]
    return SimulationConfig(
        carrier_freq=float(flat["carrier_freq"]),
        duration=float(flat["duration"]),
        rays=int(flat["rays"]),
        seed=int(flat["seed"]),
        mt=terminals["mt"],
        mr=terminals["mr"],
        clusters=tuple((ClusterGeometry(dm, am), ClusterGeometry(dr, ar))
                       for dm, am, dr, ar in zip(*cols)),
        power_delay=power,
        sample_rate=None if sr is None else float(sr),
        power_as_amplitude=bool(flat["power_as_amplitude"]),
        los=bool(flat["los"]),
    )


def config_to_flat(config: SimulationConfig) -> Dict[str, Any]:
    """Complete flat key map describing ``config``."""
    flat: Dict[str, Any] = {
        "carrier_freq": config.carrier_freq,
        "duration": config.duration,
        "paths": config.paths,
        "rays": config.rays,
        "seed": config.seed,
        "power_as_amplitude": config.power_as_amplitude,
        "los": config.los,
    }
    if config.sample_rate is not None:
        flat["sample_rate"] = config.sample_rate
    for side, term in (("mt", config.mt), ("mr", config.mr)):
        p = term.profile
        flat.update({f"{side}.speed": p.speed, f"{side}.acceleration": p.acceleration,
                     f"{side}.heading": p.heading, f"{side}.turn_rate": p.turn_rate,
                     f"{side}.kappa": term.kappa,
                     f"{side}.elements": [list(e) for e in term.array.elements]})
    for k, idx, attr in (("mt_distance", 0, "distance"), ("mt_angle", 0, "mean_angle"),
                         ("mr_distance", 1, "distance"), ("mr_angle", 1, "mean_angle")):
        flat[f"clusters.{k}"] = [getattr(pair[idx], attr) for pair in config.clusters]
    pd = config.power_delay
    for k in _POWER:
        value = getattr(pd, k)
        flat[f"power.{k}"] = list(value) if isinstance(value, tuple) else value
    return flat


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dump_config(config: SimulationConfig) -> str:
    """TOML text that :func:`load_config` maps back to an equal config."""
    return "".join(f"{k} = {_toml_value(v)}\n" for k, v in config_to_flat(config).items())


def load_config(text: str, overrides: Optional[Dict[str, Any]] = None) -> SimulationConfig:
    """Parse and validate a configuration document.

    ``overrides`` (flat dotted keys) are applied after the document.
    """
    flat = _parse(text)
    if overrides:
        unknown = sorted(set(overrides) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        flat.update(overrides)
    name = flat.pop("preset", None)
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        base = config_to_flat(preset(name))
        if "paths" in flat and int(flat["paths"]) != base["paths"]:
            # per-path lists of the preset no longer fit; fall back to scalars
            for key in [f"clusters.{k}" for k in _CLUSTER] + ["power.virtual_delay"]:
                if key not in flat:
                    values = base[key]
                    if len(set(values)) > 1:
                        raise ConfigError(f"{key} must be given when paths differs from the preset")
                    base[key] = values[0]
        for side in ("mt", "mr"):
            if f"{side}.antennas" in flat:
                base.pop(f"{side}.elements")
        base.update(flat)
        flat = base
    try:
        return _build(flat)
    except (DomainError, TypeError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
