"""Named scenario presets.

The velocity values of the three scenarios are stand-ins with no published
source; each one is reported through the ``v2vsim.provenance`` logger when a
preset is built.
"""
from __future__ import annotations

import logging
import math
from typing import Dict

from .chanmodel import SimulationConfig, Terminal
from .geometry import AntennaArray, ClusterGeometry, VelocityProfile
from .params import PowerDelayParams
from .phase import wavelength

log = logging.getLogger("v2vsim.provenance")

CARRIER_FREQ = 2.48e9
KAPPA = 1.0
PATHS = 5
RAYS = 50
DURATION = 1.0
SPEED = 10.0
DISTANCE = 50.0
MT_ANGLE = math.pi / 4
MR_ANGLE = 3 * math.pi / 4
# virtual-link delay of path n is n * VIRTUAL_STEP
VIRTUAL_STEP = 30e-9

# per-scenario stand-ins: (MT acceleration, MT turn rate, MR acceleration, MR turn rate)
_MOTION: Dict[str, tuple] = {
    "opposite-direction-1": (0.0, 0.0, 0.0, 0.0),
    "opposite-direction-2": (0.0, 0.0, 2.0, 0.0),
    "right-turn": (0.0, 0.0, 0.0, 0.2),
}
PRESETS = tuple(_MOTION)


def _stand_in(name: str, key: str, value) -> None:
    log.info("%s: %s = %r (stand-in value, no published source)", name, key, value)


def preset(name: str, seed: int = 0) -> SimulationConfig:
    """Full configuration of the named scenario."""
    if name not in _MOTION:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    a_mt, b_mt, a_mr, b_mr = _MOTION[name]
    for key, value in (("mt.speed", SPEED), ("mr.speed", SPEED), ("mt.heading", 0.0),
                       ("mr.heading", math.pi), ("mt.acceleration", a_mt), ("mt.turn_rate", b_mt),
                       ("mr.acceleration", a_mr), ("mr.turn_rate", b_mr),
                       ("clusters.mt_distance", DISTANCE), ("clusters.mr_distance", DISTANCE),
                       ("clusters.mt_angle", MT_ANGLE), ("clusters.mr_angle", MR_ANGLE),
                       ("paths", PATHS), ("rays", RAYS)):
        _stand_in(name, key, value)
    half = wavelength(CARRIER_FREQ) / 2
    array = AntennaArray.linear_y(2, half)
    mt = Terminal(VelocityProfile(SPEED, a_mt, 0.0, b_mt), array, KAPPA)
    mr = Terminal(VelocityProfile(SPEED, a_mr, math.pi, b_mr), array, KAPPA)
    pair = (ClusterGeometry(DISTANCE, MT_ANGLE), ClusterGeometry(DISTANCE, MR_ANGLE))
    power = PowerDelayParams(virtual_delay=tuple(n * VIRTUAL_STEP for n in range(PATHS)))
    return SimulationConfig(
        carrier_freq=CARRIER_FREQ,
        duration=DURATION,
        rays=RAYS,
        seed=seed,
        mt=mt,
        mr=mr,
        clusters=(pair,) * PATHS,
        power_delay=power,
    )
