"""Generation throughput for a 20-path, 50-ray, 2x2 configuration.

    python scripts/throughput.py --samples 100000
"""
import argparse
import dataclasses
import math
import time

import numba

from v2vsim import (AntennaArray, ClusterGeometry, PowerDelayParams, SimulationConfig, Terminal,
                    VelocityProfile, simulate)
from v2vsim.phase import wavelength


def build(samples, rate=1e4, paths=20, rays=50):
    array = AntennaArray.linear_y(2, wavelength(2.48e9) / 2)
    pair = (ClusterGeometry(100.0, math.pi / 4), ClusterGeometry(100.0, 3 * math.pi / 4))
    return SimulationConfig(
        carrier_freq=2.48e9, duration=samples / rate, rays=rays, seed=1,
        mt=Terminal(VelocityProfile(10.0, 0.0, 0.0, 0.0), array),
        mr=Terminal(VelocityProfile(10.0, 0.0, math.pi, 0.0), array),
        clusters=(pair,) * paths, power_delay=PowerDelayParams(), sample_rate=rate,
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    cfg = build(args.samples)
    simulate(dataclasses.replace(cfg, duration=0.01))
    best = math.inf
    for _ in range(args.repeat):
        start = time.perf_counter()
        s = simulate(cfg)
        best = min(best, time.perf_counter() - start)
    print(f"{len(s)} samples x {cfg.paths} paths x {cfg.rays} rays x 2x2 in {best:.2f} s "
          f"({numba.get_num_threads()} threads)")


if __name__ == "__main__":
    main()
