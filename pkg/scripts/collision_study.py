#!/usr/bin/env python3
"""Monte-Carlo first-beacon collision rates vs. the closed-form model for
growing sender counts."""

import math
import sys
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ndlab import (
    BeaconSchedule,
    ProtocolSpec,
    RadioModel,
    ReceptionSchedule,
    ReceptionWindow,
    SimConfig,
    simulate_multi,
)
from ndlab.bounds import collision_probability

BETA = F(1, 200)
OMEGA = 100
PERIOD = 20000  # omega/beta
TRIALS = 100_000


def sender() -> ProtocolSpec:
    return ProtocolSpec(
        BeaconSchedule((0,), OMEGA, period=PERIOD),
        ReceptionSchedule((ReceptionWindow(0, 1),), PERIOD),
        RadioModel(omega=OMEGA),
    )


def receiver() -> ProtocolSpec:
    return ProtocolSpec(
        BeaconSchedule((), OMEGA, period=None),
        ReceptionSchedule((ReceptionWindow(0, PERIOD),), PERIOD),
        RadioModel(omega=OMEGA),
    )


def main() -> None:
    print(f"beta = {float(BETA)}, trials = {TRIALS}")
    print(f"{'S':>3} {'empirical':>10} {'model':>10} {'diff/sigma':>10} {'secs':>6}")
    for s in (2, 3, 5, 10, 20):
        devices = tuple([sender(), receiver()] + [sender() for _ in range(s - 1)])
        start = time.monotonic()
        out = simulate_multi(SimConfig(devices, trials=TRIALS, seed=42, horizon=10 * PERIOD))
        elapsed = time.monotonic() - start
        emp = float(out.first_collision_rate)
        model = collision_probability(s, BETA)
        sigma = math.sqrt(model * (1 - model) / TRIALS)
        print(f"{s:>3} {emp:>10.5f} {model:>10.5f} {abs(emp - model) / sigma:>10.2f} {elapsed:>6.1f}")


if __name__ == "__main__":
    main()
