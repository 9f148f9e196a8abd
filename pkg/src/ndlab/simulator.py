"""Event-driven discovery simulation with a pure-ALOHA collision model.

An independent replay engine: it never consults the coverage machinery, so
agreement between the two is a meaningful check.  Transmissions of
different devices that overlap in time destroy each other for every
receiver; a device that transmits while scanning cannot hear for the
turnaround-padded duration of its own beacon.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import intervals as iv
from .coverage import effective_window_spans
from .errors import DomainError
from .schedule import ProtocolSpec, Semantics, transmission_duty_cycle


class OffsetSampling(Enum):
    UNIFORM_RANDOM = "uniform_random"
    EXHAUSTIVE_TICKS = "exhaustive_ticks"


@dataclass(frozen=True)
class SimConfig:
    """devices[0] is the joining transmitter, devices[1] the receiver that
    should discover it; any further devices are interfering senders."""

    devices: tuple[ProtocolSpec, ...]
    trials: int = 1
    seed: int = 0
    horizon: int | None = None
    offset_sampling: OffsetSampling = OffsetSampling.UNIFORM_RANDOM
    latency_budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "devices", tuple(self.devices))
        if len(self.devices) < 2:
            raise ValueError("need at least a transmitter and a receiver")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.horizon is not None:
            if self.horizon < max(d.device_period for d in self.devices):
                raise ValueError("horizon must cover the largest device period")


@dataclass(frozen=True)
class SimOutcome:
    phases: tuple[tuple[int, ...], ...]
    latencies: tuple[int | None, ...]
    first_beacon_collided: tuple[bool, ...]
    covering_beacon_collided: tuple[bool | None, ...]
    failed: tuple[bool, ...]
    latency_budget: int | None

    @property
    def trials(self) -> int:
        return len(self.latencies)

    @property
    def failure_rate(self) -> Fraction:
        return Fraction(sum(self.failed), self.trials)

    @property
    def first_collision_rate(self) -> Fraction:
        return Fraction(sum(self.first_beacon_collided), self.trials)


# ---------------------------------------------------------------------------
# one device's timeline
# ---------------------------------------------------------------------------

class _Device:
    def __init__(self, spec: ProtocolSpec, phase: int):
        self.spec = spec
        self.phase = phase
        self.omega = spec.beacons.beacon_duration
        b = spec.beacons
        self.has_beacons = b.count > 0
        self.t_b = b.period if b.repetitive else None
        self.taus = b.emission_times
        r = spec.radio
        self.t_c = spec.receptions.period
        # own transmissions block reception from turnaround-before to
        # turnaround-after the beacon
        if self.has_beacons and self.t_b is not None:
            spans = []
            for tau in self.taus:
                spans.append((tau - r.d_oRxTx, tau + self.omega + r.d_oTxRx))
            self.blocked = _mod_spans(spans, self.t_b)
        else:
            self.blocked = ()
        self._eff_cache: dict[int, tuple] = {}

    def emissions_after(self, t_max: int):
        """Global emission start times in (0, t_max], sorted."""
        if not self.has_beacons:
            return []
        out = []
        if self.t_b is None:
            for tau in self.taus:
                t = tau - self.phase
                if 0 < t <= t_max:
                    out.append(t)
        else:
            for tau in self.taus:
                t = (tau - self.phase - 1) % self.t_b + 1
                while t <= t_max:
                    out.append(t)
                    t += self.t_b
        out.sort()
        return out

    def transmits_overlapping(self, t: int, width: int) -> bool:
        """True when any of this device's beacons (running forever) overlaps
        the global interval [t, t + width)."""
        if not self.has_beacons:
            return False
        lo = t - self.omega + 1  # earliest start that still overlaps
        span = width + self.omega - 1  # number of candidate start ticks
        if self.t_b is None:
            return any(lo <= tau - self.phase < lo + span for tau in self.taus)
        if span >= self.t_b:
            return True
        for tau in self.taus:
            if ((tau - self.phase - lo) % self.t_b) < span:
                return True
        return False

    def hears(self, t: int, tx_omega: int, self_blocking: bool) -> bool:
        """Whether a remote beacon starting at global t is received."""
        spec = self.spec
        eff = self._eff_cache.get(tx_omega)
        if eff is None:
            eff = effective_window_spans(spec.receptions, spec.radio.semantics, tx_omega)
            self._eff_cache[tx_omega] = eff
        u = (self.phase + t) % self.t_c
        if not iv.contains(eff, u):
            return False
        if self_blocking and self.blocked:
            v = (self.phase + t) % self.t_b
            if spec.radio.semantics is Semantics.CONTAINED:
                probe = _mod_spans([(v, v + tx_omega)], self.t_b)
                return not iv.intersect(probe, self.blocked)
            return not iv.contains(self.blocked, v)
        return True


def _mod_spans(spans, period: int) -> tuple[tuple[int, int], ...]:
    """Reduce absolute spans onto a circle of the given period."""
    out = []
    for a, b in spans:
        length = b - a
        if length <= 0:
            continue
        if length >= period:
            return ((0, period),)
        s = a % period
        if s + length <= period:
            out.append((s, s + length))
        else:
            out.append((s, period))
            out.append((0, s + length - period))
    return iv.normalize(out)


# ---------------------------------------------------------------------------
# pairwise simulation
# ---------------------------------------------------------------------------

def _one_direction(tx: _Device, rx: _Device, horizon: int, self_blocking: bool):
    for t in tx.emissions_after(horizon):
        if rx.hears(t, tx.omega, self_blocking):
            return t
    return None


def simulate_pair(
    e: ProtocolSpec,
    f: ProtocolSpec,
    phase_e: int = 0,
    phase_f: int = 0,
    horizon: int | None = None,
    self_blocking: bool = True,
) -> tuple[int | None, int | None]:
    """Replay both devices from the in-range instant at the given phases.

    Returns (latency of f hearing e, latency of e hearing f); None when a
    direction does not succeed within the horizon.
    """
    if horizon is None:
        horizon = 2 * lcm(e.device_period, f.device_period)
    dev_e = _Device(e, phase_e)
    dev_f = _Device(f, phase_f)
    lat_ef = _one_direction(dev_e, dev_f, horizon, self_blocking)
    lat_fe = _one_direction(dev_f, dev_e, horizon, self_blocking)
    return lat_ef, lat_fe


def exhaustive_pair_worst_case(
    e: ProtocolSpec,
    f: ProtocolSpec,
    horizon: int | None = None,
    self_blocking: bool = False,
):
    """Worst f-hears-e latency over every pair of device phases.

    Without self-blocking that direction only depends on the transmitter
    phase modulo its beacon period and the receiver phase modulo its
    reception period, so those grids are swept.  None when some phase pair
    never discovers within the horizon.
    """
    worst = 0
    p_e = e.beacons.period if (e.beacons.repetitive and not self_blocking) else e.device_period
    p_f = f.receptions.period if not self_blocking else f.device_period
    if horizon is None:
        horizon = 2 * lcm(e.device_period, f.device_period)
    eff_cache: dict[int, _Device] = {}
    for pe in range(p_e):
        dev_e = _Device(e, pe)
        emissions = dev_e.emissions_after(horizon)
        if not emissions:
            return None
        for pf in range(p_f):
            dev_f = eff_cache.get(pf)
            if dev_f is None:
                dev_f = _Device(f, pf)
                eff_cache[pf] = dev_f
            lat = None
            for t in emissions:
                if dev_f.hears(t, dev_e.omega, self_blocking):
                    lat = t
                    break
            if lat is None:
                return None
            worst = max(worst, lat)
    return worst


# ---------------------------------------------------------------------------
# multi-device simulation
# ---------------------------------------------------------------------------

def _derive_seed(seed: int, trial: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + trial * 0xBF58476D1CE4E5B9 + 1) % (1 << 64)


def _run_trial(cfg: SimConfig, phases: Sequence[int], horizon: int):
    devices = [_Device(spec, ph) for spec, ph in zip(cfg.devices, phases)]
    joiner, receiver = devices[0], devices[1]
    others = devices[1:]

    emissions = joiner.emissions_after(horizon)
    if not emissions:
        return None, False, None, True

    first = emissions[0]
    first_collided = any(d.transmits_overlapping(first, joiner.omega) for d in others)

    latency = None
    covering_collided = None
    for t in emissions:
        if not receiver.hears(t, joiner.omega, self_blocking=True):
            continue
        collided = any(d.transmits_overlapping(t, joiner.omega) for d in others)
        if covering_collided is None:
            covering_collided = collided
        if not collided:
            latency = t
            break

    budget = cfg.latency_budget
    failed = latency is None or (budget is not None and latency > budget)
    return latency, first_collided, covering_collided, failed


def simulate_multi(cfg: SimConfig) -> SimOutcome:
    """Seeded multi-device trials; identical config and seed give an
    identical outcome regardless of ND_LAB_THREADS."""
    import random

    if cfg.offset_sampling is OffsetSampling.EXHAUSTIVE_TICKS:
        return _simulate_exhaustive(cfg)

    horizon = cfg.horizon or 4 * max(d.device_period for d in cfg.devices)
    periods = [d.device_period for d in cfg.devices]

    def trial(i: int):
        rng = random.Random(_derive_seed(cfg.seed, i))
        phases = tuple(rng.randrange(p) for p in periods)
        return phases, _run_trial(cfg, phases, horizon)

    workers = int(os.environ.get("ND_LAB_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(trial, range(cfg.trials), chunksize=256))
    else:
        results = [trial(i) for i in range(cfg.trials)]

    phases = tuple(r[0] for r in results)
    lat = tuple(r[1][0] for r in results)
    first = tuple(r[1][1] for r in results)
    cover = tuple(r[1][2] for r in results)
    failed = tuple(r[1][3] for r in results)
    return SimOutcome(phases, lat, first, cover, failed, cfg.latency_budget)


def _simulate_exhaustive(cfg: SimConfig) -> SimOutcome:
    if len(cfg.devices) != 2:
        raise ValueError("exhaustive phase sweep supports exactly two devices")
    e, f = cfg.devices
    horizon = cfg.horizon or 2 * lcm(e.device_period, f.device_period)
    phases = []
    lat = []
    first = []
    cover = []
    failed = []
    for pe in range(e.device_period):
        for pf in range(f.device_period):
            ph = (pe, pf)
            res = _run_trial(cfg, ph, horizon)
            phases.append(ph)
            lat.append(res[0])
            first.append(res[1])
            cover.append(res[2])
            failed.append(res[3])
    return SimOutcome(
        tuple(phases), tuple(lat), tuple(first), tuple(cover), tuple(failed),
        cfg.latency_budget,
    )


# ---------------------------------------------------------------------------
# self-blocking of a device that both sends and listens
# ---------------------------------------------------------------------------

def self_blocking_probability(p: ProtocolSpec) -> Fraction:
    """Fraction of discovery attempts a device loses to its own beacons
    interrupting its reception windows: beta/omega times the blocked span
    per beacon (turnarounds plus the beacon itself)."""
    beta = transmission_duty_cycle(p.beacons)
    if beta == 0:
        return Fraction(0)
    gamma = Fraction(p.receptions.listen_ticks, p.receptions.period)
    if (1 / gamma).denominator != 1:
        raise DomainError("blocked-fraction analysis assumes gamma = 1/k")
    r = p.radio
    return beta * (r.d_oTxRx + r.d_oRxTx + r.omega) / r.omega


def measured_blocked_fraction(p: ProtocolSpec) -> Fraction:
    """Directly measured share of reception time the device's own
    transmissions make deaf, over one full period of its joint schedule."""
    if p.beacons.count == 0:
        return Fraction(0)
    if not p.beacons.repetitive:
        raise ValueError("measurement needs a repetitive beacon schedule")
    period = p.device_period
    t_b, t_c = p.beacons.period, p.receptions.period
    r = p.radio
    windows = []
    for m in range(period // t_c):
        for w in p.receptions.windows:
            windows.append((w.start + m * t_c, w.end + m * t_c))
    windows = iv.normalize(windows)
    blocked = []
    for n in range(period // t_b):
        for tau in p.beacons.emission_times:
            s = tau + n * t_b
            blocked.append((s - r.d_oRxTx, s + r.omega + r.d_oTxRx))
    blocked = _mod_spans(blocked, period)
    lost = iv.measure(iv.intersect(windows, blocked))
    return Fraction(lost, iv.measure(windows))
