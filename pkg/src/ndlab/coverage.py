"""Coverage maps, determinism analysis and the brute-force latency oracle.

A coverage map answers, for every initial offset of a transmitter's first
in-range beacon within the receiver's period, which beacon (if any) is the
first to land inside a reception window.  From it we get determinism,
redundancy, total coverage and worst-case discovery latency.

Two independent latency paths are provided: a full per-tick sweep (slow,
obviously correct) and an interval-algebra sweep that only tracks coverage
endpoints (fast).  They must always agree and the tests enforce that.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from math import ceil, lcm
from typing import Sequence

from . import intervals as iv
from .errors import HyperperiodTooLarge, InfeasibleError, MisalignedPeriods
from .schedule import ProtocolSpec, RadioModel, ReceptionSchedule, Semantics


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self):
        return self._name


#: Returned when an offset is never covered by any beacon of the sequence.
NOT_COVERED = _Sentinel("NOT_COVERED")
#: Returned when some alignment of the two devices never discovers.
UNBOUNDED = _Sentinel("UNBOUNDED")

DEFAULT_HYPERPERIOD_BUDGET = 10_000_000


def effective_window_spans(
    receptions: ReceptionSchedule, semantics: Semantics, omega: int
) -> tuple[tuple[int, int], ...]:
    """Window spans a beacon start may fall into and still be received.

    Under CONTAINED semantics a beacon starting in the last ``omega`` ticks
    of a window does not fit, so each span loses its tail; windows shorter
    than the beacon contribute nothing.
    """
    if semantics is Semantics.CONTAINED:
        spans = [(w.start, w.end - omega) for w in receptions.windows]
    else:
        spans = [(w.start, w.end) for w in receptions.windows]
    return iv.normalize(spans)


@dataclass(frozen=True)
class CoverageMap:
    """Per-beacon covered offset sets over one receiver period."""

    period: int
    per_beacon: tuple[tuple[tuple[int, int], ...], ...]
    beacon_offsets: tuple[int, ...]  # emission time of beacon i minus beacon 0's
    window_coverage: int  # ticks one beacon can cover (effective window sum)
    repetitive: bool

    def union(self) -> tuple[tuple[int, int], ...]:
        out: tuple[tuple[int, int], ...] = ()
        for spans in self.per_beacon:
            out = iv.union(out, spans)
        return out

    def csv_rows(self):
        for i, spans in enumerate(self.per_beacon):
            for a, b in spans:
                yield (i, a, b)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["beacon_index", "interval_start", "interval_end"])
            w.writerows(self.csv_rows())


@dataclass(frozen=True)
class DeterminismReport:
    deterministic: bool
    uncovered: tuple[tuple[int, int], ...]
    redundant: bool
    coverage_lambda: int
    min_beacons: int | None


def build_coverage_map(
    beacon_times: Sequence[int],
    receptions: ReceptionSchedule,
    radio: RadioModel,
) -> CoverageMap:
    """Covered offsets for each beacon of a finite sequence.

    Beacon 0 covers the window spans themselves; every later beacon covers
    the same spans shifted left by its distance to beacon 0.  In repetitive
    mode shifts wrap around the period; in horizon mode they simply slide
    off the end.
    """
    times = sorted(beacon_times)
    if not times:
        raise ValueError("need at least one beacon")
    base = effective_window_spans(receptions, radio.semantics, radio.omega)
    period = receptions.period
    offsets = tuple(t - times[0] for t in times)
    per_beacon = []
    for off in offsets:
        if receptions.repetitive:
            per_beacon.append(iv.shift_mod(base, off % period, period))
        else:
            shifted = iv.normalize((a - off, b - off) for a, b in base)
            per_beacon.append(iv.intersect(shifted, ((0, period),)))
    return CoverageMap(
        period=period,
        per_beacon=tuple(per_beacon),
        beacon_offsets=offsets,
        window_coverage=iv.measure(base),
        repetitive=receptions.repetitive,
    )


def analyze(cov: CoverageMap) -> DeterminismReport:
    """Determinism, redundancy and total coverage of a map."""
    events: list[tuple[int, int]] = []
    for spans in cov.per_beacon:
        for a, b in spans:
            events.append((a, 1))
            events.append((b, -1))
    events.sort()
    depth = 0
    redundant = False
    for _, delta in events:
        depth += delta
        if depth >= 2:
            redundant = True
            break
    coverage_lambda = sum(iv.measure(spans) for spans in cov.per_beacon)
    uncovered = iv.complement(cov.union(), cov.period)
    min_b = None
    if cov.window_coverage > 0:
        min_b = ceil(cov.period / cov.window_coverage)
    return DeterminismReport(
        deterministic=not uncovered,
        uncovered=uncovered,
        redundant=redundant,
        coverage_lambda=coverage_lambda,
        min_beacons=min_b,
    )


def min_beacons(receptions: ReceptionSchedule, radio: RadioModel) -> int:
    """Fewest beacons that could possibly cover every initial offset.

    Each beacon covers at most the effective window sum, so at least
    period / coverage beacons are needed.  Necessary, not sufficient.
    """
    eff = effective_window_spans(receptions, radio.semantics, radio.omega)
    cover = iv.measure(eff)
    if cover <= 0:
        raise InfeasibleError("no window can contain a whole beacon")
    return ceil(receptions.period / cover)


def beacon_to_beacon_latency(cov: CoverageMap, phi1: int):
    """Latency from the first in-range beacon to the first received one,
    for a given offset of that first beacon.  NOT_COVERED if no beacon of
    the sequence ever lands."""
    if not 0 <= phi1 < cov.period:
        raise ValueError("phi1 must lie in [0, period)")
    for spans, off in zip(cov.per_beacon, cov.beacon_offsets):
        if iv.contains(spans, phi1):
            return off
    return NOT_COVERED


# ---------------------------------------------------------------------------
# worst-case latency oracle
# ---------------------------------------------------------------------------

def _oracle_setup(e: ProtocolSpec, f: ProtocolSpec, max_hyperperiod: int):
    b = e.beacons
    if b.count == 0:
        return None  # a silent device is never discovered
    if not b.repetitive:
        raise ValueError("the oracle needs a repetitive beacon schedule")
    if not f.receptions.repetitive:
        raise ValueError("the oracle needs a repetitive reception schedule")
    t_b, t_c = b.period, f.receptions.period
    hyper = lcm(t_b, t_c)
    if hyper > max_hyperperiod:
        raise HyperperiodTooLarge(hyper, max_hyperperiod)
    eff = effective_window_spans(f.receptions, f.radio.semantics, b.beacon_duration)
    gaps = b.gaps()
    n_scan = b.count * (hyper // t_b)  # shifts repeat after one hyperperiod
    return t_c, eff, gaps, n_scan


def _first_hit_steps(eff, starts, t_c, gaps, j, phi, n_scan):
    """Scan beacons j, j+1, ... until one covers offset phi; return the
    elapsed emission-time offset or None.  Beacon j+i lands at phi plus the
    accumulated gaps, wrapped into the receiver period."""
    m = len(gaps)
    shift = 0
    pos = phi
    for i in range(n_scan + 1):
        k = bisect_right(starts, pos) - 1
        if k >= 0 and pos < eff[k][1]:
            return shift
        g = gaps[(j + i) % m]
        shift += g
        pos = (phi + shift) % t_c
    return None


def worst_case_latency_oracle(
    e: ProtocolSpec,
    f: ProtocolSpec,
    method: str = "full",
    max_hyperperiod: int = DEFAULT_HYPERPERIOD_BUDGET,
):
    """Exact worst-case discovery latency of ``f`` hearing ``e``.

    Sweeps every alignment of the two periodic schedules and every in-range
    instant.  A beacon whose transmission starts exactly at the in-range
    instant is already in flight and does not count, which makes the
    discrete maximum equal the continuous-time supremum.  Latency is
    counted up to the start of the first received beacon.

    Returns ticks, or UNBOUNDED when some alignment never discovers.
    """
    setup = _oracle_setup(e, f, max_hyperperiod)
    if setup is None:
        return UNBOUNDED
    t_c, eff, gaps, n_scan = setup
    if iv.measure(eff) == 0:
        return UNBOUNDED
    if method == "full":
        return _oracle_full(t_c, eff, gaps, n_scan)
    if method == "endpoints":
        return _oracle_endpoints(t_c, eff, gaps, n_scan)
    raise ValueError(f"unknown oracle method: {method!r}")


def _oracle_full(t_c, eff, gaps, n_scan):
    starts = [a for a, _ in eff]
    m = len(gaps)
    best = 0
    for j in range(m):
        wait = gaps[(j - 1) % m]
        worst = 0
        for phi in range(t_c):
            hit = _first_hit_steps(eff, starts, t_c, gaps, j, phi, n_scan)
            if hit is None:
                return UNBOUNDED
            if hit > worst:
                worst = hit
        if wait + worst > best:
            best = wait + worst
    return best


def _oracle_endpoints(t_c, eff, gaps, n_scan):
    # The first-hit latency is piecewise constant in the offset, and each
    # piece is bounded by shifted window endpoints; tracking the not yet
    # covered region interval-wise therefore finds the exact maximum.
    m = len(gaps)
    best = 0
    full = ((0, t_c),)
    for j in range(m):
        wait = gaps[(j - 1) % m]
        remaining = full
        shift = 0
        worst = None
        for i in range(n_scan + 1):
            spans = iv.shift_mod(eff, shift % t_c, t_c)
            if iv.intersect(remaining, spans):
                worst = shift
                remaining = iv.subtract(remaining, spans)
                if not remaining:
                    break
            shift += gaps[(j + i) % m]
        if remaining:
            return UNBOUNDED
        if wait + worst > best:
            best = wait + worst
    return best


def pairwise_latency(
    e: ProtocolSpec,
    f: ProtocolSpec,
    phase_e: int,
    phase_f: int,
    max_hyperperiod: int = DEFAULT_HYPERPERIOD_BUDGET,
):
    """Discovery latency for one concrete pair of device phases.

    ``phase_x`` is how far device x already is into its own schedule at the
    instant the two radios come into range.  Returns ticks or NOT_COVERED.
    """
    setup = _oracle_setup(e, f, max_hyperperiod)
    if setup is None:
        return NOT_COVERED
    t_c, eff, gaps, n_scan = setup
    if iv.measure(eff) == 0:
        return NOT_COVERED
    b = e.beacons
    t_b = b.period
    # first emission strictly after the in-range instant
    first = None
    for idx, tau in enumerate(b.emission_times):
        t = (tau - phase_e - 1) % t_b + 1
        if first is None or t < first[0]:
            first = (t, idx)
    t0, j = first
    phi = (phase_f + t0) % t_c
    starts = [a for a, _ in eff]
    hit = _first_hit_steps(eff, starts, t_c, gaps, j, phi, n_scan)
    if hit is None:
        return NOT_COVERED
    return t0 + hit


# ---------------------------------------------------------------------------
# correlated beacon/window pairs (mutually exclusive one-way discovery)
# ---------------------------------------------------------------------------

def _anchored_zeta(p: ProtocolSpec) -> set[int]:
    """Offsets of each beacon behind each window end, modulo the period."""
    t = p.receptions.period
    out = set()
    for tau in p.beacons.emission_times:
        for w in p.receptions.windows:
            out.add((tau - w.end) % t)
    return out


def check_correlated_quadruple(
    e: ProtocolSpec, f: ProtocolSpec, zeta: int
) -> DeterminismReport:
    """Determinism of one-way discovery for two devices whose beacons keep a
    fixed distance ``zeta`` behind a window of their own schedule.

    Locking beacons to windows makes the two directions mirror images of a
    single relative alignment, so it is enough that the offsets where f's
    beacons hit e's windows and the reflected offsets where e's beacons hit
    f's windows jointly cover one period.  Offsets are reported as the
    position of f's period origin inside e's period.
    """
    t = e.receptions.period
    for p, name in ((e, "e"), (f, "f")):
        if p.receptions.period != t or p.beacons.period != t:
            raise MisalignedPeriods("all four sequences must share one period")
        if p.beacons.count == 0:
            raise ValueError(f"device {name} has no beacons")
        if zeta % t not in _anchored_zeta(p):
            raise ValueError(f"device {name} has no beacon at zeta after a window end")

    eff_e = effective_window_spans(e.receptions, e.radio.semantics, f.radio.omega)
    eff_f = effective_window_spans(f.receptions, f.radio.semantics, e.radio.omega)

    # f's beacon at tau lands in e's window [a, b) when the alignment theta
    # lies in [a - tau, b - tau); e's beacon at tau lands in f's window when
    # theta lies in the reflection [tau - b + 1, tau - a + 1).
    images = [
        iv.shift_mod(eff_e, tau % t, t) for tau in f.beacons.emission_times
    ] + [
        iv.reflect_mod(eff_f, tau, t) for tau in e.beacons.emission_times
    ]
    union: tuple[tuple[int, int], ...] = ()
    events = []
    for spans in images:
        union = iv.union(union, spans)
        for a, b in spans:
            events.append((a, 1))
            events.append((b, -1))
    events.sort()
    depth = 0
    redundant = False
    for _, delta in events:
        depth += delta
        if depth >= 2:
            redundant = True
            break
    uncovered = iv.complement(union, t)
    lam = sum(iv.measure(spans) for spans in images)
    cover = iv.measure(eff_e)
    return DeterminismReport(
        deterministic=not uncovered,
        uncovered=uncovered,
        redundant=redundant,
        coverage_lambda=lam,
        min_beacons=ceil(t / cover) if cover else None,
    )


def quadruple_sides(e: ProtocolSpec, f: ProtocolSpec):
    """The two coverage sets of check_correlated_quadruple, before union."""
    t = e.receptions.period
    eff_e = effective_window_spans(e.receptions, e.radio.semantics, f.radio.omega)
    eff_f = effective_window_spans(f.receptions, f.radio.semantics, e.radio.omega)
    omega_f: tuple[tuple[int, int], ...] = ()
    for tau in f.beacons.emission_times:
        omega_f = iv.union(omega_f, iv.shift_mod(eff_e, tau % t, t))
    omega_e: tuple[tuple[int, int], ...] = ()
    for tau in e.beacons.emission_times:
        omega_e = iv.union(omega_e, iv.reflect_mod(eff_f, tau, t))
    return omega_f, omega_e
