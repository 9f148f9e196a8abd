import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from ndlab import (
    NOT_COVERED,
    UNBOUNDED,
    BeaconSchedule,
    HyperperiodTooLarge,
    InfeasibleError,
    MisalignedPeriods,
    ProtocolSpec,
    RadioModel,
    ReceptionSchedule,
    ReceptionWindow,
    Semantics,
    analyze,
    beacon_to_beacon_latency,
    build_coverage_map,
    check_correlated_quadruple,
    min_beacons,
    pairwise_latency,
    worst_case_latency_oracle,
)
from ndlab.coverage import quadruple_sides
from ndlab.protocols import gen_optimal_unidirectional
from helpers import (
    absolute_first_hit,
    beaconer,
    listener,
    random_beacons,
    random_protocol,
    random_reception,
)

IDEAL = RadioModel(omega=1)


def rec(windows, period, repetitive=True):
    return ReceptionSchedule(
        tuple(ReceptionWindow(a, d) for a, d in windows), period, repetitive
    )


# ---------------------------------------------------------------------------
# map construction
# ---------------------------------------------------------------------------

def test_single_beacon_covers_window():
    cov = build_coverage_map([0], rec([(2, 3)], 10), IDEAL)
    assert cov.per_beacon == (((2, 5),),)


def test_second_beacon_shifts_left_and_wraps():
    cov = build_coverage_map([0, 4], rec([(2, 3)], 10), IDEAL)
    assert cov.per_beacon[0] == ((2, 5),)
    assert cov.per_beacon[1] == ((0, 1), (8, 10))


def test_contained_mode_drops_window_tail():
    radio = RadioModel(omega=1, semantics=Semantics.CONTAINED)
    cov = build_coverage_map([0], rec([(2, 3)], 10), radio)
    assert cov.per_beacon == (((2, 4),),)


def test_csv_rows():
    cov = build_coverage_map([0, 4], rec([(2, 3)], 10), IDEAL)
    assert list(cov.csv_rows()) == [(0, 2, 5), (1, 0, 1), (1, 8, 10)]


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_full_listening_is_deterministic_and_disjoint():
    cov = build_coverage_map([0], rec([(0, 12)], 12), IDEAL)
    rep = analyze(cov)
    assert rep.deterministic and not rep.redundant
    assert rep.coverage_lambda == 12
    assert rep.min_beacons == 1


def test_one_beacon_short_of_minimum_is_not_deterministic():
    # two unit windows per 8 ticks: at least 4 beacons needed
    r = rec([(0, 1), (4, 1)], 8)
    assert min_beacons(r, IDEAL) == 4
    times = [0, 1, 2]  # 3 equally spaced beacons
    rep = analyze(build_coverage_map(times, r, IDEAL))
    assert rep.coverage_lambda == 6 < 8
    assert not rep.deterministic


def test_redundant_seven_beacon_instance():
    # seven beacons against two unit windows per 8 ticks, shifts chosen so
    # the whole period is covered and most offsets twice
    r = rec([(0, 1), (4, 1)], 8)
    times = [0, 1, 2, 3, 8, 9, 10]
    cov = build_coverage_map(times, r, IDEAL)
    rep = analyze(cov)

    # independent oracle: count covering beacons per tick by direct replay
    mult = {phi: 0 for phi in range(8)}
    for phi in range(8):
        for tau in times:
            pos = (phi + tau) % 8
            if pos in (0, 4):
                mult[phi] += 1
    assert sum(mult.values()) == 14
    assert rep.coverage_lambda == 14
    assert rep.deterministic == all(m > 0 for m in mult.values()) is True
    assert rep.redundant == any(m > 1 for m in mult.values()) is True


def test_min_beacons_examples():
    assert min_beacons(rec([(0, 1), (4, 1)], 8), IDEAL) == 4
    assert min_beacons(rec([(0, 3)], 10), IDEAL) == 4
    assert min_beacons(rec([(0, 10)], 10), IDEAL) == 1


def test_min_beacons_contained_infeasible():
    radio = RadioModel(omega=5, semantics=Semantics.CONTAINED)
    with pytest.raises(InfeasibleError):
        min_beacons(rec([(0, 4)], 10), radio)


def test_min_beacons_contained_uses_effective_length():
    radio = RadioModel(omega=1, semantics=Semantics.CONTAINED)
    assert min_beacons(rec([(0, 3)], 10), radio) == 5  # ceil(10/2)


def test_min_beacons_nonrepetitive_horizon():
    r = rec([(0, 3), (10, 3)], 20, repetitive=False)
    # gamma = 6/20 -> ceil(1/gamma) = 4
    assert min_beacons(r, IDEAL) == 4


# ---------------------------------------------------------------------------
# beacon-to-beacon latency
# ---------------------------------------------------------------------------

def test_first_beacon_hit_latency_zero():
    cov = build_coverage_map([0, 4], rec([(2, 3)], 10), IDEAL)
    assert beacon_to_beacon_latency(cov, 2) == 0


def test_third_beacon_hit_sums_gaps():
    # windows such that only the third beacon covers the probed offset
    r = rec([(0, 1)], 10)
    times = [0, 3, 7]
    cov = build_coverage_map(times, r, IDEAL)
    assert beacon_to_beacon_latency(cov, 3) == 7  # lands at 3+7=10=0 mod 10
    assert beacon_to_beacon_latency(cov, 7) == 3


def test_uncovered_offset_reports_not_covered():
    cov = build_coverage_map([0], rec([(2, 3)], 10), IDEAL)
    assert beacon_to_beacon_latency(cov, 7) is NOT_COVERED


# ---------------------------------------------------------------------------
# worst-case oracle
# ---------------------------------------------------------------------------

def test_always_listening_worst_case_is_one_gap():
    e = beaconer([0], 7)
    f = listener([(0, 21)], 21)
    assert worst_case_latency_oracle(e, f) == 7
    assert worst_case_latency_oracle(e, f, method="endpoints") == 7


def test_non_deterministic_pair_is_unbounded():
    # beacon gap equal to the reception period: the same offsets forever
    e = beaconer([0], 10)
    f = listener([(0, 3)], 10)
    assert worst_case_latency_oracle(e, f) is UNBOUNDED
    assert worst_case_latency_oracle(e, f, method="endpoints") is UNBOUNDED


def test_generated_optimal_protocol_attains_bound():
    p = gen_optimal_unidirectional(4, F(1, 100), 1)
    assert worst_case_latency_oracle(p, p, method="full") == 400


def test_hyperperiod_budget_enforced():
    e = beaconer([0], 10_007)
    f = listener([(0, 4)], 9_973)
    with pytest.raises(HyperperiodTooLarge) as exc:
        worst_case_latency_oracle(e, f, max_hyperperiod=10_000)
    assert exc.value.hyperperiod == 10_007 * 9_973


def test_silent_transmitter_is_unbounded():
    e = listener([(0, 2)], 10)
    f = listener([(0, 5)], 10)
    assert worst_case_latency_oracle(e, f) is UNBOUNDED


def test_oracle_requires_repetitive_receptions():
    e = beaconer([0], 10)
    f = listener([(0, 5)], 10, repetitive=False)
    with pytest.raises(ValueError):
        worst_case_latency_oracle(e, f)


def test_oracle_requires_repetitive_beacons():
    e = ProtocolSpec(
        BeaconSchedule((0, 5), 1, period=None),
        rec([(0, 1)], 4),
        IDEAL,
    )
    f = listener([(0, 5)], 10)
    with pytest.raises(ValueError):
        worst_case_latency_oracle(e, f)


def test_pairwise_latency_counts_wait_to_first_landing_beacon():
    e = beaconer([0], 10)
    f = listener([(0, 21)], 21)
    # in-range right at an emission: that beacon is in flight, next counts
    assert pairwise_latency(e, f, phase_e=0, phase_f=0) == 10
    assert pairwise_latency(e, f, phase_e=9, phase_f=0) == 1


# ---------------------------------------------------------------------------
# properties over random corpora
# ---------------------------------------------------------------------------

@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**9))
def test_per_beacon_coverage_equals_window_sum(seed):
    rng = random.Random(seed)
    r = random_reception(rng)
    b = random_beacons(rng)
    cov = build_coverage_map(b.emission_times, r, IDEAL)
    for spans in cov.per_beacon:
        assert sum(e - a for a, e in spans) == r.listen_ticks


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**9))
def test_latency_periodic_in_reception_period(seed):
    rng = random.Random(seed)
    r = random_reception(rng)
    b = random_beacons(rng)
    phi = rng.randrange(r.period)
    a = absolute_first_hit(b.emission_times, r, phi)
    b2 = absolute_first_hit(b.emission_times, r, phi + r.period)
    assert a == b2
    cov = build_coverage_map(b.emission_times, r, IDEAL)
    got = beacon_to_beacon_latency(cov, phi)
    assert (got is NOT_COVERED and a is None) or got == a


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10**9))
def test_coverage_trichotomy(seed):
    rng = random.Random(seed)
    r = random_reception(rng)
    b = random_beacons(rng)
    rep = analyze(build_coverage_map(b.emission_times, r, IDEAL))
    if rep.coverage_lambda < r.period:
        assert not rep.deterministic
    if not rep.redundant and rep.coverage_lambda == r.period:
        assert rep.deterministic


@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10**9))
def test_oracle_paths_agree(seed):
    rng = random.Random(seed)
    e = random_protocol(rng)
    f = random_protocol(rng)
    full = worst_case_latency_oracle(e, f, method="full")
    ends = worst_case_latency_oracle(e, f, method="endpoints")
    assert full is ends or full == ends


def test_nonrepetitive_map_has_no_wraparound():
    r = rec([(0, 2), (6, 2)], 12, repetitive=False)
    cov = build_coverage_map([0, 8], r, IDEAL)
    # the second beacon's image slides off the front instead of wrapping
    assert cov.per_beacon[0] == ((0, 2), (6, 8))
    assert cov.per_beacon[1] == ()


# ---------------------------------------------------------------------------
# correlated quadruples
# ---------------------------------------------------------------------------

def quad_device(times, windows, period):
    return ProtocolSpec(
        BeaconSchedule(tuple(times), 1, period=period),
        rec(windows, period),
        IDEAL,
    )


def test_quadruple_half_coverage_per_device():
    # each side contributes 6 of 10 ticks; union covers everything with
    # half the plain minimum beacon count on each device
    p = quad_device([0, 5], [(0, 3)], 10)
    rep = check_correlated_quadruple(p, p, zeta=2)
    assert rep.deterministic
    assert rep.min_beacons == 4 and p.beacons.count == 2
    assert rep.coverage_lambda == 12
    assert rep.redundant  # the 1-tick grid cannot split 10 ticks losslessly


def test_quadruple_zeta_zero_sides_are_reflections():
    p = quad_device([3], [(0, 3)], 10)  # beacon right at the window end
    side_f, side_e = quadruple_sides(p, p)
    reflected = {(-t) % 10 for a, b in side_f for t in range(a, b)}
    as_ticks = {t for a, b in side_e for t in range(a, b)}
    assert as_ticks == reflected
    check_correlated_quadruple(p, p, zeta=0)  # anchor validation passes


def test_quadruple_same_half_twice_not_deterministic():
    p = quad_device([0, 2], [(0, 3)], 10)
    rep = check_correlated_quadruple(p, p, zeta=9)
    assert not rep.deterministic
    assert rep.uncovered == ((3, 8),)


def test_quadruple_period_mismatch_rejected():
    p = quad_device([0, 5], [(0, 3)], 10)
    q = quad_device([0, 5], [(0, 3)], 12)
    with pytest.raises(MisalignedPeriods):
        check_correlated_quadruple(p, q, zeta=2)


def test_quadruple_zeta_anchor_validated():
    p = quad_device([0, 5], [(0, 3)], 10)
    with pytest.raises(ValueError):
        check_correlated_quadruple(p, p, zeta=3)
