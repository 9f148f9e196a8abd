import math
from fractions import Fraction as F

import pytest

from ndlab import (
    UNBOUNDED,
    DomainError,
    InfeasibleError,
    NeedsFinerTicks,
    RadioModel,
    Semantics,
    analyze,
    build_coverage_map,
    reception_duty_cycle,
    transmission_duty_cycle,
    worst_case_latency_oracle,
)
from ndlab.protocols import (
    BUILTIN_DIFFERENCE_SETS,
    DifferenceSet,
    builtin_difference_set,
    gen_diffcode,
    gen_disco,
    gen_optimal_unidirectional,
    gen_pi0m,
    gen_searchlight_striped,
    gen_slotted,
    gen_uconnect,
    slots_overlap_all_rotations,
    SlottedParams,
)


def deterministic(p):
    # a beacon subsequence spanning one full hyper-period decides the protocol
    t_b, t_c = p.beacons.period, p.receptions.period
    hyper = math.lcm(t_b, t_c)
    times = [tau + n * t_b for n in range(hyper // t_b) for tau in p.beacons.emission_times]
    cov = build_coverage_map(sorted(times), p.receptions, p.radio)
    return analyze(cov)


# ---------------------------------------------------------------------------
# optimal unidirectional
# ---------------------------------------------------------------------------

def test_optimal_default_shape():
    p = gen_optimal_unidirectional(4, F(1, 100), 1)
    assert p.beacons.emission_times == (0, 100, 200, 300)
    assert p.beacons.period == 400
    assert p.receptions.period == 400
    assert transmission_duty_cycle(p.beacons) == F(1, 100)
    assert reception_duty_cycle(p.receptions) == F(1, 4)
    rep = deterministic(p)
    assert rep.deterministic and not rep.redundant
    assert rep.min_beacons == 4 == p.beacons.count


def test_optimal_k1_always_listening():
    p = gen_optimal_unidirectional(1, F(1, 20), 1)
    assert reception_duty_cycle(p.receptions) == 1
    assert p.beacons.count == 1
    assert worst_case_latency_oracle(p, p) == 20


def test_optimal_narrow_window_variant():
    # one reception window of 25 ticks per 100; beacons step by the window
    p = gen_optimal_unidirectional(4, F(1, 100), 1, window=25)
    assert p.receptions.period == 100
    assert p.beacons.emission_times == (0, 25, 50, 75)
    assert p.beacons.period == 400
    rep = deterministic(p)
    assert rep.deterministic and not rep.redundant
    assert worst_case_latency_oracle(p, p) == 400


def test_optimal_every_k_consecutive_gaps_sum_alike():
    for window in (None, 25, 50):
        p = gen_optimal_unidirectional(4, F(1, 100), 1, window=window)
        gaps = p.beacons.gaps()
        total = sum(gaps)
        k = len(gaps)
        doubled = gaps + gaps
        assert all(sum(doubled[i : i + k]) == total for i in range(k))


def test_optimal_contained_mode():
    radio = RadioModel(omega=1, semantics=Semantics.CONTAINED)
    p = gen_optimal_unidirectional(4, F(1, 100), 1, radio, window=26)
    assert p.receptions.windows[0].duration == 26
    assert p.receptions.period == 100  # 4 * (26 - 1)
    rep = deterministic(p)
    assert rep.deterministic
    assert reception_duty_cycle(p.receptions) == F(26, 100)


def test_optimal_non_integer_gap_rejected():
    with pytest.raises(NeedsFinerTicks):
        gen_optimal_unidirectional(4, F(2, 3), 1)  # gap would be 3/2 ticks


def test_optimal_contained_k1_infeasible():
    radio = RadioModel(omega=1, semantics=Semantics.CONTAINED)
    with pytest.raises(InfeasibleError):
        gen_optimal_unidirectional(1, F(1, 20), 1, radio)


# ---------------------------------------------------------------------------
# pi0m
# ---------------------------------------------------------------------------

def test_pi0m_shape_and_determinism():
    p = gen_pi0m(3, 10, 1)
    assert p.beacons.period == 10
    assert p.receptions.period == 39
    assert deterministic(p).deterministic


def test_pi0m_oracle_matches_interval_count():
    p = gen_pi0m(3, 10, 1)
    # worst case: one full beacon period per scan-interval step plus the gap
    t_c, t_b, d = 39, 10, 10
    expect = (math.ceil((t_c - d) / t_b) + 1) * t_b
    assert worst_case_latency_oracle(p, p) == expect == 40


def test_pi0m_delta_zero_variant():
    p1 = gen_pi0m(3, 10, 1, delta=1)
    p0 = gen_pi0m(3, 10, 1, delta=0)
    assert p0.receptions.period == 40
    # at ideal point-beacon semantics the shifted images still tile
    assert worst_case_latency_oracle(p0, p0) == worst_case_latency_oracle(p1, p1) == 40
    # with containment the aligned grid breaks down entirely
    radio = RadioModel(omega=1, semantics=Semantics.CONTAINED)
    q0 = gen_pi0m(3, 10, 1, radio, delta=0)
    assert worst_case_latency_oracle(q0, q0) is UNBOUNDED


def test_pi0m_domain():
    with pytest.raises(DomainError):
        gen_pi0m(0, 10, 1)
    with pytest.raises(DomainError):
        gen_pi0m(3, 1, 1)


# ---------------------------------------------------------------------------
# slotted designs
# ---------------------------------------------------------------------------

def test_slotted_layout():
    p = gen_slotted(SlottedParams(10, 4, (0, 2)), 1)
    assert p.receptions.spans() == ((0, 10), (20, 30))
    assert p.beacons.emission_times == (0, 9, 20, 29)
    assert p.beacons.period == 40


def test_slot_shorter_than_two_beacons_gets_one():
    p = gen_slotted(SlottedParams(3, 3, (0,)), 2)
    assert p.beacons.emission_times == (0,)


def test_disco_counts_and_duty_cycle():
    p = gen_disco(3, 5, 10, 1)
    active = len(p.receptions.windows)
    assert active == 7  # multiples of 3 or 5 below 15
    assert reception_duty_cycle(p.receptions) == F(7, 15)
    assert transmission_duty_cycle(p.beacons) == F(14, 150)


def test_disco_rejects_non_coprime():
    with pytest.raises(DomainError):
        gen_disco(4, 6, 10, 1)


def test_disco_slot_level_overlap_within_hyperperiod():
    active = {s for s in range(15) if s % 3 == 0 or s % 5 == 0}
    assert slots_overlap_all_rotations(active, 15)


def test_searchlight_shape():
    p = gen_searchlight_striped(4, 10, 1)
    # two periods of four slots; anchor at 0, probes at 1 then 2
    assert p.receptions.period == 80
    starts = [w.start // 10 for w in p.receptions.windows]
    assert starts == [0, 1, 4, 6]
    assert reception_duty_cycle(p.receptions) == F(2, 4)


def test_searchlight_slot_rotation_determinism():
    p = gen_searchlight_striped(4, 10, 1)
    active = {w.start // 10 for w in p.receptions.windows}
    assert slots_overlap_all_rotations(active, 8)
    assert worst_case_latency_oracle(p, p) is not UNBOUNDED


def test_uconnect_counts():
    p = gen_uconnect(3, 10, 1)
    assert len(p.receptions.windows) == 5  # {0,3,6} plus run {1,2}
    assert reception_duty_cycle(p.receptions) == F(5, 9) == F(1, 3) + F(2, 9)
    assert deterministic(p).deterministic
    with pytest.raises(DomainError):
        gen_uconnect(4, 10, 1)


def test_uconnect_slot_rotation_determinism():
    active = {0, 3, 6, 1, 2}
    assert slots_overlap_all_rotations(active, 9)


def test_slot_domain_worst_cases_on_slot_phases():
    # discovery within the advertised slot budget for every whole-slot shift
    from ndlab import pairwise_latency

    slot = 10
    cases = [
        (gen_disco(3, 5, slot, 1), 15),
        (gen_searchlight_striped(4, slot, 1), 4 * 2),
        (gen_uconnect(3, slot, 1), 9),
        (gen_diffcode(builtin_difference_set(7), slot, 1), 7),
    ]
    for proto, slot_budget in cases:
        hyper_slots = proto.receptions.period // slot
        for delta in range(hyper_slots):
            lat = pairwise_latency(proto, proto, 0, delta * slot)
            assert isinstance(lat, int)
            assert lat <= slot_budget * slot, (slot_budget, delta, lat)


# ---------------------------------------------------------------------------
# difference sets
# ---------------------------------------------------------------------------

def test_builtin_sets_validate():
    for t, elements in BUILTIN_DIFFERENCE_SETS.items():
        ds = builtin_difference_set(t)
        assert ds.elements == tuple(sorted(elements))
        assert ds.k >= math.isqrt(t)  # k >= sqrt(T)
        assert slots_overlap_all_rotations(ds.elements, t)


def test_invalid_difference_set_rejected():
    with pytest.raises(ValueError):
        DifferenceSet(7, (0, 1, 2))


def test_diffcode_protocol_rotations():
    ds = builtin_difference_set(7)
    p = gen_diffcode(ds, 10, 1)
    assert len(p.receptions.windows) == 3
    assert worst_case_latency_oracle(p, p) is not UNBOUNDED
    assert worst_case_latency_oracle(p, p) <= 7 * 10


def test_slot_smaller_than_beacon_rejected():
    with pytest.raises(DomainError):
        gen_disco(3, 5, 2, 3)
