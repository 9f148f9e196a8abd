"""Closed-form worst-case latency bounds, all in exact rational arithmetic.

The only non-rational evaluations in the whole module are the exponential
in the collision probability and the square root in the U-Connect row of
the slotted-protocol table.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, InfeasibleError
from .schedule import RadioModel, Semantics, rat


class SymmetricBound(NamedTuple):
    latency: Fraction
    k: int  # reciprocal of the winning reception duty cycle
    branch: str  # "ceil" or "floor" of 2/eta
    gamma_o: Fraction


class ChannelConstrainedBound(NamedTuple):
    latency: Fraction
    case: int  # 1: channel cap not binding, 2: cap binding
    gamma_o: Fraction


class AsymmetricBound(NamedTuple):
    latency: Fraction
    tight: bool  # reachable exactly only when 2/eta is an integer on both sides
    beta_e: Fraction
    gamma_e: Fraction
    beta_f: Fraction
    gamma_f: Fraction


class MutualExclusiveBound(NamedTuple):
    latency: Fraction
    k: int
    branch: str


def bound_unidirectional(gamma, beta, omega) -> Fraction:
    """Lowest guaranteeable latency for a pure listener hearing a pure
    beaconer: ceil(1/gamma) * omega / beta."""
    gamma, beta, omega = rat(gamma), rat(beta), rat(omega)
    if not 0 < gamma <= 1:
        raise DomainError("gamma must lie in (0, 1]")
    if beta <= 0:
        raise DomainError("beta must be positive")
    return Fraction(math.ceil(1 / gamma)) * omega / beta


def _k_latency(k: int, eta: Fraction, omega: Fraction, alpha: Fraction) -> Fraction | None:
    den = eta * k - 1
    if k < 1 or den <= 0:
        return None
    return Fraction(k * k) * omega * alpha / den


def bound_symmetric(eta, omega, alpha) -> SymmetricBound:
    """Lowest latency any protocol with equal duty cycles on both devices
    can guarantee for two-way discovery.

    Only reciprocal-integer reception duty cycles are candidates; the two
    integers bracketing 2/eta are the only possible optima, and the better
    of the two wins.
    """
    eta, omega, alpha = rat(eta), rat(omega), rat(alpha)
    if eta <= 0:
        raise DomainError("eta must be positive")
    two = 2 / eta
    k_floor = math.floor(two)
    if k_floor < 1:
        raise DomainError("eta > 2 leaves no room for a reception phase")
    k_ceil = math.ceil(two)
    a = _k_latency(k_ceil, eta, omega, alpha)
    b = _k_latency(k_floor, eta, omega, alpha)
    if a is not None and (b is None or a <= b):
        return SymmetricBound(a, k_ceil, "ceil", Fraction(1, k_ceil))
    return SymmetricBound(b, k_floor, "floor", Fraction(1, k_floor))


def bound_symmetric_approx(eta, omega, alpha) -> Fraction:
    """Small-duty-cycle approximation 4*alpha*omega/eta**2; exact whenever
    2/eta is an integer."""
    eta, omega, alpha = rat(eta), rat(omega), rat(alpha)
    if eta <= 0:
        raise DomainError("eta must be positive")
    return 4 * alpha * omega / (eta * eta)


def bound_channel_constrained(eta, beta_m, omega, alpha) -> ChannelConstrainedBound:
    """Symmetric bound when the channel utilization may not exceed beta_m.

    If the unconstrained optimum already respects the cap the plain
    symmetric bound applies (ties resolve into this case); otherwise all
    remaining budget goes to listening and the cap fixes the beacon rate.
    """
    eta, beta_m, omega, alpha = rat(eta), rat(beta_m), rat(omega), rat(alpha)
    if beta_m <= 0:
        raise DomainError("beta_m must be positive")
    if eta <= alpha * beta_m:
        raise InfeasibleError("duty cycle too small to afford beta_m plus listening")
    sym = bound_symmetric(eta, omega, alpha)
    if eta <= sym.gamma_o + alpha * beta_m:
        return ChannelConstrainedBound(sym.latency, 1, sym.gamma_o)
    latency = Fraction(math.ceil(1 / (eta - alpha * beta_m))) * omega / beta_m
    return ChannelConstrainedBound(latency, 2, sym.gamma_o)


def bound_asymmetric(eta_e, eta_f, omega, alpha) -> AsymmetricBound:
    """Lowest two-way latency when the devices run different duty cycles
    and each knows the other's schedule.  Splitting each budget as
    beta = eta/(2 alpha), gamma = eta/2 equalizes both directions."""
    eta_e, eta_f, omega, alpha = rat(eta_e), rat(eta_f), rat(omega), rat(alpha)
    if eta_e <= 0 or eta_f <= 0:
        raise DomainError("duty cycles must be positive")
    tight = (2 / eta_e).denominator == 1 and (2 / eta_f).denominator == 1
    latency = 4 * alpha * omega / (eta_e * eta_f)
    return AsymmetricBound(
        latency,
        tight,
        beta_e=eta_e / (2 * alpha),
        gamma_e=eta_e / 2,
        beta_f=eta_f / (2 * alpha),
        gamma_f=eta_f / 2,
    )


def bound_mutual_exclusive(eta, omega, alpha) -> MutualExclusiveBound:
    """Lowest latency when either device discovering the other suffices.

    Locking beacons to the own reception windows lets the two directions
    share the coverage work, halving the beacons each side needs.
    """
    eta, omega, alpha = rat(eta), rat(omega), rat(alpha)
    if eta <= 0:
        raise DomainError("eta must be positive")
    inv = 1 / eta
    k_floor = math.floor(inv)
    if k_floor < 1:
        raise DomainError("eta > 1 leaves no valid split")
    best = None
    for k, branch in ((math.ceil(inv), "ceil"), (k_floor, "floor")):
        den = eta * k - Fraction(1, 2)
        if k >= 1 and den > 0:
            val = Fraction(k * k) * omega * alpha / den
            if best is None or val < best[0]:
                best = (val, k, branch)
    if best is None:
        raise DomainError("no feasible branch")
    return MutualExclusiveBound(*best)


def collision_probability(s: int, beta) -> float:
    """Chance that a newcomer's first beacon overlaps a transmission of one
    of s-1 other senders at utilization beta each (pure-ALOHA window)."""
    beta = rat(beta)
    if s < 1:
        raise DomainError("need at least one sender")
    if not 0 <= beta <= 1:
        raise DomainError("beta must lie in [0, 1]")
    return 1.0 - math.exp(-2.0 * (s - 1) * float(beta))


# ---------------------------------------------------------------------------
# relaxed-assumption bound
# ---------------------------------------------------------------------------

def bound_relaxed(gamma, beta, omega, radio: RadioModel, count_first_beacon: bool = False) -> Fraction:
    """Unidirectional bound with hardware realities switched on.

    Composition over the ideal omega/(beta*gamma): requiring beacons to fit
    whole windows charges one extra beacon length per window visit
    (numerator term beta*omega); switching overheads charge d_oTx per
    beacon and d_oRx per window; counting the first received beacon adds a
    flat omega.  Valid for reciprocal-integer gamma.
    """
    gamma, beta, omega = rat(gamma), rat(beta), rat(omega)
    if not 0 < gamma <= 1:
        raise DomainError("gamma must lie in (0, 1]")
    if (1 / gamma).denominator != 1:
        raise DomainError("relaxed bound assumes gamma = 1/k")
    if beta <= 0:
        raise DomainError("beta must be positive")
    contained = radio.semantics is Semantics.CONTAINED
    numerator = radio.d_oTx + omega + beta * (radio.d_oRx + (omega if contained else 0))
    latency = numerator / (beta * gamma)
    if count_first_beacon:
        latency += omega
    return latency


def relaxed_deviation(beta, k: int, omega, radio: RadioModel) -> Fraction:
    """Relative excess of the fully relaxed bound over the ideal one at
    beta and gamma = 1/k."""
    beta, omega = rat(beta), rat(omega)
    gamma = Fraction(1, k)
    ideal = bound_unidirectional(gamma, beta, omega)
    real = bound_relaxed(gamma, beta, omega, radio, count_first_beacon=True)
    return (real - ideal) / ideal


def relaxed_deviation_range(
    omega, radio: RadioModel, beta_lo, beta_hi, k_lo: int, k_hi: int
) -> tuple[Fraction, Fraction]:
    """Extremes of the relaxed-bound deviation over a rate grid.

    The deviation grows with both beta and gamma, so the corners of the
    grid bound it: smallest at (beta_lo, 1/k_hi), largest at (beta_hi,
    1/k_lo).
    """
    lo = relaxed_deviation(beta_lo, k_hi, omega, radio)
    hi = relaxed_deviation(beta_hi, k_lo, omega, radio)
    return lo, hi


# ---------------------------------------------------------------------------
# slotted designs and periodic-interval schedules
# ---------------------------------------------------------------------------

def bound_slotted_full_duplex(eta, omega, alpha) -> Fraction:
    """Latency limit of one-beacon-per-slot designs on a radio that could
    listen while transmitting, at the minimal slot length."""
    eta, omega, alpha = rat(eta), rat(omega), rat(alpha)
    if eta <= 0:
        raise DomainError("eta must be positive")
    return omega * (1 + 2 * alpha + alpha * alpha) / (eta * eta)


def bound_slotted_two_beacon(eta, omega, alpha) -> Fraction:
    """Latency limit of two-beacons-per-slot designs (one sent just outside
    the slot boundary)."""
    eta, omega, alpha = rat(eta), rat(omega), rat(alpha)
    if eta <= 0:
        raise DomainError("eta must be positive")
    return omega * (Fraction(1, 2) + 2 * alpha + 2 * alpha * alpha) / (eta * eta)


def _slotted_base(eta: Fraction, beta: Fraction, alpha: Fraction) -> Fraction:
    base = eta * beta - alpha * beta * beta
    if base <= 0:
        raise DomainError("eta*beta - alpha*beta^2 must be positive")
    return base


def bound_slotted_channel(eta, beta, omega, alpha) -> Fraction:
    """Latency limit of slotted designs expressed through the channel
    utilization their slot length implies (large slots)."""
    eta, beta, omega, alpha = rat(eta), rat(beta), rat(omega), rat(alpha)
    return omega / _slotted_base(eta, beta, alpha)


_SLOTTED_FACTORS = {"diffcodes": 1, "searchlight_s": 2, "disco": 8}


def slotted_protocol_latency(protocol_id: str, eta, beta, omega, alpha):
    """Worst-case latency of a named slotted protocol as a function of its
    duty cycle and channel utilization.  The U-Connect entry involves a
    square root and is returned as a float; the others are exact."""
    eta, beta, omega, alpha = rat(eta), rat(beta), rat(omega), rat(alpha)
    base = _slotted_base(eta, beta, alpha)
    if protocol_id in _SLOTTED_FACTORS:
        return _SLOTTED_FACTORS[protocol_id] * omega / base
    if protocol_id == "uconnect":
        inner = omega * omega * (8 * eta - 8 * alpha * beta + 9)
        if inner < 0:
            raise DomainError("negative discriminant")
        root = math.sqrt(float(inner))
        return (3.0 * float(omega) + root) ** 2 / float(8 * omega * base)
    raise ValueError(f"unknown slotted protocol: {protocol_id!r}")


def pi0m_latency(m, omega, eta, alpha) -> Fraction:
    """Worst-case latency of the periodic-interval schedule that listens
    once for a whole beacon period per scan interval (m+1 beacon periods
    per scan interval, minus an instant).  m may be rational; the real
    minimizer m+1 = 2/eta recovers the symmetric optimum."""
    m, omega, eta, alpha = rat(m), rat(omega), rat(eta), rat(alpha)
    u = m + 1
    den = eta * u - 1
    if m < 1 or den <= 0:
        raise DomainError("need m >= 1 and eta*(m+1) > 1")
    return alpha * omega * u * u / den


def pi0m_nrmse_vs_symmetric(omega, alpha, steps: int = 1000) -> float:
    """Root-mean-square relative gap between the exact symmetric bound and
    the periodic-interval closed form at its real-valued optimum, swept
    over eta = 1/steps ... 1."""
    omega, alpha = rat(omega), rat(alpha)
    total = Fraction(0)
    for j in range(1, steps + 1):
        eta = Fraction(j, steps)
        exact = bound_symmetric(eta, omega, alpha).latency
        ideal = pi0m_latency(2 / eta - 1, omega, eta, alpha)
        rel = (exact - ideal) / exact
        total += rel * rel
    return math.sqrt(total / steps)
