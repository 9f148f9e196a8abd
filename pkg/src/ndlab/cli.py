"""Command-line front end: bound sweeps, protocol generation, pair analysis
and collision simulation, all emitting CSV/JSON for external plotting.

Exit codes: 0 success, 2 usage error, 3 infeasible or out-of-domain inputs.
Diagnostics go to stderr as single-line JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

from . import bounds
from .coverage import (
    UNBOUNDED,
    analyze,
    build_coverage_map,
    worst_case_latency_oracle,
)
from .errors import (
    DomainError,
    HyperperiodTooLarge,
    InfeasibleError,
    MisalignedPeriods,
    NeedsFinerTicks,
)
from .protocols import (
    DifferenceSet,
    builtin_difference_set,
    gen_diffcode,
    gen_disco,
    gen_optimal_unidirectional,
    gen_pi0m,
    gen_searchlight_striped,
    gen_uconnect,
)
from .schedule import (
    ProtocolSpec,
    RadioModel,
    Semantics,
    TimeBase,
    load_protocol,
    protocol_from_json,
    protocol_to_json,
    reception_duty_cycle,
    transmission_duty_cycle,
)
from .simulator import OffsetSampling, SimConfig, simulate_multi

SCHEMA_VERSION = 1

_DOMAIN_ERRORS = (
    DomainError,
    InfeasibleError,
    NeedsFinerTicks,
    MisalignedPeriods,
    HyperperiodTooLarge,
)


def _fail(code: int, kind: str, detail: str) -> int:
    print(json.dumps({"error": kind, "detail": detail}, sort_keys=True), file=sys.stderr)
    return code


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _parse_sweep(text: str):
    try:
        name, rng = text.split("=")
        lo, hi, step = (Fraction(x) for x in rng.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            "sweep must look like eta=0.001:1.0:0.001"
        ) from exc
    if name != "eta":
        raise argparse.ArgumentTypeError("only eta sweeps are supported")
    if step <= 0 or lo <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("bad sweep range")
    return lo, hi, step


def _cell(fn, *args):
    try:
        v = fn(*args)
    except _DOMAIN_ERRORS:
        return ""
    return float(v.latency if hasattr(v, "latency") else v)


def cmd_bounds(args) -> int:
    tick = TimeBase(args.tick_ns)
    omega = tick.ticks_from_us(args.omega_us)
    alpha = args.alpha
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out)
        if args.deviation:
            radio = RadioModel(
                alpha=alpha,
                omega=omega,
                d_oTx=tick.ticks_from_us(args.doTx_us),
                d_oRx=tick.ticks_from_us(args.doRx_us),
                semantics=Semantics.CONTAINED,
            )
            w.writerow(["beta", "gamma", "ideal_ticks", "relaxed_ticks", "deviation"])
            betas = _grid(args.beta_lo, args.beta_hi, args.beta_steps)
            ks = _k_grid(args.k_lo, args.k_hi, args.beta_steps)
            for beta in betas:
                for k in ks:
                    gamma = Fraction(1, k)
                    ideal = bounds.bound_unidirectional(gamma, beta, omega)
                    real = bounds.bound_relaxed(
                        gamma, beta, omega, radio, count_first_beacon=True
                    )
                    dev = (real - ideal) / ideal
                    w.writerow([float(beta), float(gamma), float(ideal), float(real), float(dev)])
            return 0
        if args.sweep is None:
            return _fail(2, "usage", "either --sweep or --deviation is required")
        lo, hi, step = args.sweep
        w.writerow(
            [
                "eta",
                "symmetric",
                "symmetric_k",
                "symmetric_branch",
                "gamma_o",
                "symmetric_approx",
                "slotted_full_duplex",
                "slotted_two_beacon",
                "mutual_exclusive",
            ]
        )
        eta = lo
        while eta <= hi:
            try:
                sym = bounds.bound_symmetric(eta, omega, alpha)
                sym_cols = [float(sym.latency), sym.k, sym.branch, float(sym.gamma_o)]
            except _DOMAIN_ERRORS:
                sym_cols = ["", "", "", ""]
            w.writerow(
                [float(eta)]
                + sym_cols
                + [
                    _cell(bounds.bound_symmetric_approx, eta, omega, alpha),
                    _cell(bounds.bound_slotted_full_duplex, eta, omega, alpha),
                    _cell(bounds.bound_slotted_two_beacon, eta, omega, alpha),
                    _cell(bounds.bound_mutual_exclusive, eta, omega, alpha),
                ]
            )
            eta += step
        return 0
    finally:
        if close:
            out.close()


def _grid(lo: Fraction, hi: Fraction, steps: int):
    if steps < 2:
        return [lo, hi]
    return [lo + (hi - lo) * j / (steps - 1) for j in range(steps)]


def _k_grid(k_lo: int, k_hi: int, points: int):
    if points < 2 or k_lo == k_hi:
        return sorted({k_lo, k_hi})
    return sorted(
        {min(k_hi, max(k_lo, round(k_lo * (k_hi / k_lo) ** (j / (points - 1)))))
         for j in range(points)}
    )


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _radio_from_args(args, tick: TimeBase, omega: int) -> RadioModel:
    return RadioModel(
        alpha=args.alpha,
        omega=omega,
        d_oTx=tick.ticks_from_us(args.doTx_us),
        d_oRx=tick.ticks_from_us(args.doRx_us),
        d_oTxRx=tick.ticks_from_us(args.doTxRx_us),
        d_oRxTx=tick.ticks_from_us(args.doRxTx_us),
        semantics=Semantics.CONTAINED if args.contained else Semantics.IDEAL,
    )


def cmd_generate(args) -> int:
    tick = TimeBase(args.tick_ns)
    omega = tick.ticks_from_us(args.omega_us)
    radio = _radio_from_args(args, tick, omega)
    kind = args.kind
    if kind == "optimal":
        window = None if args.window_us is None else tick.ticks_from_us(args.window_us)
        proto = gen_optimal_unidirectional(args.inv_gamma, args.beta, omega, radio, window)
    elif kind == "pi0m":
        proto = gen_pi0m(args.m, tick.ticks_from_us(args.d_us), omega, radio, args.delta)
    elif kind == "disco":
        proto = gen_disco(args.p1, args.p2, tick.ticks_from_us(args.slot_us), omega, radio)
    elif kind == "searchlight":
        proto = gen_searchlight_striped(
            args.t_slots, tick.ticks_from_us(args.slot_us), omega, radio
        )
    elif kind == "uconnect":
        proto = gen_uconnect(args.p, tick.ticks_from_us(args.slot_us), omega, radio)
    elif kind == "diffcode":
        if args.elements:
            ds = DifferenceSet(args.modulus, tuple(int(x) for x in args.elements.split(",")))
        else:
            ds = builtin_difference_set(args.modulus)
        proto = gen_diffcode(ds, tick.ticks_from_us(args.slot_us), omega, radio)
    else:  # pragma: no cover - argparse enforces choices
        return _fail(2, "usage", f"unknown generator {kind!r}")
    proto = ProtocolSpec(proto.beacons, proto.receptions, proto.radio, tick)
    doc = protocol_to_json(proto)
    out, close = _open_out(args.out)
    try:
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    e = load_protocol(args.transmitter)
    f = load_protocol(args.receiver)
    beta = transmission_duty_cycle(e.beacons)
    gamma = reception_duty_cycle(f.receptions)
    cov = build_coverage_map(e.beacons.emission_times, f.receptions, f.radio)
    if args.coverage_csv:
        cov.write_csv(args.coverage_csv)
    rep = analyze(cov)
    oracle = worst_case_latency_oracle(
        e, f, method=args.method, max_hyperperiod=args.max_hyperperiod
    )
    report = {
        "schema": SCHEMA_VERSION,
        "deterministic": rep.deterministic,
        "redundant": rep.redundant,
        "coverage_lambda": rep.coverage_lambda,
        "min_beacons": rep.min_beacons,
        "uncovered": [list(span) for span in rep.uncovered],
        "beta": [beta.numerator, beta.denominator],
        "gamma": [gamma.numerator, gamma.denominator],
        "oracle_latency_ticks": None if oracle is UNBOUNDED else oracle,
        "unbounded": oracle is UNBOUNDED,
    }
    if beta > 0 and oracle is not UNBOUNDED:
        bound = bounds.bound_unidirectional(gamma, beta, e.beacons.beacon_duration)
        report["bound_unidirectional_ticks"] = float(bound)
        report["gap_ratio"] = float((Fraction(oracle) - bound) / bound)
    out, close = _open_out(args.out)
    try:
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    devices = tuple(protocol_from_json(d) for d in doc["devices"])
    cfg = SimConfig(
        devices=devices,
        trials=int(doc.get("trials", 1)),
        seed=int(doc.get("seed", 0)),
        horizon=doc.get("horizon"),
        offset_sampling=OffsetSampling(doc.get("offset_sampling", "uniform_random")),
        latency_budget=doc.get("latency_budget"),
    )
    outcome = simulate_multi(cfg)

    import os

    os.makedirs(args.out_dir, exist_ok=True)
    trials_path = os.path.join(args.out_dir, "trials.csv")
    with open(trials_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial_id", "phases", "latency_ticks", "collided_first", "failed"])
        for i in range(outcome.trials):
            w.writerow(
                [
                    i,
                    ";".join(str(p) for p in outcome.phases[i]),
                    "" if outcome.latencies[i] is None else outcome.latencies[i],
                    int(outcome.first_beacon_collided[i]),
                    int(outcome.failed[i]),
                ]
            )

    senders = sum(1 for d in devices if d.beacons.count > 0)
    beta = transmission_duty_cycle(devices[0].beacons)
    model_p = bounds.collision_probability(senders, beta)
    emp = outcome.first_collision_rate
    n = outcome.trials
    sigma = math.sqrt(model_p * (1.0 - model_p) / n) if n else 0.0
    summary = {
        "schema": SCHEMA_VERSION,
        "trials": n,
        "seed": cfg.seed,
        "senders": senders,
        "beta": [beta.numerator, beta.denominator],
        "failure_rate": float(outcome.failure_rate),
        "first_collision_rate": float(emp),
        "collision_model_probability": model_p,
        "collision_rate_3sigma": 3.0 * sigma,
        "collision_rate_within_3sigma": abs(float(emp) - model_p) <= 3.0 * sigma,
        "latency_budget": cfg.latency_budget,
    }
    with open(os.path.join(args.out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_radio_flags(p: argparse.ArgumentParser):
    p.add_argument("--omega-us", type=int, required=True, help="beacon length in us")
    p.add_argument("--tick-ns", type=int, default=1000)
    p.add_argument("--alpha", type=_rational, default=Fraction(1))
    p.add_argument("--contained", action="store_true",
                   help="beacons must fit whole windows to be received")
    p.add_argument("--doTx-us", type=int, default=0)
    p.add_argument("--doRx-us", type=int, default=0)
    p.add_argument("--doTxRx-us", type=int, default=0)
    p.add_argument("--doRxTx-us", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nd-lab",
        description="worst-case latency lab for duty-cycled neighbor discovery",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate latency bounds over rate grids")
    b.add_argument("--sweep", type=_parse_sweep, help="eta=lo:hi:step")
    b.add_argument("--deviation", action="store_true",
                   help="relaxed-vs-ideal deviation grid instead of an eta sweep")
    b.add_argument("--omega-us", type=int, required=True)
    b.add_argument("--tick-ns", type=int, default=1000)
    b.add_argument("--alpha", type=_rational, default=Fraction(1))
    b.add_argument("--doTx-us", type=int, default=0)
    b.add_argument("--doRx-us", type=int, default=0)
    b.add_argument("--beta-lo", type=_rational, default=Fraction(11, 20000))
    b.add_argument("--beta-hi", type=_rational, default=Fraction(111, 2000))
    b.add_argument("--beta-steps", type=int, default=12)
    b.add_argument("--k-lo", type=int, default=19)
    b.add_argument("--k-hi", type=int, default=1818)
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_bounds)

    g = sub.add_parser("generate", help="emit a protocol description as JSON")
    gsub = g.add_subparsers(dest="kind", required=True)

    go = gsub.add_parser("optimal", help="latency-optimal one-way pair")
    go.add_argument("--inv-gamma", type=int, required=True, metavar="K")
    go.add_argument("--beta", type=_rational, required=True)
    go.add_argument("--window-us", type=int, default=None)
    _add_radio_flags(go)

    gp = gsub.add_parser("pi0m", help="periodic-interval schedule")
    gp.add_argument("--m", type=int, required=True)
    gp.add_argument("--d-us", type=int, required=True)
    gp.add_argument("--delta", type=int, default=1)
    _add_radio_flags(gp)

    gd = gsub.add_parser("disco", help="coprime-period slotted schedule")
    gd.add_argument("--p1", type=int, required=True)
    gd.add_argument("--p2", type=int, required=True)
    gd.add_argument("--slot-us", type=int, required=True)
    _add_radio_flags(gd)

    gs = gsub.add_parser("searchlight", help="anchor-plus-probe slotted schedule")
    gs.add_argument("--t-slots", type=int, required=True)
    gs.add_argument("--slot-us", type=int, required=True)
    _add_radio_flags(gs)

    gu = gsub.add_parser("uconnect", help="prime-period slotted schedule")
    gu.add_argument("--p", type=int, required=True)
    gu.add_argument("--slot-us", type=int, required=True)
    _add_radio_flags(gu)

    gc = gsub.add_parser("diffcode", help="difference-set slotted schedule")
    gc.add_argument("--modulus", type=int, required=True)
    gc.add_argument("--elements", default=None, help="comma-separated residues")
    gc.add_argument("--slot-us", type=int, required=True)
    _add_radio_flags(gc)

    for sp in (go, gp, gd, gs, gu, gc):
        sp.add_argument("--out", default=None)
        sp.set_defaults(fn=cmd_generate)

    a = sub.add_parser("analyze", help="coverage verdict and oracle latency of a pair")
    a.add_argument("transmitter")
    a.add_argument("receiver")
    a.add_argument("--method", choices=["full", "endpoints"], default="full")
    a.add_argument("--max-hyperperiod", type=int, default=10_000_000)
    a.add_argument("--coverage-csv", default=None)
    a.add_argument("--out", default=None)
    a.set_defaults(fn=cmd_analyze)

    s = sub.add_parser("simulate", help="run seeded multi-device trials")
    s.add_argument("config")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(fn=cmd_simulate)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _DOMAIN_ERRORS as exc:
        return _fail(3, type(exc).__name__, str(exc))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(2, type(exc).__name__, str(exc))


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
