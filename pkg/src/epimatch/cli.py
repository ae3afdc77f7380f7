"""Command-line front end.

    epimatch solve|sweep|policy|twopop|verify --config PATH [--tol T] [--seed S]
             [--out PATH] [--format csv|summary] [--samples N]

Exit codes: 0 success, 1 verify found a counterexample, 2 configuration error,
3 solver error.
"""
from __future__ import annotations

import argparse
import io
import logging
import math
import sys

from . import config as cfgmod
from .config import (EVENT_COLUMNS, SENS_COLUMNS, SOLVE_COLUMNS, TWOPOP_COLUMNS, ConfigError,
                     csv_line, economy_text, fmt, solve_rows)
from .errors import EpimatchError, InvalidIntervention, ParameterError, TrackingLost, InvalidStep
from .policy import InterventionKind, compare, slutsky_ledger
from .sampling import DEFAULT_SEED
from .solver import find_equilibria, pareto_dominant
from .statics import SENSITIVITY_PRIMITIVES, _DELTA_SIGN, derivative, is_regular, transition_events
from .twopop import solve_two_pop
from .verify import run_verify

log = logging.getLogger("epimatch")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _load(args, command):
    if args.config is None:
        raise ConfigError(f"the {command} command needs --config")
    cfg = cfgmod.load(args.config)
    cfg.require(command)
    if args.tol is not None:
        cfg.tol = args.tol
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _solve(cfg, params):
    return find_equilibria(params, tol=cfg.tol, grid_points=cfg.grid_points)


def _summary_eqset(out, eqset, focal):
    p = eqset.economy
    out.write("economy: " + ", ".join(f"{k}={v:.10g}" for k, v in p.as_dict().items()) + "\n")
    out.write(f"regime: {eqset.regime.tag.value}\n")
    out.write(f"equilibria: {len(eqset)}\n")
    for j, e in enumerate(eqset):
        mark = "  <- Pareto-dominant" if e is focal else ""
        out.write(f"  [{j}] W*={e.W_star:.10g} i_H={e.i_H:.10g} i_L={e.i_L:.10g} "
                  f"pi_H={e.pi_H:.10g} pi_L={e.pi_L:.10g} {e.activity.value} {e.stability.value}{mark}\n")


def cmd_solve(args, out):
    cfg = _load(args, "solve")
    eqset = _solve(cfg, cfg.economy)
    focal = pareto_dominant(eqset)
    if args.format == "summary":
        _summary_eqset(out, eqset, focal)
    else:
        out.write(csv_line(SOLVE_COLUMNS))
        for row in solve_rows(eqset, focal):
            out.write(csv_line(row))
    return EXIT_OK


def cmd_sweep(args, out):
    cfg = _load(args, "sweep")
    sw = cfg.sweep
    prim = sw.primitive
    if sw.sensitivity and prim not in SENSITIVITY_PRIMITIVES:
        raise ConfigError(f"sensitivity is not defined for {prim!r}", "sweep.sensitivity")
    inc = None
    if prim in _DELTA_SIGN and sw.stop != sw.start:
        inc = (_DELTA_SIGN[prim] > 0) == (sw.stop > sw.start)
    sets, events = [], []
    claim = True
    for j, v in enumerate(sw.values()):
        try:
            params = cfg.economy.replace(**{prim: v})
        except ParameterError as exc:
            raise ConfigError(f"sweep point {j} ({prim}={fmt(v)}) is invalid: {exc}", "sweep.primitive")
        cur = _solve(cfg, params)
        if sets:
            ev, fits = transition_events(sets[-1], cur, j, v, inc)
            events.extend(ev)
            claim = claim and fits
        sets.append(cur)

    if args.format == "summary":
        for j, s in enumerate(sets):
            out.write(f"--- point {j}: {prim}={fmt(sw.values()[j])}\n")
            _summary_eqset(out, s, pareto_dominant(s))
        out.write(f"transition events: {len(events)}\n")
        for e in events:
            out.write(f"  step {e.step} {prim}={fmt(e.value)} {e.kind.value}\n")
        return EXIT_OK

    cols = SOLVE_COLUMNS + (SENS_COLUMNS if sw.sensitivity else ())
    out.write(csv_line(cols))
    for s in sets:
        focal = pareto_dominant(s)
        sens = None
        if sw.sensitivity:
            try:
                if not is_regular(s.economy, focal):
                    raise TrackingLost("focal equilibrium on a kink or regime boundary")
                sens = list(derivative(s.economy, focal, prim)) + ["ok"]
            except (TrackingLost, InvalidStep) as exc:
                log.warning("sensitivity at %s=%s: %s", prim, fmt(getattr(s.economy, prim)), exc)
                sens = [math.nan] * 5 + [type(exc).__name__]
        for row, e in zip(solve_rows(s, focal), s):
            if sw.sensitivity:
                row = row + (sens if e is focal else [math.nan] * 5 + ["not_focal"])
            out.write(csv_line(row))
    if events:
        out.write("\n")
        out.write(csv_line(EVENT_COLUMNS))
        for e in events:
            out.write(csv_line([e.step, e.value, e.kind]))
    return EXIT_OK


def cmd_policy(args, out):
    cfg = _load(args, "policy")
    iv = cfg.intervention
    try:
        rep = compare(cfg.economy, iv)
        ledger = slutsky_ledger(cfg.economy, iv) if iv.kind is InterventionKind.ABSTINENCE else None
    except InvalidIntervention as exc:
        raise ConfigError(str(exc), "intervention.kind") from None
    e0, e1 = rep.focal_before, rep.focal_after
    metrics = [
        ("payoff_old_utility", rep.payoff_old_utility["H"], rep.payoff_old_utility["L"]),
        ("payoff_new_utility", rep.payoff_new_utility["H"], rep.payoff_new_utility["L"]),
        ("revealed_preference_chain", rep.revealed_preference_chain_holds["H"],
         rep.revealed_preference_chain_holds["L"]),
    ]
    if ledger is not None:
        for fld in ("compensation", "compensated_payoff", "baseline_payoff", "sufficient"):
            metrics.append((fld, getattr(ledger.H, fld), getattr(ledger.L, fld)))
    if args.format == "summary":
        out.write(f"intervention: {iv.kind.value}\n")
        for name, e in (("before", e0), ("after", e1)):
            out.write(f"  {name}: W*={e.W_star:.10g} i_H={e.i_H:.10g} i_L={e.i_L:.10g} "
                      f"pi_H={e.pi_H:.10g} pi_L={e.pi_L:.10g}\n")
        out.write(f"  delta_W = {rep.delta_W:.10g}\n")
        for name, h, l in metrics:
            out.write(f"  {name}: H={fmt(h)} L={fmt(l)}\n")
        if ledger is not None:
            verdict = "insufficient for both types" if ledger.insufficient_for_all else \
                ("sufficient for both types" if ledger.H.sufficient and ledger.L.sufficient
                 else "sufficient for one type only")
            out.write(f"  Slutsky compensation: {verdict}\n")
        return EXIT_OK
    out.write(csv_line(("stage", "W_star", "i_H", "i_L", "pi_H", "pi_L", "delta_W")))
    out.write(csv_line(["baseline", e0.W_star, e0.i_H, e0.i_L, e0.pi_H, e0.pi_L, 0.0]))
    out.write(csv_line(["treated", e1.W_star, e1.i_H, e1.i_L, e1.pi_H, e1.pi_L, rep.delta_W]))
    out.write("\n")
    out.write(csv_line(("metric", "H", "L")))
    for row in metrics:
        out.write(csv_line(row))
    return EXIT_OK


def cmd_twopop(args, out):
    cfg = _load(args, "twopop")
    sol = solve_two_pop(cfg.twopop, tol=cfg.tol)
    if args.format == "summary":
        tp = cfg.twopop
        out.write(f"two populations, beta_f={fmt(tp.beta_f)} beta_m={fmt(tp.beta_m)}\n")
        out.write(f"equilibria: {len(sol)}\n")
        for j, e in enumerate(sol):
            out.write(f"  [{j}] W_f={e.W_f:.10g} W_m={e.W_m:.10g} "
                      + " ".join(f"i_{g}{k}={e.i(g, k):.10g}" for g in "fm" for k in "HL")
                      + f" {e.stability.value}\n")
        out.write("diagnostics: " + ", ".join(f"{k}={v}" for k, v in sol.diagnostics.items()) + "\n")
        return EXIT_OK
    out.write(csv_line(TWOPOP_COLUMNS))
    for j, e in enumerate(sol):
        out.write(csv_line([j, e.W_f, e.W_m]
                           + [e.i(g, k) for g in "fm" for k in "HL"]
                           + [e.pi(g, k) for g in "fm" for k in "HL"]
                           + [e.residual, e.stability]))
    return EXIT_OK


def cmd_verify(args, out):
    seed = args.seed
    samples = args.samples
    if args.config is not None:
        cfg = cfgmod.load(args.config)
        if seed is None:
            seed = cfg.seed
    if seed is None:
        seed = DEFAULT_SEED
    if samples < 1:
        raise ConfigError("--samples must be >= 1")
    rep = run_verify(samples, seed)
    out.write(f"verify seed={seed} samples={samples}\n")
    for s in rep.suites:
        status = "PASS" if s.ok else "FAIL"
        out.write(f"{status} {s.name}: {s.passed}/{s.total} (excluded {s.excluded})\n")
    bad = next((s for s in rep.suites if not s.ok), None)
    if bad is not None:
        out.write(f"first counterexample ({bad.name}): {bad.detail}\n")
        if bad.counterexample is not None:
            out.write(economy_text(bad.counterexample))
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "policy": cmd_policy,
            "twopop": cmd_twopop, "verify": cmd_verify}


def build_parser():
    ap = argparse.ArgumentParser(prog="epimatch", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config")
    ap.add_argument("--tol", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "summary"), default="csv")
    ap.add_argument("--samples", type=int, default=1000)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EpimatchError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
