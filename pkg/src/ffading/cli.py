"""Command-line front end: metric sweeps, figure-data presets, self-test.

Scenario files are JSON; SNR quantities cross this boundary in dB only and
are converted to linear exactly once.  Output is CSV (schema versioned in a
`# schema=1` comment) or JSON, byte-stable for a fixed scenario and seed.

Exit codes: 0 success, 2 scenario/schema error, 3 numeric non-convergence,
4 selftest failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import io
import json
import math
import os
import sys

import numpy as np

from . import metrics, oracles, selftest, sumdist
from .channel import BranchParams, Modulation, db_to_linear
from .estimate import Estimate
from .oracles import SimConfig
from .sumdist import SumChannel

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NONCONVERGED = 3
EXIT_SELFTEST = 4

CSV_HEADER = ("sweep_var,value_db_or_linear,metric_analytic,metric_asymptotic,"
              "metric_mc,mc_ci_low,mc_ci_high,terms_used,converged")

METRICS = ("op", "oc", "ber", "pdf", "cdf", "mgf")
SWEEP_VARS = ("gamma_bar_db", "gamma_th_db", "c_th_over_w")


class ScenarioError(ValueError):
    """Scenario schema violation; message names the offending field."""


def _need(d: dict, field: str, typ, where: str):
    if field not in d:
        raise ScenarioError(f"{where}: missing required field '{field}'")
    v = d[field]
    if typ is float and isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if not isinstance(v, typ):
        raise ScenarioError(f"{where}.{field}: expected {typ.__name__}, got {type(v).__name__}")
    return v


def parse_scenario(raw: dict) -> dict:
    """Validate a scenario dict; returns normalized fields.

    Required: branches (list of {m, m_s, [gamma_bar_db]}), sweep
    {variable, from, to, step}.  Optional: modulation (label or {lambda}),
    gamma_th_db, c_th_over_w, trials, seed.
    """
    if not isinstance(raw, dict):
        raise ScenarioError("scenario: top level must be a JSON object")
    branches_raw = _need(raw, "branches", list, "scenario")
    if not branches_raw:
        raise ScenarioError("scenario.branches: must be non-empty")
    branches = []
    for i, b in enumerate(branches_raw):
        where = f"scenario.branches[{i}]"
        if not isinstance(b, dict):
            raise ScenarioError(f"{where}: expected object")
        m = _need(b, "m", float, where)
        ms = _need(b, "m_s", float, where)
        gdb = b.get("gamma_bar_db", 0.0)
        if not isinstance(gdb, (int, float)) or isinstance(gdb, bool):
            raise ScenarioError(f"{where}.gamma_bar_db: expected number")
        if m <= 0 or ms <= 0:
            raise ScenarioError(f"{where}: m and m_s must be positive")
        branches.append((m, ms, float(gdb)))

    sweep = _need(raw, "sweep", dict, "scenario")
    var = _need(sweep, "variable", str, "scenario.sweep")
    if var not in SWEEP_VARS:
        raise ScenarioError(f"scenario.sweep.variable: must be one of {SWEEP_VARS}")
    lo = _need(sweep, "from", float, "scenario.sweep")
    hi = _need(sweep, "to", float, "scenario.sweep")
    step = _need(sweep, "step", float, "scenario.sweep")
    if step <= 0:
        raise ScenarioError("scenario.sweep.step: must be > 0")
    if hi < lo:
        raise ScenarioError("scenario.sweep: 'to' must be >= 'from'")

    mod_raw = raw.get("modulation", "bpsk")
    if isinstance(mod_raw, str):
        try:
            mod = Modulation.from_label(mod_raw)
        except ValueError as e:
            raise ScenarioError(f"scenario.modulation: {e}")
    elif isinstance(mod_raw, dict):
        lam = _need(mod_raw, "lambda", float, "scenario.modulation")
        if lam <= 0:
            raise ScenarioError("scenario.modulation.lambda: must be > 0")
        mod = Modulation(lam)
    else:
        raise ScenarioError("scenario.modulation: expected label or {lambda}")

    trials = raw.get("trials", 0)
    if not isinstance(trials, int) or trials < 0:
        raise ScenarioError("scenario.trials: expected non-negative integer")
    seed = raw.get("seed", 12345)
    if not isinstance(seed, int):
        raise ScenarioError("scenario.seed: expected integer")

    return {
        "branches": branches,
        "sweep_var": var,
        "sweep_values": np.arange(lo, hi + step * 0.5, step),
        "modulation": mod,
        "gamma_th_db": float(raw.get("gamma_th_db", 0.0)),
        "c_th_over_w": float(raw.get("c_th_over_w", 1.0)),
        "trials": trials,
        "seed": seed,
    }


def _channel_at(scn: dict, sweep_value: float) -> SumChannel:
    # gamma_bar_db sweeps apply the value to every branch, with the branch's
    # own gamma_bar_db acting as a per-branch offset
    if scn["sweep_var"] == "gamma_bar_db":
        return SumChannel(tuple(
            BranchParams(m, ms, db_to_linear(sweep_value + off))
            for m, ms, off in scn["branches"]))
    return SumChannel(tuple(
        BranchParams(m, ms, db_to_linear(off)) for m, ms, off in scn["branches"]))


def _mc_interval(sim_cdf_at, n: int) -> tuple[float, float, float]:
    p = sim_cdf_at
    se = math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return p, max(p - 1.96 * se, 0.0), min(p + 1.96 * se, 1.0)


def _eval_point(scn: dict, metric: str, v: float):
    """One sweep point -> row dict (analytic, asymptotic, MC, diagnostics)."""
    ch = _channel_at(scn, v)
    if scn["sweep_var"] == "gamma_th_db":
        gamma_th = db_to_linear(v)
    else:
        gamma_th = db_to_linear(scn["gamma_th_db"])
    cw = v if scn["sweep_var"] == "c_th_over_w" else scn["c_th_over_w"]
    mod = scn["modulation"]
    trials = scn["trials"]
    row = {"sweep_var": scn["sweep_var"], "value": v, "asymptotic": None,
           "mc": None, "ci_low": None, "ci_high": None}

    if metric == "op":
        est = metrics.outage_probability(ch, gamma_th)
        row["asymptotic"] = metrics.outage_probability_asymptotic(ch, gamma_th)
        target = gamma_th
    elif metric == "oc":
        spec = metrics.CapacitySpec(cw, 1.0)
        est = metrics.outage_capacity(ch, spec)
        row["asymptotic"] = metrics.outage_probability_asymptotic(ch, spec.snr_threshold)
        target = spec.snr_threshold
    elif metric == "ber":
        b = metrics.ber_quadrature(ch, mod)
        est = Estimate(b.value, b.err_bound, b.diagnostics.get("nodes", 0),
                       b.converged, b.method)
        row["asymptotic"] = metrics.ber_asymptotic(ch, mod)
        target = None
    elif metric == "pdf":
        est = sumdist.pdf_sum(ch, gamma_th)
        target = gamma_th
    elif metric == "cdf":
        est = sumdist.cdf_sum(ch, gamma_th)
        target = gamma_th
    elif metric == "mgf":
        est = Estimate(sumdist.mgf_sum(ch, gamma_th), 0.0, 0, True, "product")
        target = gamma_th
    else:
        raise ScenarioError(f"metric: unknown metric {metric!r}")

    if trials > 0:
        cfg = SimConfig(seed=scn["seed"], n_trials=trials)
        if metric == "ber":
            sim = oracles.simulate_ber(ch, mod, cfg)
            row["mc"], row["ci_low"], row["ci_high"] = sim.value, sim.ci_low, sim.ci_high
        elif metric in ("op", "oc", "cdf"):
            sim = oracles.simulate_sum(ch, cfg)
            row["mc"], row["ci_low"], row["ci_high"] = _mc_interval(
                float(sim.ecdf(target)), trials)
        elif metric == "pdf":
            sim = oracles.simulate_sum(ch, cfg)
            h = max(0.02 * target, 1e-9)
            mass = float(sim.ecdf(target + h) - sim.ecdf(target - h))
            se = math.sqrt(max(mass * (1 - mass), 0.0) / trials) / (2 * h)
            row["mc"] = mass / (2 * h)
            row["ci_low"], row["ci_high"] = row["mc"] - 1.96 * se, row["mc"] + 1.96 * se
        elif metric == "mgf":
            sim = oracles.simulate_sum(ch, cfg)
            vals = np.exp(-target * sim.samples)
            mean, se = float(np.mean(vals)), float(np.std(vals) / math.sqrt(trials))
            row["mc"] = mean
            row["ci_low"], row["ci_high"] = mean - 1.96 * se, mean + 1.96 * se

    row["analytic"] = est.value
    row["terms_used"] = est.terms_used
    row["converged"] = est.converged
    return row


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _rows_to_csv(rows, out: io.TextIOBase, curve: str | None = None):
    if curve is not None:
        out.write(f"# curve={curve}\n")
    for r in rows:
        out.write(",".join(_fmt(r[k]) for k in (
            "sweep_var", "value", "analytic", "asymptotic", "mc",
            "ci_low", "ci_high", "terms_used", "converged")) + "\n")


def _emit(all_rows, args, curves=None) -> int:
    """Write rows (list per curve) as CSV or JSON; returns exit code."""
    nonconverged = any(not r["converged"] for rows in all_rows for r in rows)
    nan_rows = any(r["analytic"] is None or math.isnan(r["analytic"])
                   for rows in all_rows for r in rows)
    buf = io.StringIO()
    if args.format == "csv":
        buf.write("# schema=1\n")
        buf.write(CSV_HEADER + "\n")
        for i, rows in enumerate(all_rows):
            _rows_to_csv(rows, buf, curves[i] if curves else None)
    else:
        payload = {"schema": 1, "curves": [
            {"label": (curves[i] if curves else "curve0"), "rows": rows}
            for i, rows in enumerate(all_rows)]}
        buf.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    if nan_rows:
        print("error: NaN in emitted rows", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_NONCONVERGED if nonconverged else EXIT_OK


def _sweep_rows(scn: dict, metric: str) -> list[dict]:
    values = [float(v) for v in scn["sweep_values"]]
    workers = min(len(values), os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda v: _eval_point(scn, metric, v), values))


def cmd_eval(args) -> int:
    try:
        with open(args.scenario) as f:
            raw = json.load(f)
    except OSError as e:
        print(f"error: cannot read scenario: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except json.JSONDecodeError as e:
        print(f"error: scenario JSON: line {e.lineno}: {e.msg}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        scn = parse_scenario(raw)
        if args.metric not in METRICS:
            raise ScenarioError(f"metric: must be one of {METRICS}")
        if args.trials is not None:
            scn["trials"] = args.trials
        if args.seed is not None:
            scn["seed"] = args.seed
        rows = _sweep_rows(scn, args.metric)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    return _emit([rows], args)


FIGURE_PRESETS = {
    # outage probability vs mean SNR, i.i.d. m=2.5 ms=1.5, threshold 0 dB
    "1": {
        "metric": "op",
        "curves": [("L1", 1), ("L2", 2)],
        "scenario": lambda L: {
            "branches": [{"m": 2.5, "m_s": 1.5}] * L,
            "sweep": {"variable": "gamma_bar_db", "from": 0.0, "to": 40.0, "step": 2.0},
            "gamma_th_db": 0.0,
        },
    },
    # outage capacity vs mean SNR, L=3 m=1.5 ms=1.25, several C_th/W
    "2": {
        "metric": "oc",
        "curves": [("CthW0.5", 0.5), ("CthW1", 1.0), ("CthW2", 2.0)],
        "scenario": lambda cw: {
            "branches": [{"m": 1.5, "m_s": 1.25}] * 3,
            "sweep": {"variable": "gamma_bar_db", "from": 0.0, "to": 30.0, "step": 2.0},
            "c_th_over_w": cw,
        },
    },
    # BPSK BER vs mean SNR, triple branch i.n.i.d. in m, shadowing sweep
    "3": {
        "metric": "ber",
        "curves": [("ms0.5", 0.5), ("ms5", 5.0), ("ms50", 50.0)],
        "scenario": lambda ms: {
            "branches": [{"m": 1.0, "m_s": ms}, {"m": 1.5, "m_s": ms},
                         {"m": 2.5, "m_s": ms}],
            "modulation": "bpsk",
            "sweep": {"variable": "gamma_bar_db", "from": 0.0, "to": 40.0, "step": 2.0},
        },
    },
}


def cmd_figure(args) -> int:
    preset = FIGURE_PRESETS[args.number]
    all_rows, labels = [], []
    for label, param in preset["curves"]:
        raw = preset["scenario"](param)
        raw.setdefault("trials", args.trials or 0)
        raw.setdefault("seed", args.seed if args.seed is not None else 12345)
        scn = parse_scenario(raw)
        all_rows.append(_sweep_rows(scn, preset["metric"]))
        labels.append(label)
    return _emit(all_rows, args, curves=labels)


def cmd_selftest(args) -> int:
    level = "quick" if args.quick else "full"
    report = selftest.run_selftest(level=level, seed=args.seed if args.seed is not None else 12345)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    if not report["all_pass"]:
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        print(f"selftest FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


def cmd_sample(args) -> int:
    try:
        with open(args.scenario) as f:
            scn = parse_scenario(json.load(f))
    except (OSError, json.JSONDecodeError, ScenarioError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    n = args.trials or scn["trials"] or 10000
    seed = args.seed if args.seed is not None else scn["seed"]
    ch = SumChannel(tuple(BranchParams(m, ms, db_to_linear(off))
                          for m, ms, off in scn["branches"]))
    from . import channel as _ch
    rng = oracles.chunk_rng(seed, 0)
    cols = [_ch.sample(b, rng, size=n) for b in ch.branches]
    buf = io.StringIO()
    buf.write("# schema=1\n")
    buf.write(",".join(f"branch_{i+1}" for i in range(ch.L)) + ",sum\n")
    total = np.sum(cols, axis=0)
    for j in range(n):
        buf.write(",".join(format(c[j], ".12g") for c in cols)
                  + "," + format(total[j], ".12g") + "\n")
    if args.out:
        with open(args.out, "w") as f:
            f.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="ffading",
        description="F composite fading: sum statistics and MRC performance sweeps")
    sub = ap.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a metric over a scenario sweep")
    p_eval.add_argument("--scenario", required=True)
    p_eval.add_argument("--metric", required=True,
                        help="one of op|oc|ber|pdf|cdf|mgf")
    p_eval.add_argument("--trials", type=int, default=None,
                        help="Monte Carlo trials per point (0 = analytic only)")
    p_eval.add_argument("--seed", type=int, default=None)
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("--format", choices=("csv", "json"), default="csv")
    p_eval.set_defaults(func=cmd_eval)

    p_fig = sub.add_parser("figure", help="reproduce a preset figure data set")
    p_fig.add_argument("number", choices=("1", "2", "3"))
    p_fig.add_argument("--trials", type=int, default=None)
    p_fig.add_argument("--seed", type=int, default=None)
    p_fig.add_argument("--out", default=None)
    p_fig.add_argument("--format", choices=("csv", "json"), default="csv")
    p_fig.set_defaults(func=cmd_figure)

    p_self = sub.add_parser("selftest", help="run the built-in validation suite")
    p_self.add_argument("--quick", action="store_true",
                        help="reduced grids/trials (< 60 s)")
    p_self.add_argument("--seed", type=int, default=None)
    p_self.add_argument("--out", default=None)
    p_self.set_defaults(func=cmd_selftest)

    p_samp = sub.add_parser("sample", help="dump raw per-branch SNR variates")
    p_samp.add_argument("--scenario", required=True)
    p_samp.add_argument("--trials", type=int, default=None)
    p_samp.add_argument("--seed", type=int, default=None)
    p_samp.add_argument("--out", default=None)
    p_samp.set_defaults(func=cmd_sample)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
