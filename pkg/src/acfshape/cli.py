"""Command-line front end tying the compute modules together.

Subcommands: acf-theory (closed-form tables), acf-mc (empirical sweeps),
shape (gain design), range-sim (configurable ranging experiments), and
reproduce (canned experiment recipes fig1..fig7).  Each one validates
its whole configuration up front, writes outputs atomically through
tableio with a JSON manifest per file, and echoes the resolved
configuration as a single JSON line on stdout.

Exit codes: 0 success, 1 usage error, 2 invalid configuration,
3 numerical failure (a solver that did not converge, or a non-finite
value reaching an output table).  A fixed seed gives byte-identical
output files; the ACFSHAPE_THREADS variable only changes memory layout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from dataclasses import replace

import numpy as np

from . import acfstats, constellation, modulation, pulse, ranging, shaping, tableio
from .montecarlo import TrialConfig, run_trials

__all__ = ["run", "main", "NumericalFailure"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

# stream tag for illustrative range profiles; symbol draws use 1 and
# ranging sweeps use 2 inside their own modules
_TAG_PROFILE = 3

_METHOD_NAME_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class NumericalFailure(RuntimeError):
    """Computation produced no usable result (divergence or non-finite)."""


# ---------------------------------------------------------------------------
# output plumbing


def _ensure_parent(path) -> None:
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)


def _emit_table(path, header, rows, command, params, seed, started) -> None:
    _ensure_parent(path)
    try:
        tableio.emit_csv(path, header, rows)
    except ValueError as exc:
        raise NumericalFailure(str(exc)) from exc
    tableio.write_manifest(path, command, params, seed, time.perf_counter() - started)


def _emit_gains(path, values, command, params, seed, started) -> None:
    _ensure_parent(path)
    try:
        tableio.emit_text(path, values)
    except ValueError as exc:
        raise NumericalFailure(str(exc)) from exc
    tableio.write_manifest(path, command, params, seed, time.perf_counter() - started)


def _rel_db(profile: np.ndarray) -> np.ndarray:
    """Profile in dB relative to its own peak, floored like acfstats."""
    top = float(np.max(profile))
    if top <= 0.0:
        return np.full(len(profile), acfstats.DB_FLOOR)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(profile / top)
    return np.maximum(db, acfstats.DB_FLOOR)


# ---------------------------------------------------------------------------
# waveform construction shared by acf-theory / acf-mc


def _constellation_from_args(args) -> constellation.ConstellationSpec:
    if args.constellation == "custom":
        if not args.constellation_file:
            raise ValueError("--constellation custom needs --constellation-file")
        return constellation.from_text_file(args.constellation_file)
    return constellation.from_name(args.constellation)


def _basis_from_args(args, n: int) -> modulation.ModulationBasis:
    if args.basis == "custom":
        if not args.basis_file:
            raise ValueError("--basis custom needs --basis-file")
        return modulation.from_text_file(args.basis_file, n)
    return modulation.from_name(args.basis, n)


def _pulse_from_args(args) -> pulse.NyquistPulse:
    if args.pulse == "file":
        if not args.pulse_file:
            raise ValueError("--pulse file needs --pulse-file")
        return pulse.from_text_file(args.pulse_file, args.n, args.l)
    return pulse.rrc_spectrum(args.n, args.l, args.alpha)


def _waveform_params(args, pul: pulse.NyquistPulse) -> dict:
    return {
        "constellation": args.constellation,
        "basis": args.basis,
        "pulse": pul.name,
        "n": args.n,
        "l": args.l,
        "alpha": pul.alpha,
        "m": args.m,
    }


# ---------------------------------------------------------------------------
# acf-theory / acf-mc


def _cmd_acf_theory(args) -> dict:
    started = time.perf_counter()
    pul = _pulse_from_args(args)
    basis = _basis_from_args(args, args.n)
    const = _constellation_from_args(args)
    kurt = constellation.kurtosis(const)
    stats = acfstats.expected_sq_acf(pul, basis, kurt, m=args.m)
    iceberg = acfstats.to_db_of_peak(stats.squared_mean, args.n)
    sea = acfstats.to_db_of_peak(stats.variance, args.n)
    total = acfstats.to_db_of_peak(stats.total, args.n)
    rows = [
        [int(k), iceberg[i], sea[i], total[i]]
        for i, k in enumerate(stats.lags)
    ]
    params = _waveform_params(args, pul) | {"kurtosis": kurt, "out": str(args.out)}
    _emit_table(
        args.out,
        ["lag", "iceberg_db", "sea_db", "total_db"],
        rows,
        "acf-theory",
        params,
        None,
        started,
    )
    return params


def _cmd_acf_mc(args) -> dict:
    started = time.perf_counter()
    pul = _pulse_from_args(args)
    basis = _basis_from_args(args, args.n)
    const = _constellation_from_args(args)
    kurt = constellation.kurtosis(const)
    config = TrialConfig(const, basis, pul, trials=args.trials, seed=args.seed, m=args.m)
    result = run_trials(config)
    theory = acfstats.expected_sq_acf(pul, basis, kurt, m=args.m)
    ref = float(args.n) ** 2
    empirical = acfstats.to_db_of_peak(result.mean_sq, args.n)
    expected = acfstats.to_db_of_peak(theory.total, args.n)
    rows = [
        [int(k), empirical[i], expected[i], result.se[i] / ref]
        for i, k in enumerate(result.lags)
    ]
    params = _waveform_params(args, pul) | {
        "kurtosis": kurt,
        "trials": args.trials,
        "out": str(args.out),
    }
    _emit_table(
        args.out,
        ["lag", "empirical_db", "theory_db", "stderr"],
        rows,
        "acf-mc",
        params,
        args.seed,
        started,
    )
    return params | {"seed": args.seed}


# ---------------------------------------------------------------------------
# shape


def _parse_region(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"region must look like lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"region endpoints must be numbers, got {text!r}") from None
    return lo, hi


def _region_lags(n: int, l: int, lo: float, hi: float, units: str) -> np.ndarray:
    if units == "symbol":
        return shaping.sidelobe_lags(n, l, lo, hi)
    if not (float(lo).is_integer() and float(hi).is_integer()):
        raise ValueError(f"lag-unit region needs integer endpoints, got {lo}:{hi}")
    return np.arange(int(lo), int(hi) + 1)


def _design_or_fail(
    spec: shaping.ShapingSpec,
    tol: float | None = None,
    max_iter: int | None = None,
) -> shaping.ShapingResult:
    result = shaping.design_pulse(spec, tol=tol, max_iter=max_iter)
    if not result.converged:
        raise NumericalFailure(
            f"{spec.objective} design stopped after {result.iterations} iterations "
            f"with residuals {result.primal_residual:.3e}/{result.dual_residual:.3e}"
        )
    if result.constraint_violation > 1e-8:
        raise NumericalFailure(
            f"designed gains violate constraints by {result.constraint_violation:.3e}"
        )
    return result


def _cmd_shape(args) -> dict:
    started = time.perf_counter()
    lo, hi = _parse_region(args.region)
    lags = _region_lags(args.n, args.l, lo, hi, args.region_units)
    spec = shaping.ShapingSpec(args.n, args.l, args.alpha, lags, args.objective)
    result = _design_or_fail(spec, args.tol, args.max_iter)
    rrc = pulse.rrc_spectrum(args.n, args.l, args.alpha)
    params = {
        "objective": args.objective,
        "region": args.region,
        "region_units": args.region_units,
        "region_lags": [int(lags[0]), int(lags[-1])],
        "n": args.n,
        "l": args.l,
        "alpha": args.alpha,
        "objective_value": result.value,
        "baseline_value": shaping.region_metrics(rrc, lags)[args.objective],
        "iterations": result.iterations,
    }
    if args.out_spectrum:
        _emit_gains(
            args.out_spectrum, result.pulse.g, "shape",
            params | {"out": str(args.out_spectrum)}, None, started,
        )
    if args.out_acf:
        all_lags = acfstats.all_lags(rrc)
        designed_db = acfstats.to_db_of_peak(
            np.abs(acfstats.mean_acf(result.pulse)) ** 2, args.n
        )
        rrc_db = acfstats.to_db_of_peak(np.abs(acfstats.mean_acf(rrc)) ** 2, args.n)
        rows = [
            [int(k), rrc_db[i], designed_db[i]] for i, k in enumerate(all_lags)
        ]
        _emit_table(
            args.out_acf,
            ["lag", "rrc_db", "designed_db"],
            rows,
            "shape",
            params | {"out": str(args.out_acf)},
            None,
            started,
        )
    return params


# ---------------------------------------------------------------------------
# range-sim


def _build_method_pulse(method: dict, n: int, l: int, alpha: float, issues: list):
    kind = method.get("pulse", "rrc")
    name = method.get("name", "?")
    if kind == "rrc":
        return pulse.rrc_spectrum(n, l, alpha)
    if kind == "file":
        path = method.get("pulse_file")
        if not path:
            issues.append(f"methods[{name}].pulse_file: required when pulse is 'file'")
            return None
        return pulse.from_text_file(path, n, l)
    if kind == "designed":
        region = method.get("region")
        if (
            not isinstance(region, (list, tuple))
            or len(region) != 2
            or not all(isinstance(v, (int, float)) for v in region)
        ):
            issues.append(f"methods[{name}].region: need [lo, hi] for a designed pulse")
            return None
        units = method.get("region_units", "symbol")
        if units not in ("symbol", "lag"):
            issues.append(f"methods[{name}].region_units: 'symbol' or 'lag', got {units!r}")
            return None
        objective = method.get("objective", "isl")
        if objective not in ("isl", "psl"):
            issues.append(f"methods[{name}].objective: 'isl' or 'psl', got {objective!r}")
            return None
        lags = _region_lags(n, l, region[0], region[1], units)
        spec = shaping.ShapingSpec(n, l, alpha, lags, objective)
        return _design_or_fail(spec).pulse
    issues.append(f"methods[{name}].pulse: 'rrc', 'designed', or 'file', got {kind!r}")
    return None


def _resolve_range_config(cfg: dict, args) -> dict:
    """Validate the range-sim config, collecting every violation."""
    issues: list[str] = []

    def need(key, kind, label=None):
        label = label or key
        if key not in cfg:
            issues.append(f"{label}: missing")
            return None
        if kind is not None and not isinstance(cfg[key], kind):
            issues.append(f"{label}: wrong type {type(cfg[key]).__name__}")
            return None
        return cfg[key]

    n = need("n", int)
    l = need("l", int)
    alpha = need("alpha", (int, float))
    targets = need("targets", list)
    roi_m = need("roi_m", list)
    methods = need("methods", list)
    sweep = need("sweep", dict)
    bandwidth = cfg.get("bandwidth_hz", 200e6)
    if not isinstance(bandwidth, (int, float)) or bandwidth <= 0:
        issues.append(f"bandwidth_hz: positive number required, got {bandwidth!r}")
    m_default = cfg.get("m", 1)
    if not isinstance(m_default, int) or m_default < 1:
        issues.append(f"m: positive integer required, got {m_default!r}")

    snr_grid, runs = None, None
    if sweep is not None:
        snr_grid = sweep.get("snr_db")
        if not isinstance(snr_grid, list) or not snr_grid or not all(
            isinstance(v, (int, float)) for v in snr_grid
        ):
            issues.append("sweep.snr_db: nonempty list of numbers required")
            snr_grid = None
        runs = sweep.get("runs")
        if not isinstance(runs, int) or runs < 1:
            issues.append(f"sweep.runs: positive integer required, got {runs!r}")
            runs = None
    if args.runs is not None:
        runs = args.runs
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    if not isinstance(seed, int):
        issues.append(f"seed: integer required, got {seed!r}")

    if targets is not None:
        if not targets:
            issues.append("targets: at least one target required")
        for i, t in enumerate(targets):
            if not isinstance(t, dict) or "range_m" not in t:
                issues.append(f"targets[{i}]: need an object with range_m")
                continue
            if not isinstance(t["range_m"], (int, float)) or t["range_m"] < 0:
                issues.append(f"targets[{i}].range_m: nonnegative number required")
            if not isinstance(t.get("gain_db", 0.0), (int, float)):
                issues.append(f"targets[{i}].gain_db: number required")

    if roi_m is not None and (
        len(roi_m) != 2
        or not all(isinstance(v, (int, float)) for v in roi_m)
        or roi_m[0] > roi_m[1]
    ):
        issues.append(f"roi_m: ordered [lo, hi] in meters required, got {roi_m!r}")

    names = []
    if methods is not None:
        if not methods:
            issues.append("methods: at least one method required")
        for i, meth in enumerate(methods):
            if not isinstance(meth, dict):
                issues.append(f"methods[{i}]: object required")
                continue
            name = meth.get("name")
            if not isinstance(name, str) or not _METHOD_NAME_RE.match(name):
                issues.append(
                    f"methods[{i}].name: letters, digits, - and _ only, got {name!r}"
                )
            else:
                names.append(name)
            for key in ("constellation", "basis"):
                if not isinstance(meth.get(key), str):
                    issues.append(f"methods[{i}].{key}: name string required")
            mm = meth.get("m", m_default)
            if not isinstance(mm, int) or mm < 1:
                issues.append(f"methods[{i}].m: positive integer required, got {mm!r}")
    if len(names) != len(set(names)):
        issues.append("methods: names must be unique")

    estimate = cfg.get("estimate")
    if estimate is not None:
        labels = [t.get("label") for t in targets or [] if isinstance(t, dict)]
        if estimate not in labels:
            issues.append(f"estimate: no target labeled {estimate!r}")

    if issues:
        raise ValueError("config invalid:\n  " + "\n  ".join(issues))

    return {
        "n": n,
        "l": l,
        "alpha": float(alpha),
        "bandwidth_hz": float(bandwidth),
        "m": m_default,
        "targets": targets,
        "roi_m": [float(roi_m[0]), float(roi_m[1])],
        "methods": methods,
        "snr_db": [float(v) for v in snr_grid],
        "runs": runs,
        "seed": seed,
        "estimate": estimate,
        "profile_snr_db": float(
            args.profile_snr_db
            if args.profile_snr_db is not None
            else cfg.get("profile_snr_db", max(snr_grid))
        ),
    }


def _scene_geometry(resolved: dict) -> dict:
    """Snap targets and roi onto the lag grid; report the mapping."""
    bw, l = resolved["bandwidth_hz"], resolved["l"]
    grid = resolved["n"] * resolved["l"]
    step = ranging.range_per_lag_m(bw, l)
    targets = []
    for i, t in enumerate(resolved["targets"]):
        lag = ranging.lag_for_range(t["range_m"], bw, l)
        if not 0 <= lag < grid:
            raise ValueError(f"targets[{i}]: range {t['range_m']} m falls off the grid")
        gain_db = float(t.get("gain_db", 0.0))
        targets.append(
            ranging.Target(
                lag, 10.0 ** (gain_db / 20.0), t.get("label", f"target{i}")
            )
        )
    roi = (
        ranging.lag_for_range(resolved["roi_m"][0], bw, l),
        ranging.lag_for_range(resolved["roi_m"][1], bw, l),
    )
    if resolved["estimate"] is None:
        tracked = min(targets, key=lambda t: abs(t.amplitude))
    else:
        tracked = next(t for t in targets if t.label == resolved["estimate"])
    return {
        "targets": tuple(targets),
        "roi": roi,
        "tracked": tracked,
        "true_range_m": ranging.range_for_lag(tracked.delay, bw, l),
        "amplitude_ref": max(abs(t.amplitude) for t in targets),
        "range_per_lag_m": step,
        "roi_snapped_m": [ranging.range_for_lag(roi[0], bw, l),
                          ranging.range_for_lag(roi[1], bw, l)],
        "target_lags": [t.delay for t in targets],
    }


def _build_scenarios(resolved: dict, geometry: dict) -> list[tuple[str, ranging.RangingScenario]]:
    n, l, alpha = resolved["n"], resolved["l"], resolved["alpha"]
    issues: list[str] = []
    out = []
    for meth in resolved["methods"]:
        pul = _build_method_pulse(meth, n, l, alpha, issues)
        if pul is None:
            continue
        const = constellation.from_name(meth["constellation"])
        basis = modulation.from_name(meth["basis"], n)
        scenario = ranging.RangingScenario(
            const,
            basis,
            pul,
            geometry["targets"],
            geometry["roi"],
            noise_var=0.0,
            m=meth.get("m", resolved["m"]),
            bandwidth_hz=resolved["bandwidth_hz"],
        )
        out.append((meth["name"], scenario))
    if issues:
        raise ValueError("config invalid:\n  " + "\n  ".join(issues))
    return out


def _ranging_tables(
    scenarios: list[tuple[str, ranging.RangingScenario]],
    geometry: dict,
    resolved: dict,
    rmse_path,
    profile_path,
    command: str,
    started: float,
) -> None:
    """Shared emitter for range-sim and the ranging recipes."""
    snr_grid = resolved["snr_db"]
    runs, seed = resolved["runs"], resolved["seed"]
    ref = geometry["amplitude_ref"]
    true_m = geometry["true_range_m"]
    header = ["snr_db"]
    columns = []
    for name, scenario in scenarios:
        rows = ranging.rmse_sweep(scenario, true_m, snr_grid, runs, seed, ref)
        header += [f"{name}_rmse_m", f"{name}_rmse_hits_m", f"{name}_success_rate"]
        columns.append(rows)
    table = []
    for i, snr in enumerate(snr_grid):
        row: list = [float(snr)]
        for rows in columns:
            hits = rows[i]["rmse_hits_m"]
            row += [
                rows[i]["rmse_m"],
                None if math.isnan(hits) else hits,
                rows[i]["success_rate"],
            ]
        table.append(row)
    params = resolved | {
        "true_range_m": true_m,
        "roi_lags": list(geometry["roi"]),
        "roi_snapped_m": geometry["roi_snapped_m"],
        "target_lags": geometry["target_lags"],
        "range_per_lag_m": geometry["range_per_lag_m"],
        "snr_definition": "strong-path per-sample received power over noise variance",
    }
    _emit_table(rmse_path, header, table, command,
                params | {"out": str(rmse_path)}, seed, started)

    snr = resolved["profile_snr_db"]
    noise_var = ref**2 / (resolved["l"] * 10.0 ** (snr / 10.0))
    profiles = []
    for idx, (name, scenario) in enumerate(scenarios):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _TAG_PROFILE, idx)))
        scene = replace(scenario, noise_var=noise_var)
        profiles.append(_rel_db(ranging.run_once(scene, rng)))
    grid = scenarios[0][1].grid
    bw, l = resolved["bandwidth_hz"], resolved["l"]
    rows = [
        [ranging.range_for_lag(lag, bw, l)] + [p[lag] for p in profiles]
        for lag in range(grid)
    ]
    _emit_table(
        profile_path,
        ["range_m"] + [f"{name}_db" for name, _ in scenarios],
        rows,
        command,
        params | {"out": str(profile_path), "profile_snr_db": snr},
        seed,
        started,
    )


def _cmd_range_sim(args) -> dict:
    started = time.perf_counter()
    try:
        with open(args.config) as handle:
            cfg = json.load(handle)
    except OSError as exc:
        raise ValueError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValueError(f"config {args.config} must hold a JSON object")
    resolved = _resolve_range_config(cfg, args)
    geometry = _scene_geometry(resolved)
    scenarios = _build_scenarios(resolved, geometry)
    prefix = args.out_prefix
    _ranging_tables(
        scenarios,
        geometry,
        resolved,
        f"{prefix}_rmse.csv",
        f"{prefix}_profile.csv",
        "range-sim",
        started,
    )
    return resolved | {
        "true_range_m": geometry["true_range_m"],
        "roi_lags": list(geometry["roi"]),
        "outputs": [f"{prefix}_rmse.csv", f"{prefix}_profile.csv"],
    }


# ---------------------------------------------------------------------------
# reproduce recipes: canned experiments at the headline parameter set

_FIG_N, _FIG_L, _FIG_ALPHA = 128, 10, 0.35
_FIG_BW = 200e6
_FIG_SNR = [15.0, 20.0, 25.0, 30.0, 35.0]
_SCENE = {
    "targets": [
        {"range_m": 20.0, "gain_db": 0.0, "label": "strong"},
        {"range_m": 30.0, "gain_db": -45.0, "label": "weak"},
    ],
    "roi_m": [23.74, 31.24],
    "estimate": "weak",
}


def _mc_curve(const_name, basis_name, m, trials, seed):
    const = constellation.from_name(const_name)
    basis = modulation.from_name(basis_name, _FIG_N)
    pul = pulse.rrc_spectrum(_FIG_N, _FIG_L, _FIG_ALPHA)
    kurt = constellation.kurtosis(const)
    theory = acfstats.expected_sq_acf(pul, basis, kurt, m=m)
    result = run_trials(TrialConfig(const, basis, pul, trials=trials, seed=seed, m=m))
    return (
        acfstats.to_db_of_peak(theory.total, _FIG_N),
        acfstats.to_db_of_peak(result.mean_sq, _FIG_N),
    )


def _recipe_fig1(args, out_dir) -> list[str]:
    """Single-carrier 16-QAM correlation with and without slot averaging."""
    started = time.perf_counter()
    pul = pulse.rrc_spectrum(_FIG_N, _FIG_L, _FIG_ALPHA)
    pulse_db = acfstats.to_db_of_peak(
        np.abs(acfstats.mean_acf(pul)) ** 2, _FIG_N
    )
    t1, e1 = _mc_curve("qam16", "sc", 1, args.trials, args.seed)
    t100, e100 = _mc_curve("qam16", "sc", 100, args.trials, args.seed)
    rows = [
        [int(k), pulse_db[k], t1[k], e1[k], t100[k], e100[k]]
        for k in range(_FIG_N * _FIG_L)
    ]
    path = f"{out_dir}/fig1.csv"
    params = {
        "recipe": "fig1",
        "constellation": "qam16",
        "basis": "sc",
        "n": _FIG_N,
        "l": _FIG_L,
        "alpha": _FIG_ALPHA,
        "m_values": [1, 100],
        "trials": args.trials,
    }
    _emit_table(
        path,
        ["lag", "pulse_db", "theory_m1_db", "empirical_m1_db",
         "theory_m100_db", "empirical_m100_db"],
        rows,
        "reproduce",
        params,
        args.seed,
        started,
    )
    return [path]


def _comparison_recipe(name, out_dir, args, variants, m):
    """Theory and empirical curves per (label, constellation, basis)."""
    started = time.perf_counter()
    header = ["lag"]
    curves = []
    for label, const_name, basis_name in variants:
        theory_db, emp_db = _mc_curve(const_name, basis_name, m, args.trials, args.seed)
        header += [f"theory_{label}_db", f"empirical_{label}_db"]
        curves.append((theory_db, emp_db))
    rows = []
    for k in range(_FIG_N * _FIG_L):
        row: list = [int(k)]
        for theory_db, emp_db in curves:
            row += [theory_db[k], emp_db[k]]
        rows.append(row)
    path = f"{out_dir}/{name}.csv"
    params = {
        "recipe": name,
        "variants": [list(v) for v in variants],
        "n": _FIG_N,
        "l": _FIG_L,
        "alpha": _FIG_ALPHA,
        "m": m,
        "trials": args.trials,
    }
    _emit_table(path, header, rows, "reproduce", params, args.seed, started)
    return [path]


def _recipe_fig2(args, out_dir) -> list[str]:
    """16-QAM correlation across the three standard bases."""
    return _comparison_recipe(
        "fig2",
        out_dir,
        args,
        [("sc", "qam16", "sc"), ("cdma", "qam16", "cdma"), ("ofdm", "qam16", "ofdm")],
        m=1,
    )


def _recipe_fig3(args, out_dir) -> list[str]:
    """Subcarrier-basis correlation across constellation families."""
    return _comparison_recipe(
        "fig3",
        out_dir,
        args,
        [
            ("psk16", "psk16", "ofdm"),
            ("qam16", "qam16", "ofdm"),
            ("qam1024", "qam1024", "ofdm"),
            ("gaussian", "gaussian", "ofdm"),
        ],
        m=1,
    )


def _recipe_fig5(args, out_dir) -> list[str]:
    """SC against OFDM after 100-slot averaging."""
    return _comparison_recipe(
        "fig5",
        out_dir,
        args,
        [("sc", "qam16", "sc"), ("ofdm", "qam16", "ofdm")],
        m=100,
    )


def _recipe_fig4(args, out_dir) -> list[str]:
    """Worst-lag gain design against the RRC baseline."""
    started = time.perf_counter()
    lags = shaping.sidelobe_lags(_FIG_N, _FIG_L, 5, 15)
    spec = shaping.ShapingSpec(_FIG_N, _FIG_L, _FIG_ALPHA, lags, "psl")
    result = _design_or_fail(spec)
    rrc = pulse.rrc_spectrum(_FIG_N, _FIG_L, _FIG_ALPHA)
    params = {
        "recipe": "fig4",
        "objective": "psl",
        "region_symbols": [5, 15],
        "region_lags": [int(lags[0]), int(lags[-1])],
        "n": _FIG_N,
        "l": _FIG_L,
        "alpha": _FIG_ALPHA,
        "objective_value": result.value,
        "baseline_value": shaping.region_metrics(rrc, lags)["psl"],
    }
    acf_path = f"{out_dir}/fig4_acf.csv"
    rrc_db = acfstats.to_db_of_peak(np.abs(acfstats.mean_acf(rrc)) ** 2, _FIG_N)
    designed_db = acfstats.to_db_of_peak(
        np.abs(acfstats.mean_acf(result.pulse)) ** 2, _FIG_N
    )
    rows = [[int(k), rrc_db[k], designed_db[k]] for k in range(_FIG_N * _FIG_L)]
    _emit_table(
        acf_path, ["lag", "rrc_db", "designed_db"], rows,
        "reproduce", params | {"out": acf_path}, args.seed, started,
    )
    spectrum_path = f"{out_dir}/fig4_spectrum.csv"
    rows = [
        [i, rrc.g[i], result.pulse.g[i]] for i in range(_FIG_N)
    ]
    _emit_table(
        spectrum_path, ["bin", "rrc", "designed"], rows,
        "reproduce", params | {"out": spectrum_path}, args.seed, started,
    )
    return [acf_path, spectrum_path]


def _ranging_recipe(name, out_dir, args, const_name, method_specs) -> list[str]:
    started = time.perf_counter()
    resolved = {
        "n": _FIG_N,
        "l": _FIG_L,
        "alpha": _FIG_ALPHA,
        "bandwidth_hz": _FIG_BW,
        "m": 1,
        "targets": _SCENE["targets"],
        "roi_m": _SCENE["roi_m"],
        "estimate": _SCENE["estimate"],
        "methods": [
            {"name": mname, "constellation": const_name, "basis": basis} | extra
            for mname, basis, extra in method_specs
        ],
        "snr_db": _FIG_SNR,
        "runs": args.runs,
        "seed": args.seed,
        "profile_snr_db": _FIG_SNR[-1],
        "recipe": name,
    }
    geometry = _scene_geometry(resolved)
    scenarios = _build_scenarios(resolved, geometry)
    rmse_path = f"{out_dir}/{name}_rmse.csv"
    profile_path = f"{out_dir}/{name}_profile.csv"
    _ranging_tables(
        scenarios, geometry, resolved, rmse_path, profile_path, "reproduce", started
    )
    return [rmse_path, profile_path]


_DESIGNED = {"pulse": "designed", "objective": "isl", "region": [5, 15]}


def _recipe_fig6(args, out_dir) -> list[str]:
    """16-PSK ranging: both bases, baseline and designed gains."""
    return _ranging_recipe(
        "fig6",
        out_dir,
        args,
        "psk16",
        [
            ("sc_rrc", "sc", {"pulse": "rrc"}),
            ("sc_designed", "sc", dict(_DESIGNED)),
            ("ofdm_rrc", "ofdm", {"pulse": "rrc"}),
            ("ofdm_designed", "ofdm", dict(_DESIGNED)),
        ],
    )


def _recipe_fig7(args, out_dir) -> list[str]:
    """16-QAM ranging with and without 1000-slot averaging."""
    return _ranging_recipe(
        "fig7",
        out_dir,
        args,
        "qam16",
        [
            ("rrc_m1", "ofdm", {"pulse": "rrc", "m": 1}),
            ("designed_m1", "ofdm", dict(_DESIGNED) | {"m": 1}),
            ("rrc_m1000", "ofdm", {"pulse": "rrc", "m": 1000}),
            ("designed_m1000", "ofdm", dict(_DESIGNED) | {"m": 1000}),
        ],
    )


_RECIPES = {
    "fig1": _recipe_fig1,
    "fig2": _recipe_fig2,
    "fig3": _recipe_fig3,
    "fig4": _recipe_fig4,
    "fig5": _recipe_fig5,
    "fig6": _recipe_fig6,
    "fig7": _recipe_fig7,
}


def _cmd_reproduce(args) -> dict:
    names = list(_RECIPES) if args.figure == "all" else [args.figure]
    files = []
    for name in names:
        files += _RECIPES[name](args, args.out_dir)
    return {
        "figures": names,
        "out_dir": str(args.out_dir),
        "seed": args.seed,
        "trials": args.trials,
        "runs": args.runs,
        "files": files,
    }


# ---------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    wave = argparse.ArgumentParser(add_help=False)
    wave.add_argument("--constellation", default="qam16",
                      help="pskM, qamM, gaussian, or custom (with --constellation-file)")
    wave.add_argument("--constellation-file", help="two-column re/im alphabet file")
    wave.add_argument("--basis", default="sc", choices=["sc", "ofdm", "cdma", "custom"])
    wave.add_argument("--basis-file", help="row-major re/im unitary matrix file")
    wave.add_argument("--pulse", default="rrc", choices=["rrc", "file"])
    wave.add_argument("--pulse-file", help="gain file, one value per line")
    wave.add_argument("--n", type=int, default=128, help="symbols per block")
    wave.add_argument("--l", type=int, default=10, help="oversampling factor")
    wave.add_argument("--alpha", type=float, default=0.35, help="roll-off factor")
    wave.add_argument("--m", type=int, default=1, help="slots averaged coherently")

    parser = argparse.ArgumentParser(
        prog="acfshape",
        description="Correlation statistics, gain design, and ranging experiments "
                    "for randomly modulated pulse-shaped signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("acf-theory", parents=[wave],
                        help="closed-form expected squared correlation per lag")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(handler=_cmd_acf_theory)

    sp = sub.add_parser("acf-mc", parents=[wave],
                        help="empirical squared correlation against the closed form")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(handler=_cmd_acf_mc)

    sp = sub.add_parser("shape", help="design in-band gains against a lag window")
    sp.add_argument("--objective", default="psl", choices=["isl", "psl"])
    sp.add_argument("--region", required=True, help="window as lo:hi")
    sp.add_argument("--region-units", default="symbol", choices=["symbol", "lag"])
    sp.add_argument("--alpha", type=float, default=0.35)
    sp.add_argument("--n", type=int, default=128)
    sp.add_argument("--l", type=int, default=10)
    sp.add_argument("--tol", type=float, default=None, help="solver tolerance override")
    sp.add_argument("--max-iter", type=int, default=None, help="solver iteration cap")
    sp.add_argument("--out-spectrum", help="designed gains, one per line (loadable)")
    sp.add_argument("--out-acf", help="CSV of baseline and designed correlation floors")
    sp.set_defaults(handler=_cmd_shape)

    sp = sub.add_parser("range-sim", help="matched-filter ranging experiment from a config")
    sp.add_argument("--config", required=True, help="JSON experiment description")
    sp.add_argument("--runs", type=int, default=None, help="override sweep.runs")
    sp.add_argument("--seed", type=int, default=None, help="override config seed")
    sp.add_argument("--profile-snr-db", type=float, default=None,
                    help="SNR for the emitted range profiles")
    sp.add_argument("--out-prefix", default="range-sim",
                    help="prefix for <prefix>_rmse.csv and <prefix>_profile.csv")
    sp.set_defaults(handler=_cmd_range_sim)

    sp = sub.add_parser("reproduce", help="canned experiment recipes")
    sp.add_argument("figure", choices=[*_RECIPES, "all"])
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1000,
                    help="Monte Carlo trials for correlation recipes")
    sp.add_argument("--runs", type=int, default=100,
                    help="Monte Carlo runs per SNR for ranging recipes")
    sp.set_defaults(handler=_cmd_reproduce)
    return parser


def run(argv=None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        resolved = args.handler(args)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(json.dumps(resolved, sort_keys=True))
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())
