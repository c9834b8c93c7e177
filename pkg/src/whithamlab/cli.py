"""Command-line surface: reproducible experiments with manifests.

Subcommands: simulate, scattering, decay-fit, resonance-check,
symbol-table, verify.  Outputs land under --out (prefixed by the
WHITHAMLAB_OUT environment variable when set) together with a JSON
manifest recording the canonicalized configuration, its hash, the code
version, wall times and sha256 checksums of every artifact.  All floats
are serialized with 17 significant digits, so serial re-runs of the
same configuration are byte-identical.

Exit codes: 0 success, 1 a validation-style check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

import whithamlab
from whithamlab.dispersion import Symbol, eval_symbol
from whithamlab.errors import ConfigError, WhithamLabError
from whithamlab.fields import GridSpec, SpectralField
from whithamlab.lp import BUMPS, build_time_partition
from whithamlab import oscillatory, resonance, scattering, solver
from whithamlab import multiplier as _multiplier

__all__ = ["main", "dispatch", "RunManifest"]

SCHEMA_VERSION = 1

# proof-bookkeeping constants; used only to label reports, never in algorithms
BOOKKEEPING_LABELS = {"p0": 1e-5, "p1": 1e-6, "p2": 5e-4, "D": 100}


def fmt(x: float) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(x), ".17g")


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _utcnow() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


@dataclass
class RunManifest:
    """Reproducibility record written next to every command's outputs."""

    command: str
    config_text: str
    config_sha256: str
    code_version: str
    grid: dict | None
    scheme: str | None
    times: list
    started_utc: str
    finished_utc: str = ""
    outputs: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def write(self, outdir: str) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config_text": self.config_text,
            "config_sha256": self.config_sha256,
            "code_version": self.code_version,
            "grid": self.grid,
            "scheme": self.scheme,
            "times": [fmt(t) for t in self.times],
            "started_utc": self.started_utc,
            "finished_utc": self.finished_utc,
            "outputs": self.outputs,
            "labels": BOOKKEEPING_LABELS,
            "extra": self.extra,
        }
        path = os.path.join(outdir, "manifest.json")
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path

    def add_output(self, path: str) -> None:
        self.outputs[os.path.basename(path)] = _sha256(path)


# ---------------------------------------------------------------------------
# Flat key=value configuration
# ---------------------------------------------------------------------------

def _parse_bands(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")


SIMULATE_SCHEMA = {
    "n": int,
    "period_over_pi": float,
    "dt": float,
    "t_end": float,
    "scheme": str,
    "dealias": str,
    "epsilon": float,
    "ic": str,
    "ic_width": float,
    "ic_center": float,
    "nonlin_sign": float,
    "n_desk": int,
    "z_weight": int,
    "blowup_factor": float,
    "dtf_bands": _parse_bands,
    "sample_spacing": str,       # "log" or "linear"
    "sample_count": int,
    "sample_start": float,
}

SIMULATE_DEFAULTS = {
    "scheme": "ifrk4",
    "dealias": "two_thirds",
    "epsilon": 0.01,
    "ic": "gaussian",
    "ic_width": 4.0,
    "ic_center": 0.0,
    "nonlin_sign": 1.0,
    "n_desk": 4,
    "z_weight": 4,
    "blowup_factor": 100.0,
    "dtf_bands": (-2, -1, 0, 1),
    "sample_spacing": "log",
    "sample_count": 120,
    "sample_start": 1.0,
}

_REQUIRED = ("n", "period_over_pi", "dt", "t_end")


def parse_config(text: str) -> dict:
    """Flat key=value lines; '#' comments; unknown keys are hard errors."""
    cfg = dict(SIMULATE_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in SIMULATE_SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            cfg[key] = SIMULATE_SCHEMA[key](val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    missing = [k for k in _REQUIRED if k not in cfg]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    return cfg


def canonical_config_text(cfg: dict) -> str:
    lines = []
    for key in sorted(cfg):
        val = cfg[key]
        if isinstance(val, float):
            out = fmt(val)
        elif isinstance(val, tuple):
            out = ",".join(str(v) for v in val)
        else:
            out = str(val)
        lines.append(f"{key}={out}")
    return "\n".join(lines) + "\n"


def build_solver_config(cfg: dict) -> solver.SolverConfig:
    grid = GridSpec(cfg["n"], cfg["period_over_pi"] * np.pi)
    return solver.SolverConfig(
        grid=grid, dt=cfg["dt"], t_end=cfg["t_end"], scheme=cfg["scheme"],
        dealias=cfg["dealias"], eps=cfg["epsilon"], ic_kind=cfg["ic"],
        ic_width=cfg["ic_width"], ic_center=cfg["ic_center"],
        nonlin_sign=cfg["nonlin_sign"], n_desk=cfg["n_desk"],
        z_weight=cfg["z_weight"], blowup_factor=cfg["blowup_factor"],
        dtf_bands=cfg["dtf_bands"],
    )


def sample_times_from_config(cfg: dict) -> list:
    t_end = cfg["t_end"]
    if cfg["sample_spacing"] == "linear":
        return [0.0] + list(np.linspace(0.0, t_end, cfg["sample_count"] + 1)[1:])
    # log spacing honors the phase-quadrature step control after snapping
    start = min(max(cfg["sample_start"], cfg["dt"]), t_end)
    return [0.0] + list(solver.log_dense_sample_times(cfg["dt"], start, t_end))


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _resolve_outdir(out: str) -> str:
    base = os.environ.get("WHITHAMLAB_OUT", "")
    path = os.path.join(base, out) if base else out
    os.makedirs(path, exist_ok=True)
    return path


def _diag_json_line(rec: solver.DiagnosticsRecord) -> str:
    bands = ",".join(f'"{k}": {fmt(v)}' for k, v in sorted(rec.dtf_band_norms.items()))
    return ("{" + f'"t": {fmt(rec.t)}, "l2_norm": {fmt(rec.l2_norm)}, '
            f'"hamiltonian": {fmt(rec.hamiltonian)}, "sup_norm": {fmt(rec.sup_norm)}, '
            f'"sobolev_norm": {fmt(rec.sobolev_norm)}, "z_norm": {fmt(rec.z_norm)}, '
            f'"weight1": {fmt(rec.weight1)}, "weight2": {fmt(rec.weight2)}, '
            '"dtf_band_norms": {' + bands + "}}")


def _write_snapshot_csv(path: str, snap: solver.Snapshot) -> None:
    grid = snap.fhat.grid
    order = np.argsort(_signed(grid.n))
    s = _signed(grid.n)
    with open(path, "w", newline="") as fh:
        fh.write("xi_index,xi,re_fhat,im_fhat\n")
        for p in order:
            c = snap.fhat.coefficients[p]
            fh.write(f"{s[p]},{fmt(grid.xi[p])},{fmt(c.real)},{fmt(c.imag)}\n")


def _signed(n: int) -> np.ndarray:
    s = np.arange(n)
    return np.where(s < n // 2, s, s - n)


def _read_snapshot_csv(path: str, grid: GridSpec) -> np.ndarray:
    coeff = np.zeros(grid.n, dtype=complex)
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("xi_index"):
            raise ConfigError(f"{path}: not a snapshot CSV")
        for line in fh:
            j_s, _, re_s, im_s = line.rstrip("\n").split(",")
            coeff[int(j_s) % grid.n] = float(re_s) + 1j * float(im_s)
    return coeff


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    if not os.path.exists(args.config):
        print(f"simulate: config file not found: {args.config}", file=sys.stderr)
        return 2
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    outdir = _resolve_outdir(args.out)
    canon = canonical_config_text(cfg)
    manifest = RunManifest(
        command="simulate", config_text=canon,
        config_sha256=hashlib.sha256(canon.encode()).hexdigest(),
        code_version=whithamlab.__version__, grid=None, scheme=cfg["scheme"],
        times=[], started_utc=_utcnow(),
    )
    scfg = build_solver_config(cfg)
    manifest.grid = {"n": scfg.grid.n, "period": fmt(scfg.grid.period),
                     "dx": fmt(scfg.grid.dx), "dxi": fmt(scfg.grid.dxi),
                     "nyquist": fmt(scfg.grid.nyquist)}
    manifest.extra["stability"] = {k: fmt(v) for k, v in scfg.stability_record().items()}

    result = solver.run(scfg, sample_times_from_config(cfg))
    manifest.times = list(result.times)

    diag_path = os.path.join(outdir, "diagnostics.ndjson")
    with open(diag_path, "w", newline="") as fh:
        for rec in result.diagnostics:
            fh.write(_diag_json_line(rec) + "\n")
    manifest.add_output(diag_path)

    for i, snap in enumerate(result.snapshots):
        snap_path = os.path.join(outdir, f"snapshot_{i:05d}.csv")
        _write_snapshot_csv(snap_path, snap)
        manifest.add_output(snap_path)

    manifest.extra["n_steps"] = result.n_steps
    manifest.extra["wall_seconds"] = fmt(result.wall_seconds)
    manifest.finished_utc = _utcnow()
    manifest.write(outdir)
    print(f"simulate: wrote {len(result.snapshots)} snapshots to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# scattering
# ---------------------------------------------------------------------------

def cmd_scattering(args) -> int:
    man_path = os.path.join(args.run, "manifest.json")
    if not os.path.exists(man_path):
        print(f"scattering: no manifest at {man_path}", file=sys.stderr)
        return 2
    with open(man_path) as fh:
        man = json.load(fh)
    grid = GridSpec(int(man["grid"]["n"]), float(man["grid"]["period"]))
    times = [float(t) for t in man["times"]]
    snaps = sorted(name for name in man["outputs"] if name.startswith("snapshot_"))
    if len(snaps) != len(times):
        print("scattering: snapshot/time count mismatch", file=sys.stderr)
        return 2

    sym = Symbol.whitham()
    outdir = _resolve_outdir(args.out)
    manifest = RunManifest(
        command="scattering", config_text=f"run={args.run}\n",
        config_sha256=man["config_sha256"], code_version=whithamlab.__version__,
        grid=man["grid"], scheme=None, times=[], started_utc=_utcnow(),
    )

    # accumulate H across every stored time >= the first positive one
    chain = [(t, os.path.join(args.run, name)) for t, name in zip(times, snaps) if t > 0.0]
    state = scattering.new_state(grid, sym, _read_snapshot_csv(chain[0][1], grid), chain[0][0])
    dyad_targets = [chain[0][0] * 2.0 ** j for j in range(1, 64)
                    if chain[0][0] * 2.0 ** j <= chain[-1][0] * (1 + 1e-9)]
    dyad_states = [state.copy()]
    for t, path in chain[1:]:
        state = scattering.accumulate_phase(
            state, _read_snapshot_csv(path, grid), t, sym,
            enforce_step_control=not args.loose_steps)
        if dyad_targets and t >= dyad_targets[0] * (1 - 1e-9):
            dyad_targets.pop(0)
            dyad_states.append(state.copy())

    band = (args.band_lo, args.band_hi)
    report = scattering.convergence_report(dyad_states, band, args.weight_exp, args.alpha)
    nd_path = os.path.join(outdir, "dyads.ndjson")
    with open(nd_path, "w", newline="") as fh:
        for d in report.dyads:
            fh.write("{" + f'"t1": {fmt(d.t1)}, "t2": {fmt(d.t2)}, '
                     f'"sup_corrected": {fmt(d.sup_corrected)}, '
                     f'"sup_uncorrected": {fmt(d.sup_uncorrected)}, '
                     f'"ratio": {fmt(d.ratio)}' + "}\n")
    manifest.add_output(nd_path)

    csv_path = os.path.join(outdir, "corrected_profile.csv")
    order = np.argsort(_signed(grid.n))
    with open(csv_path, "w", newline="") as fh:
        fh.write("xi,re_g,im_g,H\n")
        for p in order:
            fh.write(f"{fmt(grid.xi[p])},{fmt(state.g[p].real)},"
                     f"{fmt(state.g[p].imag)},{fmt(state.H[p])}\n")
    manifest.add_output(csv_path)

    manifest.extra["kappa"] = fmt(report.kappa) if report.kappa is not None else None
    manifest.extra["final_ratio"] = fmt(report.final_ratio)
    manifest.finished_utc = _utcnow()
    manifest.write(outdir)
    print(f"scattering: {len(report.dyads)} dyads, final corrected/uncorrected "
          f"ratio {report.final_ratio:.3g}, kappa "
          f"{report.kappa if report.kappa is not None else float('nan'):.3g}")
    return 0


# ---------------------------------------------------------------------------
# decay-fit
# ---------------------------------------------------------------------------

def cmd_decay_fit(args) -> int:
    grid = GridSpec(args.n, args.period_over_pi * np.pi)
    sym = Symbol.whitham()
    if args.profile == "gaussian":
        from whithamlab.fields import gaussian_profile
        f = gaussian_profile(grid, 1.0, args.width)
        speed = 1.0
    else:
        lo, hi = 2.0 ** args.kmin, 2.0 ** args.kmax
        xi = grid.xi
        shape = np.exp(-((np.abs(xi) - 0.5 * (lo + hi)) / (0.25 * (hi - lo))) ** 2)
        shape[(np.abs(xi) < lo) | (np.abs(xi) > hi)] = 0.0
        f = SpectralField(grid, shape * (1.0 + 0.0j))
        speed = float(eval_symbol(sym, lo, 1))
    times = np.geomspace(args.t_min, args.t_max, args.t_count)

    if args.jobs > 1:
        shards = np.array_split(times, args.jobs)
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(
                lambda ts: oscillatory.decay_scan(sym, f, ts, beta=args.beta,
                                                  content_speed=speed)
                if len(ts) >= 2 else None, shards))
        sups, ratios, l6 = [], [], []
        for rep in reports:
            if rep is None:
                continue
            sups.extend(rep.sup_norms)
            ratios.extend(rep.envelope_ratios)
            l6.extend(rep.l6_norms)
        full = oscillatory.DecayReport(
            beta=args.beta, times=times, sup_norms=np.array(sups),
            envelope_ratios=np.array(ratios), l6_norms=np.array(l6),
            fitted_exponent=float("nan"), fit_window=(0.0, 0.0))
        t_split = float(np.sqrt(times[0] * times[-1]))
        sel = times >= t_split
        full.fitted_exponent = float(np.polyfit(np.log(times[sel]),
                                                np.log(full.sup_norms[sel]), 1)[0])
        full.fit_window = (t_split, float(times[-1]))
        report = full
    else:
        report = oscillatory.decay_scan(sym, f, times, beta=args.beta,
                                        content_speed=speed)

    outdir = _resolve_outdir(args.out)
    manifest = RunManifest(
        command="decay-fit",
        config_text=(f"profile={args.profile}\nbeta={fmt(args.beta)}\n"
                     f"n={args.n}\nperiod_over_pi={fmt(args.period_over_pi)}\n"),
        config_sha256="", code_version=whithamlab.__version__,
        grid={"n": grid.n, "period": fmt(grid.period)}, scheme=None,
        times=list(times), started_utc=_utcnow(),
    )
    manifest.config_sha256 = hashlib.sha256(manifest.config_text.encode()).hexdigest()
    nd_path = os.path.join(outdir, "decay.ndjson")
    with open(nd_path, "w", newline="") as fh:
        for t, s, r, l in zip(report.times, report.sup_norms,
                              report.envelope_ratios, report.l6_norms):
            fh.write("{" + f'"t": {fmt(t)}, "sup_norm": {fmt(s)}, '
                     f'"envelope_ratio": {fmt(r)}, "l6_norm": {fmt(l)}' + "}\n")
    manifest.add_output(nd_path)
    manifest.extra["fitted_exponent"] = fmt(report.fitted_exponent)
    manifest.extra["fit_window"] = [fmt(report.fit_window[0]), fmt(report.fit_window[1])]
    manifest.finished_utc = _utcnow()
    manifest.write(outdir)
    print(f"decay-fit: beta={args.beta} fitted exponent {report.fitted_exponent:+.4f} "
          f"over t in [{report.fit_window[0]:.3g}, {report.fit_window[1]:.3g}]")
    return 0


# ---------------------------------------------------------------------------
# resonance-check
# ---------------------------------------------------------------------------

def cmd_resonance_check(args) -> int:
    sym = Symbol.whitham()
    outdir = _resolve_outdir(args.out)
    rows = []

    def shard_counts(total, jobs):
        base = total // jobs
        return [base + (1 if i < total % jobs else 0) for i in range(jobs)]

    def scan(check, name, **kw):
        if args.jobs > 1:
            counts = shard_counts(args.samples, args.jobs)
            reps = [check(sym, args.box, c, seed=args.seed + i, **kw)
                    for i, c in enumerate(counts) if c > 0]
            best = min(reps, key=lambda r: r.min_ratio)
            worst = max(reps, key=lambda r: r.max_ratio)
            rep = resonance.BoundReport(
                name=name, samples=sum(r.samples for r in reps),
                min_ratio=best.min_ratio, max_ratio=worst.max_ratio,
                argmin=best.argmin, argmax=worst.argmax, params=best.params)
            return rep
        return check(sym, args.box, args.samples, seed=args.seed, **kw)

    if args.suite in ("two", "all"):
        rows.append(scan(resonance.check_two_wave_bound, "two_wave"))
    if args.suite in ("three", "all"):
        rows.append(scan(resonance.check_three_wave_bound, "three_wave"))
    if args.suite in ("four", "all"):
        for k in range(args.kmin, args.kmax + 1):
            rows.append(resonance.check_four_wave_bound(
                sym, k, max(1000, args.samples // 50), seed=args.seed))

    csv_path = os.path.join(outdir, "resonance_report.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("name,params,samples,min_ratio,argmin,max_ratio,argmax\n")
        for r in rows:
            par = ";".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            amin = ";".join(fmt(v) for v in r.argmin)
            amax = ";".join(fmt(v) for v in r.argmax)
            fh.write(f"{r.name},{par},{r.samples},{fmt(r.min_ratio)},"
                     f"{amin},{fmt(r.max_ratio)},{amax}\n")

    manifest = RunManifest(
        command="resonance-check",
        config_text=(f"suite={args.suite}\nbox={fmt(args.box)}\n"
                     f"samples={args.samples}\nseed={args.seed}\n"),
        config_sha256="", code_version=whithamlab.__version__, grid=None,
        scheme=None, times=[], started_utc=_utcnow(),
    )
    manifest.config_sha256 = hashlib.sha256(manifest.config_text.encode()).hexdigest()
    manifest.add_output(csv_path)
    manifest.finished_utc = _utcnow()
    manifest.write(outdir)

    ok = all(r.positive for r in rows)
    for r in rows:
        print(f"resonance-check: {r.name} {r.params} min {r.min_ratio:.6g} "
              f"max {r.max_ratio:.6g} -> {'ok' if r.positive else 'FAIL'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# symbol-table
# ---------------------------------------------------------------------------

def cmd_symbol_table(args) -> int:
    try:
        lo_s, hi_s = args.range.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        print(f"symbol-table: bad --range {args.range!r}, expected a:b", file=sys.stderr)
        return 2
    if args.step <= 0 or hi < lo:
        print("symbol-table: need step > 0 and b >= a", file=sys.stderr)
        return 2
    if args.symbol == "fkdv":
        sym = Symbol.fkdv(args.alpha)
    else:
        sym = Symbol(args.symbol)
    count = int(round((hi - lo) / args.step)) + 1
    xs = lo + args.step * np.arange(count)
    outdir = _resolve_outdir(args.out)
    csv_path = os.path.join(outdir, "symbol_table.csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("xi,lambda,dlambda,d2lambda,d3lambda\n")
        cols = [eval_symbol(sym, xs, k) for k in range(4)]
        for i in range(count):
            fh.write(",".join([fmt(xs[i])] + [fmt(c[i]) for c in cols]) + "\n")
    manifest = RunManifest(
        command="symbol-table",
        config_text=f"symbol={args.symbol}\nrange={args.range}\nstep={fmt(args.step)}\n",
        config_sha256="", code_version=whithamlab.__version__, grid=None,
        scheme=None, times=[], started_utc=_utcnow(),
    )
    manifest.config_sha256 = hashlib.sha256(manifest.config_text.encode()).hexdigest()
    manifest.add_output(csv_path)
    manifest.finished_utc = _utcnow()
    manifest.write(outdir)
    print(f"symbol-table: wrote {count} rows to {csv_path}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _verify_dispersion() -> list:
    sym = Symbol.whitham()
    rng = np.random.default_rng(0)
    xs = rng.uniform(-50.0, 50.0, 10_000)
    odd = float(np.max(np.abs(eval_symbol(sym, xs, 0) + eval_symbol(sym, -xs, 0))))
    checks = [("oddness max defect < 1e-12", odd < 1e-12)]
    xs = np.geomspace(1e3, 1e6, 200)
    checks.append(("high-frequency ratio |L/sqrt(xi) - 1| < 1e-3",
                   float(np.max(np.abs(eval_symbol(sym, xs, 0) / np.sqrt(xs) - 1.0))) < 1e-3))
    xi = np.geomspace(1e-3, 100.0, 500)
    checks.append(("concavity L'' < 0 on (0, inf)",
                   bool(np.all(eval_symbol(sym, xi, 2) < 0.0))))
    return checks


def _verify_lp() -> list:
    xi = np.linspace(-40.0, 40.0, 20_001)
    total = BUMPS.phi_l(-3, xi).copy()
    for k in range(-2, 10):
        total += BUMPS.psi_l(k, xi)
    checks = [("partition of unity defect < 1e-12",
               float(np.max(np.abs(total - 1.0))) < 1e-12)]
    tp = build_time_partition(1000.0)
    s = np.linspace(0.0, 1000.0, 4001)
    tot = tp.evaluate_all(s).sum(axis=0)
    checks.append(("time partition sums to 1 on [0, t]",
                   float(np.max(np.abs(tot - 1.0))) < 1e-12))
    return checks


def _verify_resonance() -> list:
    sym = Symbol.whitham()
    two = resonance.check_two_wave_bound(sym, 10.0, 100_000, seed=1)
    three = resonance.check_three_wave_bound(sym, 10.0, 100_000, seed=1)
    checks = [
        ("two-wave min ratio > 0", two.positive),
        ("three-wave min ratio > 0", three.positive),
    ]
    for k in (-8, -2, 0, 3, 8, 12):
        rep = resonance.check_four_wave_bound(sym, k, 20_000, seed=1)
        checks.append((f"four-wave k={k} min ratio > 0", rep.positive))
    rng = np.random.default_rng(2)
    worst = 0.0
    tried = 0
    while tried < 2000:
        p = resonance.ResonancePoint(rng.uniform(0.1, 20.0),
                                     rng.uniform(-20.0, 20.0),
                                     rng.uniform(-20.0, 20.0), (-1, 1, 1))
        try:
            _, _, _, res = resonance.phixi_decomposition(sym, p)
        except WhithamLabError:
            continue
        tried += 1
        gx = abs(eval_symbol(sym, p.xi, 1) - eval_symbol(sym, p.derived, 1))
        worst = max(worst, res / (1.0 + gx))
    checks.append(("gradient identity residual < 1e-10", worst < 1e-10))
    return checks


def _verify_oscillatory() -> list:
    sym = Symbol.whitham()
    grid = GridSpec(2048, 256.0 * np.pi)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(grid.n)
    f = SpectralField.from_values(grid, u)
    ef = oscillatory.propagate(sym, f, 17.0)
    checks = [("propagator unitary to 1e-13",
               abs(ef.l2_norm() / f.l2_norm() - 1.0) < 1e-13)]
    one = oscillatory.propagate(sym, oscillatory.propagate(sym, f, 5.0), 7.0)
    two = oscillatory.propagate(sym, f, 12.0)
    rel = float(np.max(np.abs(one.coefficients - two.coefficients))) / f.l2_norm()
    checks.append(("propagator group law to 1e-12", rel < 1e-12))
    return checks


def _verify_multiplier() -> list:
    rng = np.random.default_rng(4)
    grid = GridSpec(64, 16.0 * np.pi)
    checks = []
    ok = True
    for trial in range(5):
        fields = []
        for _ in range(3):
            c = np.zeros(grid.n, dtype=complex)
            band = rng.integers(1, grid.n // 8, 6)
            c[band] = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            c[-band] = np.conj(c[band])
            fields.append(SpectralField(grid, c))
        width = rng.uniform(1.0, 3.0)
        mfun = lambda x1, x2, x3, w=width: (np.exp(-(x1 / w) ** 2)
                                            * np.exp(-(x2 / w) ** 2)
                                            * np.exp(-(x3 / w) ** 2))
        out = _multiplier.apply_trilinear(mfun, *fields)
        ax = np.linspace(-8.0 * width, 8.0 * width, 129)
        samp = mfun(ax[:, None, None], ax[None, :, None], ax[None, None, :])
        sn = _multiplier.s_norm(samp, ax[1] - ax[0])
        lhs = out.l2_norm()
        rhs = sn * fields[0].l2_norm() * fields[1].sup_norm() * fields[2].sup_norm()
        ok = ok and lhs <= rhs + 1e-9
    checks.append(("Hoelder bound holds on random trilinear instances", ok))
    return checks


VERIFY_SUITES = {
    "dispersion": _verify_dispersion,
    "lp": _verify_lp,
    "resonance": _verify_resonance,
    "oscillatory": _verify_oscillatory,
    "multiplier": _verify_multiplier,
}


def cmd_verify(args) -> int:
    names = list(VERIFY_SUITES) if args.suite == "all" else [args.suite]
    bad = 0
    for name in names:
        for desc, ok in VERIFY_SUITES[name]():
            print(f"verify[{name}]: {desc}: {'ok' if ok else 'FAIL'}")
            bad += 0 if ok else 1
    return 0 if bad == 0 else 1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whithamlab",
        description="Numerical laboratory for the modified Whitham equation",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate", help="run the nonlinear solver from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out-simulate")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scattering", help="phase-correct a simulation output directory")
    p.add_argument("--run", required=True, help="simulate output directory")
    p.add_argument("--out", default="out-scattering")
    p.add_argument("--band-lo", type=float, default=0.7)
    p.add_argument("--band-hi", type=float, default=2.0)
    p.add_argument("--weight-exp", type=int, default=4)
    p.add_argument("--alpha", type=float, default=scattering.DEFAULT_ALPHA)
    p.add_argument("--loose-steps", action="store_true",
                   help="skip the quadrature step-control check")
    p.set_defaults(func=cmd_scattering)

    p = sub.add_parser("decay-fit", help="fit linear dispersive decay exponents")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--profile", choices=("gaussian", "band"), default="gaussian")
    p.add_argument("--width", type=float, default=4.0)
    p.add_argument("--kmin", type=int, default=5)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--n", type=int, default=2 ** 16)
    p.add_argument("--period-over-pi", type=float, default=2.0 ** 14)
    p.add_argument("--t-min", type=float, default=10.0)
    p.add_argument("--t-max", type=float, default=1000.0)
    p.add_argument("--t-count", type=int, default=25)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="out-decay")
    p.set_defaults(func=cmd_decay_fit)

    p = sub.add_parser("resonance-check", help="scan the resonance inequalities")
    p.add_argument("--suite", choices=("two", "three", "four", "all"), default="all")
    p.add_argument("--box", type=float, default=10.0)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--kmin", type=int, default=-10)
    p.add_argument("--kmax", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="out-resonance")
    p.set_defaults(func=cmd_resonance_check)

    p = sub.add_parser("symbol-table", help="tabulate the symbol and derivatives")
    p.add_argument("--range", required=True, help="a:b")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--symbol", choices=("whitham", "kdv", "fkdv", "half_wave"),
                   default="whitham")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--out", default="out-symbol")
    p.set_defaults(func=cmd_symbol_table)

    p = sub.add_parser("verify", help="run a fast library verification suite")
    p.add_argument("--suite", choices=tuple(VERIFY_SUITES) + ("all",), default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def dispatch(argv) -> int:
    """Parse argv and run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"{args.subcommand}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"{args.subcommand}: {exc}", file=sys.stderr)
        return 2
    except WhithamLabError as exc:
        print(f"{args.subcommand}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
