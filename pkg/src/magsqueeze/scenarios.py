"""Named experiment scenarios: declarative runs that write plot-ready CSV
plus a JSON manifest with checksums.

Everything here is deterministic and seed-free; rerunning a scenario with
the same config produces byte-identical CSV files, and parallel sweep
execution reproduces the serial result exactly (workers compute isolated
cells; assembly is index-ordered).

A note on detuning defaults.  The two-photon interaction is only bounded
for |Delta_eff| > |g_cs| = 2pi x 7.5 MHz; at or below that the sector
dynamics are a detuned parametric amplifier past threshold and the magnon
number grows without bound, which no truncated simulation represents
honestly.  Dissipative scenarios therefore default to an operating
detuning just above threshold (below), which preserves > 8 dB conditional
squeezing while keeping occupations of order unity.  The ideal
superposition scenarios run at Delta_eff = 0 where the closed-form
squeezing propagator is exact.
"""

import hashlib
import json
import math
import os
import time as _time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .config import Config
from .constants import TWO_PI
from .coupling import YIG, coupling_map
from .dynamics import (
    SolverConfig,
    conditional_squeezing_run,
    conditional_superposition_run,
    ideal_superposition_targets,
    sector_covariance_squeezing,
)
from .errors import ConfigError
from .model import derive, squeezing_parameter
from .observables import wigner
from .states import superposition_pm

_trapz = getattr(np, "trapezoid", None) or np.trapz

SCENARIOS = (
    "coupling_map_a",
    "coupling_map_b",
    "squeeze_compare",
    "kappa_sweep",
    "temperature_sweep",
    "max_squeeze_heatmap",
    "superposition_wigner",
    "superposition_fidelity",
    "custom",
)

# Operating detuning for dissipative runs: just above the two-photon
# instability threshold |g_cs| = 2pi x 7.495 MHz, so the conditional
# dynamics stay bounded (peak <n> ~ 2.5) while the squeezing peak stays
# above 8 dB.  Linear MHz here; converted like every other frequency.
OPERATING_DETUNING_MHZ = 8.75
OPERATING_DETUNING_RAD_NS = TWO_PI * OPERATING_DETUNING_MHZ * 1e-3


@dataclass
class ScenarioConfig:
    scenario: str = "custom"
    config: Config = field(default_factory=Config)
    threads: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(
                f"unknown scenario {self.scenario!r} (choose from {SCENARIOS})"
            )
        if self.config.run.fock_dim < 40:
            raise ConfigError("fock_dim must be at least 40")

    @classmethod
    def from_config(cls, cfg, scenario=None):
        name = scenario or cfg.run.scenario
        return cls(scenario=name, config=cfg, threads=cfg.run.threads)


@dataclass
class RunManifest:
    scenario: str
    config_echo: dict
    versions: dict
    outputs: list
    wall_clock_s: float
    notes: list = field(default_factory=list)
    convergence: dict = None

    def write(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _versions():
    import scipy

    try:
        from importlib.metadata import version

        pkg = version("magsqueeze")
    except Exception:
        pkg = "unknown"
    return {"magsqueeze": pkg, "numpy": np.__version__, "scipy": scipy.__version__}


def _config_echo(cfg):
    return {
        "physical": asdict(cfg.params),
        "geometry": {
            "side_length_um": cfg.geometry.side_length,
            "current_uA": cfg.geometry.current,
            "sphere_center_um": list(cfg.sphere.center),
            "sphere_radius_um": cfg.sphere.radius,
        },
        "run": asdict(cfg.run),
    }


def write_csv(path, header, rows):
    """Plot-ready CSV: unit-annotated header, %.12e floats, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    f"{v:.12e}" if isinstance(v, float) else str(v) for v in row
                )
                + "\n"
            )


def _parallel_map(fn, items, threads):
    """Order-preserving map over independent work items."""
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _operating_delta(cfg):
    """Dissipative-run detuning in rad/ns (config override or operating default)."""
    if cfg.run.delta_eff is not None:
        return TWO_PI * cfg.run.delta_eff * 1e-3
    return OPERATING_DETUNING_RAD_NS


def _time_grid(cfg):
    return np.round(
        np.arange(0.0, cfg.run.time_max + cfg.run.time_step / 2.0, cfg.run.time_step),
        9,
    )


# ---------------------------------------------------------------------------
# scenario bodies (each returns (outputs, notes))


def _run_coupling_map(sc, outdir, mode):
    cfg = sc.config
    if mode == "point_sphere":
        axes = {
            "R": np.linspace(0.1, 1.0, 19),
            "I_p": np.linspace(0.1, 1.0, 19),
        }
        fname = "coupling_map_point.csv"
    else:
        axes = {
            "R": np.linspace(0.1, 1.0, 19),
            "x0": np.linspace(0.0, 3.0, 21),
        }
        fname = "coupling_map_volume.csv"
    result = coupling_map(cfg.geometry, YIG, axes, mode=mode)
    path = os.path.join(outdir, fname)
    result.to_csv(path)
    return [path], [f"mode={mode}"]


def _effective_series(params, times, delta_eff, fock_dim):
    # strongly damped runs (kappa ~ 4 MHz over 150 ns) accumulate enough
    # integration error at the library default tolerances to trip the
    # positivity monitor; pin the solver a decade tighter here
    run = conditional_squeezing_run(
        params,
        qubit_init="plus_x",
        model="effective",
        fock_dim=fock_dim,
        sample_times=times,
        delta_eff=delta_eff,
        solver=SolverConfig(rel_tol=1e-9, abs_tol=1e-11),
    )
    return run


def _run_squeeze_compare(sc, outdir):
    cfg = sc.config
    delta = _operating_delta(cfg)
    times = _time_grid(cfg)
    eff = _effective_series(cfg.params, times, delta, cfg.run.fock_dim)

    # full model in the exact half-pump rotating frame (unitarily identical
    # to the lab-frame drive, far cheaper to step)
    t_full_max = min(cfg.run.time_max, 40.0)
    times_full = times[times <= t_full_max + 1e-9]
    full = conditional_squeezing_run(
        cfg.params,
        qubit_init="plus_x",
        model="full_rotating",
        fock_dim=cfg.run.fock_dim,
        sample_times=times_full,
        delta_eff=delta,
    )

    rows = []
    s_full = dict(zip(np.round(full.times, 9), full.observables["squeezing_db"]))
    p_full = dict(zip(np.round(full.times, 9), full.observables["p_plus"]))
    for i, t in enumerate(times):
        key = round(float(t), 9)
        rows.append(
            (
                float(t),
                float(eff.observables["squeezing_db"][i]),
                float(eff.observables["n_magnon"][i]),
                float(s_full.get(key, math.nan)),
                float(p_full.get(key, math.nan)),
            )
        )
    path = os.path.join(outdir, "squeeze_compare.csv")
    write_csv(
        path,
        ["time_ns", "S_effective_dB", "n_effective", "S_full_dB", "p_plus_full"],
        rows,
    )
    notes = [
        f"delta_eff_rad_ns={delta:.6e}",
        f"full-model window 0..{t_full_max} ns (rotating-frame integration)",
    ]
    return [path], notes


_SWEEP_STATE = {}


def _squeeze_cell(args):
    """Worker: one dissipative conditional run, returns its S(t) series."""
    params, times, delta, fock_dim = args
    run = _effective_series(params, np.asarray(times), delta, fock_dim)
    return (
        run.observables["squeezing_db"].tolist(),
        run.observables["n_magnon"].tolist(),
    )


def _run_kappa_sweep(sc, outdir):
    cfg = sc.config
    delta = _operating_delta(cfg)
    times = _time_grid(cfg)
    kappas = [0.5, 1.0, 2.0, 4.0]
    items = [
        (replace(cfg.params, kappa=k), times.tolist(), delta, cfg.run.fock_dim)
        for k in kappas
    ]
    results = _parallel_map(_squeeze_cell, items, sc.threads)
    rows = []
    peaks = []
    for k, (s_db, n_m) in zip(kappas, results):
        idx = int(np.argmax(s_db))
        peaks.append((k, float(s_db[idx]), float(times[idx])))
        for t, s, n in zip(times, s_db, n_m):
            rows.append((float(k), float(t), float(s), float(n)))
    path = os.path.join(outdir, "kappa_sweep.csv")
    write_csv(path, ["kappa_MHz", "time_ns", "S_dB", "n_magnon"], rows)
    peak_path = os.path.join(outdir, "kappa_sweep_peaks.csv")
    write_csv(peak_path, ["kappa_MHz", "peak_S_dB", "t_peak_ns"], peaks)
    return [path, peak_path], [f"delta_eff_rad_ns={delta:.6e}"]


def _run_temperature_sweep(sc, outdir):
    cfg = sc.config
    delta = _operating_delta(cfg)
    times = _time_grid(cfg)
    temps = [10.0, 100.0, 200.0, 300.0]
    items = []
    for t_mk in temps:
        # hot baths need headroom: thermal occupation at 300 mK is ~3.7,
        # and squeezing stretches the tail
        nf = cfg.run.fock_dim if t_mk <= 100.0 else max(cfg.run.fock_dim, 150)
        items.append(
            (replace(cfg.params, temperature=t_mk), times.tolist(), delta, nf)
        )
    results = _parallel_map(_squeeze_cell, items, sc.threads)
    rows = []
    peaks = []
    for t_mk, (s_db, n_m) in zip(temps, results):
        idx = int(np.argmax(s_db))
        peaks.append((t_mk, float(s_db[idx]), float(times[idx])))
        for t, s, n in zip(times, s_db, n_m):
            rows.append((float(t_mk), float(t), float(s), float(n)))
    path = os.path.join(outdir, "temperature_sweep.csv")
    write_csv(path, ["temperature_mK", "time_ns", "S_dB", "n_magnon"], rows)
    peak_path = os.path.join(outdir, "temperature_sweep_peaks.csv")
    write_csv(peak_path, ["temperature_mK", "peak_S_dB", "t_peak_ns"], peaks)
    return [path, peak_path], [f"delta_eff_rad_ns={delta:.6e}"]


def _heatmap_cell(args):
    """Worker: peak conditional squeezing for one (kappa, gamma) cell.

    Uses the exact covariance evolution of the sector-reduced run.  Note
    the qubit channel acts trivially on the sb_x-polarized protocol, so
    the gamma axis cannot change these values; it is swept and recorded
    for orientation against the figure it mirrors.
    """
    params, delta, t_max = args
    times = np.arange(0.0, t_max + 0.25, 0.5)
    out = sector_covariance_squeezing(params, times, delta_eff=delta)
    idx = int(np.argmax(out["squeezing_db"]))
    return float(out["squeezing_db"][idx]), float(times[idx])


def _run_heatmap(sc, outdir):
    cfg = sc.config
    delta = _operating_delta(cfg)
    pts = cfg.run.heatmap_points
    kappas = np.logspace(-1.0, 1.0, pts)       # 0.1 .. 10 MHz
    gammas = np.logspace(0.0, 3.0, pts)        # 1 .. 1000 kHz
    items = [
        (replace(cfg.params, kappa=float(k), gamma=float(g), gamma_phi=float(g)),
         delta, cfg.run.time_max)
        for k in kappas
        for g in gammas
    ]
    results = _parallel_map(_heatmap_cell, items, sc.threads)
    rows = []
    for (i, k) in enumerate(kappas):
        for (j, g) in enumerate(gammas):
            s_db, t_pk = results[i * pts + j]
            rows.append((float(k), float(g), s_db, t_pk))
    path = os.path.join(outdir, "max_squeeze_heatmap.csv")
    write_csv(path, ["kappa_MHz", "gamma_kHz", "peak_S_dB", "t_peak_ns"], rows)
    notes = [
        f"delta_eff_rad_ns={delta:.6e}",
        "gamma axis is inert for this protocol (qubit channel acts trivially "
        "on sb_x eigenstates); see README",
    ]
    return [path], notes


def _run_superposition_wigner(sc, outdir):
    cfg = sc.config
    t_sup = cfg.run.superposition_time
    xi = squeezing_parameter(cfg.params, t_sup, delta_eff=0.0)
    half_width, n_pts = 8.0, cfg.run.wigner_points
    ax = np.linspace(-half_width, half_width, n_pts)

    outputs, notes = [], [f"t={t_sup} ns, xi={xi:.6f} (delta_eff=0)"]
    # the displaced-parity sum rings unless the Fock space comfortably holds
    # the state displaced to the grid corner (|alpha|^2 ~ 2*8^2 = 128 on top
    # of the squeezed tail); 420 keeps the boundary residual below 1e-5
    ket_dim = 420
    for sign, tag in ((+1, "sym"), ((-1), "antisym")):
        ket = superposition_pm(xi, sign, ket_dim)
        grid = wigner(ket, ax, ax)
        base = os.path.join(outdir, f"wigner_ideal_{tag}")
        grid.to_csv(base + ".csv")
        with open(base + ".json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(grid.descriptor(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        outputs += [base + ".csv", base + ".json"]

    # dissipative counterparts: evolve |0>|g> under the effective model at
    # delta_eff = 0 and postselect the qubit energy basis at t_sup
    nf = max(cfg.run.fock_dim, 120)
    run = conditional_superposition_run(
        cfg.params, np.array([t_sup]), fock_dim=nf, delta_eff=0.0
    )
    for outcome, tag in (("g", "sym"), ("e", "antisym")):
        rho = run.metadata[f"states_{outcome}"][-1]
        grid = wigner(rho.matrix, ax, ax, pad_to=320, weight_floor=1e-6)
        base = os.path.join(outdir, f"wigner_dissipative_{tag}")
        grid.to_csv(base + ".csv")
        with open(base + ".json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(grid.descriptor(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        outputs += [base + ".csv", base + ".json"]
    notes.append(f"dissipative run fock_dim={nf}; ideal kets at {ket_dim}")
    notes.append(
        f"p_g={run.observables['p_g'][-1]:.6f} p_e={run.observables['p_e'][-1]:.6f}"
    )
    return outputs, notes


def superposition_fidelity_series(params, times, fock_dim, delta_eff, solver=None):
    """Dissipative superposition protocol vs zero-dissipation targets.

    Returns rows (t, p_g, p_e, F_g, F_e): postselected magnon states
    against the exact-unitary evolution of the same truncated generator.
    """
    solver = solver or SolverConfig(rel_tol=1e-9, abs_tol=1e-11)
    run = conditional_superposition_run(
        params, np.asarray(times, dtype=float), fock_dim=fock_dim,
        delta_eff=delta_eff, solver=solver,
    )
    rows = []
    for i, t in enumerate(run.times):
        targets = ideal_superposition_targets(params, float(t), fock_dim, delta_eff)
        row = [float(t), float(run.observables["p_g"][i]),
               float(run.observables["p_e"][i])]
        for outcome in ("g", "e"):
            rho = run.metadata[f"states_{outcome}"][i].matrix
            _, ket = targets[outcome]
            # Uhlmann fidelity against a pure target reduces to sqrt(<psi|rho|psi>)
            f = math.sqrt(max(0.0, float(np.real(np.vdot(ket, rho @ ket)))))
            row.append(f)
        rows.append(tuple(row))
    return rows


def _run_superposition_fidelity(sc, outdir):
    cfg = sc.config
    delta = _operating_delta(cfg)
    times = np.arange(5.0, 40.0 + 2.5, 5.0)
    nf = max(cfg.run.fock_dim, 120)
    rows = superposition_fidelity_series(cfg.params, times, nf, delta)
    path = os.path.join(outdir, "superposition_fidelity.csv")
    write_csv(path, ["time_ns", "p_g", "p_e", "F_sym", "F_antisym"], rows)
    return [path], [f"delta_eff_rad_ns={delta:.6e}", f"fock_dim={nf}"]


def _run_custom(sc, outdir):
    """Minimal deterministic run: effective conditional squeezing series."""
    cfg = sc.config
    delta = _operating_delta(cfg)
    times = _time_grid(cfg)
    run = _effective_series(cfg.params, times, delta, cfg.run.fock_dim)
    rows = [
        (float(t), float(s), float(n))
        for t, s, n in zip(
            times, run.observables["squeezing_db"], run.observables["n_magnon"]
        )
    ]
    path = os.path.join(outdir, "squeeze_custom.csv")
    write_csv(path, ["time_ns", "S_dB", "n_magnon"], rows)
    return [path], [f"delta_eff_rad_ns={delta:.6e}"]


_SCENARIO_BODIES = {
    "coupling_map_a": lambda sc, out: _run_coupling_map(sc, out, "point_sphere"),
    "coupling_map_b": lambda sc, out: _run_coupling_map(sc, out, "volume_avg"),
    "squeeze_compare": _run_squeeze_compare,
    "kappa_sweep": _run_kappa_sweep,
    "temperature_sweep": _run_temperature_sweep,
    "max_squeeze_heatmap": _run_heatmap,
    "superposition_wigner": _run_superposition_wigner,
    "superposition_fidelity": _run_superposition_fidelity,
    "custom": _run_custom,
}


def run(sc):
    """Execute a scenario; write outputs + manifest.json; return the manifest."""
    outdir = sc.config.run.output_dir
    os.makedirs(outdir, exist_ok=True)
    t0 = _time.perf_counter()
    outputs, notes = _SCENARIO_BODIES[sc.scenario](sc, outdir)
    manifest = RunManifest(
        scenario=sc.scenario,
        config_echo=_config_echo(sc.config),
        versions=_versions(),
        outputs=[
            {"path": os.path.relpath(p, outdir), "sha256": _sha256(p),
             "bytes": os.path.getsize(p)}
            for p in outputs
        ],
        wall_clock_s=_time.perf_counter() - t0,
        notes=notes,
    )
    manifest.write(os.path.join(outdir, "manifest.json"))
    return manifest


# ---------------------------------------------------------------------------
# calibration and convergence


def calibrate_delta_eff(sc, full_series=None, synthetic_delta=None,
                        window_mhz=10.0, n_scan=41, t_max=40.0):
    """Scan Delta_eff around the analytic default and pick the value
    minimizing the time-integrated |S_full - S_eff|.

    full_series: optional (times, S_dB) tuple to calibrate against.  If
    synthetic_delta is given instead, the "full" series is the effective
    model itself at that detuning (self-consistency mode).  With neither,
    the full model is integrated in the rotating frame over [0, t_max].

    Returns (best_delta_rad_ns, scan_table, convex) where scan_table is a
    list of (delta_rad_ns, objective) rows.
    """
    cfg = sc.config
    d = derive(cfg.params)
    center = d.Delta_eff
    half = TWO_PI * window_mhz * 1e-3
    grid = np.linspace(center - half, center + half, n_scan)
    times = np.arange(0.0, t_max + 0.25, 0.5)

    if full_series is not None:
        t_ref, s_ref = full_series
    elif synthetic_delta is not None:
        out = sector_covariance_squeezing(cfg.params, times, delta_eff=synthetic_delta)
        t_ref, s_ref = times, out["squeezing_db"]
    else:
        full = conditional_squeezing_run(
            cfg.params,
            qubit_init="plus_x",
            model="full_rotating",
            fock_dim=cfg.run.fock_dim,
            sample_times=times,
        )
        t_ref, s_ref = full.times, full.observables["squeezing_db"]

    t_ref = np.asarray(t_ref, dtype=float)
    s_ref = np.asarray(s_ref, dtype=float)
    table = []
    for delta in grid:
        out = sector_covariance_squeezing(cfg.params, t_ref, delta_eff=float(delta))
        obj = float(_trapz(np.abs(out["squeezing_db"] - s_ref), t_ref))
        table.append((float(delta), obj))
    objs = np.array([row[1] for row in table])
    best = int(np.argmin(objs))
    # single-minimum = interior optimum, nonincreasing before, nondecreasing after
    convex = (
        0 < best < n_scan - 1
        and np.all(np.diff(objs[: best + 1]) <= 1e-12)
        and np.all(np.diff(objs[best:]) >= -1e-12)
    )
    if not convex:
        warnings.warn(
            "calibration objective is not single-minimum on the scan window; "
            "full scan table returned",
            stacklevel=2,
        )
    return table[best][0], table, convex


def convergence_check(sc):
    """Rerun the scenario's most demanding point at fock_dim and fock_dim+20.

    Reports max |dS| (dB) between the two truncations and, for Wigner
    scenarios, the max |dW|; flags failure above 0.02 dB / 1e-3.
    """
    cfg = sc.config
    nf = cfg.run.fock_dim
    report = {"fock_dim": nf, "fock_dim_check": nf + 20,
              "max_delta_s_db": 0.0, "max_delta_wigner": 0.0}

    if sc.scenario in ("coupling_map_a", "coupling_map_b"):
        report["notes"] = "no Fock-space content; trivially converged"
        report["flagged"] = False
        return report

    if sc.scenario == "superposition_wigner":
        # the demanding point is the dissipative leg: the joint master
        # equation truncated at nf (ideal kets are built at a fixed 420 and
        # guarded separately).  Mirror the scenario's internal floor.
        nf0 = max(nf, 120)
        report["fock_dim"], report["fock_dim_check"] = nf0, nf0 + 20
        t_sup = cfg.run.superposition_time
        ax = np.linspace(-8.0, 8.0, 101)
        grids = []
        for dim in (nf0, nf0 + 20):
            run_out = conditional_superposition_run(
                cfg.params, np.array([t_sup]), fock_dim=dim, delta_eff=0.0
            )
            rho = run_out.metadata["states_e"][-1]      # antisym: widest support
            # pad both evaluations identically so the difference probes the
            # state truncation, not the displacement-operator ringing
            grids.append(wigner(rho.matrix, ax, ax, pad_to=420,
                                weight_floor=1e-9).values)
        report["max_delta_wigner"] = float(np.max(np.abs(grids[0] - grids[1])))
    else:
        delta = _operating_delta(cfg)
        times = np.arange(0.0, min(cfg.run.time_max, 60.0) + 0.5, 1.0)
        series = []
        for dim in (nf, nf + 20):
            run_out = _effective_series(cfg.params, times, delta, dim)
            series.append(run_out.observables["squeezing_db"])
        report["max_delta_s_db"] = float(np.max(np.abs(series[0] - series[1])))

    report["flagged"] = (
        report["max_delta_s_db"] > 0.02 or report["max_delta_wigner"] > 1e-3
    )
    return report
