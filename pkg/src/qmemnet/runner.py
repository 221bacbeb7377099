"""Experiment runner: execute a config, emit CSV files plus a manifest.

Output contract (stable, diffable):

    manifest.json     run metadata: version, canonical config, derived
                      energies, mode flags, seed
    trajectory.csv    t, then per site: n, phi, gamma, voltage, current
    form_factor.csv   site, loop_index, t_start, t_end, area, perimeter, form_factor
    pair_eof.csv      t, measure, value, estimated      (concurrence_jk, eof_jk)
    negativity.csv    t, measure, value, estimated      (negativity_j_rest, tripartite_negativity)
    monogamy.csv      t, measure, value, estimated      (eof_2_13, monogamy_m2, purity_global)
    moment_check.csv  t, site, n_engine, n_oracle, phi_engine, phi_oracle, rel_err

Site labels in files are 1-based.  All runs with the same config and seed are
byte-identical; the manifest carries no timestamps.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import build_hamiltonian, derive_energies
from .config import ExperimentConfig, format_config
from .entanglement import correlation_series
from .hysteresis import segment_loops
from .lindblad import InitialState, Trajectory, integrate, make_initial_state
from .moments import initial_moments, integrate_moments


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def run_trajectory(config: ExperimentConfig, keep_states: bool = True) -> Trajectory:
    """Integrate the configured circuit and return the stored trajectory.

    The scalar series keep full step resolution; config.store_every thins only
    the stored density matrices (which the correlation analyses consume).
    """
    spec = config.circuit
    energies = derive_energies(spec, mode=config.modes.inductance)
    ham = build_hamiltonian(energies, config.truncation,
                            coupling_sign=config.modes.coupling_sign)
    rho0 = make_initial_state(InitialState(theta=spec.theta, varphi=spec.varphi),
                              config.truncation)
    return integrate(rho0, config.t_end, config.dt, ham, energies, spec.drives,
                     store_every=1,
                     state_stride=config.store_every if keep_states else None)


def run_experiment(config: ExperimentConfig, output_dir: str | Path | None = None) -> dict[str, Path]:
    """Execute every configured analysis; returns the emitted file paths."""
    out = Path(output_dir if output_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = config.circuit
    energies = derive_energies(spec, mode=config.modes.inductance)
    needs_states = any(a in config.analyses for a in ("pair_eof", "negativity", "monogamy"))
    traj = run_trajectory(config, keep_states=needs_states)
    n = spec.n_sites
    paths: dict[str, Path] = {}

    header = ["t"]
    for j in range(n):
        header += [f"n_{j + 1}", f"phi_{j + 1}", f"gamma_{j + 1}",
                   f"voltage_{j + 1}", f"current_{j + 1}"]
    rows = []
    for i, t in enumerate(traj.times):
        row = [float(t)]
        for j in range(n):
            row += [float(traj.expect_n[j, i]), float(traj.expect_phi[j, i]),
                    float(traj.gamma[j, i]), float(traj.voltage[j, i]),
                    float(traj.current[j, i])]
        rows.append(row)
    paths["trajectory"] = out / "trajectory.csv"
    _write_csv(paths["trajectory"], header, rows)

    if "form_factor" in config.analyses:
        rows = []
        for j in range(n):
            series = segment_loops(traj.voltage[j], traj.current[j], traj.times, site=j)
            for idx, loop in enumerate(series.loops):
                rows.append([j + 1, idx, loop.t_start, loop.t_end, loop.area,
                             loop.perimeter, loop.form_factor])
        paths["form_factor"] = out / "form_factor.csv"
        _write_csv(paths["form_factor"],
                   ["site", "loop_index", "t_start", "t_end", "area", "perimeter", "form_factor"],
                   rows)

    corr_groups = [a for a in ("pair_eof", "negativity", "monogamy") if a in config.analyses]
    if corr_groups:
        states = [s.matrix for s in traj.states]
        times = traj.state_times
        try:
            reports = correlation_series(states, times, dims=traj.site_dims,
                                         include=corr_groups, h_variant=config.modes.eof_h,
                                         seed=config.seed)
        except ValueError as exc:
            label = config.preset_name or "experiment"
            raise ValueError(f"{label}: correlation analysis failed: {exc}") from exc
        if "pair_eof" in corr_groups:
            rows = []
            for rep in reports:
                for (j, k) in sorted(rep.concurrence):
                    rows.append([rep.t, f"concurrence_{j + 1}{k + 1}", rep.concurrence[(j, k)], 0])
                for (j, k) in sorted(rep.eof):
                    rows.append([rep.t, f"eof_{j + 1}{k + 1}", rep.eof[(j, k)], 0])
            paths["pair_eof"] = out / "pair_eof.csv"
            _write_csv(paths["pair_eof"], ["t", "measure", "value", "estimated"], rows)
        if "negativity" in corr_groups:
            rows = []
            for rep in reports:
                for j in sorted(rep.negativity):
                    others = "".join(str(s + 1) for s in range(n) if s != j)
                    rows.append([rep.t, f"negativity_{j + 1}_{others}", rep.negativity[j], 0])
                if rep.tripartite_negativity is not None:
                    rows.append([rep.t, "tripartite_negativity", rep.tripartite_negativity, 0])
            paths["negativity"] = out / "negativity.csv"
            _write_csv(paths["negativity"], ["t", "measure", "value", "estimated"], rows)
        if "monogamy" in corr_groups:
            rows = []
            for rep in reports:
                flag = int(rep.estimated)
                rows.append([rep.t, "eof_2_13", rep.eof_center_rest, flag])
                rows.append([rep.t, "monogamy_m2", rep.monogamy_m2, flag])
                rows.append([rep.t, "purity_global", rep.purity_global, 0])
            paths["monogamy"] = out / "monogamy.csv"
            _write_csv(paths["monogamy"], ["t", "measure", "value", "estimated"], rows)

    if "moment_check" in config.analyses:
        n0, phi0 = initial_moments(energies, spec.theta, spec.varphi)
        times_o, n_o, phi_o = integrate_moments(n0, phi0, config.t_end, config.dt,
                                                energies, spec.drives, store_every=1)
        rows = []
        sup_n = np.max(np.abs(n_o), axis=1)
        sup_p = np.max(np.abs(phi_o), axis=1)
        for i, t in enumerate(traj.times):
            for j in range(n):
                dn = abs(traj.expect_n[j, i] - n_o[j, i]) / (sup_n[j] or 1.0)
                dp = abs(traj.expect_phi[j, i] - phi_o[j, i]) / (sup_p[j] or 1.0)
                rows.append([float(t), j + 1, float(traj.expect_n[j, i]), float(n_o[j, i]),
                             float(traj.expect_phi[j, i]), float(phi_o[j, i]),
                             float(max(dn, dp))])
        paths["moment_check"] = out / "moment_check.csv"
        _write_csv(paths["moment_check"],
                   ["t", "site", "n_engine", "n_oracle", "phi_engine", "phi_oracle", "rel_err"],
                   rows)

    manifest = {
        "version": __version__,
        "preset": config.preset_name,
        "seed": config.seed,
        "truncation": config.truncation,
        "modes": {"inductance": config.modes.inductance,
                  "coupling_sign": config.modes.coupling_sign,
                  "eof_h": config.modes.eof_h,
                  "drive_waveforms": [d.waveform for d in spec.drives]},
        "analyses": list(config.analyses),
        "derived_energies": {
            "e_c": [float(x) for x in energies.e_c],
            "e_l": [float(x) for x in energies.e_l],
            "omega": [float(x) for x in energies.omega],
            "eta": [float(x) for x in energies.eta],
            "gamma_scale": [float(x) for x in energies.gamma_scale],
            "g_couple": [[float(x) for x in row] for row in energies.g_couple],
            "e_l_couple": [[float(x) for x in row] for row in energies.e_l_couple],
        },
        "config": format_config(config),
    }
    paths["manifest"] = out / "manifest.json"
    with open(paths["manifest"], "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def emit_plot_data(csv_path: str | Path) -> str:
    """Convert an analysis CSV into gnuplot-ready whitespace columns.

    Long-format correlation files are pivoted to one column per measure plus a
    trailing estimated flag; form_factor.csv becomes (t_end, F_1, ..., F_N) by
    loop index; other numeric files pass through.  Output is byte-stable.
    """
    path = Path(csv_path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = list(reader)

    buf = io.StringIO()
    if header == ["t", "measure", "value", "estimated"]:
        measures: list[str] = []
        table: dict[str, dict[str, tuple[str, str]]] = {}
        t_order: list[str] = []
        for t, meas, val, est in rows:
            if meas not in measures:
                measures.append(meas)
            if t not in table:
                table[t] = {}
                t_order.append(t)
            table[t][meas] = (val, est)
        buf.write("# t " + " ".join(measures) + " estimated_flag\n")
        for t in t_order:
            vals, flags = [], ["0"]
            for m in measures:
                v, e = table[t].get(m, ("nan", "0"))
                vals.append(v)
                flags.append(e)
            buf.write(" ".join([t, *vals, max(flags)]) + "\n")
        return buf.getvalue()

    if header and header[0] == "site" and "form_factor" in header:
        by_site: dict[int, list[tuple[str, str]]] = {}
        for row in rows:
            rec = dict(zip(header, row))
            by_site.setdefault(int(rec["site"]), []).append((rec["t_end"], rec["form_factor"]))
        sites = sorted(by_site)
        buf.write(" ".join(["# t_end", *[f"F_{s}" for s in sites]]) + "\n")
        if sites:
            n_loops = max(len(v) for v in by_site.values())
            for i in range(n_loops):
                anchor = next(by_site[s][i][0] for s in sites if i < len(by_site[s]))
                cells = [by_site[s][i][1] if i < len(by_site[s]) else "nan" for s in sites]
                buf.write(" ".join([anchor, *cells]) + "\n")
        return buf.getvalue()

    missing = [c for c in header if not c]
    if missing:
        raise ValueError(f"{path}: unnamed columns in header")
    buf.write("# " + " ".join(header) + "\n")
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{path}: row with {len(row)} fields, expected "
                             f"{len(header)} ({', '.join(header)})")
        buf.write(" ".join(row) + "\n")
    return buf.getvalue()
