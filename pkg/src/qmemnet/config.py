"""Experiment configuration: a line-oriented key/value format with sections.

Grammar (also documented in README.md):

    # comment lines and blank lines are ignored
    [circuit]
    memristors   = 3
    topology     = triangular          # triangular | linear
    cap_sigma_1  = 3.6 fF              # one per site, 1-based indices
    l_self_1     = 0.2 uH
    l_couple_1_2 = 2 uH                # omitting a pair means no coupler
    theta_1      = pi/4                # angles: rad (default), deg, or pi fractions
    varphi_1     = pi/2

    [drive]                            # defaults for all sites; [drive_J] overrides site J
    waveform  = linear_ramp            # linear_ramp | sinusoid | constant
    frequency = auto                   # auto -> 2 * omega_j; or number with rad/s|Hz|kHz|MHz|GHz
    amplitude = 0                      # radians, sinusoid only
    phase     = -pi/2

    [simulation]
    truncation  = 2
    t_end       = 30 periods           # s|ms|us|ns or drive periods; auto = 30 periods
    dt          = auto                 # auto -> (2 pi / omega_max) / 200
    store_every = 1                    # stride of stored density matrices; the
                                       # scalar series keep full step resolution
    seed        = 7
    output_dir  = out

    [analyses]
    run = form_factor                  # comma list of form_factor, pair_eof,
                                       # negativity, monogamy, moment_check
    [modes]
    inductance    = bare               # bare | loaded
    coupling_sign = sum                # sum | difference
    eof_h         = squared            # squared | linear

Unit suffixes accepted: fF/pF/nF/F, nH/uH/mH/H, Hz..GHz (converted to rad/s
via 2 pi) or rad/s, s/ms/us/ns/ps, rad/deg and pi fractions for angles.
Validation reports every error found, not just the first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

import numpy as np

from .circuit import (CircuitSpec, DriveSpec, ParameterError, TOPOLOGIES, WAVEFORMS,
                      derive_energies)
from .presets import FigurePreset, get_preset

ANALYSES = ("form_factor", "pair_eof", "negativity", "monogamy", "moment_check")

DT_DIVISIONS = 200       # default dt = (2 pi / omega_max) / 200
DEFAULT_PERIODS = 30.0   # default horizon in drive periods


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("invalid configuration:\n  " + "\n  ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class ModeFlags:
    """Selectable conventions, recorded verbatim in the run manifest."""

    inductance: str = "bare"
    coupling_sign: str = "sum"
    eof_h: str = "squared"


@dataclass(frozen=True)
class ExperimentConfig:
    circuit: CircuitSpec
    truncation: int = 2
    t_end: float = 0.0        # seconds, resolved
    dt: float = 0.0           # seconds, resolved
    store_every: int = 1
    seed: int = 7
    analyses: tuple[str, ...] = ("form_factor",)
    modes: ModeFlags = field(default_factory=ModeFlags)
    output_dir: str = "out"
    preset_name: str | None = field(default=None, compare=False)  # provenance only


_CAP_UNITS = {"f": 1.0, "ff": 1e-15, "pf": 1e-12, "nf": 1e-9, "uf": 1e-6}
_IND_UNITS = {"h": 1.0, "nh": 1e-9, "uh": 1e-6, "mh": 1e-3}
_TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12}
_FREQ_UNITS = {"rad/s": 1.0, "hz": 2.0 * np.pi, "khz": 2e3 * np.pi,
               "mhz": 2e6 * np.pi, "ghz": 2e9 * np.pi}
_PI_RE = re.compile(r"^([+-]?)pi(?:/(\d+(?:\.\d*)?))?$")


def _normalize_unit(u: str) -> str:
    return u.replace("µ", "u").replace("μ", "u").lower()


def _parse_with_units(text: str, units: dict[str, float], kind: str) -> float:
    parts = text.split()
    if len(parts) == 1:
        try:
            return float(parts[0])
        except ValueError:
            raise ValueError(f"cannot parse {kind} value {text!r}") from None
    if len(parts) == 2:
        unit = _normalize_unit(parts[1])
        if unit not in units:
            raise ValueError(f"unknown {kind} unit {parts[1]!r} in {text!r}")
        return float(parts[0]) * units[unit]
    raise ValueError(f"cannot parse {kind} value {text!r}")


def parse_angle(text: str) -> float:
    t = text.strip()
    m = _PI_RE.match(t.replace(" ", ""))
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        div = float(m.group(2)) if m.group(2) else 1.0
        return sign * np.pi / div
    parts = t.split()
    if len(parts) == 2 and _normalize_unit(parts[1]) == "deg":
        return float(parts[0]) * np.pi / 180.0
    if len(parts) == 2 and _normalize_unit(parts[1]) == "rad":
        return float(parts[0])
    return float(t)


def _split_sections(text: str) -> tuple[dict[str, dict[str, str]], list[str]]:
    sections: dict[str, dict[str, str]] = {}
    errors: list[str] = []
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        if current is None:
            errors.append(f"line {lineno}: key/value outside any [section]")
            continue
        key, val = (p.strip() for p in line.split("=", 1))
        if key.lower() in sections[current]:
            errors.append(f"line {lineno}: duplicate key {key!r} in [{current}]")
        sections[current][key.lower()] = val
    return sections, errors


_KNOWN_SECTIONS = ("circuit", "drive", "simulation", "analyses", "modes")


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config; raises ConfigError listing every problem."""
    sections, errors = _split_sections(text)
    for name in sections:
        if name not in _KNOWN_SECTIONS and not re.fullmatch(r"drive_\d+", name):
            errors.append(f"[{name}]: unknown section")

    circ = dict(sections.get("circuit", {}))
    if "circuit" not in sections:
        errors.append("[circuit]: section is required")

    def take(sec: dict[str, str], key: str, default: str | None = None) -> str | None:
        return sec.pop(key, default)

    n = 3
    n_raw = take(circ, "memristors")
    if n_raw is not None:
        try:
            n = int(n_raw)
        except ValueError:
            errors.append(f"circuit.memristors: not an integer: {n_raw!r}")
    if n not in (2, 3):
        errors.append(f"circuit.memristors: must be 2 or 3, got {n}")
        n = 3

    topology = take(circ, "topology", "triangular") or "triangular"
    if topology not in TOPOLOGIES:
        errors.append(f"circuit.topology: unknown topology {topology!r}")
        topology = "linear"

    def per_site(prefix: str, parser, kind: str, default=None) -> list:
        vals = []
        for j in range(1, n + 1):
            raw = take(circ, f"{prefix}_{j}")
            if raw is None:
                if default is None:
                    errors.append(f"circuit.{prefix}_{j}: missing")
                    vals.append(1.0)
                else:
                    vals.append(default)
                continue
            try:
                vals.append(parser(raw))
            except ValueError as exc:
                errors.append(f"circuit.{prefix}_{j}: {exc}")
                vals.append(1.0)
        return vals

    caps = per_site("cap_sigma", lambda s: _parse_with_units(s, _CAP_UNITS, "capacitance"),
                    "capacitance")
    lself = per_site("l_self", lambda s: _parse_with_units(s, _IND_UNITS, "inductance"),
                     "inductance")
    theta = per_site("theta", parse_angle, "angle", default=np.pi / 4.0)
    varphi = per_site("varphi", parse_angle, "angle", default=np.pi / 2.0)

    couplers: dict[tuple[int, int], float] = {}
    for key in list(circ):
        m = re.fullmatch(r"l_couple_(\d+)_(\d+)", key)
        if not m:
            continue
        j, k = int(m.group(1)), int(m.group(2))
        raw = take(circ, key)
        if not (1 <= j <= n and 1 <= k <= n and j != k):
            errors.append(f"circuit.{key}: invalid site pair ({j},{k})")
            continue
        try:
            couplers[(min(j, k) - 1, max(j, k) - 1)] = _parse_with_units(raw, _IND_UNITS, "inductance")
        except ValueError as exc:
            errors.append(f"circuit.{key}: {exc}")
    for key in circ:
        errors.append(f"circuit.{key}: unknown key")

    if n == 3 and topology == "linear" and (0, 2) in couplers:
        errors.append("circuit.topology: topology=linear contradicts a present l_couple_1_3")
    if n == 3 and topology == "triangular" and len(couplers) != 3:
        errors.append("circuit.topology: topology=triangular requires all three couplers")

    for j, v in enumerate(caps):
        if not v > 0:
            errors.append(f"circuit.cap_sigma_{j + 1}: must be strictly positive, got {v!r}")
    for j, v in enumerate(lself):
        if not v > 0:
            errors.append(f"circuit.l_self_{j + 1}: must be strictly positive, got {v!r}")
    for (j, k), v in couplers.items():
        if not v > 0:
            errors.append(f"circuit.l_couple_{j + 1}_{k + 1}: must be strictly positive, got {v!r}")

    # drives: [drive] defaults overridden per site by [drive_J]
    def parse_drive(sec: dict[str, str], label: str, base: dict) -> dict:
        out = dict(base)
        rest = dict(sec)
        wf = rest.pop("waveform", None)
        if wf is not None:
            if wf not in WAVEFORMS:
                errors.append(f"{label}.waveform: unknown waveform {wf!r}")
            else:
                out["waveform"] = wf
        freq = rest.pop("frequency", None)
        if freq is not None:
            if freq.strip().lower() == "auto":
                out["frequency"] = "auto"
            else:
                try:
                    out["frequency"] = _parse_with_units(freq, _FREQ_UNITS, "frequency")
                except ValueError as exc:
                    errors.append(f"{label}.frequency: {exc}")
        for key, parser in (("amplitude", parse_angle), ("phase", parse_angle)):
            raw = rest.pop(key, None)
            if raw is not None:
                try:
                    out[key] = parser(raw)
                except ValueError as exc:
                    errors.append(f"{label}.{key}: {exc}")
        for key in rest:
            errors.append(f"{label}.{key}: unknown key")
        return out

    drive_base = {"waveform": "linear_ramp", "frequency": "auto", "amplitude": 0.0,
                  "phase": -np.pi / 2.0}
    drive_base = parse_drive(sections.get("drive", {}), "drive", drive_base)
    drive_site = {}
    for name, sec in sections.items():
        m = re.fullmatch(r"drive_(\d+)", name)
        if m:
            j = int(m.group(1))
            if not 1 <= j <= n:
                errors.append(f"[{name}]: site index out of range")
                continue
            drive_site[j - 1] = parse_drive(sec, name, drive_base)

    sim = dict(sections.get("simulation", {}))

    def sim_int(key: str, default: int, minimum: int = 1) -> int:
        raw = sim.pop(key, None)
        if raw is None:
            return default
        try:
            val = int(raw)
        except ValueError:
            errors.append(f"simulation.{key}: not an integer: {raw!r}")
            return default
        if val < minimum:
            errors.append(f"simulation.{key}: must be >= {minimum}, got {val}")
            return default
        return val

    truncation = sim_int("truncation", 2, minimum=2)
    store_every = sim_int("store_every", 1)
    seed = sim_int("seed", 7, minimum=0)
    output_dir = sim.pop("output_dir", "out")

    t_end_raw = sim.pop("t_end", "auto")
    dt_raw = sim.pop("dt", "auto")
    for key in sim:
        errors.append(f"simulation.{key}: unknown key")

    ana_sec = dict(sections.get("analyses", {}))
    run_raw = ana_sec.pop("run", "form_factor")
    analyses = tuple(sorted({a.strip() for a in run_raw.split(",") if a.strip()}))
    for a in analyses:
        if a not in ANALYSES:
            errors.append(f"analyses.run: unknown analysis {a!r} "
                          f"(known: {', '.join(ANALYSES)})")
    for key in ana_sec:
        errors.append(f"analyses.{key}: unknown key")

    modes_sec = dict(sections.get("modes", {}))
    mode_vals = {}
    for key, allowed in (("inductance", ("bare", "loaded")),
                         ("coupling_sign", ("sum", "difference")),
                         ("eof_h", ("squared", "linear"))):
        raw = modes_sec.pop(key, allowed[0])
        if raw not in allowed:
            errors.append(f"modes.{key}: must be one of {allowed}, got {raw!r}")
            raw = allowed[0]
        mode_vals[key] = raw
    for key in modes_sec:
        errors.append(f"modes.{key}: unknown key")
    modes = ModeFlags(**mode_vals)

    if errors:
        raise ConfigError(errors)

    # assemble the circuit; parameter validation errors surface collectively too
    placeholder = tuple(DriveSpec(waveform="constant") for _ in range(n))
    try:
        probe = CircuitSpec(cap_sigma=tuple(caps), l_self=tuple(lself), l_couple=couplers,
                            drives=placeholder, theta=tuple(theta), varphi=tuple(varphi),
                            topology=topology)
    except ParameterError as exc:
        raise ConfigError([f"circuit: {exc}"]) from None
    energies = derive_energies(probe, mode=modes.inductance)

    drives = []
    for j in range(n):
        dv = drive_site.get(j, drive_base)
        freq = dv["frequency"]
        if freq == "auto":
            freq = 2.0 * float(energies.omega[j])
        drives.append(DriveSpec(waveform=dv["waveform"], drive_frequency=float(freq),
                                amplitude=float(dv["amplitude"]), phase_offset=float(dv["phase"])))
    circuit = replace(probe, drives=tuple(drives))

    omega_max = float(np.max(energies.omega))
    if dt_raw.strip().lower() == "auto":
        dt = (2.0 * np.pi / omega_max) / DT_DIVISIONS
    else:
        try:
            dt = _parse_with_units(dt_raw, _TIME_UNITS, "time")
        except ValueError as exc:
            raise ConfigError([f"simulation.dt: {exc}"]) from None

    t_end = _resolve_t_end(t_end_raw, circuit, energies)
    if dt <= 0 or t_end <= 0:
        raise ConfigError(["simulation: dt and t_end must be positive"])

    return ExperimentConfig(circuit=circuit, truncation=truncation, t_end=t_end, dt=dt,
                            store_every=store_every, seed=seed, analyses=analyses,
                            modes=modes, output_dir=output_dir)


def _max_drive_period(circuit: CircuitSpec, energies) -> float:
    periods = [d.period() for d in circuit.drives]
    finite = [p for p in periods if np.isfinite(p)]
    if finite:
        return max(finite)
    return 2.0 * np.pi / float(np.min(energies.omega))


def _resolve_t_end(raw: str, circuit: CircuitSpec, energies) -> float:
    txt = raw.strip().lower()
    if txt == "auto":
        return DEFAULT_PERIODS * _max_drive_period(circuit, energies)
    parts = txt.split()
    if len(parts) == 2 and parts[1] in ("periods", "period"):
        return float(parts[0]) * _max_drive_period(circuit, energies)
    try:
        return _parse_with_units(raw, _TIME_UNITS, "time")
    except ValueError as exc:
        raise ConfigError([f"simulation.t_end: {exc}"]) from None


def format_config(config: ExperimentConfig) -> str:
    """Canonical text form; parse(format_config(c)) == c."""
    c = config.circuit
    n = c.n_sites
    lines = ["[circuit]", f"memristors = {n}", f"topology = {c.topology}"]
    for j in range(n):
        lines.append(f"cap_sigma_{j + 1} = {c.cap_sigma[j]:.17g}")
    for j in range(n):
        lines.append(f"l_self_{j + 1} = {c.l_self[j]:.17g}")
    for (j, k), l in sorted(c.l_couple.items()):
        lines.append(f"l_couple_{j + 1}_{k + 1} = {l:.17g}")
    for j in range(n):
        lines.append(f"theta_{j + 1} = {c.theta[j]:.17g}")
    for j in range(n):
        lines.append(f"varphi_{j + 1} = {c.varphi[j]:.17g}")
    for j, d in enumerate(c.drives):
        lines += [f"[drive_{j + 1}]", f"waveform = {d.waveform}",
                  f"frequency = {d.drive_frequency:.17g}",
                  f"amplitude = {d.amplitude:.17g}", f"phase = {d.phase_offset:.17g}"]
    lines += ["[simulation]", f"truncation = {config.truncation}",
              f"t_end = {config.t_end:.17g}", f"dt = {config.dt:.17g}",
              f"store_every = {config.store_every}", f"seed = {config.seed}",
              f"output_dir = {config.output_dir}",
              "[analyses]", f"run = {', '.join(config.analyses)}",
              "[modes]", f"inductance = {config.modes.inductance}",
              f"coupling_sign = {config.modes.coupling_sign}",
              f"eof_h = {config.modes.eof_h}"]
    return "\n".join(lines) + "\n"


def config_from_preset(preset: str | FigurePreset, truncation: int = 2,
                       t_end: float | None = None, dt: float | None = None,
                       store_every: int | None = None, seed: int = 7,
                       analyses: tuple[str, ...] | None = None,
                       modes: ModeFlags = ModeFlags(),
                       output_dir: str | None = None) -> ExperimentConfig:
    """ExperimentConfig for a bundled preset, with the standard auto defaults."""
    p = get_preset(preset) if isinstance(preset, str) else preset
    energies = derive_energies(p.circuit, mode=modes.inductance)
    omega_max = float(np.max(energies.omega))
    if dt is None:
        dt = (2.0 * np.pi / omega_max) / DT_DIVISIONS
    if t_end is None:
        t_end = DEFAULT_PERIODS * _max_drive_period(p.circuit, energies)
    return ExperimentConfig(circuit=p.circuit, truncation=truncation, t_end=t_end, dt=dt,
                            store_every=store_every if store_every is not None else p.store_every,
                            seed=seed,
                            analyses=tuple(sorted(analyses if analyses is not None else p.analyses)),
                            modes=modes, output_dir=output_dir or p.name,
                            preset_name=p.name)
