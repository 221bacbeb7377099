"""Bundled parameter sets for the six reference circuits and their analyses.

Six circuits cover the triangular/linear topologies with identical, one
non-identical and all non-identical memristors; fig4/fig5/fig6 are analysis
presets bound to one of those circuits.  Every raw value is reachable through
the config file format as well, so presets are a convenience, not a gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import CircuitSpec, DriveSpec, default_drive, derive_energies

FF = 1e-15
UH = 1e-6

THETA_DEFAULT = np.pi / 4.0
VARPHI_DEFAULT = np.pi / 2.0


def make_circuit(cap_sigma_f: tuple[float, ...], l_self_h: tuple[float, ...],
                 l_couple_h: dict[tuple[int, int], float], topology: str,
                 theta: tuple[float, ...] | None = None,
                 varphi: tuple[float, ...] | None = None,
                 drives: tuple[DriveSpec, ...] | str = "auto") -> CircuitSpec:
    """Assemble a CircuitSpec, filling in default drives/angles when asked.

    drives="auto" instantiates the default flux ramp phi_d = 2 omega_j t - pi/2
    per site, with omega_j taken from the bare-mode derived energies.
    """
    n = len(cap_sigma_f)
    theta = theta if theta is not None else (THETA_DEFAULT,) * n
    varphi = varphi if varphi is not None else (VARPHI_DEFAULT,) * n
    placeholder = (DriveSpec(waveform="constant"),) * n
    if drives == "auto":
        probe = CircuitSpec(cap_sigma=cap_sigma_f, l_self=l_self_h, l_couple=l_couple_h,
                            drives=placeholder, theta=theta, varphi=varphi, topology=topology)
        omega = derive_energies(probe, mode="bare").omega
        drives = tuple(default_drive(w) for w in omega)
    return CircuitSpec(cap_sigma=cap_sigma_f, l_self=l_self_h, l_couple=l_couple_h,
                       drives=drives, theta=theta, varphi=varphi, topology=topology)


_L_SELF = (0.2 * UH,) * 3

_CIRCUIT_TABLE = {
    # name: (capacitances, couplers, topology)
    "fig2a": ((3.6 * FF, 3.6 * FF, 3.6 * FF),
              {(0, 1): 2.0 * UH, (1, 2): 2.0 * UH, (0, 2): 2.0 * UH}, "triangular"),
    "fig2b": ((3.6 * FF, 2.6 * FF, 3.6 * FF),
              {(0, 1): 1.69 * UH, (1, 2): 1.69 * UH, (0, 2): 2.0 * UH}, "triangular"),
    "fig2c": ((3.6 * FF, 2.6 * FF, 3.0 * FF),
              {(0, 1): 1.69 * UH, (1, 2): 1.55 * UH, (0, 2): 1.83 * UH}, "triangular"),
    "fig2d": ((3.6 * FF, 3.6 * FF, 3.6 * FF),
              {(0, 1): 2.0 * UH, (1, 2): 2.0 * UH}, "linear"),
    "fig2e": ((3.6 * FF, 2.6 * FF, 3.6 * FF),
              {(0, 1): 1.69 * UH, (1, 2): 1.69 * UH}, "linear"),
    "fig2f": ((3.6 * FF, 2.6 * FF, 3.0 * FF),
              {(0, 1): 1.69 * UH, (1, 2): 1.55 * UH}, "linear"),
}


@dataclass(frozen=True)
class FigurePreset:
    name: str
    circuit: CircuitSpec
    analyses: tuple[str, ...]
    description: str
    store_every: int = 1  # default snapshot stride (coarser for roof-heavy analyses)


def uncoupled_circuit(cap_sigma_f: float = 3.6 * FF, l_self_h: float = 0.2 * UH,
                      n: int = 3) -> CircuitSpec:
    """Identical memristors with every coupler absent (degenerate linear chain)."""
    return make_circuit((cap_sigma_f,) * n, (l_self_h,) * n, {}, "linear")


def _build_presets() -> dict[str, FigurePreset]:
    circuits = {name: make_circuit(caps, _L_SELF, dict(couplers), topo)
                for name, (caps, couplers, topo) in _CIRCUIT_TABLE.items()}
    kinds = {"a": "triangular, identical", "b": "triangular, one non-identical",
             "c": "triangular, all non-identical", "d": "linear, identical",
             "e": "linear, one non-identical", "f": "linear, all non-identical"}
    presets = {}
    for suffix, kind in kinds.items():
        name = f"fig2{suffix}"
        presets[name] = FigurePreset(name=name, circuit=circuits[name],
                                     analyses=("form_factor",),
                                     description=f"form-factor dynamics, {kind}")
    presets["fig4"] = FigurePreset(name="fig4", circuit=circuits["fig2d"],
                                   analyses=("form_factor", "pair_eof"),
                                   description="pair concurrence/EoF vs form factor, linear identical",
                                   store_every=5)
    presets["fig5"] = FigurePreset(name="fig5", circuit=circuits["fig2a"],
                                   analyses=("negativity",),
                                   description="one-vs-rest and tripartite negativity, triangular identical",
                                   store_every=5)
    presets["fig6"] = FigurePreset(name="fig6", circuit=circuits["fig2d"],
                                   analyses=("form_factor", "monogamy"),
                                   description="monogamy residual vs form factor, linear identical",
                                   store_every=25)
    return presets


PRESETS = _build_presets()


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
