"""qmemnet: simulation and correlation analysis for coupled superconducting quantum memristors.

Networks of two or three flux-driven, dissipative superconducting oscillators
(quantum memristors) coupled through inductors, in triangular or linear
geometry.  The package integrates the time-dependent Lindblad master equation,
segments the resulting I-V curves into pinched hysteresis loops with their
form factors, computes bipartite and tripartite entanglement measures, and
cross-validates the engine against the closed first-moment equations.
"""

__version__ = "0.1.0"

from .circuit import (CircuitSpec, DerivedEnergies, DriveSpec, HamiltonianMatrix,
                      ParameterError, build_hamiltonian, decay_rate, default_drive,
                      derive_energies, inductance_matrix)
from .config import (ConfigError, ExperimentConfig, ModeFlags, config_from_preset,
                     format_config, parse_config)
from .entanglement import (BipartitionLabel, CorrelationReport, concurrence, compute_correlations,
                           convex_roof_eof, correlation_series, eof_from_concurrence,
                           eof_one_vs_two, eof_two_qubit, monogamy_m2, negativity,
                           partial_trace, partial_transpose, tripartite_negativity)
from .hysteresis import (HysteresisLoop, LoopSeries, ZeroPerimeterError, build_loop,
                         form_factor, loop_area, loop_perimeter, segment_loops)
from .lindblad import (DensityMatrix, InitialState, IntegrationDivergedError,
                       Trajectory, expectation, integrate, lindblad_rhs,
                       make_initial_state, number_observable, phase_observable,
                       voltage_and_current)
from .moments import (initial_moments, integrate_moments, moment_rhs,
                      relative_sup_error)
from .presets import PRESETS, FigurePreset, get_preset, make_circuit, uncoupled_circuit
from .runner import emit_plot_data, run_experiment, run_trajectory

__all__ = [
    "CircuitSpec", "DerivedEnergies", "DriveSpec", "HamiltonianMatrix",
    "ParameterError", "build_hamiltonian", "decay_rate", "default_drive",
    "derive_energies", "inductance_matrix",
    "ConfigError", "ExperimentConfig", "ModeFlags", "config_from_preset",
    "format_config", "parse_config",
    "BipartitionLabel", "CorrelationReport", "concurrence", "compute_correlations", "convex_roof_eof",
    "correlation_series", "eof_from_concurrence", "eof_one_vs_two", "eof_two_qubit",
    "monogamy_m2", "negativity", "partial_trace", "partial_transpose",
    "tripartite_negativity",
    "HysteresisLoop", "LoopSeries", "ZeroPerimeterError", "build_loop",
    "form_factor", "loop_area", "loop_perimeter", "segment_loops",
    "DensityMatrix", "InitialState", "IntegrationDivergedError", "Trajectory",
    "expectation", "integrate", "lindblad_rhs", "make_initial_state",
    "number_observable", "phase_observable", "voltage_and_current",
    "initial_moments", "integrate_moments", "moment_rhs", "relative_sup_error",
    "PRESETS", "FigurePreset", "get_preset", "make_circuit", "uncoupled_circuit",
    "emit_plot_data", "run_experiment", "run_trajectory",
]
