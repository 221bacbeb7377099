"""Physical constants used at the parameter boundary.

Internally the package works in hbar = 1 units: every energy is stored as an
angular frequency (rad/s). The conversion from raw circuit values (farads,
henries) happens exactly once, in :mod:`qmemnet.circuit`.
"""

from scipy.constants import e as ELEMENTARY_CHARGE, hbar as HBAR

# Reduced flux quantum hbar / 2e, in webers.
REDUCED_FLUX_QUANTUM = HBAR / (2.0 * ELEMENTARY_CHARGE)
