"""Strong-field electron dynamics in periodic potentials.

Modules
-------
core       units, materials, pulses, band models, k grids
regimes    ponderomotive energy and adiabaticity parameters
intraband  single-band kinematics, harmonics, charge and energy transfer
interband  two-band Houston dynamics, dephasing, rate scans
ladders    Kane and Wannier-Stark ladders, Franz-Keldysh absorption
resonant   two-level Rabi dynamics and generalized pulse area
geometry   Berry curvature, Chern number, Zak phase, anomalous velocity
cli        command-line front end
"""

from .core import (
    CONSTANTS,
    HBAR,
    MATERIALS,
    BlochwaveError,
    ConfigError,
    EffectiveMass,
    KaneTwoBand,
    KGrid,
    MaterialRecord,
    NumericalError,
    PulseSpec,
    TightBinding,
    material_lookup,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS", "HBAR", "MATERIALS", "BlochwaveError", "ConfigError", "EffectiveMass", "KaneTwoBand",
    "KGrid", "MaterialRecord", "NumericalError", "PulseSpec", "TightBinding", "material_lookup", "__version__",
]
