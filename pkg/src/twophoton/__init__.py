"""Two-photon vacuum Rabi dynamics of atom pairs in high-quality cavities.

A small simulation engine for the cooperative emission of two photons by
two atoms — identical atoms in a two-mode cavity or nonidentical atoms
sharing a single mode — covering exact amplitude dynamics in the closed
sector, dispersive effective-model reductions, and density-matrix dynamics
under cavity photon loss, plus reference experiments and a CLI
(``twophoton``).
"""

from .basis import Basis, BasisState, enumerate_basis
from .effective import (CONSISTENT, LITERAL, POLYNOMIAL, RESUMMED,
                        EffectiveTwoLevel, ResolventTerms, ResonanceResult,
                        closed_form_probability, effective_g_omega,
                        effective_hamiltonian, interference_amplitude,
                        perturbative_probability, reduced_rhs,
                        resolvent_effective_hamiltonian, resonance_detuning,
                        stark_shift_condition)
from .errors import (ConfigurationError, NoRootInInterval,
                     NumericalInvariantError, PoleError, SingularityError,
                     TwoPhotonError)
from .experiments import (EnvelopeComparison, ResonanceReport, SweepResult,
                          SweepRow, SweepSpec, damping_sweep, default_horizon,
                          envelope_compare, resonance_report, scan_two_photon,
                          time_grid)
from .integrate import default_substep
from .lindblad import (DensityMatrix, evolve_density, lindblad_rhs,
                       population_series, two_photon_population)
from .operators import (build_hamiltonian, build_jump_operators,
                        embed_unitary_sector, excitation_numbers,
                        spectrum_lines)
from .params import ModelParams, SystemKind
from .unitary import (TimeSeries, amplitude_rhs, evolve_amplitudes,
                      expm_reference, expm_series, two_photon_probability)

try:
    from importlib.metadata import version as _version
    __version__ = _version("artifact")
except Exception:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = [
    "Basis", "BasisState", "enumerate_basis",
    "CONSISTENT", "LITERAL", "POLYNOMIAL", "RESUMMED",
    "EffectiveTwoLevel", "ResolventTerms", "ResonanceResult",
    "closed_form_probability", "effective_g_omega", "effective_hamiltonian",
    "interference_amplitude", "perturbative_probability", "reduced_rhs",
    "resolvent_effective_hamiltonian", "resonance_detuning",
    "stark_shift_condition",
    "ConfigurationError", "NoRootInInterval", "NumericalInvariantError",
    "PoleError", "SingularityError", "TwoPhotonError",
    "EnvelopeComparison", "ResonanceReport", "SweepResult", "SweepRow",
    "SweepSpec", "damping_sweep", "default_horizon", "envelope_compare",
    "resonance_report", "scan_two_photon", "time_grid",
    "default_substep",
    "DensityMatrix", "evolve_density", "lindblad_rhs", "population_series",
    "two_photon_population",
    "build_hamiltonian", "build_jump_operators", "embed_unitary_sector",
    "excitation_numbers", "spectrum_lines",
    "ModelParams", "SystemKind",
    "TimeSeries", "amplitude_rhs", "evolve_amplitudes", "expm_reference",
    "expm_series", "two_photon_probability",
]
