"""Density-matrix dynamics under cavity photon loss.

The master equation evolved here is

    rho' = -i[H, rho] - sum_m kappa_m (c_m^+ c_m rho - 2 c_m rho c_m^+
                                       + rho c_m^+ c_m),

with one annihilator per cavity mode, so each mode loses photons at rate
2*kappa_m.  The generator is linear, and the engine reuses the fixed-step
scheme of :mod:`twophoton.integrate`: the RK4 substep — being itself a
linear map on rho — is compiled once into a matrix acting on the flattened
density matrix by applying ``lindblad_rhs`` to every matrix unit, then
raised to the substeps-per-interval power.  ``lindblad_rhs`` stays the
single home of the dissipator algebra; the compiled matrix is derived from
it mechanically and is equal to literal RK4 stepping by linearity.

Trace, Hermiticity, and spectral positivity are monitored at every output
point; a breach aborts the run, since a density matrix that has lost these
properties no longer represents a physical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import Basis, enumerate_basis
from .errors import ConfigurationError, NumericalInvariantError
from .integrate import default_substep, rk4_step, validate_grid
from .operators import build_hamiltonian, build_jump_operators
from .params import ModelParams, SystemKind
from .unitary import TimeSeries

TRACE_TOLERANCE = 1e-8
HERMITICITY_TOLERANCE = 1e-8
EIGENVALUE_FLOOR = -1e-6


@dataclass(frozen=True)
class DensityMatrix:
    """One density matrix snapshot on a frozen basis."""

    basis: Basis
    matrix: np.ndarray
    time: float

    def population(self, label: str) -> float:
        """Diagonal occupation of the labeled basis state."""
        idx = self.basis.index_of(label)
        return float(self.matrix[idx, idx].real)

    def validate(self) -> None:
        """Raise if trace, Hermiticity, or positivity are out of tolerance."""
        _check_invariants(self.matrix, self.time)


def _check_invariants(rho: np.ndarray, time: float) -> None:
    trace_defect = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if trace_defect > TRACE_TOLERANCE:
        raise NumericalInvariantError("density-matrix trace", float(trace_defect),
                                      TRACE_TOLERANCE, time=time)
    herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_defect > HERMITICITY_TOLERANCE:
        raise NumericalInvariantError("density-matrix Hermiticity", herm_defect,
                                      HERMITICITY_TOLERANCE, time=time)
    smallest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if smallest < EIGENVALUE_FLOOR:
        raise NumericalInvariantError("density-matrix positivity", smallest,
                                      EIGENVALUE_FLOOR, time=time)


def lindblad_rhs(kind: SystemKind | str, params: ModelParams,
                 rho: np.ndarray,
                 hamiltonian: np.ndarray | None = None,
                 jumps: list[np.ndarray] | None = None) -> np.ndarray:
    """Right-hand side of the master equation in matrix form.

    The optional ``hamiltonian``/``jumps`` let callers reuse prebuilt
    operators; they default to the damped-sector operators for ``kind``.
    """
    kind = SystemKind.coerce(kind)
    params.validate_for_kind(kind)
    if hamiltonian is None:
        hamiltonian = build_hamiltonian(kind, params, damped=True)
    if jumps is None:
        jumps = build_jump_operators(kind)
    kappas = [params.kappa_a, params.kappa_b][: len(jumps)]

    rho = np.asarray(rho, dtype=complex)
    out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for kappa, c in zip(kappas, jumps):
        if kappa == 0.0:
            continue
        number = c.T @ c          # annihilators are real
        out -= kappa * (number @ rho - 2.0 * (c @ rho @ c.T) + rho @ number)
    return out


def _substep_superoperator(kind: SystemKind, params: ModelParams,
                           h: float, dim: int) -> np.ndarray:
    """Compile one RK4 substep of the master equation to a matrix on vec(rho)."""
    hamiltonian = build_hamiltonian(kind, params, damped=True)
    jumps = build_jump_operators(kind)

    def rhs(r: np.ndarray) -> np.ndarray:
        return lindblad_rhs(kind, params, r, hamiltonian=hamiltonian, jumps=jumps)

    step = np.empty((dim * dim, dim * dim), dtype=complex)
    unit = np.zeros((dim, dim), dtype=complex)
    for col in range(dim * dim):
        unit.flat[col] = 1.0
        step[:, col] = rk4_step(rhs, unit, h).ravel()
        unit.flat[col] = 0.0
    return step


def _initial_density(basis: Basis, initial) -> np.ndarray:
    if initial is None:
        rho0 = np.zeros((basis.dim, basis.dim), dtype=complex)
        rho0[basis.initial_index, basis.initial_index] = 1.0
        return rho0
    if isinstance(initial, DensityMatrix):
        initial = initial.matrix
    rho0 = np.asarray(initial, dtype=complex)
    if rho0.shape != (basis.dim, basis.dim):
        raise ConfigurationError(
            f"initial density matrix must have shape {(basis.dim, basis.dim)}, "
            f"got {rho0.shape}")
    return rho0


def evolve_density(kind: SystemKind | str, params: ModelParams, t_grid,
                   initial=None, substep: float | None = None) -> list[DensityMatrix]:
    """Integrate the master equation over an output grid.

    ``initial`` defaults to the pure doubly-excited vacuum state and may be
    a matrix or a :class:`DensityMatrix`; it is the state at ``t_grid[0]``.
    Every output point is checked for trace, Hermiticity, and positivity.
    """
    kind = SystemKind.coerce(kind)
    params.validate_for_kind(kind)
    basis = enumerate_basis(kind, damped=True)
    t = validate_grid(t_grid)
    rho = _initial_density(basis, initial)
    if substep is None:
        substep = default_substep(params.delta_cap, params.delta_small)
    if substep <= 0:
        raise ConfigurationError(f"substep must be positive, got {substep}")

    out = [DensityMatrix(basis=basis, matrix=rho.copy(), time=float(t[0]))]
    _check_invariants(rho, float(t[0]))

    vec = rho.ravel()
    cache: dict[float, np.ndarray] = {}
    for i in range(1, t.size):
        dt = t[i] - t[i - 1]
        u = cache.get(dt)
        if u is None:
            nsub = max(1, math.ceil(dt / substep))
            step = _substep_superoperator(kind, params, dt / nsub, basis.dim)
            u = np.linalg.matrix_power(step, nsub)
            cache[dt] = u
        vec = u @ vec
        rho = vec.reshape(basis.dim, basis.dim)
        _check_invariants(rho, float(t[i]))
        out.append(DensityMatrix(basis=basis, matrix=rho.copy(), time=float(t[i])))
    return out


def population_series(states: list[DensityMatrix], label: str) -> TimeSeries:
    """Occupation of one basis state along a density-matrix trajectory."""
    if not states:
        raise ConfigurationError("empty density-matrix trajectory")
    idx = states[0].basis.index_of(label)
    times = np.array([s.time for s in states])
    values = np.array([s.matrix[idx, idx].real for s in states])
    return TimeSeries(times=times, values=values)


def two_photon_population(states: list[DensityMatrix]) -> TimeSeries:
    """Occupation of the two-photon target state along a trajectory."""
    if not states:
        raise ConfigurationError("empty density-matrix trajectory")
    label = states[0].basis.states[states[0].basis.two_photon_index].label
    return population_series(states, label)
