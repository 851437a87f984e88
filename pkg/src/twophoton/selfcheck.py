"""Fast end-to-end consistency checks, runnable via ``twophoton selfcheck``.

Each check exercises one independent cross-validation of the engine
(stepping integrator vs exact diagonalization, damped vs coherent sector,
resolvent vs tabulated effective matrix, exact interference cancellation).
The whole suite runs in a few seconds; it is a smoke test, not the full
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .effective import (closed_form_probability, effective_hamiltonian,
                        interference_amplitude,
                        resolvent_effective_hamiltonian)
from .lindblad import evolve_density, two_photon_population
from .operators import build_hamiltonian, embed_unitary_sector
from .params import ModelParams, SystemKind
from .unitary import (evolve_amplitudes, expm_series, two_photon_probability)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_embedding() -> CheckResult:
    worst = 0.0
    for kind in SystemKind:
        params = ModelParams(g2=1.7, delta_cap=-4.0, delta_small=3.0)
        v = embed_unitary_sector(kind)
        hd = build_hamiltonian(kind, params, damped=True)
        hu = build_hamiltonian(kind, params, damped=False)
        worst = max(worst, float(np.max(np.abs(v.T @ hd @ v - hu))),
                    float(np.max(np.abs(v.T @ v - np.eye(v.shape[1])))))
    return CheckResult("damped sector embeds the coherent sector",
                       worst <= 1e-12, f"max deviation {worst:.2e}")


def _check_integrator() -> CheckResult:
    worst = 0.0
    grid = np.linspace(0.0, 10.0, 101)
    cases = [
        (SystemKind.BIMODAL, ModelParams(g2=1.5, delta_cap=-5.0, delta_small=3.5)),
        (SystemKind.BIMODAL, ModelParams(g2=2.5, delta_cap=8.0, delta_small=-7.5)),
        (SystemKind.SINGLE_MODE, ModelParams(g2=2.0, delta_cap=-5.0, delta_small=2.75)),
    ]
    for kind, params in cases:
        stepped = evolve_amplitudes(kind, params, grid)
        exact = expm_series(kind, params, grid)
        worst = max(worst, float(np.max(np.abs(stepped.values - exact.values))))
    return CheckResult("stepping integrator matches exact diagonalization",
                       worst <= 1e-8, f"max amplitude deviation {worst:.2e}")


def _check_undamped_density() -> CheckResult:
    kind = SystemKind.BIMODAL
    params = ModelParams(g2=1.5, delta_cap=-5.0, delta_small=3.5)
    grid = np.linspace(0.0, 5.0, 51)
    states = evolve_density(kind, params, grid)
    damped = two_photon_population(states).values
    coherent = two_photon_probability(
        evolve_amplitudes(kind, params, grid)).values
    worst = float(np.max(np.abs(damped - coherent)))
    return CheckResult("undamped master equation reproduces coherent dynamics",
                       worst <= 1e-6, f"max population deviation {worst:.2e}")


def _check_resolvent() -> CheckResult:
    params = ModelParams(g2=1.5, delta_cap=-7.0, delta_small=7.0)
    _, via_resolvent = resolvent_effective_hamiltonian(params)
    tabulated = effective_hamiltonian(SystemKind.BIMODAL, params,
                                      form="polynomial")
    worst = float(np.max(np.abs(via_resolvent.matrix - tabulated.matrix)))
    return CheckResult("resolvent construction matches fourth-order matrix",
                       worst <= 1e-12, f"max entry deviation {worst:.2e}")


def _check_interference() -> CheckResult:
    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(200):
        # dyadic offsets keep the two-photon shell exact in floating point
        omega = rng.integers(1, 2**20) / 2.0**10
        split = rng.integers(1, 2**19) / 2.0**10
        worst = max(worst, abs(interference_amplitude(
            omega + split, omega - split, omega)))
    return CheckResult("on-shell interference cancels exactly",
                       worst == 0.0, f"max |amplitude| {worst:.2e}")


def _check_destructive_limit() -> CheckResult:
    params = ModelParams(g1=1.0, g2=1.0, delta_cap=-10.0, delta_small=10.0)
    grid = np.linspace(0.0, 20.0, 2001)
    closed = closed_form_probability(SystemKind.BIMODAL, params, grid)
    series = two_photon_probability(
        evolve_amplitudes(SystemKind.BIMODAL, params, grid))
    peak = float(np.max(series.values))
    ok = float(np.max(np.abs(closed))) == 0.0 and peak <= 0.01
    return CheckResult("equal couplings at opposite detunings suppress emission",
                       ok, f"exact peak {peak:.2e}, envelope identically 0")


def run_selfcheck() -> list[CheckResult]:
    """Run all checks; returns their results (never raises on failure)."""
    checks = (_check_embedding, _check_integrator, _check_undamped_density,
              _check_resolvent, _check_interference, _check_destructive_limit)
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            results.append(CheckResult(check.__name__, False,
                                       f"raised {type(exc).__name__}: {exc}"))
    return results
