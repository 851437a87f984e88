"""Dispersive two-level reductions of the two-photon dynamics.

Far from one-photon resonances the intermediate one-excitation states only
dress the doubly-excited state |i> and the two-photon target |f>, and the
six (or four) amplitude equations collapse to an effective two-level
problem

    H_eff = [[h_ii, -G], [-G, h_ii - Omega]],

whose solution from c_i(0)=1 is the envelope

    |c_f(t)|^2 = 4G^2/(4G^2+Omega^2) * sin^2( sqrt(4G^2+Omega^2) t / 2 ).

G is the second-order two-photon coupling and Omega the effective
detuning between the dressed levels; the two-photon resonance sits at
Omega = 0, *shifted* from the bare condition delta_cap + delta_small = 0
by the one-photon Stark shifts.  Three routes to H_eff are provided:

``effective_hamiltonian(form="resummed")``
    The closed-form matrix with resummed denominators (valid to fourth
    order in the couplings).

``effective_hamiltonian(form="polynomial")``
    The explicit fourth-order polynomial expansion (bimodal only).

``resolvent_effective_hamiltonian``
    An independent construction from projectors and resolvent operators,
    used to validate the polynomial matrix term by term.

Two formula variants circulate for a couple of the expressions; the
``LITERAL`` variant reproduces the commonly transcribed forms verbatim
(including a dimensionally inhomogeneous denominator and a halved
independent-emission amplitude), while the default ``CONSISTENT`` variant
uses the forms that agree with exact second-order reduction of the full
model.  The toggle exists so both can be compared; all defaults are
CONSISTENT.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import (ConfigurationError, NoRootInInterval, PoleError,
                     SingularityError)
from .params import ModelParams, SystemKind

CONSISTENT = "consistent"
LITERAL = "literal"

RESUMMED = "resummed"
POLYNOMIAL = "polynomial"

#: |delta_cap + delta_small| above this fraction of the smaller detuning
#: means the initial and two-photon states are no longer quasi-degenerate
#: and the resolvent construction loses accuracy.
DEGENERACY_FRACTION = 0.1

_ROOT_XTOL = 1e-10


def _check_variant(variant: str) -> str:
    if variant not in (CONSISTENT, LITERAL):
        raise ConfigurationError(
            f"variant must be {CONSISTENT!r} or {LITERAL!r}, got {variant!r}")
    return variant


def _guard(value: float, description: str, scale: float = 1.0) -> float:
    if abs(value) <= 1e-12 * max(abs(scale), 1.0):
        raise SingularityError(
            f"{description} vanishes; the dispersive reduction is undefined here")
    return value


@dataclass(frozen=True)
class EffectiveTwoLevel:
    """Effective 2x2 Hamiltonian on (initial, two-photon) with its scalars.

    ``big_g`` is the magnitude of the off-diagonal two-photon coupling and
    ``big_omega`` the diagonal difference h_ii - h_ff (effective detuning).
    """

    matrix: np.ndarray
    big_g: float
    big_omega: float
    kind: SystemKind
    form: str
    variant: str = CONSISTENT


@dataclass(frozen=True)
class ResolventTerms:
    """Second- and fourth-order blocks of the resolvent construction."""

    second_order: np.ndarray
    fourth_order: np.ndarray
    projector_labels: tuple[str, str]


@dataclass(frozen=True)
class ResonanceResult:
    """Located two-photon resonance.

    ``delta_star`` is the root of the effective detuning Omega on the
    search interval; ``delta_star_stark`` is the root of the simpler
    Stark-shift condition (None if that form does not change sign on the
    interval); ``omega_residual`` is Omega evaluated at the root.
    """

    delta_star: float
    delta_star_stark: float | None
    omega_residual: float
    interval: tuple[float, float]
    kind: SystemKind


def interference_amplitude(omega1: float, omega2: float, omega: float,
                           d1: float = 1.0, d2: float = 1.0) -> float:
    """Two-photon emission amplitude factor d1*d2*(1/(w1-w) + 1/(w2-w)).

    Written over a common denominator, so on the two-photon shell
    w1 + w2 = 2w the cancellation between the two emission orderings is
    *exact* in floating point whenever the rounded detunings are opposite.
    """
    det1 = omega1 - omega
    det2 = omega2 - omega
    if det1 == 0.0 or det2 == 0.0:
        raise PoleError(
            "an atomic transition lies exactly on the mode frequency; the "
            "interference amplitude has a pole there")
    return d1 * d2 * (det1 + det2) / (det1 * det2)


def perturbative_probability(kind: SystemKind | str, params: ModelParams, t,
                             variant: str = CONSISTENT):
    """Second-order (independent-emission) two-photon probability.

    This is the leading term in the couplings: both atoms emit
    independently and no resonance structure appears.  Valid only deep in
    the dispersive regime (couplings much smaller than both detunings) and
    for short times.

    For the bimodal system the CONSISTENT prefactor is 64; the LITERAL
    variant keeps the commonly transcribed 16, which underestimates the
    exact small-coupling dynamics by a uniform factor of 4.  The
    single-mode prefactor 32 is the same in both variants.
    """
    kind = SystemKind.coerce(kind)
    _check_variant(variant)
    D, d = params.delta_cap, params.delta_small
    if D == 0.0 or d == 0.0:
        raise PoleError(
            "independent-emission expansion has a pole at zero detuning")
    t = np.asarray(t, dtype=float)
    shape = np.sin(d * t / 2.0) ** 2 * np.sin(D * t / 2.0) ** 2
    if kind is SystemKind.BIMODAL:
        prefactor = 64.0 if variant == CONSISTENT else 16.0
    else:
        prefactor = 32.0
    out = prefactor * params.g1 ** 2 * params.g2 ** 2 / (d ** 2 * D ** 2) * shape
    return float(out) if out.ndim == 0 else out


def _bimodal_resummed(p: ModelParams) -> tuple[float, float, float]:
    D, d, g1, g2 = p.delta_cap, p.delta_small, p.g1, p.g2
    den1 = _guard(D * D - 2 * g1 * g1, "detuning denominator D^2 - 2 g1^2", D * D)
    den2 = _guard(d * d - 2 * g2 * g2, "detuning denominator d^2 - 2 g2^2", d * d)
    h11 = 2 * g1 * g1 * D / den1 + 2 * g2 * g2 * d / den2
    h14 = -2 * g1 * g2 * (D / (D * D + 2 * g1 * g1) + d / (d * d + 2 * g2 * g2))
    h44 = -(D + d - 2 * g2 * g2 * D / den1 - 2 * g1 * g1 * d / den2)
    return h11, h14, h44


def _bimodal_polynomial(p: ModelParams) -> tuple[float, float, float]:
    D, d, g1, g2 = p.delta_cap, p.delta_small, p.g1, p.g2
    _guard(D, "detuning D", 1.0)
    _guard(d, "detuning d", 1.0)
    h11 = 2 * g1**2 / D + 2 * g2**2 / d + 4 * g1**4 / D**3 + 4 * g2**4 / d**3
    h14 = (-2 * g1 * g2 / D - 2 * g1 * g2 / d
           + 4 * g1**3 * g2 / D**3 + 4 * g1 * g2**3 / d**3)
    h44 = (-(D + d) - 2 * g2**2 / d - 2 * g1**2 / D
           + 4 * g1**2 * g2**2 / D**3 + 4 * g1**2 * g2**2 / d**3)
    return h11, h14, h44


def _single_mode_resummed(p: ModelParams, variant: str) -> tuple[float, float, float]:
    D, d, g1, g2 = p.delta_cap, p.delta_small, p.g1, p.g2
    _guard(D, "detuning D", 1.0)
    _guard(d, "detuning d", 1.0)
    if variant == CONSISTENT:
        den1 = D * D + 2 * g1 * g1
        den2 = d * d + 2 * g2 * g2
    else:
        # literal transcription: linear detunings in the denominators
        den1 = _guard(D + 2 * g1 * g1, "denominator D + 2 g1^2", D)
        den2 = _guard(d + 2 * g2 * g2, "denominator d + 2 g2^2", d)
    h11 = g1 * g1 / D + g2 * g2 / d
    h14 = -np.sqrt(2.0) * g1 * g2 * (D / den1 + d / den2)
    h44 = -(D + d + 2 * g1 * g1 / D + 2 * g2 * g2 / d)
    return h11, h14, h44


def effective_hamiltonian(kind: SystemKind | str, params: ModelParams,
                          form: str = RESUMMED,
                          variant: str = CONSISTENT) -> EffectiveTwoLevel:
    """Effective 2x2 Hamiltonian on the (initial, two-photon) pair.

    ``form="resummed"`` is the closed-form matrix; ``form="polynomial"``
    (bimodal only) is its explicit fourth-order expansion.  The two agree
    to fourth order in the couplings; their difference scales as the sixth
    power.
    """
    kind = SystemKind.coerce(kind)
    _check_variant(variant)
    if form == RESUMMED:
        if kind is SystemKind.BIMODAL:
            h11, h14, h44 = _bimodal_resummed(params)
        else:
            h11, h14, h44 = _single_mode_resummed(params, variant)
    elif form == POLYNOMIAL:
        if kind is not SystemKind.BIMODAL:
            raise ConfigurationError(
                "the fourth-order polynomial matrix is only tabulated for the "
                "bimodal system")
        h11, h14, h44 = _bimodal_polynomial(params)
    else:
        raise ConfigurationError(
            f"form must be {RESUMMED!r} or {POLYNOMIAL!r}, got {form!r}")
    matrix = np.array([[h11, h14], [h14, h44]])
    return EffectiveTwoLevel(matrix=matrix, big_g=abs(h14),
                             big_omega=h11 - h44, kind=kind, form=form,
                             variant=variant)


def reduced_rhs(kind: SystemKind | str, params: ModelParams, c,
                variant: str = CONSISTENT) -> np.ndarray:
    """Equations of motion of the reduced pair (c_initial, c_two_photon).

    Written out coefficient by coefficient (an independent code path from
    ``effective_hamiltonian``; the two are cross-checked in tests).
    """
    kind = SystemKind.coerce(kind)
    _check_variant(variant)
    c = np.asarray(c, dtype=complex)
    if c.shape != (2,):
        raise ConfigurationError(f"reduced state must have shape (2,), got {c.shape}")
    D, d, g1, g2 = params.delta_cap, params.delta_small, params.g1, params.g2
    c1, c4 = c
    if kind is SystemKind.BIMODAL:
        den1 = _guard(D * D - 2 * g1 * g1, "detuning denominator D^2 - 2 g1^2", D * D)
        den2 = _guard(d * d - 2 * g2 * g2, "detuning denominator d^2 - 2 g2^2", d * d)
        coupling = 2 * g1 * g2 * (D / (D * D + 2 * g1 * g1)
                                  + d / (d * d + 2 * g2 * g2))
        dc1 = (-1j * (2 * g1**2 * D / den1 + 2 * g2**2 * d / den2) * c1
               + 1j * coupling * c4)
        dc4 = (1j * coupling * c1
               + 1j * (D + d - 2 * g1**2 * d / den2 - 2 * g2**2 * D / den1) * c4)
        return np.array([dc1, dc4])
    _guard(D, "detuning D", 1.0)
    _guard(d, "detuning d", 1.0)
    if variant == CONSISTENT:
        bracket = D / (D * D + 2 * g1 * g1) + d / (d * d + 2 * g2 * g2)
    else:
        bracket = (D / _guard(D + 2 * g1 * g1, "denominator D + 2 g1^2", D)
                   + d / _guard(d + 2 * g2 * g2, "denominator d + 2 g2^2", d))
    coupling = np.sqrt(2.0) * g1 * g2 * bracket
    dc1 = -1j * (g1**2 / D + g2**2 / d) * c1 + 1j * coupling * c4
    dc4 = 1j * coupling * c1 + 1j * (D + d + 2 * g1**2 / D + 2 * g2**2 / d) * c4
    return np.array([dc1, dc4])


def effective_g_omega(kind: SystemKind | str, params: ModelParams) -> tuple[float, float]:
    """The scalar pair (G, Omega) of the two-level envelope.

    G is the signed two-photon coupling, Omega the effective detuning; the
    envelope depends only on G^2 and Omega.  Vanishing of both — which
    happens identically for equal couplings at the bare resonance
    delta_cap = -delta_small in the bimodal system — means destructive
    interference: no two-photon resonance at all.
    """
    kind = SystemKind.coerce(kind)
    D, d, g1, g2 = params.delta_cap, params.delta_small, params.g1, params.g2
    if kind is SystemKind.BIMODAL:
        big_g = 2 * g1 * g2 * (D / (D * D + 2 * g1 * g1)
                               + d / (d * d + 2 * g2 * g2))
        den1 = _guard(D * D - 2 * g1 * g1, "detuning denominator D^2 - 2 g1^2", D * D)
        den2 = _guard(d * d - 2 * g2 * g2, "detuning denominator d^2 - 2 g2^2", d * d)
        big_omega = D + d + 2 * (g1**2 - g2**2) * (D / den1 - d / den2)
        return big_g, big_omega
    _guard(D, "detuning D", 1.0)
    _guard(d, "detuning d", 1.0)
    big_g = np.sqrt(2.0) * g1 * g2 * (D / (D * D + 2 * g1 * g1)
                                      + d / (d * d + 2 * g2 * g2))
    big_omega = D + d + 3 * (g1**2 / D + g2**2 / d)
    return float(big_g), float(big_omega)


def closed_form_probability(kind: SystemKind | str, params: ModelParams, t):
    """Two-level envelope |c_f(t)|^2 = 4G^2/(4G^2+Omega^2) sin^2(sqrt(.)t/2).

    Returns exactly zero when both G and Omega vanish (the destructive
    interference limit).
    """
    big_g, big_omega = effective_g_omega(kind, params)
    t = np.asarray(t, dtype=float)
    rate2 = 4.0 * big_g * big_g + big_omega * big_omega
    if rate2 == 0.0:
        out = np.zeros_like(t)
    else:
        out = (4.0 * big_g * big_g / rate2
               * np.sin(np.sqrt(rate2) * t / 2.0) ** 2)
    return float(out) if out.ndim == 0 else out


def stark_shift_condition(kind: SystemKind | str, params: ModelParams,
                          delta_small: float) -> float:
    """Large-detuning resonance condition residual at the given detuning.

    Bimodal: delta_cap + delta + 4(g1^2/delta_cap + g2^2/delta) — each
    atom shifted by one photon's Stark shift.  Single-mode: the same with
    coefficient 3 (this equals the effective detuning Omega itself there).
    """
    kind = SystemKind.coerce(kind)
    D, g1, g2 = params.delta_cap, params.g1, params.g2
    _guard(D, "detuning D", 1.0)
    _guard(delta_small, "detuning d", 1.0)
    k = 4.0 if kind is SystemKind.BIMODAL else 3.0
    return D + delta_small + k * (g1**2 / D + g2**2 / delta_small)


def resonance_detuning(kind: SystemKind | str, params: ModelParams,
                       interval: tuple[float, float]) -> ResonanceResult:
    """Locate the shifted two-photon resonance Omega(delta_small) = 0.

    Bisects the effective detuning over ``interval`` (all other parameters
    fixed) to an absolute tolerance well below 1e-8.  Also reports the
    root of the simpler Stark-shift condition when it brackets on the same
    interval.

    Raises
    ------
    NoRootInInterval
        If Omega does not change sign over the interval.
    """
    kind = SystemKind.coerce(kind)
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ConfigurationError(f"search interval must satisfy lo < hi, got {interval}")

    def omega_at(delta: float) -> float:
        return effective_g_omega(kind, params.replace(delta_small=delta))[1]

    f_lo, f_hi = omega_at(lo), omega_at(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoRootInInterval(
            f"effective detuning does not change sign on [{lo}, {hi}] "
            f"(endpoint values {f_lo:.4g}, {f_hi:.4g})")
    root = float(bisect(omega_at, lo, hi, xtol=_ROOT_XTOL))

    def stark_at(delta: float) -> float:
        return stark_shift_condition(kind, params, delta)

    stark_root = None
    s_lo, s_hi = stark_at(lo), stark_at(hi)
    if np.sign(s_lo) != np.sign(s_hi):
        stark_root = float(bisect(stark_at, lo, hi, xtol=_ROOT_XTOL))

    return ResonanceResult(delta_star=root, delta_star_stark=stark_root,
                           omega_residual=omega_at(root),
                           interval=(lo, hi), kind=kind)


def resolvent_effective_hamiltonian(
        params: ModelParams,
        include_fourth_order: bool = True) -> tuple[ResolventTerms, EffectiveTwoLevel]:
    """Projector/resolvent construction of the bimodal effective pair.

    Splits the 6x6 Hamiltonian into its diagonal part and the coupling V,
    projects onto the quasi-degenerate pair (initial, two-photon), and
    assembles the second-order term

        A2 = P1 V Q1 V P1 + P4 V Q4 V P4 + P1 V Q4 V P4 + P4 V Q4 V P1,
        Qj = sum_{i not in pair} Pi / (Ej - Ei),

    plus the fourth-order term (P1+P4) V Q1 V Q1 V Q1 V (P1+P4), which is
    derived under exact pair degeneracy E1 = E4 (the bare two-photon
    resonance).  Away from that degeneracy the fourth-order term is used
    outside its derivation and a warning is issued.

    This is an independent route to the polynomial effective Hamiltonian
    and agrees with it to machine precision on the degeneracy shell.
    """
    p = params
    D, d, g1, g2 = p.delta_cap, p.delta_small, p.g1, p.g2
    if abs(D + d) > DEGENERACY_FRACTION * min(abs(D), abs(d)):
        warnings.warn(
            "initial and two-photon states are not quasi-degenerate "
            f"(|D + d| = {abs(D + d):.3g}); the fourth-order resolvent term "
            "is used outside its derivation domain", UserWarning, stacklevel=2)

    from .operators import build_hamiltonian   # local import avoids a cycle
    h = build_hamiltonian(SystemKind.BIMODAL, p, damped=False)
    energies = np.array([0.0, -D, -d, -(D + d), -2 * D, -2 * d])
    v = h - np.diag(energies)

    pair = (0, 3)
    rest = [i for i in range(6) if i not in pair]
    projectors = [np.diag((np.arange(6) == i).astype(float)) for i in range(6)]

    def q_at(energy: float) -> np.ndarray:
        q = np.zeros((6, 6))
        for i in rest:
            gap = energy - energies[i]
            _guard(gap, f"resolvent energy gap to intermediate state {i}",
                   max(abs(energy), abs(energies[i])))
            q += projectors[i] / gap
        return q

    p1, p4 = projectors[pair[0]], projectors[pair[1]]
    q1, q4 = q_at(energies[pair[0]]), q_at(energies[pair[1]])

    a2_full = (p1 @ v @ q1 @ v @ p1 + p4 @ v @ q4 @ v @ p4
               + p1 @ v @ q4 @ v @ p4 + p4 @ v @ q4 @ v @ p1)
    pr = p1 + p4
    a4_full = pr @ v @ q1 @ v @ q1 @ v @ q1 @ v @ pr

    idx = np.ix_(pair, pair)
    a2 = a2_full[idx]
    a4 = a4_full[idx] if include_fourth_order else np.zeros((2, 2))

    labels = ("ee,00", "gg,11")
    matrix = np.diag(energies[list(pair)]) + a2 + a4
    terms = ResolventTerms(second_order=a2, fourth_order=a4,
                           projector_labels=labels)
    effective = EffectiveTwoLevel(
        matrix=matrix, big_g=abs(matrix[0, 1]),
        big_omega=float(matrix[0, 0] - matrix[1, 1]),
        kind=SystemKind.BIMODAL, form="resolvent")
    return terms, effective
