"""Exact zero-temperature Casimir force and energy between two plane mirrors.

Both quantities are evaluated in the dimensionless variables W = w L / c
and K = k L (k the transverse wavevector).  Trading the longitudinal
wavevector for k at fixed frequency (kappa dkappa = k dk) gives

    F = -(hbar c / 2 pi^2 L^4) sum_pol int dW int dK K kappa rr e^{-2 kappa} / (1 - rr e^{-2 kappa})
    E = +(hbar c / 4 pi^2 L^3) sum_pol int dW int dK K log(1 - rr e^{-2 kappa})

with kappa = sqrt(W^2 + K^2) and rr = r_A r_B.  Negative values mean
attraction.  Both half lines are mapped to (0, 1) and integrated with the
nested adaptive Gauss-Kronrod rule of :mod:`casimir_mirrors.numerics`; the
inner K-integral is done once per outer panel for all 15 outer nodes at
the same time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR

from .dispersion import Cavity
from .fresnel import Polarization, reflection_reduced
from .numerics import integrate_adaptive

__all__ = [
    "QuadratureSpec",
    "ForceReport",
    "ideal_casimir_force",
    "ideal_casimir_energy",
    "casimir_force",
    "casimir_energy",
    "force_prefactor",
    "energy_prefactor",
]

# sum over polarizations of the dimensionless integrals for perfect mirrors
_IDEAL_FORCE_INTEGRAL = math.pi ** 4 / 120.0
_IDEAL_ENERGY_INTEGRAL = -math.pi ** 4 / 180.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the nested quadrature.

    ``abs_tol`` is in N/m^2; ``None`` means ``1e-12 * |F_C(L)|``.  The
    same relative level is applied to the energy.
    """

    rel_tol: float = 1e-6
    abs_tol: Optional[float] = None
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol is not None and not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")

    def abs_tol_relative(self, L: float) -> float:
        """abs_tol expressed as a fraction of |F_C(L)|."""
        if self.abs_tol is None:
            return 1e-12
        return self.abs_tol / abs(ideal_casimir_force(L))


@dataclass(frozen=True)
class ForceReport:
    separation: float
    force_per_area: float
    energy_per_area: float
    eta_force: float
    eta_energy: float
    abs_error_estimate: float
    polarization_breakdown: Dict[Polarization, float] = field(default_factory=dict)
    energy_breakdown: Dict[Polarization, float] = field(default_factory=dict)
    energy_abs_error: float = 0.0

    @property
    def is_repulsive(self) -> bool:
        return self.force_per_area > 0.0


def ideal_casimir_force(L: float) -> float:
    """Force per area between perfect mirrors, -hbar c pi^2 / (240 L^4)."""
    if not L > 0:
        raise ValueError("separation must be positive")
    return -HBAR * SPEED_OF_LIGHT * math.pi ** 2 / (240.0 * L ** 4)


def ideal_casimir_energy(L: float) -> float:
    """Energy per area between perfect mirrors, -hbar c pi^2 / (720 L^3)."""
    if not L > 0:
        raise ValueError("separation must be positive")
    return -HBAR * SPEED_OF_LIGHT * math.pi ** 2 / (720.0 * L ** 3)


def force_prefactor(L: float) -> float:
    return -HBAR * SPEED_OF_LIGHT / (2.0 * math.pi ** 2 * L ** 4)


def energy_prefactor(L: float) -> float:
    return HBAR * SPEED_OF_LIGHT / (4.0 * math.pi ** 2 * L ** 3)


def _integrand(cavity: Cavity, want_force: bool, want_energy: bool):
    (ea, ma), (eb, mb) = cavity.reduced

    def inner(W: np.ndarray, K: np.ndarray) -> np.ndarray:
        # W: (n,), K: (p,) -> (p, n, ncomp)
        Wg = W[None, :]
        Kg = K[:, None]
        kap = np.sqrt(Wg * Wg + Kg * Kg)
        ra_te, ra_tm = reflection_reduced(ea, ma, Wg, kap)
        rb_te, rb_tm = reflection_reduced(eb, mb, Wg, kap)
        damp = np.exp(-2.0 * kap)
        out = []
        for rr in (ra_te * rb_te, ra_tm * rb_tm):
            x = rr * damp
            if want_force:
                out.append(Kg * kap * x / (1.0 - x))
            if want_energy:
                out.append(Kg * np.log1p(-x))
        return np.stack(out, axis=-1)

    return inner


def _material_scale(cavity: Cavity) -> float:
    """Smallest nonzero reduced material frequency, capped at 1."""
    freqs = [
        v for pair in cavity.reduced for m in pair
        for v in (m.strength, m.resonance, m.damping) if v > 0.0
    ]
    return min([1.0] + freqs)


def _half_line(f, s: float, rel: float, abs_tol: float, max_sub: int):
    """Integrate over (0, inf), splitting at ``s`` when it is below 1.

    At short separations the reflection coefficients vary on the scale s,
    far below the e^{-2 kappa} decay length that sets the default mapping.
    """
    if s >= 1.0:
        res = integrate_adaptive(f, 0.0, math.inf, rel_tol=rel, abs_tol=abs_tol, max_subdivisions=max_sub)
        return np.asarray(res.value), np.asarray(res.abs_error)
    lo = integrate_adaptive(f, 0.0, s, rel_tol=rel, abs_tol=abs_tol / 2, max_subdivisions=max_sub)
    hi = integrate_adaptive(
        f, s, math.inf, rel_tol=rel, abs_tol=abs_tol / 2, max_subdivisions=max_sub
    )
    return np.asarray(lo.value) + hi.value, np.asarray(lo.abs_error) + hi.abs_error


def _nested(cavity: Cavity, spec: QuadratureSpec, want_force=True, want_energy=True):
    """Dimensionless integrals (per polarization) and their error estimates."""
    inner = _integrand(cavity, want_force, want_energy)
    s = _material_scale(cavity)
    rel = spec.rel_tol
    abs_dimless = spec.abs_tol_relative(cavity.separation) * _IDEAL_FORCE_INTEGRAL
    inner_rel = rel / 10.0
    inner_abs = abs_dimless / 10.0

    def outer(W: np.ndarray) -> np.ndarray:
        n = W.size

        def f(K):
            vals = inner(W, K)
            return vals.reshape(K.size, -1)

        value, _ = _half_line(f, s, inner_rel, inner_abs, spec.max_subdivisions)
        return value.reshape(n, -1)

    value, outer_err = _half_line(outer, s, rel, abs_dimless, spec.max_subdivisions)
    # every inner integral met inner_rel, which propagates linearly
    err = outer_err + inner_rel * np.abs(value) + inner_abs
    return value, err


def casimir_force(cavity: Cavity, spec: QuadratureSpec = QuadratureSpec()) -> ForceReport:
    """Exact Casimir force and energy per unit area for ``cavity``.

    Raises
    ------
    ConvergenceError
        When ``spec.max_subdivisions`` is exhausted in any of the nested integrals.
    """
    L = cavity.separation
    value, err = _nested(cavity, spec)
    f_te, e_te, f_tm, e_tm = value
    fpre = force_prefactor(L)
    epre = energy_prefactor(L)
    force = fpre * (f_te + f_tm)
    energy = epre * (e_te + e_tm)
    return ForceReport(
        separation=L,
        force_per_area=force,
        energy_per_area=energy,
        eta_force=force / ideal_casimir_force(L),
        eta_energy=energy / ideal_casimir_energy(L),
        abs_error_estimate=abs(fpre) * (err[0] + err[2]),
        polarization_breakdown={Polarization.TE: fpre * f_te, Polarization.TM: fpre * f_tm},
        energy_breakdown={Polarization.TE: epre * e_te, Polarization.TM: epre * e_tm},
        energy_abs_error=abs(epre) * (err[1] + err[3]),
    )


def casimir_energy(cavity: Cavity, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Exact Casimir energy per unit area (J/m^2); negative for attraction."""
    value, _ = _nested(cavity, spec, want_force=False, want_energy=True)
    return energy_prefactor(cavity.separation) * float(np.sum(value))
