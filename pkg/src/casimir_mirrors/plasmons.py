"""Coupled surface plasmons of a plasma-model cavity and their vacuum energy.

A mode of polarization TM (TE) with transverse wavevector k and real
frequency w below the light line solves

    prod_i (kappa_i + a_i q) / (kappa_i - a_i q) = exp(-2 q L),
    q^2 = k^2 - w^2/c^2,  kappa_i^2 = k^2 - eps_i mu_i w^2/c^2,

with a_i = eps_i (mu_i) and the plasma responses eps = 1 - w_e^2/w^2,
mu = 1 - w_m^2/w^2 on the real axis.  Internally everything is scaled by
L and c: W = w L / c, K = k L, Q = q L.  Multiplying through by
W^4 (kappa_A - a_A q)(kappa_B - a_B q) / q removes every pole and leaves
the residual

    D = F_A F_B (1 - e^{-2Q}) / Q + 2 e^{-2Q} W^2 (kappa_A p_B + kappa_B p_A),
    F_i = W^2 kappa_i + p_i Q,   p_i = W^2 a_i,

which stays finite on the light line Q = 0.

Branch labels: "+" is the branch that reaches the light line at
k_(+) and tends to the higher single-surface frequency at large L; "-"
lies entirely in the evanescent sector and tends to the lower one.  The
"+" branch is integrated only from k_(+) on, the part above the light
line being attributed to the photon sector.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR

from .dispersion import Cavity, Mirror
from .errors import NoModeError, PreconditionError
from .fresnel import Polarization
from .lifshitz import QuadratureSpec, casimir_energy, ideal_casimir_energy
from .numerics import bisect_array, integrate_adaptive

__all__ = [
    "Branch",
    "PlasmonBranch",
    "EnergyDecomposition",
    "single_surface_plasmon",
    "coupled_plasmons",
    "coupled_plasmons_nonretarded",
    "dispersion_residual",
    "dispersion_curve",
    "propagative_threshold",
    "light_line_threshold",
    "plasmon_energy",
    "plasmon_branch_energies",
    "energy_decomposition",
    "psi_long_distance",
    "chi_short_distance",
    "plasmon_energy_short",
]


class Branch(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PlasmonBranch:
    """Sampled dispersion curve of one coupled plasmon branch.

    ``samples`` holds (k [1/m], omega [rad/s]) pairs, all with k >= threshold_k.
    """

    polarization: Polarization
    branch: Branch
    threshold_k: float
    samples: Tuple[Tuple[float, float], ...] = ()


@dataclass(frozen=True)
class EnergyDecomposition:
    """Casimir energy split into surface-plasmon and photon parts (J/m^2).

    The reduction factors are ratios to the perfect-mirror energy E_C, so a
    positive value means an attractive contribution.
    """

    total: float
    plasmon: float
    photon: float
    eta_total: float
    eta_plasmon: float
    eta_photon: float
    per_branch: Dict[Tuple[Polarization, Branch], float] = field(default_factory=dict)


# ------------------------------------------------------------ single surface


def _supported(mirror: Mirror, pol: Polarization) -> Tuple[float, float]:
    """(own, other): plasma frequency that carries the mode and the dual one."""
    if pol is Polarization.TM:
        return mirror.omega_e, mirror.omega_m
    return mirror.omega_m, mirror.omega_e


def _sp_squared(K2, X, Y):
    """Single-surface W^2 for own strength X = W_x^2 and dual strength Y, vectorised."""
    K2 = np.asarray(K2, dtype=float)
    d = Y - X
    if d == 0.0:
        return np.full_like(K2, 0.5 * X)
    s = 2.0 * K2 / abs(d)
    # 1 + s - sqrt(1 + s^2) written without cancellation
    corr = 1.0 / (s + np.sqrt(1.0 + s * s))
    if d < 0.0:
        return 0.5 * X * (1.0 - corr)
    return 0.5 * X * (1.0 + corr)


def single_surface_plasmon(mirror: Mirror, pol: Polarization, k, c: float = SPEED_OF_LIGHT):
    """Surface plasmon frequency (rad/s) of a single plasma-model mirror.

    For the TM mode with d = w_m^2 - w_e^2 and s = 2 k^2 c^2 / |d|,

        w_sp^2 = (w_e^2 / 2) (1 - 1 / (s + sqrt(1 + s^2)))      (w_e > w_m)
        w_sp^2 = (w_e^2 / 2) (1 + 1 / (s + sqrt(1 + s^2)))      (w_m > w_e)

    and w_sp = w_e / sqrt 2 when w_m = w_e.  For w_m = 0 this is the usual
    dielectric plasmon, rising from 0 at k = 0 to w_e / sqrt 2.  TE is the
    same with w_e and w_m exchanged.

    Raises
    ------
    NoModeError
        If the mirror has no response carrying the requested polarization.
    """
    pol = Polarization(pol)
    own, other = _supported(mirror, pol)
    if own == 0.0:
        kind = "electric" if pol is Polarization.TM else "magnetic"
        raise NoModeError(f"no {pol} surface plasmon: the mirror has no {kind} response")
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("k must be non-negative")
    w2 = _sp_squared((k * c) ** 2, own * own, other * other)
    out = np.sqrt(w2)
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------------- coupled modes


@dataclass(frozen=True)
class _PolParams:
    """Dimensionless data of one polarization: own (X) and dual (Y) strengths."""

    XA: float
    YA: float
    XB: float
    YB: float

    @property
    def n_supporting(self) -> int:
        return int(self.XA > 0.0) + int(self.XB > 0.0)


def _check_plasma(cavity: Cavity):
    for m in (cavity.mirror_a, cavity.mirror_b):
        for model in (m.electric, m.magnetic):
            if model.strength_freq > 0.0 and not model.is_plasma:
                raise PreconditionError("surface plasmon spectra need plasma-model mirrors (no resonance, no damping)")


def _pol_params(cavity: Cavity, pol: Polarization) -> _PolParams:
    _check_plasma(cavity)
    for m in (cavity.mirror_a, cavity.mirror_b):
        if m.omega_e > 0.0 and m.omega_m > 0.0:
            raise PreconditionError(
                "the exact coupled-plasmon solver handles purely dielectric, purely magnetic "
                "or vacuum mirrors; use plasmon_energy_short for magneto-dielectric pairs"
            )
    f = cavity.separation / SPEED_OF_LIGHT
    (oa, da), (ob, db) = (_supported(m, pol) for m in (cavity.mirror_a, cavity.mirror_b))
    return _PolParams((oa * f) ** 2, (da * f) ** 2, (ob * f) ** 2, (db * f) ** 2)


def _residual_terms(W, K, P: _PolParams, magnitudes: bool = False):
    """The three terms of D (see module docstring), broadcast over W and K.

    With ``magnitudes=True`` every monomial enters with its absolute value,
    which is the natural scale for a relative residual.
    """
    W = np.asarray(W, dtype=float)
    K = np.asarray(K, dtype=float)
    Q = np.sqrt(np.maximum((K - W) * (K + W), 0.0))
    return _terms_wq(W * W, Q, P, magnitudes)


def _terms_wq(W2, Q, P: _PolParams, magnitudes: bool = False):
    kA = np.sqrt(Q * Q + P.XA + P.YA)
    kB = np.sqrt(Q * Q + P.XB + P.YB)
    pA = W2 - P.XA
    pB = W2 - P.XB
    if magnitudes:
        pA, pB = np.abs(pA), np.abs(pB)
    FA = W2 * kA + pA * Q
    FB = W2 * kB + pB * Q
    e = np.exp(-2.0 * Q)
    with np.errstate(invalid="ignore", divide="ignore"):
        g = np.where(Q > 0.0, -np.expm1(-2.0 * Q) / np.where(Q > 0.0, Q, 1.0), 2.0)
    return FA * FB * g, 2.0 * e * W2 * kA * pB, 2.0 * e * W2 * kB * pA


def _sp_q_squared(K2, X, Y):
    """K^2 - W_sp^2 of the single-surface plasmon, free of cancellation when Y = 0."""
    K2 = np.asarray(K2, dtype=float)
    if Y != 0.0:
        return K2 - _sp_squared(K2, X, Y)
    s = 2.0 * K2 / X
    return 2.0 * K2 * K2 / (X * (1.0 + np.sqrt(1.0 + s * s)))


def _newton_shift(K, P: _PolParams, carrier_is_a: bool):
    """W_branch - W_sp of the carrier from one Newton step at W_sp.

    At W_sp the carrier factor F_c vanishes exactly, so
    D(W_sp) = 2 e^{-2Q} W^2 (kappa_c p_o + kappa_o p_c).  With the carrier's
    own dual strength zero, p_o - p_c = X_c - X_o and p_o + p_c =
    -X_c corr - X_o hold exactly, which removes the cancellation of the
    bracket (complete in the Boyer pair, where kappa_c = kappa_o).  D' is a
    central difference of the full residual.  The relative error is O(shift / W).
    """
    if carrier_is_a:
        Xc, Xo, Yo = P.XA, P.XB, P.YB
    else:
        Xc, Xo, Yo = P.XB, P.XA, P.YA
    K2 = K * K
    W2 = _sp_squared(K2, Xc, 0.0)
    W = np.sqrt(W2)
    Q2 = _sp_q_squared(K2, Xc, 0.0)
    kc = np.sqrt(Q2 + Xc)
    ko = np.sqrt(Q2 + Xo + Yo)
    sv = 2.0 * K2 / Xc
    corr = 1.0 / (sv + np.sqrt(1.0 + sv * sv))
    pc = -0.5 * Xc * (1.0 + corr)
    po = W2 - Xo
    num = (Q2 + Xc) * (Xc - Xo) * (-Xc * corr - Xo) + (Xc - Xo - Yo) * pc * pc
    with np.errstate(invalid="ignore", divide="ignore"):
        bracket = np.where(po > 0.0, num / (kc * po - ko * pc), kc * po + ko * pc)
    D = 2.0 * np.exp(-2.0 * np.sqrt(Q2)) * W2 * bracket
    h = 1e-5 * W
    slope = (_residual(W + h, K, P) - _residual(W - h, K, P)) / (2.0 * h)
    return -D / slope


def _plus_shift(K, P: _PolParams, X: float, Y: float, rel_tol: float = 1e-15):
    """W_plus - W_sp(X, Y), NaN below the threshold.

    Near the light line (Q < W) the root is solved in Q = sqrt(K^2 - W^2):
    Q is small and resolved to a few ulp while W carries an absolute error
    of order eps * K, and (Q_sp^2 - Q^2) / (W + W_sp) keeps the shift at full
    relative precision.  Deeper in the evanescent sector W is the small
    variable and the plain root is used.
    """
    K = np.atleast_1d(np.asarray(K, dtype=float))
    K2 = K * K
    q_sp2 = _sp_q_squared(K2, X, Y)
    out = np.full_like(K, np.nan)
    ok = (K > _threshold_dimless(P)) & (K > 0.0)
    near = ok & (q_sp2 < 0.5 * K2)
    far = ok & ~near
    if np.any(near):
        k, q2 = K[near], q_sp2[near]
        q_sp = np.sqrt(q2)
        f = lambda Q: sum(_terms_wq((k - Q) * (k + Q), Q, P))
        Q = bisect_array(f, np.zeros_like(k), q_sp, rel_tol=rel_tol)
        W = np.sqrt((k - Q) * (k + Q))
        out[near] = (q_sp - Q) * (q_sp + Q) / (W + np.sqrt(k * k - q2))
    if np.any(far):
        k = K[far]
        w, _ = _roots_dimless(k, P, rel_tol)
        out[far] = _refine_shift(w - np.sqrt(_sp_squared(k * k, X, Y)), k, P, X == P.XA)
    return out


def _refine_shift(direct, K, P: _PolParams, carrier_is_a: bool):
    """Swap a root difference for the Newton form where the shift is below the root roundoff."""
    newton = _newton_shift(K, P, carrier_is_a)
    X, Y = (P.XA, P.YA) if carrier_is_a else (P.XB, P.YB)
    small = np.abs(newton) < 1e-8 * np.sqrt(_sp_squared(K * K, X, Y))
    return np.where(small, newton, direct)


def _residual(W, K, P):
    a, b, c = _residual_terms(W, K, P)
    return a + b + c


def _roots_dimless(K, P: _PolParams, rel_tol: float = 1e-15):
    """(W_plus, W_minus) for an array of K; NaN where a branch does not exist."""
    K = np.atleast_1d(np.asarray(K, dtype=float))
    nan = np.full_like(K, np.nan)
    f = lambda W: _residual(W, K, P)
    if P.n_supporting == 0:
        raise NoModeError("neither mirror supports a surface plasmon in this polarization")
    sps = [np.sqrt(_sp_squared(K * K, X, Y)) for X, Y in ((P.XA, P.YA), (P.XB, P.YB)) if X > 0.0]
    s_hi = np.maximum.reduce(sps)
    # beyond the light-line threshold the + root exists; where it merges with
    # the single-surface plasmon in floating point bisect_array keeps s_hi
    k_thr = _threshold_dimless(P)
    upper_ok = (K > k_thr) & (K > 0.0)
    plus = np.where(upper_ok, bisect_array(f, s_hi, K, rel_tol=rel_tol), nan)
    # at the threshold itself the root sits on the light line
    plus = np.where((K == k_thr) & (K > 0.0), K, plus)
    if P.n_supporting == 2:
        s_lo = np.minimum.reduce(sps)
        minus = bisect_array(f, np.zeros_like(K), s_lo, rel_tol=rel_tol)
        minus = np.where(K > 0.0, minus, 0.0)
    else:
        # one carrier: the single mode sits above its own plasmon (see light_line_threshold)
        minus = nan
        if (P.XA + P.YA) == 0.0 or (P.XB + P.YB) == 0.0:
            # a vacuum partner leaves the single-surface plasmon untouched
            plus = s_hi
    return plus, minus


def coupled_plasmons(cavity: Cavity, pol: Polarization, k):
    """Frequencies (omega_plus, omega_minus) in rad/s of the coupled plasmons at wavevector ``k``.

    ``k`` may be a scalar or an array (1/m).  A branch that does not exist
    at a given k is returned as NaN: the "+" branch below its light-line
    threshold, and the "-" branch when only one mirror supports the
    polarization.

    Raises
    ------
    NoModeError
        If neither mirror supports the polarization.
    PreconditionError
        For non-plasma mirrors or mirrors with both electric and magnetic response.
    """
    pol = Polarization(pol)
    P = _pol_params(cavity, pol)
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0):
        raise ValueError("k must be non-negative")
    L = cavity.separation
    plus, minus = _roots_dimless(k_arr.ravel() * L, P)
    scale = SPEED_OF_LIGHT / L
    plus = plus.reshape(k_arr.shape) * scale
    minus = minus.reshape(k_arr.shape) * scale
    if k_arr.ndim == 0:
        return float(plus), float(minus)
    return plus, minus


def dispersion_residual(cavity: Cavity, pol: Polarization, k, omega):
    """Relative residual of the dispersion equation at (k, omega).

    |D| divided by the sum of the absolute values of all its monomials, so a
    correctly rounded root gives a few ulp.
    """
    P = _pol_params(cavity, Polarization(pol))
    L = cavity.separation
    W = np.asarray(omega, dtype=float) * L / SPEED_OF_LIGHT
    K = np.asarray(k, dtype=float) * L
    a, b, c = _residual_terms(W, K, P)
    scale = sum(np.abs(t) for t in _residual_terms(W, K, P, magnitudes=True))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(scale > 0.0, np.abs(a + b + c) / scale, 0.0)
    return float(out) if out.ndim == 0 else out


def coupled_plasmons_nonretarded(cavity: Cavity, pol: Polarization, k):
    """Closed-form large-kL frequencies (omega_plus, omega_minus), rad/s.

    w^2 = (w_A^2 + w_B^2)/4 +- sqrt((w_A^2 - w_B^2)^2/16 + w_A^2 w_B^2 e^{-2kL}/4)
    with w = w_e (TM) or w_m (TE); "+" takes the upper sign.
    """
    pol = Polarization(pol)
    a = _supported(cavity.mirror_a, pol)[0]
    b = _supported(cavity.mirror_b, pol)[0]
    if a == 0.0 and b == 0.0:
        raise NoModeError(f"no {pol} plasmons on either mirror")
    k = np.asarray(k, dtype=float)
    a2, b2 = a * a, b * b
    root = np.sqrt((a2 - b2) ** 2 / 16.0 + a2 * b2 * np.exp(-2.0 * k * cavity.separation) / 4.0)
    mid = (a2 + b2) / 4.0
    plus = np.sqrt(mid + root)
    minus = np.sqrt(np.maximum(mid - root, 0.0))
    if k.ndim == 0:
        return float(plus), float(minus)
    return plus, minus


def _threshold_dimless(P: _PolParams) -> float:
    """K at which the "+" branch meets the light line; 0 if it never does.

    On the light line kappa_i = sqrt(X_i + Y_i) and D = 0 reduces to
    W^2 (1 + sum_i 1/kappa_i) = sum_i X_i / kappa_i.
    """
    ka = math.sqrt(P.XA + P.YA)
    kb = math.sqrt(P.XB + P.YB)
    if ka == 0.0 or kb == 0.0:
        return 0.0
    return math.sqrt((P.XA / ka + P.XB / kb) / (1.0 + 1.0 / ka + 1.0 / kb))


def light_line_threshold(cavity: Cavity, pol: Polarization) -> float:
    """k_(+) in 1/m for any supported mirror pair (0 if the + branch never reaches the light line)."""
    P = _pol_params(cavity, Polarization(pol))
    if P.n_supporting == 0:
        raise NoModeError("neither mirror supports a surface plasmon in this polarization")
    return _threshold_dimless(P) / cavity.separation


def propagative_threshold(cavity: Cavity) -> float:
    """k_(+) = (w_eA/c) sqrt(beta (beta + 1) / (1 + beta (Lambda + 1))) for two dielectric plasma mirrors.

    Requires beta = w_eB / w_eA <= 1.
    """
    a, b = cavity.mirror_a, cavity.mirror_b
    _check_plasma(cavity)
    if not (a.is_dielectric and (b.is_dielectric or b.is_vacuum)):
        raise PreconditionError("propagative_threshold needs purely dielectric plasma mirrors")
    beta = b.omega_e / a.omega_e
    if beta > 1.0:
        raise PreconditionError(f"label the mirrors so that w_eB <= w_eA (beta = {beta:.6g})")
    lam = cavity.Lambda
    return a.omega_e / SPEED_OF_LIGHT * math.sqrt(beta * (beta + 1.0) / (1.0 + beta * (lam + 1.0)))


def dispersion_curve(cavity: Cavity, pol: Polarization, branch: Branch, k) -> PlasmonBranch:
    """Sample one branch on the wavevectors ``k`` (1/m), all of which must lie on the branch.

    Raises
    ------
    NoModeError
        If a requested k lies below the light-line threshold of the "+" branch,
        or the branch does not exist for this cavity.
    """
    pol = Polarization(pol)
    branch = Branch(branch)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    plus, minus = coupled_plasmons(cavity, pol, k)
    w = plus if branch is Branch.PLUS else minus
    if np.any(np.isnan(w)):
        bad = k[np.isnan(w)]
        raise NoModeError(f"branch {branch} of {pol} has no root at k = {bad[0]:.6g} 1/m")
    thr = light_line_threshold(cavity, pol) if branch is Branch.PLUS else 0.0
    return PlasmonBranch(pol, branch, thr, tuple(zip(k.tolist(), w.tolist())))


# ------------------------------------------------------------------- energy


def _k_cutoff(X: float, Y: float, q_cut: float) -> float:
    """Smallest K (doubling search) at which the single-surface Q reaches ``q_cut``."""
    K = max(1.0, q_cut)
    while True:
        w2 = _sp_squared(np.array([K * K]), X, Y)[0]
        if K * K - w2 >= q_cut * q_cut:
            return K
        K *= 1.5


def _log_integral(f, k0: float, k1: float, scale: float, rel_tol: float, abs_tol: float) -> float:
    """int_{k0}^{k1} f(K) dK in t = log(K - k0 + s), s = 1e-4 * scale.

    Branch integrands fall off like 1/K over the decades between the plasma
    scale and K ~ 1, which a linear K axis resolves poorly at small L.
    The absolute floor is capped by a sampled magnitude of the integrand,
    since the E_C based floor can exceed the plasmon energy itself.
    """
    s = 1e-4 * scale
    t0, t1 = math.log(s), math.log(k1 - k0 + s)
    g = lambda t: f(k0 + np.exp(t) - s) * np.exp(t)
    probe = np.abs(g(np.linspace(t0, t1, 66)[1:-1]))
    floor = 1e-12 * float(np.max(probe)) * (t1 - t0)
    if floor > 0.0:
        abs_tol = min(abs_tol, floor)
    return integrate_adaptive(
        g, t0, t1, rel_tol=rel_tol, abs_tol=abs_tol, max_subdivisions=4000, initial_panels=8,
    ).value


def _branch_integrals(P: _PolParams, rel_tol: float, abs_tol: float) -> Dict[Branch, float]:
    """Dimensionless integrals int dK K (W_branch - W_sp) for the branches present."""
    out: Dict[Branch, float] = {}
    if P.n_supporting == 0:
        return out
    carriers = [(X, Y) for X, Y in ((P.XA, P.YA), (P.XB, P.YB)) if X > 0.0]
    # W - W_sp decays as e^{-2Q}; beyond q_cut the integrand is below rel_tol
    q_cut = 0.5 * math.log(1.0 / rel_tol) + 12.0
    sp_of = lambda K, XY: np.sqrt(_sp_squared(K * K, *XY))

    hi = max(carriers, key=lambda c: c[0])
    lo = min(carriers, key=lambda c: c[0])
    k_plus = _threshold_dimless(P)

    def plus_integrand(K):
        d = _plus_shift(K, P, *hi)
        return K * np.where(np.isnan(d), 0.0, d)

    k_max = _k_cutoff(*hi, q_cut)
    if k_max > k_plus:
        scale = min(k_plus, math.sqrt(hi[0])) if k_plus > 0.0 else math.sqrt(hi[0])
        out[Branch.PLUS] = _log_integral(plus_integrand, k_plus, k_max, scale, rel_tol, abs_tol)
    else:
        out[Branch.PLUS] = 0.0

    if P.n_supporting == 2:
        def minus_integrand(K):
            _, w = _roots_dimless(K, P)
            return K * _refine_shift(w - sp_of(K, lo), K, P, lo[0] == P.XA and lo[1] == P.YA)

        out[Branch.MINUS] = _log_integral(
            minus_integrand, 0.0, _k_cutoff(*lo, q_cut), math.sqrt(lo[0]), rel_tol, abs_tol
        )
    return out


def plasmon_branch_energies(
    cavity: Cavity, spec: Optional[QuadratureSpec] = None
) -> Dict[Tuple[Polarization, Branch], float]:
    """Renormalized vacuum energy (J/m^2) of each coupled plasmon branch.

    E = (hbar c / 4 pi L^3) int dK K (W_branch(K) - W_sp(K)), the "+" branch
    integrated from its light-line threshold and the "-" branch from 0,
    each compared with the single-surface plasmon it joins at L -> inf.
    """
    spec = spec or QuadratureSpec(rel_tol=1e-8)
    L = cavity.separation
    pre = HBAR * SPEED_OF_LIGHT / (4.0 * math.pi * L ** 3)
    # |E_C| in the same dimensionless units sets the absolute floor
    ref = abs(ideal_casimir_energy(L)) / pre
    abs_tol = spec.abs_tol_relative(L) * ref
    out = {}
    for pol in (Polarization.TM, Polarization.TE):
        P = _pol_params(cavity, pol)
        for br, val in _branch_integrals(P, spec.rel_tol, abs_tol).items():
            out[(pol, br)] = pre * val
    return out


def plasmon_energy(cavity: Cavity, spec: Optional[QuadratureSpec] = None) -> float:
    """Total surface-plasmon vacuum energy per area (J/m^2).

    Raises
    ------
    PreconditionError
        For non-plasma mirrors or magneto-dielectric mirrors.
    ConvergenceError
        If a branch integral does not converge.
    """
    return math.fsum(plasmon_branch_energies(cavity, spec).values())


def energy_decomposition(cavity: Cavity, spec: Optional[QuadratureSpec] = None) -> EnergyDecomposition:
    """Split the exact Casimir energy into plasmon and photon parts."""
    spec = spec or QuadratureSpec(rel_tol=1e-8)
    per = plasmon_branch_energies(cavity, spec)
    plasmon = math.fsum(per.values())
    total = casimir_energy(cavity, spec)
    photon = total - plasmon
    ec = ideal_casimir_energy(cavity.separation)
    return EnergyDecomposition(
        total=total,
        plasmon=plasmon,
        photon=photon,
        eta_total=total / ec,
        eta_plasmon=plasmon / ec,
        eta_photon=photon / ec,
        per_branch=per,
    )


# ------------------------------------------------------- asymptotic forms


def psi_long_distance(beta: float, tol: float = 1e-12) -> float:
    """Long-distance plasmon energy coefficient for two dielectric plasma mirrors.

    E_sp = hbar sqrt(c w_eA) psi(beta) / (4 pi L^{5/2}), beta = w_eB / w_eA.
    Built from the large-Lambda forms (units of Omega_eB = 1)

        Omega_+-^2 = (Q / 2 beta) coth(Q) f_+-,
        f_+- = (1 + beta) +- sqrt((1 - beta)^2 + 16 beta e^{-2Q} / (1 + e^{-2Q})^2),
        Omega_A^2 = Q / beta,  Omega_B^2 = Q,

    plus the strip 0 < Q < Q_A = 1 + beta that Omega_A covers below the
    threshold and the boundary term -(1/3)(Omega_+^3 - Omega_A^3) at K_(+),
    which evaluates to -(1/2) K_(+) Q_A^2.  The two pieces combine to
    -(1/10)(1 + beta)^{5/2} in units of sqrt(Omega_eA).
    """
    if not (0.0 < beta <= 1.0):
        raise ValueError("beta must lie in (0, 1]")
    b = beta

    def f(Q):
        e = np.exp(-2.0 * Q)
        one_m = -np.expm1(-2.0 * Q)
        s = np.sqrt((1.0 - b) ** 2 * (1.0 + e) ** 2 + 16.0 * b * e)
        wa = np.sqrt(Q / b)
        wb = np.sqrt(Q)
        # Omega_+^2 - Omega_A^2 and Omega_-^2 - Omega_B^2 in closed form, so that
        # the e^{-2Q} differences never suffer cancellation
        dp = 2.0 * Q * e / (b * one_m) * (1.0 + 4.0 * b / (s + (1.0 - b) * (1.0 + e)))
        dm = -4.0 * Q * e * (1.0 + b) / ((1.0 - b) + e * (1.0 + 3.0 * b) + s)
        wp = np.sqrt(wa * wa + dp)
        wm = np.sqrt(wb * wb + dm)
        return Q * (dp / (wp + wa) + dm / (wm + wb))

    # the integrand falls off as Q^{3/2} e^{-2Q}; nothing is left beyond Q = 40
    i1 = integrate_adaptive(f, 0.0, 40.0, rel_tol=tol, abs_tol=1e-15, initial_panels=8).value
    return math.sqrt(b) * i1 - 0.1 * (1.0 + b) ** 2.5


def chi_short_distance(z: float, tol: float = 1e-12) -> float:
    """Short-distance plasmon function chi(z) <= 0.

    chi(z) = int_0^inf dk k {[(z_+^2 + s)^{1/2} - 1] + [(z_+^2 - s)^{1/2} - z]},
    s = sqrt(z_-^4 + z^2 e^{-k}), z_+^2 = (1 + z^2)/2, z_-^2 = (1 - z^2)/2.
    chi(0) = 0 and chi(z) = z chi(1/z).
    """
    if not (math.isfinite(z) and z >= 0.0):
        raise ValueError("z must be finite and non-negative")
    if z == 0.0:
        return 0.0
    if z > 1.0:
        # exact symmetry; the form below is cancellation free only for z <= 1
        return z * chi_short_distance(1.0 / z, tol)
    zp2 = 0.5 * (1.0 + z * z)
    zm2 = 0.5 * (1.0 - z * z)

    def f(k):
        s = np.sqrt(zm2 * zm2 + z * z * np.exp(-k))
        # both brackets share u = z^2 e^{-k} / (s + z_-^2) = (z_+^2 + s) - 1,
        # here scaled by e^{k/2} so that nothing underflows at large k
        h = np.exp(0.5 * k)
        u = z * z / h / (np.sqrt((zm2 * h) ** 2 + z * z) + zm2 * h)
        upper = u / (np.sqrt(1.0 + u) + 1.0)
        low_root = np.sqrt(z * z * -np.expm1(-k) / (zp2 + s))
        lower = -u / (low_root + z)
        return k * (upper + lower)

    # |integrand| <= z k e^{-k/2}, so the tail beyond k = 90 is below 2e-16 z
    return integrate_adaptive(f, 0.0, 90.0, rel_tol=tol, abs_tol=1e-300, initial_panels=8).value


def plasmon_energy_short(cavity: Cavity) -> float:
    """Short-distance plasmon energy per area (J/m^2) for magneto-dielectric plasma mirrors.

    E = (hbar / 16 pi L^2) [(w_eA / sqrt 2) chi(beta_e) + (w_mA / sqrt 2) chi(beta_m)]
    with beta_e = w_eB / w_eA and beta_m = w_mB / w_mA.  A polarization
    whose mirror-A frequency vanishes contributes nothing.
    """
    _check_plasma(cavity)
    a, b = cavity.mirror_a, cavity.mirror_b
    total = 0.0
    for fa, fb in ((a.omega_e, b.omega_e), (a.omega_m, b.omega_m)):
        if fa > 0.0:
            total += fa / math.sqrt(2.0) * chi_short_distance(fb / fa)
    return HBAR / (16.0 * math.pi * cavity.separation ** 2) * total
