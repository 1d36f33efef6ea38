"""Imaginary-frequency reflection coefficients of a half-space mirror.

For a mirror with eps = eps(i w), mu = mu(i w) and vacuum longitudinal
wavevector kappa = sqrt(w**2/c**2 + k**2):

    kappa_i = sqrt(w**2/c**2 (eps mu - 1) + kappa**2)
    r_TM = (kappa_i - eps kappa) / (kappa_i + eps kappa)
    r_TE = -(kappa_i - mu kappa) / (kappa_i + mu kappa)

The positive root is always taken for kappa_i; the radicand cannot be
negative on the imaginary axis because eps, mu >= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .dispersion import Mirror, OscillatorModel, ReducedModel
from .errors import InvalidKinematicsError, PreconditionError

__all__ = [
    "Polarization",
    "WaveKinematics",
    "reflection",
    "reflection_short_distance",
    "reflection_subleading",
    "reflection_reduced",
]


class Polarization(enum.Enum):
    TE = "TE"
    TM = "TM"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class WaveKinematics:
    """Imaginary frequency ``omega`` (rad/s) and vacuum wavevector ``kappa`` (1/m)."""

    omega: float
    kappa: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.omega < 0 or self.kappa < 0:
            raise InvalidKinematicsError("omega and kappa must be non-negative")
        light = self.omega / self.c
        if self.kappa < light * (1.0 - 1e-12):
            raise InvalidKinematicsError(
                f"kappa={self.kappa!r} below omega/c={light!r}: transverse k^2 would be negative"
            )

    @property
    def k(self) -> float:
        """Transverse wavevector sqrt(kappa^2 - omega^2/c^2)."""
        light = self.omega / self.c
        return math.sqrt(max(self.kappa - light, 0.0) * (self.kappa + light))

    @classmethod
    def from_transverse(cls, omega: float, k: float, c: float = SPEED_OF_LIGHT) -> "WaveKinematics":
        return cls(omega, math.hypot(omega / c, k), c)


def reflection_reduced(eps: ReducedModel, mu: ReducedModel, w, kappa):
    """Vectorised (r_TE, r_TM) for frequencies and wavevectors in one unit system.

    ``w`` must be strictly positive; ``kappa`` is the vacuum longitudinal
    wavevector in the same units (i.e. already multiplied by c).
    """
    w = np.asarray(w, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    xe = eps.chi_w2(w)  # w^2 (eps - 1)
    xm = mu.chi_w2(w)
    w2 = w * w
    kappa_i = np.sqrt(kappa * kappa + xe + xm + xe * xm / w2)
    # divide through by eps (mu) so the plasma pole at w -> 0 stays finite
    de = w2 + xe
    dm = w2 + xm
    t_e = kappa_i * w2 / de
    t_m = kappa_i * w2 / dm
    # r = (t^2 - kappa^2) / (t + kappa)^2 with the numerator expanded so
    # weak responses (r ~ 1e-10) keep full relative precision
    common = w2 * w2 * (xe + xm) + w2 * xe * xm
    k2 = kappa * kappa
    n_tm = (common - k2 * xe * (2.0 * w2 + xe)) / (de * de)
    n_te = (common - k2 * xm * (2.0 * w2 + xm)) / (dm * dm)
    r_tm = n_tm / (t_e + kappa) ** 2
    r_te = -n_te / (t_m + kappa) ** 2
    return r_te, r_tm


def _static_value(model: OscillatorModel) -> float:
    """Response at w = 0; ``inf`` for plasma and Drude models."""
    if model.strength_freq == 0.0:
        return 1.0
    if model.resonance_freq == 0.0:
        return math.inf
    return 1.0 + (model.strength_freq / model.resonance_freq) ** 2


def _static_chi_w2(model: OscillatorModel) -> float:
    """Limit of w^2 (eps - 1) as w -> 0 (nonzero only for the plasma model)."""
    if model.strength_freq > 0.0 and model.is_plasma:
        return model.strength_freq ** 2
    return 0.0


def _reflection_static(mirror: Mirror, pol: Polarization, kappa: float) -> float:
    e0 = _static_value(mirror.electric)
    m0 = _static_value(mirror.magnetic)
    if pol is Polarization.TM:
        if math.isinf(e0):
            return -1.0
        kappa_i = math.sqrt(kappa * kappa + e0 * _static_chi_w2(mirror.magnetic))
        return (kappa_i - e0 * kappa) / (kappa_i + e0 * kappa)
    if math.isinf(m0):
        return 1.0
    kappa_i = math.sqrt(kappa * kappa + m0 * _static_chi_w2(mirror.electric))
    return -(kappa_i - m0 * kappa) / (kappa_i + m0 * kappa)


def reflection(mirror: Mirror, pol: Polarization, kin: WaveKinematics) -> float:
    """Reflection coefficient of ``mirror`` at imaginary frequency, in [-1, 1].

    At ``omega = 0`` the analytic limit is returned, so plasma and Drude
    mirrors are well defined there (r_TM = -1).
    """
    pol = Polarization(pol)
    kap = kin.kappa * kin.c  # bring the wavevector to frequency units
    if kin.omega == 0.0:
        return _reflection_static(mirror, pol, kap)
    r_te, r_tm = reflection_reduced(
        mirror.electric.scaled(1.0), mirror.magnetic.scaled(1.0), kin.omega, kap
    )
    return float(r_tm if pol is Polarization.TM else r_te)


def reflection_short_distance(mirror: Mirror, pol: Polarization, omega: float) -> float:
    """Leading large-wavevector limit of the reflection coefficient.

    r_TM = -w_e^2 / (2 D_e + w_e^2), r_TE = +w_m^2 / (2 D_m + w_m^2)
    with D = w^2 + w_0^2 + G w.  Independent of the wavevector.
    """
    pol = Polarization(pol)
    model = mirror.electric if pol is Polarization.TM else mirror.magnetic
    wx = model.strength_freq
    if wx == 0.0:
        return 0.0
    d = omega * omega + model.resonance_freq ** 2 + model.damping * omega
    r = wx * wx / (2.0 * d + wx * wx)
    return -r if pol is Polarization.TM else r


def reflection_subleading(
    mirror: Mirror, pol: Polarization, omega: float, k: float, c: float = SPEED_OF_LIGHT
) -> float:
    """Next-order short-distance coefficient for a polarization whose leading term vanishes.

    TM on a purely magnetic mirror (eps = 1) and TE on a purely dielectric
    mirror (mu = 1).  These truncated expansions are integration kernels
    and may exceed unit magnitude at small ``k``.
    """
    pol = Polarization(pol)
    if pol is Polarization.TM:
        if not mirror.electric.is_trivial:
            raise PreconditionError("TM subleading term requires eps = 1 (purely magnetic mirror)")
        model, sign = mirror.magnetic, 1.0
    else:
        if not mirror.magnetic.is_trivial:
            raise PreconditionError("TE subleading term requires mu = 1 (purely dielectric mirror)")
        model, sign = mirror.electric, -1.0
    if k <= 0.0:
        raise InvalidKinematicsError("transverse wavevector must be positive")
    wx = model.strength_freq
    d = omega * omega + model.resonance_freq ** 2 + model.damping * omega
    # w^2 / D -> 1 for the plasma model at w = 0
    ratio = omega * omega / d if d > 0.0 else 1.0
    return sign * (wx * wx / (4.0 * c * c)) * ratio / (k * k)
