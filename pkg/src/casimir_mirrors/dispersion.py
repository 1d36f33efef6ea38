"""Causal oscillator models for the permittivity and permeability of a mirror.

On the imaginary frequency axis every model reduces to

    eps(i w) = 1 + w_x**2 / (w**2 + w_0**2 + G w)

with ``w_x`` the oscillator strength (plasma frequency), ``w_0`` the
resonance and ``G`` the damping.  ``w_0 = G = 0`` is the plasma model,
``w_0 = 0`` the Drude model.  Frequencies are angular (rad/s), lengths in
meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import PoleError

__all__ = [
    "OscillatorModel",
    "Mirror",
    "Cavity",
    "VACUUM",
    "permittivity_iw",
    "permeability_iw",
    "plasma_mirror",
    "ReducedModel",
]


@dataclass(frozen=True)
class OscillatorModel:
    """One Lorentz oscillator (strength, resonance, damping), all in rad/s."""

    strength_freq: float = 0.0
    resonance_freq: float = 0.0
    damping: float = 0.0

    def __post_init__(self):
        for name in ("strength_freq", "resonance_freq", "damping"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def is_plasma(self) -> bool:
        return self.resonance_freq == 0.0 and self.damping == 0.0

    @property
    def is_trivial(self) -> bool:
        return self.strength_freq == 0.0

    def response_iw(self, omega: float) -> float:
        """Evaluate the response on the imaginary axis at ``i*omega``."""
        return _response(self, omega)

    def scaled(self, factor: float) -> "ReducedModel":
        return ReducedModel(
            self.strength_freq * factor, self.resonance_freq * factor, self.damping * factor
        )


VACUUM = OscillatorModel()


def _response(model: OscillatorModel, omega) -> float:
    if np.any(np.asarray(omega) < 0):
        raise ValueError("omega must be >= 0")
    if model.strength_freq == 0.0:
        return 1.0 if np.ndim(omega) == 0 else np.ones_like(np.asarray(omega, float))
    denom = omega * omega + model.resonance_freq ** 2 + model.damping * omega
    if np.any(denom == 0.0):
        raise PoleError(
            "response has a pole at omega = 0 for plasma-type models; "
            "use the limiting integrand instead"
        )
    return 1.0 + model.strength_freq ** 2 / denom


def permittivity_iw(model: OscillatorModel, omega: float) -> float:
    """Dielectric permittivity eps(i*omega) of ``model``.

    >>> permittivity_iw(OscillatorModel(1.0), 1.0)
    2.0
    """
    return _response(model, omega)


def permeability_iw(model: OscillatorModel, omega: float) -> float:
    """Magnetic permeability mu(i*omega); same functional form as the permittivity."""
    return _response(model, omega)


@dataclass(frozen=True)
class ReducedModel:
    """An oscillator with its frequencies expressed in units of c/L."""

    strength: float
    resonance: float = 0.0
    damping: float = 0.0

    def chi_w2(self, w: np.ndarray) -> np.ndarray:
        """Return ``w**2 * (eps(i w) - 1)`` for positive ``w``; finite as w -> 0."""
        if self.strength == 0.0:
            return np.zeros_like(w)
        w2 = w * w
        return self.strength ** 2 * w2 / (w2 + self.resonance ** 2 + self.damping * w)

    def value(self, w: np.ndarray) -> np.ndarray:
        if self.strength == 0.0:
            return np.ones_like(w)
        return 1.0 + self.strength ** 2 / (w * w + self.resonance ** 2 + self.damping * w)


@dataclass(frozen=True)
class Mirror:
    """A half-space mirror with electric and magnetic oscillator responses."""

    electric: OscillatorModel = VACUUM
    magnetic: OscillatorModel = VACUUM
    label: str = ""

    @property
    def is_dielectric(self) -> bool:
        """Purely dielectric: no magnetic response."""
        return self.magnetic.is_trivial and not self.electric.is_trivial

    @property
    def is_magnetic(self) -> bool:
        """Purely magnetic: no electric response."""
        return self.electric.is_trivial and not self.magnetic.is_trivial

    @property
    def is_vacuum(self) -> bool:
        return self.electric.is_trivial and self.magnetic.is_trivial

    @property
    def is_plasma(self) -> bool:
        return self.electric.is_plasma and self.magnetic.is_plasma

    @property
    def omega_e(self) -> float:
        return self.electric.strength_freq

    @property
    def omega_m(self) -> float:
        return self.magnetic.strength_freq

    def swapped_em(self) -> "Mirror":
        """The dual mirror with eps and mu exchanged."""
        return Mirror(self.magnetic, self.electric, self.label)


def plasma_mirror(omega_e: float = 0.0, omega_m: float = 0.0, label: str = "") -> Mirror:
    """Mirror whose permittivity and permeability both follow the plasma model."""
    return Mirror(OscillatorModel(omega_e), OscillatorModel(omega_m), label)


@dataclass(frozen=True)
class Cavity:
    """Two mirrors facing each other across a vacuum gap of width ``separation``."""

    mirror_a: Mirror
    mirror_b: Mirror
    separation: float
    # dimensionless responses are cached per instance
    _reduced: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.separation) and self.separation > 0.0):
            raise ValueError(f"separation must be positive, got {self.separation!r}")
        f = self.separation / SPEED_OF_LIGHT
        red = tuple(
            (m.electric.scaled(f), m.magnetic.scaled(f)) for m in (self.mirror_a, self.mirror_b)
        )
        object.__setattr__(self, "_reduced", red)

    @property
    def reference_frequency(self) -> float:
        """omega_eA, or omega_mA when mirror A is purely magnetic."""
        return _reference(self.mirror_a)

    @property
    def Lambda(self) -> float:
        """Dimensionless separation omega_eA * L / c."""
        return self.reference_frequency * self.separation / SPEED_OF_LIGHT

    def reduced_frequency(self, omega: float) -> float:
        """omega * L / c."""
        return omega * self.separation / SPEED_OF_LIGHT

    @property
    def reduced(self):
        """((eps_A, mu_A), (eps_B, mu_B)) as :class:`ReducedModel` pairs."""
        return self._reduced

    def with_separation(self, separation: float) -> "Cavity":
        return Cavity(self.mirror_a, self.mirror_b, separation)

    def swapped(self) -> "Cavity":
        return Cavity(self.mirror_b, self.mirror_a, self.separation)

    @classmethod
    def from_Lambda(cls, mirror_a: Mirror, mirror_b: Mirror, Lambda: float) -> "Cavity":
        """Build the cavity whose separation gives ``omega_eA L / c = Lambda``."""
        ref = _reference(mirror_a)
        if ref <= 0.0:
            raise ValueError("Lambda needs a mirror A with a nonzero plasma frequency")
        return cls(mirror_a, mirror_b, Lambda * SPEED_OF_LIGHT / ref)


def _reference(mirror: Mirror) -> float:
    return mirror.omega_e if mirror.omega_e > 0.0 else mirror.omega_m
