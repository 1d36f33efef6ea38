"""Short- and long-distance limits of the Casimir force.

Short distances are dominated by the large-wavevector reflection
coefficients, for which only the frequency dependence survives:

    r_TM = -Omega_1^2 / (w^2 + Omega_2^2),   Omega_1^2 = w_e^2/2,
                                             Omega_2^2 = w_e^2/2 + w_0^2.

Damping is dropped in every short-distance formula here; the exact
integral in :mod:`casimir_mirrors.lifshitz` keeps it.  Two routes to the
non-retarded force are provided: the Hamaker integral over the trilog
Li_3(r_A r_B) and the Gamma-function double series.  They share no code
beyond the reflection coefficient and check each other.

At long distances the plasma wavelengths lambda = 2 pi c / w_p set the
size of the corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR
from scipy.special import gammaln, zeta

from .dispersion import Mirror
from .errors import OutOfRegimeError, PreconditionError, SeriesDivergenceError
from .numerics import find_root_bisect, integrate_adaptive, sum_tail_bounded

__all__ = [
    "ShortDistanceParams",
    "SeriesSpec",
    "polylog",
    "polylog4_series",
    "short_distance_params",
    "hamaker_constant",
    "gamma_coefficient",
    "short_distance_force_series",
    "boyer_short_distance_force",
    "boyer_tm_contribution",
    "long_distance_eta_magnetodielectric",
    "long_distance_force_ratio_magnetodielectric",
    "repulsion_threshold",
    "long_distance_eta_dielectric",
    "boyer_long_distance_eta",
    "plasma_wavelength",
]

# printed normalization of the long-distance reduction factor for magneto-dielectric mirrors
_ETA_MD_PREFACTOR = (180.0 / math.pi ** 4) * (3.0 / 8.0)
# the exact Lifshitz integral tends to 45/pi^4 times the same bracket
_ETA_MD_LIFSHITZ_RATIO = 2.0 / 3.0


@dataclass(frozen=True)
class ShortDistanceParams:
    """Omega_1 and Omega_2 (rad/s) of the short-distance TM coefficient."""

    omega1: float
    omega2: float

    def __post_init__(self):
        if not (self.omega1 > 0.0 and self.omega2 >= self.omega1 * (1.0 - 1e-15)):
            raise PreconditionError("need omega2 >= omega1 > 0")

    @property
    def amplitude(self) -> float:
        """|r_TM| at w = 0, i.e. (Omega_1/Omega_2)^2."""
        return (self.omega1 / self.omega2) ** 2


@dataclass(frozen=True)
class SeriesSpec:
    max_terms_k: int = 2000
    max_terms_n: int = 2_000_000
    tail_tol: float = 1e-12

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if self.max_terms_k < 1 or self.max_terms_n < 1:
            raise ValueError("term limits must be positive")


def plasma_wavelength(omega: float) -> float:
    """2 pi c / omega in meters (inf for omega = 0)."""
    return math.inf if omega == 0.0 else 2.0 * math.pi * SPEED_OF_LIGHT / omega


# ----------------------------------------------------------------- polylogs


def _terms_needed(absz: np.ndarray, s: int, tol: float, alternating: np.ndarray) -> int:
    """Largest truncation order over ``absz`` that certifies ``tol``."""
    p_series = math.ceil((1.0 / ((s - 1) * tol)) ** (1.0 / (s - 1)))
    with np.errstate(divide="ignore"):
        logz = np.log(absz)
        denom = np.where(alternating, 1.0, 1.0 - absz)
        geo = np.where(absz > 0.0, (math.log(tol) + np.log(denom)) / logz, 1.0)
    geo = np.where(absz < 1.0, np.ceil(geo), np.inf)
    need = np.minimum(geo, p_series)
    return max(int(np.max(need, initial=1.0)), 1)


def polylog4_series(z, tol: float = 1e-14) -> np.ndarray:
    """Li_4(z) for real ``-1 <= z <= 1`` by direct summation of z^n / n^4.

    The truncation order N is chosen so that the remainder is below
    ``tol``: ``|z|^(N+1) / (N+1)^4`` for negative z (alternating series),
    ``min(|z|^(N+1) / ((N+1)^4 (1 - |z|)), 1 / (3 N^3))`` otherwise.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0):
        raise ValueError("polylog4_series needs |z| <= 1")
    flat = z.ravel()
    n_max = _terms_needed(np.abs(flat), 4, tol, flat < 0.0)
    out = np.zeros_like(flat)
    chunk = 4096
    for n0 in range(1, n_max + 1, chunk):
        n = np.arange(n0, min(n0 + chunk, n_max + 1), dtype=float)
        out += np.sum(np.power(flat[:, None], n[None, :]) / n[None, :] ** 4, axis=1)
    return out.reshape(z.shape)


def _polylog_power(s: int, z: np.ndarray, nterms: int = 60) -> np.ndarray:
    n = np.arange(1, nterms + 1, dtype=float)
    return np.sum(np.power(z[:, None], n[None, :]) / n[None, :] ** s, axis=1)


def _polylog_log(s: int, z: np.ndarray, nterms: int = 40) -> np.ndarray:
    """Expansion in mu = ln z about z = 1, valid for |mu| < 2 pi."""
    mu = np.log(z)
    out = np.zeros_like(z)
    fact = 1.0
    harmonic = sum(1.0 / j for j in range(1, s))
    for k in range(nterms):
        if k > 0:
            fact *= k
        if k == s - 1:
            with np.errstate(divide="ignore", invalid="ignore"):
                sing = mu ** k / fact * (harmonic - np.log(-mu))
            out += np.where(mu < 0.0, sing, 0.0)
        else:
            out += zeta(s - k) * mu ** k / fact
    return out


def polylog(s: int, z) -> np.ndarray:
    """Polylogarithm Li_s(z) for integer ``s >= 2`` and real ``-1 <= z <= 1``.

    Power series for |z| <= 1/2, the logarithmic expansion about z = 1 for
    z > 1/2 and the duplication formula Li_s(z) + Li_s(-z) = 2^(1-s) Li_s(z^2)
    for z < -1/2.  Accurate to a few ulp over the whole range.
    """
    if int(s) != s or s < 2:
        raise ValueError("s must be an integer >= 2")
    s = int(s)
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0):
        raise ValueError("polylog needs |z| <= 1")
    flat = z.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= 0.5
    pos = flat > 0.5
    neg = flat < -0.5
    if small.any():
        out[small] = _polylog_power(s, flat[small])
    if pos.any():
        out[pos] = _polylog_log(s, flat[pos])
    if neg.any():
        zn = flat[neg]
        out[neg] = 2.0 ** (1 - s) * _polylog_log(s, zn * zn) - _polylog_log(s, -zn)
    return out.reshape(z.shape)


# ------------------------------------------------------- short distances


def short_distance_params(mirror: Mirror) -> ShortDistanceParams:
    """Omega_1, Omega_2 of the leading TM coefficient of ``mirror``."""
    e = mirror.electric
    if e.strength_freq == 0.0:
        name = f"mirror {mirror.label!r}" if mirror.label else "mirror"
        raise PreconditionError(f"{name} has no electric response; its leading TM term vanishes")
    o1sq = 0.5 * e.strength_freq ** 2
    return ShortDistanceParams(math.sqrt(o1sq), math.sqrt(o1sq + e.resonance_freq ** 2))


def hamaker_constant(mirror_a: Mirror, mirror_b: Mirror, spec: SeriesSpec = SeriesSpec()) -> float:
    """Non-retarded Hamaker constant (J) between two dielectric-dominated mirrors.

    H = (3 hbar / 8 pi^2) int_0^inf dw Li_3(r_A r_B), so that the short
    distance force per area is -H / (3 L^3).  Only the electric response
    enters; damping is ignored.

    Raises
    ------
    PreconditionError
        If either mirror has no electric response.
    """
    pa = short_distance_params(mirror_a)
    pb = short_distance_params(mirror_b)
    ref = max(pa.omega2, pb.omega2)
    a1, a2 = (pa.omega1 / ref) ** 2, (pa.omega2 / ref) ** 2
    b1, b2 = (pb.omega1 / ref) ** 2, (pb.omega2 / ref) ** 2

    def f(u):
        u2 = u * u
        rr = (a1 / (u2 + a2)) * (b1 / (u2 + b2))
        return polylog(3, rr)

    res = integrate_adaptive(
        f, 0.0, math.inf, rel_tol=max(spec.tail_tol, 1e-13), abs_tol=1e-300
    )
    return 3.0 * HBAR / (8.0 * math.pi ** 2) * ref * res.value


def gamma_coefficient(mirror_a: Mirror, mirror_b: Mirror, spec: SeriesSpec = SeriesSpec()) -> float:
    """Dimensionless gamma in F = -(hbar / 16 pi^2 L^3)(w_eB / sqrt 2) gamma.

    Normalized by the plasma frequency of mirror B.  Equal plasma mirrors
    give about 1.744.
    """
    h = hamaker_constant(mirror_a, mirror_b, spec)
    return 16.0 * math.pi ** 2 * h / (3.0 * HBAR) * math.sqrt(2.0) / mirror_b.omega_e


def _g_k(k: int, y2: float, spec: SeriesSpec) -> float:
    """G_k = sum_n Gamma(n+k) Gamma(2n-1/2) / (Gamma(n) Gamma(2n+k) n^3) y2^n."""
    if y2 == 0.0:
        return 0.0
    logy2 = math.log(y2)

    def log_c(n):
        return gammaln(n + k) + gammaln(2 * n - 0.5) - gammaln(n) - gammaln(2 * n + k)

    def term(n):
        n = np.asarray(n, dtype=float)
        return np.exp(log_c(n) + n * logy2) / n ** 3

    def tail(N):
        # the Gamma ratio decreases in n, so the remainder is bounded by
        # c_N times the tail of sum y2^n / n^3
        cn = math.exp(log_c(float(N)))
        geo = math.exp((N + 1) * logy2) / ((N + 1) ** 3 * (1.0 - y2)) if y2 < 1.0 else math.inf
        return cn * min(geo, 1.0 / (2.0 * N * N))

    return sum_tail_bounded(
        term, spec.tail_tol, tail_bound=tail, max_terms=spec.max_terms_n, vectorized=True
    )


def _series_sum(x: float, y2: float, spec: SeriesSpec) -> float:
    """sum_k Gamma(k+1/2)/k! G_k x^k with a certified geometric tail."""
    last = {}

    def term(k):
        a = math.exp(gammaln(k + 0.5) - gammaln(k + 1.0)) * _g_k(k, y2, spec)
        a *= x ** k if k else 1.0
        last["a"] = a
        return a

    def tail(k):
        # Gamma(k+1/2)/k! and G_k both decrease with k
        if x == 0.0:
            return 0.0
        return abs(last["a"]) * x / (1.0 - x)

    return sum_tail_bounded(term, spec.tail_tol, tail_bound=tail, start=0, max_terms=spec.max_terms_k)


def short_distance_force_series(
    mirror_a: Mirror, mirror_b: Mirror, L: float, spec: SeriesSpec = SeriesSpec()
) -> float:
    """Short-distance force per area (N/m^2) from the Gamma-function double series.

    Mirrors must be labelled so that Omega_2B <= Omega_2A.

    Raises
    ------
    SeriesDivergenceError
        If the expansion parameter 1 - Omega_2B^2 / Omega_2A^2 is outside [0, 1).
    PreconditionError
        If either mirror has no electric response.
    """
    if not L > 0:
        raise ValueError("separation must be positive")
    pa = short_distance_params(mirror_a)
    pb = short_distance_params(mirror_b)
    x = 1.0 - (pb.omega2 / pa.omega2) ** 2
    if not (0.0 <= x < 1.0):
        raise SeriesDivergenceError(
            f"expansion parameter {x:.6g} outside [0, 1); swap the mirrors so that Omega_2B <= Omega_2A"
        )
    y2 = pa.amplitude * pb.amplitude
    s = _series_sum(x, y2, spec)
    return -HBAR / L ** 3 * pb.omega2 / (16.0 * math.pi ** 2) * s


def _check_positive(**kw):
    for name, v in kw.items():
        if not (math.isfinite(v) and v > 0.0):
            raise PreconditionError(f"{name} must be positive and finite, got {v!r}")


def boyer_short_distance_force(omega_mA: float, omega_eB: float, L: float) -> float:
    """Repulsive 1/L force per area between a magnetic and a dielectric plasma mirror.

    F = (sqrt 2 / 64)(hbar / pi c^2)(w_eB^2 w_mA + w_mA^2 w_eB) / L, valid
    when w L / c << 1 for both frequencies.
    """
    _check_positive(omega_mA=omega_mA, omega_eB=omega_eB, L=L)
    return (
        math.sqrt(2.0) / 64.0 * HBAR / (math.pi * SPEED_OF_LIGHT ** 2)
        * (omega_eB ** 2 * omega_mA + omega_mA ** 2 * omega_eB) / L
    )


def boyer_tm_contribution(omega_mA: float, omega_eB: float, L: float, screened: bool = True) -> float:
    """TM part of the short-distance force in the magnetic/dielectric configuration.

    With ``screened=True`` the k-integral keeps the (w_mA L)^2 / 8c^2
    term under the root; otherwise it reduces to 1/2 and the result is
    (sqrt 2 / 64)(hbar / pi c^2) w_mA^2 w_eB / L.
    """
    _check_positive(omega_mA=omega_mA, omega_eB=omega_eB, L=L)
    pre = HBAR * math.sqrt(2.0) * omega_mA ** 2 * omega_eB / (32.0 * math.pi * SPEED_OF_LIGHT ** 2 * L)
    if not screened:
        return 0.5 * pre
    a = (omega_mA * L) ** 2 / (8.0 * SPEED_OF_LIGHT ** 2)

    def f(k):
        e = np.exp(-2.0 * k)
        return k * e / np.sqrt(k * k + a * e)

    return pre * integrate_adaptive(f, 0.0, math.inf, rel_tol=1e-12, abs_tol=1e-300).value


# -------------------------------------------------------- long distances


def _eta_bracket(alpha: float, tol: float) -> float:
    def first(o):
        return polylog4_series((o - 1.0) / (o + 1.0))

    def second(o):
        return polylog4_series((1.0 - o) / (1.0 + o))

    i1 = integrate_adaptive(first, 0.0, 1.0 / alpha, rel_tol=tol, abs_tol=1e-300).value
    i2 = integrate_adaptive(second, 0.0, alpha, rel_tol=tol, abs_tol=1e-300).value
    return alpha * i1 + i2 / alpha


def long_distance_eta_magnetodielectric(alpha: float, tol: float = 1e-11) -> float:
    """Long-distance reduction factor for a magneto-dielectric mirror facing a dielectric one.

    ``alpha = w_mA / w_eA``.  Evaluates

        eta = (180/pi^4)(3/8) [alpha int_0^{1/alpha} Li_4((W-1)/(W+1)) dW
                               + (1/alpha) int_0^alpha Li_4((1-W)/(1+W)) dW]

    with the prefactor as customarily quoted; eta(1) is about 0.0205.  The
    exact Lifshitz integral approaches 2/3 of this value, see
    :func:`long_distance_force_ratio_magnetodielectric`.
    """
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise ValueError("alpha must be positive")
    return _ETA_MD_PREFACTOR * _eta_bracket(alpha, tol)


def long_distance_force_ratio_magnetodielectric(alpha: float, tol: float = 1e-11) -> float:
    """Limit of F/F_C of the exact integral at L -> inf, i.e. (45/pi^4) times the bracket.

    Shares its sign and zero with :func:`long_distance_eta_magnetodielectric`.
    """
    return _ETA_MD_LIFSHITZ_RATIO * long_distance_eta_magnetodielectric(alpha, tol)


def repulsion_threshold(tol: float = 1e-6) -> float:
    """Smallest alpha = w_mA / w_eA for which the long-distance force is repulsive.

    Bisection of the long-distance reduction factor on [1, 1.1].

    Raises
    ------
    NoSignChangeError
        If the bracket does not contain the root.
    """
    root = find_root_bisect(long_distance_eta_magnetodielectric, 1.0, 1.1, tol=tol)
    # one verification evaluation on either side of the returned root
    lo = long_distance_eta_magnetodielectric(root.root - tol)
    hi = long_distance_eta_magnetodielectric(root.root + tol)
    if not (lo >= 0.0 >= hi):
        raise SeriesDivergenceError(f"threshold verification failed: eta = {lo:.3e}, {hi:.3e}")
    return root.root


def _long_regime(L: float, *wavelengths: float):
    if not (math.isfinite(L) and L > 0.0):
        raise ValueError("separation must be positive")
    for lam in wavelengths:
        if not lam >= 0.0:
            raise ValueError("wavelengths must be non-negative")
    lmax = max(wavelengths)
    if not L > 5.0 * lmax:
        raise OutOfRegimeError(
            f"long-distance formula needs L > 5 lambda_max = {5.0 * lmax:.6g} m, got {L:.6g} m"
        )


def long_distance_eta_dielectric(lambda_eA: float, lambda_eB: float, L: float) -> float:
    """eta = 1 - (4 / 3 pi)(lambda_eA + lambda_eB) / L for two dielectric plasma mirrors."""
    _long_regime(L, lambda_eA, lambda_eB)
    return 1.0 - 4.0 / (3.0 * math.pi) * (lambda_eA + lambda_eB) / L


def boyer_long_distance_eta(lambda_eA: float, lambda_mB: float, L: float) -> float:
    """eta = -7/8 + (7 / 6 pi)(lambda_eA + lambda_mB) / L for a dielectric facing a magnetic mirror."""
    _long_regime(L, lambda_eA, lambda_mB)
    return -7.0 / 8.0 + 7.0 / (6.0 * math.pi) * (lambda_eA + lambda_mB) / L

