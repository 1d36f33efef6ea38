"""Deterministic numerical kernels: adaptive Gauss-Kronrod quadrature,
bracketed bisection and tail-certified series summation.

All routines are pure and reentrant.  The quadrature accepts vectorised
integrands, optionally vector valued: ``f(x)`` receives a 1-D array of
abscissae and returns either an array of the same length or an array of
shape ``(len(x), m)``.  Vector-valued integrands share one subdivision
and each component must meet the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, NoSignChangeError, SeriesDivergenceError

__all__ = [
    "IntegrationResult",
    "RootResult",
    "integrate_adaptive",
    "find_root_bisect",
    "bisect_array",
    "sum_tail_bounded",
]

# 15-point Kronrod abscissae (positive half) and weights, embedded 7-point Gauss.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[[13, 11, 9]] = _WG[:3]
_WG15[7] = _WG[3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class IntegrationResult:
    """Value and error estimate of an adaptive integral.

    ``value`` and ``abs_error`` are floats for scalar integrands and
    1-D arrays for vector-valued ones.
    """

    value: float | np.ndarray
    abs_error: float | np.ndarray
    evaluations: int
    subdivisions: int = 1


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def _gk15(f, lo: np.ndarray, hi: np.ndarray):
    """Apply the Gauss-Kronrod pair to a batch of panels.

    Returns Kronrod estimates and QUADPACK-style error estimates, both of
    shape ``(npanels, m)``.
    """
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (centre[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x), dtype=float)
    npan = lo.size
    scalar = fx.ndim == 1
    fx = fx.reshape(npan, 15, -1)
    resk = np.einsum("j,pjm->pm", _WK, fx)
    resg = np.einsum("j,pjm->pm", _WG15, fx)
    reskh = 0.5 * resk
    resabs = np.einsum("j,pjm->pm", _WK, np.abs(fx)) * np.abs(half)[:, None]
    resasc = np.einsum("j,pjm->pm", _WK, np.abs(fx - reskh[:, None, :])) * np.abs(half)[:, None]
    resk = resk * half[:, None]
    err = np.abs((resk - resg * half[:, None]))
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0.0) & (err != 0.0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return resk, err, scalar


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    max_subdivisions: int = 2000,
    scale: float = 1.0,
    initial_panels: int = 1,
) -> IntegrationResult:
    """Integrate ``f`` over ``[a, b]`` with a 15-point Gauss-Kronrod rule.

    Panels are bisected worst-error-first until every component satisfies
    ``err <= max(abs_tol, rel_tol * |value|)``.  ``b = math.inf`` maps the
    half line with ``x = a + scale * t / (1 - t)``.  The rule is open, so
    ``f`` is never called at the endpoints.

    Raises
    ------
    ConvergenceError
        If ``max_subdivisions`` bisections do not reach the tolerance; the
        partial :class:`IntegrationResult` is attached as ``partial``.
    """
    if not (rel_tol > 0 and abs_tol > 0):
        raise ValueError("tolerances must be positive")
    if math.isinf(a):
        raise ValueError("lower limit must be finite")

    if math.isinf(b):
        if b < 0:
            raise ValueError("upper limit must be +inf or finite")

        def g(t, _f=f):
            # nodes that round onto t = 1 map to x = inf and are dropped
            one_m = np.maximum(1.0 - t, _EPS)
            x = a + scale * t / one_m
            jac = np.where(t < 1.0, scale / (one_m * one_m), 0.0)
            fx = np.asarray(_f(x), dtype=float)
            if fx.ndim == 2:
                return fx * jac[:, None]
            return fx * jac

        lo_lim, hi_lim = 0.0, 1.0
    else:
        g = f
        lo_lim, hi_lim = float(a), float(b)
        if lo_lim == hi_lim:
            return IntegrationResult(0.0, 0.0, 0, 0)

    edges = np.linspace(lo_lim, hi_lim, initial_panels + 1)
    lo = edges[:-1].copy()
    hi = edges[1:].copy()
    val, err, scalar = _gk15(g, lo, hi)
    nevals = 15 * lo.size
    # panels too narrow to split further keep their error but are never chosen
    frozen = np.zeros(lo.size, dtype=bool)
    nsub = lo.size

    while True:
        total = val.sum(axis=0)
        total_err = err.sum(axis=0)
        tol = np.maximum(abs_tol, rel_tol * np.abs(total))
        if np.all(total_err <= tol):
            break
        if nsub >= max_subdivisions or np.all(frozen):
            partial = _pack(total, total_err, nevals, nsub, scalar)
            if np.all(frozen):
                # roundoff limited; report honestly
                return partial
            raise ConvergenceError(
                f"adaptive quadrature did not converge after {nsub} subdivisions "
                f"(error {np.max(total_err):.3e} > tol {np.min(tol):.3e})",
                partial=partial,
            )
        score = np.max(err / tol, axis=1)
        score[frozen] = -1.0
        i = int(np.argmax(score))
        mid = 0.5 * (lo[i] + hi[i])
        if not (lo[i] < mid < hi[i]) or (hi[i] - lo[i]) <= 4 * _EPS * max(abs(lo[i]), abs(hi[i])):
            frozen[i] = True
            continue
        nlo = np.array([lo[i], mid])
        nhi = np.array([mid, hi[i]])
        nval, nerr, _ = _gk15(g, nlo, nhi)
        nevals += 30
        nsub += 1
        lo[i], hi[i] = nlo[0], nhi[0]
        val[i], err[i] = nval[0], nerr[0]
        lo = np.append(lo, nlo[1])
        hi = np.append(hi, nhi[1])
        val = np.vstack([val, nval[1:]])
        err = np.vstack([err, nerr[1:]])
        frozen = np.append(frozen, False)

    return _pack(val.sum(axis=0), err.sum(axis=0), nevals, nsub, scalar)


def _pack(total, total_err, nevals, nsub, scalar):
    if scalar:
        return IntegrationResult(float(total[0]), float(total_err[0]), nevals, nsub)
    return IntegrationResult(total, total_err, nevals, nsub)


def find_root_bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> RootResult:
    """Locate a sign change of ``f`` in ``[lo, hi]`` by plain bisection.

    Stops once the bracket is narrower than ``tol``; the midpoint of the
    final bracket is returned together with ``f`` evaluated there.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0)
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChangeError(f"f({lo})={flo:.3e} and f({hi})={fhi:.3e} have the same sign")
    it = 0
    while abs(hi - lo) > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        it += 1
        if fm == 0.0:
            return RootResult(mid, 0.0, it)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return RootResult(root, float(f(root)), max(it, 1))


def bisect_array(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    rel_tol: float = 1e-15,
    max_iter: int = 200,
) -> np.ndarray:
    """Element-wise bisection for a batch of independent brackets.

    Each bracket must straddle a sign change of the matching element of
    ``f``; brackets without one converge to whichever end has the smaller
    ``|f|``.  Used by the plasmon solver, where each wavevector has its own
    bracket.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    fhi = f(hi)
    bad = np.sign(flo) == np.sign(fhi)
    fallback = np.where(np.abs(flo) <= np.abs(fhi), lo, hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= rel_tol * np.maximum(np.abs(hi), np.abs(lo))):
            break
    return np.where(bad, fallback, 0.5 * (lo + hi))


def sum_tail_bounded(
    term: Callable[[int], float],
    tol: float,
    ratio_bound: Optional[float] = None,
    tail_bound: Optional[Callable[[int], float]] = None,
    start: int = 1,
    max_terms: int = 1_000_000,
    patience: int = 25,
    vectorized: bool = False,
) -> float:
    """Sum ``term(start) + term(start+1) + ...`` with a certified tail.

    The certificate is either the caller's ``tail_bound(n)`` (a bound on the
    remainder after ``term(n)``) or, when only ``ratio_bound`` is known,
    the geometric bound ``|term(n)| r / (1 - r)``, used once the observed
    ratio has dropped below ``r``.

    With ``vectorized=True``, ``term`` receives an integer array and the
    series is consumed in blocks of doubling size; the certificate is
    checked at the end of each block.  Long, slowly converging sums (p-series
    tails with 10^5 terms) stay cheap this way.

    Raises
    ------
    SeriesDivergenceError
        When ``patience`` consecutive term ratios exceed one.
    """
    if tail_bound is None and ratio_bound is None:
        raise ValueError("need ratio_bound or tail_bound to certify the tail")
    if ratio_bound is not None and not (0.0 < ratio_bound < 1.0):
        raise ValueError("ratio_bound must lie in (0, 1)")
    if vectorized:
        return _sum_blocks(term, tol, ratio_bound, tail_bound, start, max_terms, patience)
    total = 0.0
    comp = 0.0
    prev = None
    growing = 0
    for n in range(start, start + max_terms):
        t = float(term(n))
        # Kahan summation keeps the 1e-12 targets meaningful for long sums
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if prev is not None and prev != 0.0:
            ratio = abs(t / prev)
            growing = growing + 1 if ratio > 1.0 else 0
            if growing >= patience:
                raise SeriesDivergenceError(f"terms growing for {patience} steps at n={n}")
        else:
            ratio = None
        if tail_bound is not None:
            if tail_bound(n) <= tol:
                return total
        elif t == 0.0 or (ratio is not None and ratio <= ratio_bound):
            if abs(t) * ratio_bound / (1.0 - ratio_bound) <= tol:
                return total
        prev = t
    raise SeriesDivergenceError(f"tail not certified within {max_terms} terms")


def _sum_blocks(term, tol, ratio_bound, tail_bound, start, max_terms, patience):
    partials = []
    n0 = start
    size = 64
    stop = start + max_terms
    while n0 < stop:
        n = np.arange(n0, min(n0 + size, stop), dtype=np.int64)
        t = np.asarray(term(n), dtype=float)
        # fsum keeps 10^5-term sums correctly rounded
        partials.append(math.fsum(t))
        last = int(n[-1])
        if t.size > patience:
            tail = np.abs(t[-patience - 1:])
            if np.all(tail[1:] > tail[:-1]) and tail[-1] > 0.0:
                raise SeriesDivergenceError(f"terms growing for {patience} steps at n={last}")
        if tail_bound is not None:
            if tail_bound(last) <= tol:
                return math.fsum(partials)
        else:
            tl = abs(t[-1])
            prev = abs(t[-2]) if t.size > 1 else math.inf
            if tl == 0.0 or (prev > 0.0 and tl / prev <= ratio_bound):
                if tl * ratio_bound / (1.0 - ratio_bound) <= tol:
                    return math.fsum(partials)
        n0 = last + 1
        size *= 2
    raise SeriesDivergenceError(f"tail not certified within {max_terms} terms")
