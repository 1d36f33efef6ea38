"""Command-line front end: force curves, plasmon energies, asymptotes, threshold.

Configuration files are flat ``key = value`` text with dotted keys::

    # mirror A: magneto-dielectric plasma mirror
    mirror_a.epsilon.strength = 1.0e16
    mirror_a.mu.strength = 1.2e16
    mirror_b.epsilon.strength = 1.0e16
    distances.lambda_min = 1e-2
    distances.lambda_max = 1e2
    distances.count = 41

Frequencies are in rad/s, explicit distances (``distances.values``) in
meters and grid bounds in Lambda = w_ref L / c, with w_ref = w_eA (or w_mA
for a purely magnetic mirror A).  A JSON output file is itself a valid
``--config``: its ``config`` member holds the fully resolved settings.

Exit codes: 0 success, 2 configuration or regime error, 3 at least one
row did not converge (the row is still written, flagged in ``status``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .asymptotics import (
    boyer_long_distance_eta,
    boyer_short_distance_force,
    long_distance_eta_dielectric,
    long_distance_eta_magnetodielectric,
    long_distance_force_ratio_magnetodielectric,
    plasma_wavelength,
    repulsion_threshold,
    short_distance_force_series,
    short_distance_params,
)
from .dispersion import Cavity, Mirror, OscillatorModel
from .errors import ConfigError, ConvergenceError, NoModeError, PreconditionError
from .fresnel import Polarization
from .lifshitz import QuadratureSpec, casimir_force, ideal_casimir_force
from .plasmons import Branch, coupled_plasmons, energy_decomposition, single_surface_plasmon

__all__ = ["main", "parse_config", "RunConfig", "EXIT_OK", "EXIT_CONFIG", "EXIT_NONCONVERGED"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

REGIMES = ("short", "long", "boyer-short", "boyer-long")

FORCE_COLUMNS = ["Lambda", "L", "F", "E", "eta_F", "eta_E", "F_TE", "F_TM", "abs_error", "status"]
PLASMON_COLUMNS = [
    "Lambda", "L", "E_total", "E_plasmon", "E_photon", "eta_total", "eta_pl", "eta_ph",
    "E_TM_plus", "E_TM_minus", "E_TE_plus", "E_TE_minus", "status",
]
DISPERSION_COLUMNS = [
    "k", "kc_over_w_ref", "omega_plus", "omega_minus", "omega_sp_A", "omega_sp_B", "omega_light",
]
ASYMPTOTE_COLUMNS = ["Lambda", "L", "F_asymptote", "F_full", "rel_dev", "status"]

_MODEL_FIELDS = ("strength", "resonance", "damping")

_DEFAULTS: Dict[str, object] = {
    "tolerances.rel_tol": 1e-6,
    "tolerances.max_subdivisions": 2000,
    "output.format": "csv",
    "run.jobs": 1,
    "asymptote.regime": "short",
    "dispersion.k_min": 0.0,
    "dispersion.k_max": 3.0,
    "dispersion.count": 61,
    "dispersion.polarization": "TM",
}

_FLOAT_KEYS = {
    f"{m}.{r}.{f}" for m in ("mirror_a", "mirror_b") for r in ("epsilon", "mu") for f in _MODEL_FIELDS
} | {
    "distances.lambda_min", "distances.lambda_max", "tolerances.rel_tol", "tolerances.abs_tol",
    "dispersion.lambda", "dispersion.k_min", "dispersion.k_max",
}
_INT_KEYS = {"distances.count", "tolerances.max_subdivisions", "run.jobs", "dispersion.count"}
_STR_KEYS = {
    "mirror_a.label", "mirror_b.label", "output.format", "output.path",
    "output.dispersion_path", "asymptote.regime", "dispersion.polarization",
}
_LIST_KEYS = {"distances.values"}
_KNOWN = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _LIST_KEYS


# ------------------------------------------------------------------ parsing


def _convert(key: str, raw, where: str):
    try:
        if key in _FLOAT_KEYS:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("not finite")
            return v
        if key in _INT_KEYS:
            if isinstance(raw, float) and raw.is_integer():
                raw = int(raw)
            if isinstance(raw, float):
                raise ValueError("not an integer")
            return int(raw)
        if key in _LIST_KEYS:
            items = raw if isinstance(raw, list) else [s for s in str(raw).split(",") if s.strip()]
            vals = [float(s) for s in items]
            if not all(math.isfinite(v) for v in vals):
                raise ValueError("not finite")
            return vals
        return str(raw).strip()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad value {raw!r} for {key} ({exc})") from None


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, object]:
    """Parse the dotted ``key = value`` format (or a JSON output file)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno}: invalid JSON ({exc.msg})") from None
        flat = doc.get("config", doc) if isinstance(doc, dict) else None
        if not isinstance(flat, dict):
            raise ConfigError(f"{source}: JSON config must be an object")
        out = {}
        for key, raw in flat.items():
            if key not in _KNOWN:
                raise ConfigError(f"{source}: unknown key {key!r}")
            out[key] = _convert(key, raw, f"{source}: field {key}")
        return out

    out: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{source}: line {lineno}"
        if "=" not in body:
            raise ConfigError(f"{where}: expected 'key = value', got {body!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        out[key] = _convert(key, raw, where)
    return out


def parse_config(path: str) -> Dict[str, object]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    return parse_config_text(text, path)


class RunConfig:
    """Validated run settings built from the flat key map."""

    def __init__(self, values: Dict[str, object]):
        self.values = {**_DEFAULTS, **values}
        v = self.values
        self.mirror_a = self._mirror("mirror_a")
        self.mirror_b = self._mirror("mirror_b")
        self.quadrature = self._quadrature()
        self.format = v["output.format"]
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.format!r}")
        self.jobs = v["run.jobs"]
        if self.jobs < 1:
            raise ConfigError("run.jobs must be >= 1")

    def _mirror(self, name: str) -> Mirror:
        models = []
        for resp in ("epsilon", "mu"):
            kw = {}
            for f, attr in zip(_MODEL_FIELDS, ("strength_freq", "resonance_freq", "damping")):
                val = self.values.get(f"{name}.{resp}.{f}", 0.0)
                if val < 0.0:
                    raise ConfigError(f"{name}.{resp}.{f} must be >= 0, got {val!r}")
                kw[attr] = val
            models.append(OscillatorModel(**kw))
        return Mirror(models[0], models[1], str(self.values.get(f"{name}.label", name[-1].upper())))

    def _quadrature(self) -> QuadratureSpec:
        v = self.values
        try:
            return QuadratureSpec(
                rel_tol=v["tolerances.rel_tol"],
                abs_tol=v.get("tolerances.abs_tol"),
                max_subdivisions=v["tolerances.max_subdivisions"],
            )
        except ValueError as exc:
            raise ConfigError(f"tolerances: {exc}") from None

    @property
    def reference_frequency(self) -> float:
        ref = self.mirror_a.omega_e or self.mirror_a.omega_m
        if ref <= 0.0:
            raise ConfigError("mirror_a needs a nonzero epsilon.strength or mu.strength")
        return ref

    def distances(self) -> List[float]:
        """Separations in meters, in input order."""
        v = self.values
        explicit = v.get("distances.values")
        grid = [k for k in ("distances.lambda_min", "distances.lambda_max", "distances.count") if k in v]
        if explicit is not None and grid:
            raise ConfigError("give either distances.values or the Lambda grid, not both")
        if explicit is not None:
            if not explicit:
                raise ConfigError("distances.values is empty")
            for L in explicit:
                if not L > 0.0:
                    raise ConfigError(f"distances.values must be positive, got {L!r}")
            return list(explicit)
        if len(grid) != 3:
            raise ConfigError(
                "empty distance grid: set distances.values or "
                "distances.lambda_min, distances.lambda_max and distances.count"
            )
        lo, hi, n = v["distances.lambda_min"], v["distances.lambda_max"], v["distances.count"]
        if n < 1:
            raise ConfigError(f"distances.count must be >= 1, got {n}")
        if not lo > 0.0:
            raise ConfigError(f"distances.lambda_min must be positive, got {lo!r}")
        if n > 1 and not lo < hi:
            raise ConfigError(f"distances.lambda_min must be < lambda_max ({lo!r} >= {hi!r})")
        lam = np.geomspace(lo, hi, n) if n > 1 else np.array([lo])
        scale = SPEED_OF_LIGHT / self.reference_frequency
        return [float(x) * scale for x in lam]

    def Lambda(self, L: float) -> float:
        return self.reference_frequency * L / SPEED_OF_LIGHT

    def cavity(self, L: float) -> Cavity:
        return Cavity(self.mirror_a, self.mirror_b, L)

    def resolved(self) -> Dict[str, object]:
        """Every setting that influences the numbers, JSON-serializable."""
        return {k: self.values[k] for k in sorted(self.values) if not k.startswith(("output.", "run."))}


# ------------------------------------------------------------------ row workers


def _force_row(args):
    cfg, L = args
    Lam = cfg.Lambda(L)
    try:
        rep = casimir_force(cfg.cavity(L), cfg.quadrature)
    except ConvergenceError as exc:
        return [Lam, L] + [math.nan] * 7 + [f"nonconverged: {exc}"]
    return [
        Lam, L, rep.force_per_area, rep.energy_per_area, rep.eta_force, rep.eta_energy,
        rep.polarization_breakdown[Polarization.TE], rep.polarization_breakdown[Polarization.TM],
        rep.abs_error_estimate, "ok",
    ]


def _plasmon_row(args):
    cfg, L = args
    Lam = cfg.Lambda(L)
    spec = QuadratureSpec(
        rel_tol=min(cfg.quadrature.rel_tol, 1e-8),
        abs_tol=cfg.quadrature.abs_tol,
        max_subdivisions=cfg.quadrature.max_subdivisions,
    )
    try:
        d = energy_decomposition(cfg.cavity(L), spec)
    except ConvergenceError as exc:
        return [Lam, L] + [math.nan] * 10 + [f"nonconverged: {exc}"]
    br = [
        d.per_branch.get((pol, b), 0.0)
        for pol in (Polarization.TM, Polarization.TE) for b in (Branch.PLUS, Branch.MINUS)
    ]
    return [Lam, L, d.total, d.plasmon, d.photon, d.eta_total, d.eta_plasmon, d.eta_photon] + br + ["ok"]


def _asymptote_row(args):
    cfg, regime, L = args
    Lam = cfg.Lambda(L)
    try:
        asym = _asymptote_value(cfg, regime, L)
    except PreconditionError as exc:
        return [Lam, L, math.nan, math.nan, math.nan, f"out-of-regime: {exc}"]
    try:
        full = casimir_force(cfg.cavity(L), cfg.quadrature).force_per_area
    except ConvergenceError as exc:
        return [Lam, L, asym, math.nan, math.nan, f"nonconverged: {exc}"]
    return [Lam, L, asym, full, asym / full - 1.0, "ok"]


def _ordered_for_series(a: Mirror, b: Mirror):
    # the force is symmetric; the series wants the larger Omega_2 on A
    if short_distance_params(b).omega2 > short_distance_params(a).omega2:
        return b, a
    return a, b


def _boyer_pair(a: Mirror, b: Mirror):
    """(dielectric, magnetic) or None."""
    if a.is_dielectric and b.is_magnetic:
        return a, b
    if a.is_magnetic and b.is_dielectric:
        return b, a
    return None


def _is_md(m: Mirror) -> bool:
    return m.omega_e > 0.0 and m.omega_m > 0.0


def check_regime(cfg: RunConfig, regime: str) -> None:
    """Raise ConfigError naming the violated precondition of ``regime``."""
    a, b = cfg.mirror_a, cfg.mirror_b
    if regime not in REGIMES:
        raise ConfigError(f"unknown regime {regime!r}; choose from {', '.join(REGIMES)}")
    if regime == "short":
        for name, m in (("mirror_a", a), ("mirror_b", b)):
            if m.omega_e <= 0.0:
                raise ConfigError(
                    f"regime short: {name} must be dielectric-dominated (epsilon.strength > 0)"
                )
    elif regime in ("boyer-short", "boyer-long"):
        pair = _boyer_pair(a, b)
        if pair is None:
            raise ConfigError(
                f"regime {regime}: needs one purely dielectric and one purely magnetic mirror"
            )
        if regime == "boyer-short":
            diel, mag = pair
            if mag.magnetic.resonance_freq != 0.0:
                raise ConfigError("regime boyer-short: the magnetic mirror needs mu.resonance = 0")
    else:
        ok = (
            (a.is_dielectric and b.is_dielectric)
            or _boyer_pair(a, b) is not None
            or (_is_md(a) and b.is_dielectric)
            or (_is_md(b) and a.is_dielectric)
        )
        if not ok:
            raise ConfigError(
                "regime long: needs two dielectric mirrors, a dielectric facing a magnetic "
                "mirror, or a magneto-dielectric mirror facing a dielectric one"
            )
        for name, m in (("mirror_a", a), ("mirror_b", b)):
            if not (m.electric.is_plasma and m.magnetic.is_plasma):
                raise ConfigError(f"regime long: {name} must follow the plasma model")


def _asymptote_value(cfg: RunConfig, regime: str, L: float) -> float:
    a, b = cfg.mirror_a, cfg.mirror_b
    if regime == "short":
        a, b = _ordered_for_series(a, b)
        return short_distance_force_series(a, b, L)
    if regime == "boyer-short":
        diel, mag = _boyer_pair(a, b)
        return boyer_short_distance_force(mag.omega_m, diel.omega_e, L)
    fc = ideal_casimir_force(L)
    pair = _boyer_pair(a, b)
    if pair is not None:
        diel, mag = pair
        lam_e, lam_m = plasma_wavelength(diel.omega_e), plasma_wavelength(mag.omega_m)
        return boyer_long_distance_eta(lam_e, lam_m, L) * fc
    if regime == "boyer-long":
        raise PreconditionError("needs one purely dielectric and one purely magnetic mirror")
    if a.is_dielectric and b.is_dielectric:
        lam_a, lam_b = plasma_wavelength(a.omega_e), plasma_wavelength(b.omega_e)
        return long_distance_eta_dielectric(lam_a, lam_b, L) * fc
    md, other = (a, b) if _is_md(a) else (b, a)
    lams = [plasma_wavelength(w) for w in (md.omega_e, md.omega_m, other.omega_e)]
    if not L > 5.0 * max(lams):
        raise PreconditionError(f"long-distance limit needs L > {5.0 * max(lams):.6g} m")
    return long_distance_force_ratio_magnetodielectric(md.omega_m / md.omega_e) * fc


def _dispersion_rows(cfg: RunConfig) -> List[list]:
    v = cfg.values
    try:
        pol = Polarization(str(v["dispersion.polarization"]).upper())
    except ValueError:
        raise ConfigError("dispersion.polarization must be TE or TM") from None
    n = v["dispersion.count"]
    if n < 1:
        raise ConfigError("dispersion.count must be >= 1")
    lam = v.get("dispersion.lambda")
    L = lam * SPEED_OF_LIGHT / cfg.reference_frequency if lam is not None else cfg.distances()[0]
    k0 = cfg.reference_frequency / SPEED_OF_LIGHT
    kr = np.linspace(v["dispersion.k_min"], v["dispersion.k_max"], n)
    k = kr * k0
    plus, minus = coupled_plasmons(cfg.cavity(L), pol, k)
    sp = []
    for m in (cfg.mirror_a, cfg.mirror_b):
        try:
            sp.append(np.broadcast_to(single_surface_plasmon(m, pol, k), k.shape))
        except NoModeError:
            sp.append(np.full(k.shape, math.nan))
    return [
        [float(k[i]), float(kr[i]), float(plus[i]), float(minus[i]),
         float(sp[0][i]), float(sp[1][i]), float(k[i] * SPEED_OF_LIGHT)]
        for i in range(k.size)
    ]


def _run_rows(worker, items: Sequence, jobs: int) -> List[list]:
    if jobs <= 1 or len(items) <= 1:
        return [worker(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order regardless of completion order
        return list(pool.map(worker, items))


# ------------------------------------------------------------------ output


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.11e}"


def _json_num(x):
    if isinstance(x, str):
        return x
    x = float(x)
    return None if math.isnan(x) else x


def render_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def render_json(command: str, config: Dict[str, object], columns, rows, extra=None) -> str:
    doc = {"command": command, "config": config, "columns": list(columns)}
    doc["rows"] = [[_json_num(x) for x in r] for r in rows]
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(cfg, command, columns, rows, path):
    if cfg.format == "json":
        text = render_json(command, cfg.resolved(), columns, rows)
    else:
        text = render_csv(columns, rows)
    _emit(text, path)


def _status_code(rows) -> int:
    return EXIT_NONCONVERGED if any(str(r[-1]).startswith("nonconverged") for r in rows) else EXIT_OK


# ------------------------------------------------------------------ commands


def cmd_force(cfg: RunConfig, out: Optional[str]) -> int:
    items = [(cfg, L) for L in cfg.distances()]
    rows = _run_rows(_force_row, items, cfg.jobs)
    _table(cfg, "force", FORCE_COLUMNS, rows, out)
    return _status_code(rows)


def cmd_plasmon(cfg: RunConfig, out: Optional[str], dispersion_out: Optional[str]) -> int:
    for name, m in (("mirror_a", cfg.mirror_a), ("mirror_b", cfg.mirror_b)):
        if not m.is_plasma:
            raise ConfigError(
                f"plasmon: {name} has a nonzero resonance or damping; the mode decomposition "
                "is defined for lossless plasma-model mirrors only"
            )
        if _is_md(m):
            raise ConfigError(
                f"plasmon: {name} is magneto-dielectric; the exact mode decomposition "
                "supports purely dielectric or purely magnetic mirrors"
            )
    items = [(cfg, L) for L in cfg.distances()]
    if dispersion_out:
        drows = _dispersion_rows(cfg)
        _table(cfg, "plasmon-dispersion", DISPERSION_COLUMNS, drows, dispersion_out)
    rows = _run_rows(_plasmon_row, items, cfg.jobs)
    _table(cfg, "plasmon", PLASMON_COLUMNS, rows, out)
    return _status_code(rows)


def cmd_asymptote(cfg: RunConfig, regime: str, out: Optional[str]) -> int:
    check_regime(cfg, regime)
    cfg.values["asymptote.regime"] = regime
    items = [(cfg, regime, L) for L in cfg.distances()]
    rows = _run_rows(_asymptote_row, items, cfg.jobs)
    _table(cfg, "asymptote", ASYMPTOTE_COLUMNS, rows, out)
    return _status_code(rows)


def threshold_report(delta: float = 0.01) -> Dict[str, object]:
    alpha0 = repulsion_threshold()
    samples = [1.0, alpha0 - delta, alpha0, alpha0 + delta]
    return {
        "alpha0": alpha0,
        "bracket": [1.0, 1.1],
        "eta_at_1": long_distance_eta_magnetodielectric(1.0),
        "samples": [[a, long_distance_eta_magnetodielectric(a)] for a in samples],
    }


def cmd_threshold(fmt: str, out: Optional[str]) -> int:
    rep = threshold_report()
    if fmt == "json":
        _emit(json.dumps(rep, indent=1) + "\n", out)
        return EXIT_OK
    rows = [
        ["alpha0", rep["alpha0"]],
        ["bracket_lo", rep["bracket"][0]],
        ["bracket_hi", rep["bracket"][1]],
        ["eta_at_1", rep["eta_at_1"]],
    ] + [[f"eta({_fmt(a)})", e] for a, e in rep["samples"][1:]]
    _emit(render_csv(["quantity", "value"], rows), out)
    return EXIT_OK


# ------------------------------------------------------------------ entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="casimir-mirrors",
        description="Casimir force, plasmon energy and asymptotes for magneto-dielectric mirrors.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    run = argparse.ArgumentParser(add_help=False, parents=[common])
    run.add_argument("--config", metavar="PATH", required=True, help="key = value file or JSON output")
    run.add_argument("--jobs", type=int, metavar="N", help="worker processes for the distance grid")
    run.add_argument("--rel-tol", type=float, metavar="X", help="quadrature relative tolerance")
    run.add_argument("--abs-tol", type=float, metavar="X", help="quadrature absolute tolerance, N/m^2")

    sub.add_parser("force", parents=[run], help="exact force and energy on a distance grid")
    pl = sub.add_parser("plasmon", parents=[run], help="plasmon/photon energy decomposition")
    pl.add_argument("--dispersion-out", metavar="PATH", help="also dump the coupled-plasmon dispersion")
    asy = sub.add_parser("asymptote", parents=[run], help="asymptotic force against the full integral")
    asy.add_argument("--regime", choices=REGIMES, help="default: asymptote.regime or short")
    sub.add_parser("threshold", parents=[common], help="long-distance repulsion threshold alpha0")
    return p


def _load(args) -> RunConfig:
    values = parse_config(args.config)
    if args.format:
        values["output.format"] = args.format
    if args.jobs is not None:
        values["run.jobs"] = args.jobs
    if args.rel_tol is not None:
        values["tolerances.rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        values["tolerances.abs_tol"] = args.abs_tol
    return RunConfig(values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "threshold":
            return cmd_threshold(args.format or "csv", args.out)
        cfg = _load(args)
        out = args.out or cfg.values.get("output.path")
        if args.command == "force":
            return cmd_force(cfg, out)
        if args.command == "plasmon":
            disp = args.dispersion_out or cfg.values.get("output.dispersion_path")
            return cmd_plasmon(cfg, out, disp)
        return cmd_asymptote(cfg, args.regime or cfg.values["asymptote.regime"], out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
