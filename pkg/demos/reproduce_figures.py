"""Regenerate the force, dispersion and plasmon-energy curve families.

Every config under ``demos/configs`` is run through the command-line front
end; the resulting tables are checked for the qualitative features of each
family (sign changes, orderings, limits) and their SHA-256 digests compared
with ``demos/expected.sha256``.

    python3 demos/reproduce_figures.py [--out DIR] [--update-checksums]

Exit status is 0 when every check passes and 1 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import math
import sys
import tempfile
import time
from pathlib import Path
from typing import Dict, List, Tuple

from casimir_mirrors.cli import main as cli_main

HERE = Path(__file__).resolve().parent
CONFIGS = HERE / "configs"
CHECKSUMS = HERE / "expected.sha256"

ALPHAS = ("0", "0p5", "1", "1p2")
BETAS = ("1", "0p8", "0p6")
# Lambda = w_eA L / c; the short-distance plasmon slope 1.1933 is per L / lambda_eA
PLASMON_SLOPE = 1.1933 / (2.0 * math.pi)


def _command(name: str, out_dir: Path) -> List[str]:
    cfg = str(CONFIGS / f"{name}.cfg")
    out = str(out_dir / f"{name}.csv")
    if name.startswith("fig1"):
        return ["force", "--config", cfg, "--out", out]
    if name.startswith("fig2"):
        return ["plasmon", "--config", cfg, "--out", out,
                "--dispersion-out", str(out_dir / f"{name}.dispersion.csv")]
    if name.startswith("fig34"):
        return ["plasmon", "--config", cfg, "--out", out]
    return ["asymptote", "--config", cfg, "--out", out]


def run_all(out_dir: Path) -> Dict[str, Tuple[int, float]]:
    """Run every config; returns name -> (exit code, wall seconds)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {}
    for cfg in sorted(CONFIGS.glob("*.cfg")):
        start = time.perf_counter()
        code = cli_main(_command(cfg.stem, out_dir))
        report[cfg.stem] = (code, time.perf_counter() - start)
    return report


def _table(out_dir: Path, name: str) -> Dict[str, List[float]]:
    with open(out_dir / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) if k != "status" else r[k] for r in rows] for k in rows[0]}


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def check_families(out_dir: Path) -> List[Tuple[str, bool, str]]:
    """Qualitative checks on the regenerated tables: (label, passed, detail)."""
    checks = []

    def check(label, ok, detail):
        checks.append((label, bool(ok), detail))

    force = {a: _table(out_dir, f"fig1_force_alpha_{a}.csv") for a in ALPHAS}
    boyer = _table(out_dir, "fig1_force_boyer.csv")
    eta = {a: t["eta_F"] for a, t in force.items()}
    lam = force["0"]["Lambda"]

    check("force: alpha = 1.2 changes sign exactly once",
          _sign_changes(eta["1p2"]) == 1 and eta["1p2"][0] > 0 > eta["1p2"][-1],
          f"eta_F from {eta['1p2'][0]:.3g} to {eta['1p2'][-1]:.3g}")
    check("force: alpha <= 1 stays attractive",
          all(v > 0 for a in ("0", "0p5", "1") for v in eta[a]), "all eta_F > 0")
    last = [eta[a][-1] for a in ALPHAS] + [boyer["eta_F"][-1]]
    check("force: long-distance ordering alpha 0 > 0.5 > 1 > 1.2 > Boyer",
          all(x > y for x, y in zip(last, last[1:])), ", ".join(f"{v:.4g}" for v in last))
    first = [eta[a][0] for a in ALPHAS]
    check("force: short-distance curves independent of mu_A",
          max(first) / min(first) - 1 < 1e-2, ", ".join(f"{v:.4g}" for v in first))
    check("force: short-distance slope matches the plasmon asymptote",
          abs(eta["0"][0] / lam[0] / PLASMON_SLOPE - 1) < 2e-2,
          f"eta_F / Lambda = {eta['0'][0] / lam[0]:.5g} vs {PLASMON_SLOPE:.5g}")
    check("force: Boyer pair repulsive, -> -7/8 at the largest distance",
          all(v < 0 for v in boyer["eta_F"]) and abs(boyer["eta_F"][-1] / -0.875 - 1) < 1e-2,
          f"eta_F = {boyer['eta_F'][-1]:.5g}")

    disp = _table(out_dir, "fig2_dispersion.dispersion.csv")
    kc = disp["kc_over_w_ref"]
    ok_minus = all(m <= light for m, light in zip(disp["omega_minus"], disp["omega_light"]))
    plus_rows = [(k, p, light, a) for k, p, light, a in
                 zip(kc, disp["omega_plus"], disp["omega_light"], disp["omega_sp_A"]) if not math.isnan(p)]
    onset = plus_rows[0][0] if plus_rows else math.nan
    check("dispersion: omega_- entirely evanescent", ok_minus, "omega_- <= k c on every sample")
    lam2 = _table(out_dir, "fig2_dispersion.csv")["Lambda"][0]
    k_plus = math.sqrt(0.8 * 1.8 / (1.0 + 0.8 * (lam2 + 1.0)))
    check("dispersion: omega_+ appears just above k_(+)",
          k_plus < onset <= k_plus + (kc[1] - kc[0]) and all(p <= light for _, p, light, _ in plus_rows),
          f"first omega_+ at kc/w_eA = {onset:.3g}, k_(+) c/w_eA = {k_plus:.4f}")
    check("dispersion: omega_+ above omega_sp,A and omega_- below omega_sp,B",
          all(p >= a for _, p, _, a in plus_rows)
          and all(m <= b for m, b in zip(disp["omega_minus"], disp["omega_sp_B"])), "branch ordering")

    pl = {b: _table(out_dir, f"fig34_plasmon_beta_{b}.csv") for b in BETAS}
    n = len(pl["1"]["Lambda"])
    check("plasmons: total plasmon contribution attractive (eta_pl > 0)",
          all(v > 0 for b in BETAS for v in pl[b]["eta_pl"]), "every beta, every Lambda")
    check("plasmons: omega_+ repulsive, omega_- attractive",
          all(p > 0 > m for b in BETAS for p, m in zip(pl[b]["E_TM_plus"], pl[b]["E_TM_minus"])),
          "E_TM_plus > 0 > E_TM_minus")
    check("plasmons: eta_pl ordered beta 1 > 0.8 > 0.6",
          all(pl["1"]["eta_pl"][i] > pl["0p8"]["eta_pl"][i] > pl["0p6"]["eta_pl"][i] for i in range(n)),
          "at every Lambda")
    check("energy: total ordered beta 1 > 0.8 > 0.6",
          all(pl["1"]["eta_total"][i] > pl["0p8"]["eta_total"][i] > pl["0p6"]["eta_total"][i]
              for i in range(n)), "at every Lambda")
    eq = pl["1"]
    check("energy: plasmons dominate at short distance, photons flip sign at long distance",
          eq["eta_pl"][0] > 0.99 * eq["eta_total"][0] and eq["eta_ph"][-1] < 0 < eq["eta_pl"][-1],
          f"eta_pl/eta_total = {eq['eta_pl'][0] / eq['eta_total'][0]:.4f}, eta_ph = {eq['eta_ph'][-1]:.4g}")
    check("energy: total = plasmon + photon",
          all(abs(t - p - g) <= 1e-10 * abs(t) for b in BETAS
              for t, p, g in zip(pl[b]["E_total"], pl[b]["E_plasmon"], pl[b]["E_photon"])), "row identity")

    short = _table(out_dir, "asymptote_short_equal.csv")
    check("asymptote: short-distance series within 2% of the full integral",
          all(abs(d) < 2e-2 for d in short["rel_dev"]), f"max |dev| = {max(map(abs, short['rel_dev'])):.3g}")
    by = _table(out_dir, "asymptote_boyer.csv")
    slope = (math.log(by["F_full"][-1]) - math.log(by["F_full"][0])) / (
        math.log(by["L"][-1]) - math.log(by["L"][0]))
    check("asymptote: Boyer short-distance force ~ 1/L",
          abs(slope + 1) < 2e-2 and all(abs(d) < 5e-2 for d in by["rel_dev"]), f"log-log slope {slope:.4f}")
    return checks


def digests(out_dir: Path) -> Dict[str, str]:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(out_dir.glob("*.csv"))}


def read_checksums(path: Path = CHECKSUMS) -> Dict[str, str]:
    out = {}
    for line in path.read_text().splitlines():
        digest, name = line.split()
        out[name] = digest
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, help="output directory (default: a temporary one)")
    parser.add_argument("--update-checksums", action="store_true", help="rewrite demos/expected.sha256")
    args = parser.parse_args(argv)
    out_dir = args.out or Path(tempfile.mkdtemp(prefix="casimir-demos-"))

    failed = 0
    for name, (code, secs) in run_all(out_dir).items():
        ok = code == 0 and secs < 300
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} run {name}: exit {code}, {secs:.1f} s")
    for label, ok, detail in check_families(out_dir):
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {label} ({detail})")

    got = digests(out_dir)
    if args.update_checksums:
        CHECKSUMS.write_text("".join(f"{d}  {n}\n" for n, d in got.items()))
        print(f"wrote {CHECKSUMS}")
    else:
        for name, digest in read_checksums().items():
            same = got.get(name) == digest
            print(f"{'ok  ' if same else 'DIFF'} sha256 {name}")
    print(f"tables in {out_dir}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
