"""Command-line front end.

    lateralcp <command> --config scenario.json [--out FILE] [--format csv|json]
              [--threads N] [--allow-large-amplitude]

Commands: energy, regime-map, xmin-map, transition, frequency, oracle-check.
Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 validity guard.
"""

from __future__ import annotations

import argparse
import copy
import math
import sys
from typing import Callable

import numpy as np

from . import __version__
from .classical import DipoleState, Geometry, Regime, classify_regime, u0_classical, u1_classical_general, u1_classical_sinusoid
from .config import (
    build_axes,
    build_dipole,
    build_geometry,
    build_material,
    build_particle,
    load_config,
    parse_angle,
    particle_mass,
    validate,
)
from .errors import ConfigError, ConvergenceError, DomainError, NoSignChange, NullAmplitude, PerturbativityViolation
from .oracle import oracle_u1_realspace
from .polarizability import SpheroidParticle, moment_matrix, moments_for_axis, principal_moments
from .profiles import RoughnessProfile
from .quantum import (
    c_scaled,
    classical_border_phi,
    border_phi,
    coverage_summary,
    frequency_curve,
    locate_frequency_max,
    null_z0,
    transition_g,
    xmin_fractions,
)
from .sweep import Axis, SweepGrid, parallel_map, run_sweep, scenario_hash, stamp

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_GUARD = 4

COVERAGE_FULL = 0.99


def _hashable_config(config: dict) -> dict:
    """Config minus execution-only settings, so output does not depend on them."""
    c = copy.deepcopy(config)
    c.pop("threads", None)
    c.pop("output", None)
    return c


def _moments(config: dict) -> DipoleState:
    if config["mode"] == "classical":
        return build_dipole(config)
    return moment_matrix(build_particle(config))


def _axis_pair(config: dict) -> tuple[float, float]:
    """(isotropic, axial) moment split for orientation sweeps."""
    if config["mode"] == "classical":
        mag = float(config.get("dipole", {}).get("magnitude_C_m", 1.0))
        return 0.0, mag * mag
    i_p, i_t = principal_moments(build_particle(config))
    return i_t, i_p - i_t


def _in_plane_moments(config: dict, phi: float) -> np.ndarray:
    iso, ax = _axis_pair(config)
    return moments_for_axis(iso + ax, iso, phi, math.pi / 2)


def cmd_energy(config: dict, threads: int = 1) -> SweepGrid:
    """Energy landscape U0, U1, U0 + U1 versus x0 for one or more heights."""
    D = _moments(config)
    z0s = config.get("sweep", {}).get("z0_list_m") or [require_z0(config)]
    geoms = [build_geometry(config, z0) for z0 in z0s]
    sw = config.get("sweep", {})
    periods = int(sw.get("periods", 1))
    ppp = int(sw.get("points_per_period", 64))
    lam = geoms[0].lam
    x0s = lam * np.arange(periods * ppp + 1) / ppp

    def one(geom: Geometry) -> list[dict]:
        u0 = u0_classical(D, geom.z0)
        u1 = u1_classical_sinusoid(D, geom, x0s)
        regime = classify_regime(D, geom.u, geom.lam).regime.value
        return [
            {"z0_m": geom.z0, "x0_m": float(x), "U0_J": u0, "U1_J": float(v), "U_total_J": u0 + float(v), "regime": regime}
            for x, v in zip(x0s, np.atleast_1d(u1))
        ]

    rows = [r for block in parallel_map(one, geoms, threads) for r in block]
    axes = [Axis.from_points("z0_m", z0s), Axis.from_points("x0_m", x0s)]
    stamp(rows, _hashable_config(config))
    return SweepGrid(axes, ["U0_J", "U1_J", "U_total_J", "regime"], rows, _meta(config))


def require_z0(config: dict) -> float:
    try:
        return float(config["geometry"]["z0_m"])
    except KeyError:
        raise ConfigError("config is missing geometry.z0_m") from None


def _border_for(config: dict, phi: float) -> float:
    try:
        if config["mode"] == "classical":
            return classical_border_phi(phi)
        return border_phi(build_particle(config), phi)
    except (NoSignChange, DomainError):
        return float("nan")


def cmd_regime_map(config: dict, threads: int = 1) -> SweepGrid:
    """Peak/valley labels over (lambda/z0, phi) for an in-plane axis, with the C = 0 border."""
    axes = build_axes(config, ("lambda_over_z0", "phi"))
    borders = {float(p): _border_for(config, float(p)) for p in axes[1].values()}

    def point(lambda_over_z0: float, phi_rad: float) -> dict:
        m = _in_plane_moments(config, phi_rad)
        u = 2.0 * math.pi / lambda_over_z0
        res = classify_regime(m, u)
        return {
            "regime": res.regime.value,
            "delta_rad": res.delta,
            "C_sign": int(np.sign(c_scaled(m, u))),
            "border_lambda_over_z0": borders[phi_rad],
        }

    meta = _meta(config)
    finite = [b for b in borders.values() if math.isfinite(b)]
    meta["border"] = [[p, (b if math.isfinite(b) else None)] for p, b in borders.items()]
    meta["border_max_lambda_over_z0"] = max(finite) if finite else None
    return run_sweep(axes, point, ["regime", "delta_rad", "C_sign", "border_lambda_over_z0"], _hashable_config(config), threads, meta)


def cmd_xmin_map(config: dict, threads: int = 1) -> SweepGrid:
    """x_min/lambda over orientations, or its all-orientation envelope versus lambda/z0."""
    sw = config.get("sweep", {})
    names = {a["name"] for a in sw.get("axes", [])}
    iso, ax = _axis_pair(config)
    if {"phi", "theta"} <= names:
        phi_axis, theta_axis = build_axes(config, ("phi", "theta"))
        lz = sw.get("lambda_over_z0_list") or [sw.get("lambda_over_z0")]
        if lz[0] is None:
            raise ConfigError("xmin-map over orientations needs sweep.lambda_over_z0 or lambda_over_z0_list")
        phis, thetas = phi_axis.values(), theta_axis.values()

        def block(lzv: float) -> list[dict]:
            frac, null = xmin_fractions(iso, ax, phis, thetas, 2.0 * math.pi / lzv)
            return [
                {"lambda_over_z0": float(lzv), "phi_rad": float(p), "theta_rad": float(t),
                 "xmin_over_lambda": float(frac[i, j]), "null": bool(null[i, j])}
                for i, p in enumerate(phis)
                for j, t in enumerate(thetas)
            ]

        rows = [r for b in parallel_map(block, lz, threads) for r in b]
        stamp(rows, _hashable_config(config))
        axes = [Axis.from_points("lambda_over_z0", lz), phi_axis, theta_axis]
        return SweepGrid(axes, ["xmin_over_lambda", "null"], rows, _meta(config))

    (lz_axis,) = build_axes(config, ("lambda_over_z0",))
    n = int(sw.get("orientation_points", 361))
    phis = np.linspace(0.0, math.pi, n)
    thetas = np.linspace(0.0, math.pi, 4 * n + 1)

    def envelope(lambda_over_z0: float) -> dict:
        frac, _ = xmin_fractions(iso, ax, phis, thetas, 2.0 * math.pi / lambda_over_z0)
        s = coverage_summary(frac)
        return {"coverage": s["coverage"], "beta": s["beta"], "full_range": s["coverage"] >= COVERAGE_FULL}

    return run_sweep([lz_axis], envelope, ["coverage", "beta", "full_range"], _hashable_config(config), threads, _meta(config))


def cmd_transition(config: dict, threads: int = 1) -> SweepGrid:
    """Border lambda/z0 per aspect ratio (quantum) or per azimuth (classical)."""
    sw = config.get("sweep", {})
    phis = [parse_angle(p) for p in sw.get("phi_list", [0.0])]
    if config["mode"] == "classical":
        def one(phi: float) -> dict:
            try:
                return {"phi_rad": phi, "g": classical_border_phi(phi), "status": "ok"}
            except (NoSignChange, DomainError) as exc:
                return {"phi_rad": phi, "g": float("nan"), "status": type(exc).__name__}

        rows = parallel_map(one, phis, threads)
        stamp(rows, _hashable_config(config))
        return SweepGrid([Axis.from_points("phi_rad", phis)], ["g", "status"], rows, _meta(config))

    aspects = sw.get("aspects")
    if not aspects:
        raise ConfigError("quantum transition needs sweep.aspects")
    p = config.get("particle", {})
    material = build_material(p.get("material", "diamond"))
    minor = float(p.get("semi_minor_m", 2e-9))

    def one_q(item: tuple[float, float]) -> dict:
        aspect, phi = item
        particle = SpheroidParticle.from_aspect(aspect, minor, material=material)
        try:
            g = transition_g(particle) if phi == 0.0 else (0.0 if aspect == 1.0 else border_phi(particle, phi))
            return {"aspect": aspect, "phi_rad": phi, "g": g, "status": "ok"}
        except (NoSignChange, DomainError) as exc:
            return {"aspect": aspect, "phi_rad": phi, "g": float("nan"), "status": type(exc).__name__}

    items = [(float(a), phi) for a in aspects for phi in phis]
    rows = parallel_map(one_q, items, threads)
    stamp(rows, _hashable_config(config))
    axes = [Axis.from_points("aspect", [float(a) for a in aspects]), Axis.from_points("phi_rad", phis)]
    return SweepGrid(axes, ["g", "status"], rows, _meta(config))


def cmd_frequency(config: dict, threads: int = 1) -> SweepGrid:
    """f(z0) with the null height and the valley-side maximum located."""
    if config["mode"] != "quantum":
        raise ConfigError("frequency needs mode 'quantum' (a particle with mass)")
    particle = build_particle(config)
    mass = particle_mass(config)
    (z_axis,) = build_axes(config, ("z0_m",))
    a = float(config["geometry"]["a_m"])
    lam = float(config["geometry"]["lambda_m"])
    allow = bool(config.get("allow_large_amplitude", False))
    z0s = z_axis.values()
    # Validity guard for the whole sweep before any computation.
    for z in z0s:
        Geometry(float(z), a, lam, allow_large_amplitude=allow)

    def point(z0_m: float) -> dict:
        f, label = frequency_curve(particle, a, lam, [z0_m], mass, allow)
        return {"f_Hz": float(f[0]), "regime": str(label[0])}

    meta = _meta(config)
    meta["mass_kg"] = mass
    try:
        z_null = null_z0(particle, lam)
    except NoSignChange:
        z_null = None
    meta["null_z0_m"] = z_null
    lo, hi = float(z0s.min()), float(z0s.max())
    if z_null is not None and lo < z_null < hi:
        lo = z_null * (1.0 + 1e-9)
    z_max, f_max = locate_frequency_max(particle, a, lam, lo, hi, mass)
    meta["max_z0_m"] = z_max
    meta["max_f_Hz"] = f_max
    return run_sweep([z_axis], point, ["f_Hz", "regime"], _hashable_config(config), threads, meta)


def cmd_oracle_check(config: dict, threads: int = 1) -> SweepGrid:
    """Real-space oracle against the closed-form energy on (lambda/z0, orientation) cases."""
    sw = config.get("sweep", {})
    z0 = require_z0(config)
    a = float(config.get("geometry", {}).get("a_m", 0.05 * z0))
    lzs = [float(v) for v in sw.get("lambda_over_z0_list", [0.5, 1.0, 3.0])]
    orients = [(parse_angle(p), parse_angle(t)) for p, t in sw.get("orientations", [[0.0, "0.5pi"], [0.0, 0.0], [0.0, "0.25pi"]])]
    iso, ax = _axis_pair(config)
    allow = bool(config.get("allow_large_amplitude", False))
    items = [(lz, p, t) for lz in lzs for p, t in orients]
    for lz in lzs:
        Geometry(z0, a, lz * z0, allow_large_amplitude=allow)

    def one(item) -> dict:
        lz, phi, theta = item
        lam = lz * z0
        D = DipoleState(moments_for_axis(iso + ax, iso, phi, theta))
        geom = Geometry(z0, a, lam, allow_large_amplitude=allow)
        res = classify_regime(D, geom.u, lam)
        x0 = res.x_min if res.regime is not Regime.NULL else 0.0
        prof = RoughnessProfile.sinusoid(a, lam)
        closed = u1_classical_sinusoid(D, geom, x0)
        fourier = u1_classical_general(D, prof, z0, (x0, 0.0), allow)
        real = oracle_u1_realspace(D, prof, z0, (x0, 0.0), allow_large_amplitude=allow)
        return {
            "lambda_over_z0": lz, "phi_rad": phi, "theta_rad": theta, "x0_m": x0,
            "U1_closed_J": closed, "U1_fourier_J": fourier, "U1_oracle_J": real,
            "rel_err": abs(real - fourier) / abs(fourier) if fourier else abs(real),
        }

    rows = parallel_map(one, items, threads)
    stamp(rows, _hashable_config(config))
    axes = [Axis.from_points("case", range(len(rows)))]
    for i, r in enumerate(rows):
        r["case"] = float(i)
    return SweepGrid(axes, ["lambda_over_z0", "phi_rad", "theta_rad", "x0_m", "U1_closed_J", "U1_fourier_J", "U1_oracle_J", "rel_err"], rows, _meta(config))


def _meta(config: dict) -> dict:
    return {"scenario_hash": scenario_hash(_hashable_config(config)), "code_version": __version__, "mode": config["mode"]}


COMMANDS: dict[str, tuple[Callable[[dict, int], SweepGrid], str]] = {
    "energy": (cmd_energy, "csv"),
    "regime-map": (cmd_regime_map, "csv"),
    "xmin-map": (cmd_xmin_map, "csv"),
    "transition": (cmd_transition, "json"),
    "frequency": (cmd_frequency, "json"),
    "oracle-check": (cmd_oracle_check, "csv"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lateralcp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"lateralcp {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for sweeps")
    parser.add_argument("--allow-large-amplitude", action="store_true", help="skip the a/z0 <= 0.1 guard")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Parse arguments and execute; returns (exit code, output text or error message)."""
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.allow_large_amplitude:
            config["allow_large_amplitude"] = True
            validate(config)
        threads = args.threads or int(config.get("threads", 1))
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
        fn, default_fmt = COMMANDS[args.command]
        fmt = args.format or config.get("output", {}).get("format", default_fmt)
        out = args.out or config.get("output", {}).get("path")
        grid = fn(config, threads)
        text = grid.write(out, fmt)
        return EXIT_OK, "" if out else text
    except PerturbativityViolation as exc:
        return EXIT_GUARD, f"validity guard: {exc}"
    except (ConfigError, DomainError) as exc:
        return EXIT_CONFIG, f"config error: {exc}"
    except (ConvergenceError, NoSignChange, NullAmplitude) as exc:
        return EXIT_NUMERICAL, f"numerical failure: {exc}"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    if text:
        stream.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
