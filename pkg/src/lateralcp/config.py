"""Scenario configuration: schema validation, angle parsing, object construction."""

from __future__ import annotations

import json
import math
import re
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .classical import DipoleState, Geometry
from .errors import ConfigError
from .polarizability import LorentzOscillator, SpheroidParticle, load_catalog
from .sweep import Axis

_ANGLE = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*(deg|rad|pi)\s*$")


def load_schema() -> dict:
    return json.loads((resources.files("lateralcp") / "data" / "config.schema.json").read_text())


def parse_angle(value: Any) -> float:
    """Radians from a number or from '<x>deg', '<x>rad', '<x>pi'."""
    if isinstance(value, bool):
        raise ConfigError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    m = _ANGLE.match(str(value))
    if not m:
        raise ConfigError(f"angle {value!r} needs a unit suffix: deg, rad or pi")
    x, unit = float(m.group(1)), m.group(2)
    if unit == "deg":
        return math.radians(x)
    if unit == "pi":
        return x * math.pi
    return x


def validate(config: dict) -> dict:
    try:
        jsonschema.validate(config, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    return config


def load_config(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return validate(data)


def require(config: dict, *keys: str) -> Any:
    node: Any = config
    for k in keys:
        if not isinstance(node, dict) or k not in node:
            raise ConfigError(f"config is missing {'.'.join(keys)}")
        node = node[k]
    return node


def build_material(spec: Any) -> LorentzOscillator:
    if isinstance(spec, str):
        catalog = load_catalog()
        if spec not in catalog:
            raise ConfigError(f"unknown material {spec!r}; catalog has {sorted(catalog)}")
        return catalog[spec]
    return LorentzOscillator(spec["B1"], spec["omega1_rad_s"], spec.get("name", ""), spec.get("density_kg_m3"))


def build_particle(config: dict) -> SpheroidParticle:
    p = require(config, "particle")
    return SpheroidParticle(
        semi_major=require(config, "particle", "semi_major_m"),
        semi_minor=require(config, "particle", "semi_minor_m"),
        material=build_material(p.get("material", "diamond")),
        density=p.get("density_kg_m3"),
        phi=parse_angle(p.get("phi", 0.0)),
        theta=parse_angle(p.get("theta", 0.0)),
    )


def particle_mass(config: dict) -> float:
    p = config.get("particle", {})
    if "mass_kg" in p:
        return float(p["mass_kg"])
    particle = build_particle(config)
    if particle.mass_density is None:
        raise ConfigError("frequency needs particle.density_kg_m3, particle.mass_kg, or a material with a density")
    return particle.mass


def build_dipole(config: dict) -> DipoleState:
    d = require(config, "dipole")
    return DipoleState.from_angles(
        float(d.get("magnitude_C_m", 1.0)), parse_angle(d.get("phi", 0.0)), parse_angle(d.get("theta", math.pi / 2))
    )


def build_geometry(config: dict, z0: float | None = None) -> Geometry:
    g = require(config, "geometry")
    return Geometry(
        z0=float(z0 if z0 is not None else require(config, "geometry", "z0_m")),
        a=float(require(config, "geometry", "a_m")),
        lam=float(require(config, "geometry", "lambda_m")),
        x0=float(g.get("x0_m", 0.0)),
        allow_large_amplitude=bool(config.get("allow_large_amplitude", False)),
    )


def _number(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}")
    return float(value)


_AXIS_COLUMNS = {"lambda_over_z0": "lambda_over_z0", "phi": "phi_rad", "theta": "theta_rad", "z0_m": "z0_m"}


def build_axes(config: dict, required: tuple[str, ...]) -> list[Axis]:
    """Sweep axes named in ``required``, in that order, with angles converted to radians."""
    specs = {a["name"]: a for a in config.get("sweep", {}).get("axes", [])}
    axes = []
    for name in required:
        if name not in specs:
            raise ConfigError(f"sweep.axes needs an axis named {name!r}")
        s = specs[name]
        conv = parse_angle if name in ("phi", "theta") else _number
        axes.append(Axis(_AXIS_COLUMNS[name], conv(s["start"]), conv(s["stop"]), int(s["count"]), s.get("scale", "linear")))
    return axes
