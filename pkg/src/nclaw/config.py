"""Flat key = value configuration files with one section per scenario.

An empty file is a valid configuration (all defaults). Unknown sections or
keys are rejected with the offending line number; values are typed after
the defaults. parse/serialize round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

__all__ = ["ConfigError", "LabConfig", "parse_config", "DEFAULTS"]


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "lab": {"out_dir": "runs", "seed": 0},
    "ce1": {
        "epsilon": 0.05,
        "n_particles": 2400,
        "t_end": 0.25,
        "godunov_n": 4096,
        "solver": "particles",
        "gate": True,
    },
    "ce2": {
        "epsilon": 0.05,
        "n_particles": 1500,
        "t_end": 0.5,
        "godunov_n": 4096,
        "gate": True,
    },
    "ce3": {
        "epsilon": 0.05,
        "n_particles": 2000,
        "t_end": 0.5,
        "godunov_n": 4096,
        "gate": True,
    },
    "rate": {
        "nu": 0.1,
        "p": 2.0,
        "eps_list": [0.2, 0.1, 0.05, 0.025],
        "kernel_shape": "one_sided_left",
        "t_end": 1.0,
        "width": 0.3,
        "gate": True,
    },
    "visc": {
        "epsilon": 0.1,
        "nu_list": [0.1, 0.03, 0.01, 0.003],
        "t_end": 0.5,
        "width": 0.6,
        "gate": True,
    },
    "oracle": {
        "variant": "step",
        "t": 0.5,
        "x_min": -4.0,
        "x_max": 4.0,
        "n_cells": 2048,
    },
}

_POSITIVE_KEYS = {"epsilon", "t_end", "nu", "width", "t"}
_POSITIVE_INT_KEYS = {"n_particles", "godunov_n", "n_cells"}


@dataclass
class LabConfig:
    """Fully resolved configuration: one dict of settings per scenario."""

    sections: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        full = {s: dict(d) for s, d in DEFAULTS.items()}
        for s, d in self.sections.items():
            full[s].update(d)
        self.sections = full

    def __getitem__(self, section: str) -> dict:
        return self.sections[section]

    def to_text(self) -> str:
        lines = []
        for section in sorted(self.sections):
            lines.append(f"[{section}]")
            for key in sorted(self.sections[section]):
                lines.append(f"{key} = {_format_value(self.sections[section][key])}")
            lines.append("")
        return "\n".join(lines)


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ", ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_value(section: str, key: str, raw: str, lineno: int):
    default = DEFAULTS[section][key]
    raw = raw.strip()
    try:
        if isinstance(default, bool):
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, list):
            return [float(x) for x in raw.split(",") if x.strip()]
        return raw
    except ValueError:
        raise ConfigError(
            f"line {lineno}: key {key!r} expects a "
            f"{type(default).__name__}, got {raw!r}"
        ) from None


def _validate(section: str, key: str, value, lineno: int):
    if key in _POSITIVE_KEYS and not value > 0:
        raise ConfigError(f"line {lineno}: {key} must be > 0")
    if key in _POSITIVE_INT_KEYS and not value > 0:
        raise ConfigError(f"line {lineno}: {key} must be > 0")
    if key in ("eps_list", "nu_list"):
        if not value or any(x <= 0 for x in value):
            raise ConfigError(f"line {lineno}: {key} entries must be > 0")
    if key == "solver" and value not in ("particles", "lax_friedrichs"):
        raise ConfigError(f"line {lineno}: solver must be particles|lax_friedrichs")
    if key == "kernel_shape" and value not in ("even_bump", "one_sided_left"):
        raise ConfigError(
            f"line {lineno}: kernel_shape must be even_bump|one_sided_left"
        )
    if key == "variant" and value not in ("step", "odd"):
        raise ConfigError(f"line {lineno}: variant must be step|odd")
    return value


def parse_config(text: str) -> LabConfig:
    """Parse flat "key = value" sections; unknown keys are errors."""
    sections: dict = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith(("#", ";")):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name not in DEFAULTS:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            current = name
            sections.setdefault(name, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {stripped!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside of any [section]")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in DEFAULTS[current]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{current}]")
        value = _parse_value(current, key, raw, lineno)
        sections[current][key] = _validate(current, key, value, lineno)
    return LabConfig(sections)
