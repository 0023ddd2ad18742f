"""Run configuration: a small versioned JSON schema.

One config file drives every CLI subcommand. JSON was chosen over looser
formats because outputs must be byte-reproducible and the stdlib parser
reports line/column positions for diagnostics. Smooth potentials enter as
named closed forms sampled at slab midpoints with a user-chosen step; there
is deliberately no expression evaluator.

Example::

    {
      "version": 1,
      "profile": {"slabs": [[0.0, 1.0, 1.0]], "u_left": 2.0, "u_right": 2.0},
      "energy": {"start": 0.5, "stop": 2.5, "count": 101},
      "transforms": [{"kind": "inversion", "alpha": 0.5}],
      "cell": [0.0, 1.0],
      "incidence": "left",
      "tolerances": {"constancy_tol": 1e-9}
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .output import json_text
from .potential import PotentialProfile, Slab, SymmetryTransform, build_profile

__all__ = [
    "Tolerances",
    "SmoothSpec",
    "ProfileSpec",
    "RunConfig",
    "parse_config",
    "emit_config",
]

SCHEMA_VERSION = 1

SMOOTH_FORMS = ("gaussian", "cosine")


@dataclass(frozen=True)
class Tolerances:
    """Numeric knobs; None means the profile-dependent default applies."""

    tol_u: float | None = None
    constancy_tol: float = 1e-9
    map_tol: float = 1e-9
    field_tol: float = 1e-6
    min_width: float | None = None
    grid_step: float | None = None
    pad: float | None = None
    n_samples: int = 17


@dataclass(frozen=True)
class SmoothSpec:
    """Named smooth potential bump on top of the background.

    gaussian: u(x) = u_bg + amplitude * exp(-(x-center)^2 / (2 width^2))
    cosine:   u(x) = u_bg + amplitude * cos(2 pi (x-center) / width)
    sampled at slab midpoints over [x_min, x_max] with the given step.
    """

    form: str
    amplitude: float
    center: float
    width: float
    x_min: float
    x_max: float
    step: float

    def sample(self, x: np.ndarray, u_bg: float) -> np.ndarray:
        if self.form == "gaussian":
            return u_bg + self.amplitude * np.exp(
                -((x - self.center) ** 2) / (2.0 * self.width**2)
            )
        return u_bg + self.amplitude * np.cos(
            2.0 * np.pi * (x - self.center) / self.width
        )


@dataclass(frozen=True)
class ProfileSpec:
    """Raw profile description, buildable into a PotentialProfile."""

    u_left: float
    u_right: float
    slabs: tuple[tuple[float, float, float], ...] | None = None
    smooth: SmoothSpec | None = None

    def build(self) -> PotentialProfile:
        if self.smooth is not None:
            sm = self.smooth
            span = sm.x_max - sm.x_min
            n = max(1, int(math.ceil(span / sm.step)))
            w = span / n
            mids = sm.x_min + w * (np.arange(n) + 0.5)
            us = sm.sample(mids, self.u_left)
            slabs = [Slab(sm.x_min + i * w, w, float(us[i])) for i in range(n)]
            return build_profile(slabs, self.u_left, self.u_right)
        return build_profile(
            [Slab(*t) for t in (self.slabs or ())], self.u_left, self.u_right
        )


@dataclass(frozen=True)
class RunConfig:
    version: int
    profile_spec: ProfileSpec
    energies: tuple[float, ...]
    transforms: tuple[SymmetryTransform, ...] = ()
    cell: tuple[float, float] | None = None
    incidence: str = "left"
    tolerances: Tolerances = field(default_factory=Tolerances)


def _need(obj: dict, key: str, types, path: str):
    if key not in obj:
        raise ConfigError(f"{path}: missing required field '{key}'")
    return _typed(obj[key], types, f"{path}.{key}")


def _typed(val, types, path: str):
    if types is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {type(val).__name__}")
        if not math.isfinite(val):
            raise ConfigError(f"{path}: number must be finite, got {val!r}")
        return float(val)
    if not isinstance(val, types) or (types is int and isinstance(val, bool)):
        name = types.__name__ if isinstance(types, type) else "value"
        raise ConfigError(f"{path}: expected {name}, got {type(val).__name__}")
    return val


def _parse_profile(obj, path: str) -> ProfileSpec:
    obj = _typed(obj, dict, path)
    u_left = _need(obj, "u_left", float, path)
    u_right = _need(obj, "u_right", float, path)
    known = {"u_left", "u_right", "slabs", "smooth"}
    for k in obj:
        if k not in known:
            raise ConfigError(f"{path}.{k}: unknown field")
    if ("slabs" in obj) == ("smooth" in obj):
        raise ConfigError(f"{path}: give exactly one of 'slabs' or 'smooth'")
    if "slabs" in obj:
        raw = _typed(obj["slabs"], list, f"{path}.slabs")
        slabs = []
        for i, row in enumerate(raw):
            row = _typed(row, list, f"{path}.slabs[{i}]")
            if len(row) != 3:
                raise ConfigError(
                    f"{path}.slabs[{i}]: expected [x_left, width, u], got {row!r}"
                )
            slabs.append(tuple(_typed(v, float, f"{path}.slabs[{i}][{k}]")
                               for k, v in enumerate(row)))
        return ProfileSpec(u_left, u_right, slabs=tuple(slabs))
    sm = _typed(obj["smooth"], dict, f"{path}.smooth")
    form = _need(sm, "form", str, f"{path}.smooth")
    if form not in SMOOTH_FORMS:
        raise ConfigError(
            f"{path}.smooth.form: unknown form {form!r}, choose from {SMOOTH_FORMS}"
        )
    kwargs = {
        k: _need(sm, k, float, f"{path}.smooth")
        for k in ("amplitude", "center", "width", "x_min", "x_max", "step")
    }
    for k in sm:
        if k != "form" and k not in kwargs:
            raise ConfigError(f"{path}.smooth.{k}: unknown field")
    if kwargs["step"] <= 0 or kwargs["x_max"] <= kwargs["x_min"] or kwargs["width"] <= 0:
        raise ConfigError(f"{path}.smooth: need x_min < x_max, step > 0, width > 0")
    if u_left != u_right:
        raise ConfigError(
            f"{path}: smooth profiles sit on one background, u_left must equal u_right"
        )
    return ProfileSpec(u_left, u_right, smooth=SmoothSpec(form, **kwargs))


def _parse_energy(obj, path: str) -> tuple[float, ...]:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return (_typed(obj, float, path),)
    if isinstance(obj, list):
        if not obj:
            raise ConfigError(f"{path}: energy list must not be empty")
        return tuple(_typed(v, float, f"{path}[{i}]") for i, v in enumerate(obj))
    if isinstance(obj, dict):
        start = _need(obj, "start", float, path)
        stop = _need(obj, "stop", float, path)
        count = _need(obj, "count", int, path)
        if count < 1:
            raise ConfigError(f"{path}.count: must be >= 1, got {count}")
        for k in obj:
            if k not in ("start", "stop", "count"):
                raise ConfigError(f"{path}.{k}: unknown field")
        return tuple(float(v) for v in np.linspace(start, stop, count))
    raise ConfigError(f"{path}: expected number, list, or sweep object")


def _parse_transform(obj, path: str) -> SymmetryTransform:
    obj = _typed(obj, dict, path)
    if "kind" in obj:
        kind = _typed(obj["kind"], str, f"{path}.kind")
        if kind == "inversion":
            return SymmetryTransform.inversion(_need(obj, "alpha", float, path))
        if kind == "translation":
            return SymmetryTransform.translation(_need(obj, "shift", float, path))
        raise ConfigError(f"{path}.kind: expected 'inversion' or 'translation'")
    sigma = _need(obj, "sigma", int, path)
    if sigma not in (-1, 1):
        raise ConfigError(f"{path}.sigma: must be -1 or 1, got {sigma}")
    return SymmetryTransform(sigma, _need(obj, "rho", float, path))


def _parse_tolerances(obj, path: str) -> Tolerances:
    obj = _typed(obj, dict, path)
    valid = {f.name for f in fields(Tolerances)}
    kwargs = {}
    for k, v in obj.items():
        if k not in valid:
            raise ConfigError(f"{path}.{k}: unknown tolerance (choose from {sorted(valid)})")
        if v is None:
            kwargs[k] = None
        elif k == "n_samples":
            kwargs[k] = _typed(v, int, f"{path}.{k}")
        else:
            kwargs[k] = _typed(v, float, f"{path}.{k}")
    return Tolerances(**kwargs)


def parse_config(source) -> RunConfig:
    """Parse a config file (path) or raw JSON text into a RunConfig.

    Raises ConfigError with a field path (or the JSON parser's line and
    column) on any schema violation. Physics checks happen later, when the
    profile is built and solved.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and source.strip().endswith(".json")):
        p = Path(source)
        try:
            text = p.read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {p}: {e}") from e
    else:
        text = str(source)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    raw = _typed(raw, dict, "config")
    version = _need(raw, "version", int, "config")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"config.version: schema version {version} unsupported, this build reads {SCHEMA_VERSION}"
        )
    known = {"version", "profile", "energy", "transforms", "cell", "incidence", "tolerances"}
    for k in raw:
        if k not in known:
            raise ConfigError(f"config.{k}: unknown field")
    profile_spec = _parse_profile(_need(raw, "profile", dict, "config"), "config.profile")
    energies = _parse_energy(raw.get("energy", 1.0), "config.energy")
    transforms = tuple(
        _parse_transform(t, f"config.transforms[{i}]")
        for i, t in enumerate(_typed(raw.get("transforms", []), list, "config.transforms"))
    )
    cell = None
    if raw.get("cell") is not None:
        cl = _typed(raw["cell"], list, "config.cell")
        if len(cl) != 2:
            raise ConfigError(f"config.cell: expected [left, right], got {cl!r}")
        cell = (
            _typed(cl[0], float, "config.cell[0]"),
            _typed(cl[1], float, "config.cell[1]"),
        )
    incidence = raw.get("incidence", "left")
    if incidence not in ("left", "right"):
        raise ConfigError(f"config.incidence: expected 'left' or 'right', got {incidence!r}")
    tolerances = _parse_tolerances(raw.get("tolerances", {}), "config.tolerances")
    return RunConfig(version, profile_spec, energies, transforms, cell, incidence, tolerances)


def emit_config(cfg: RunConfig) -> str:
    """Canonical JSON text of a config; parse_config(emit_config(c)) == c."""
    prof: dict = {"u_left": cfg.profile_spec.u_left, "u_right": cfg.profile_spec.u_right}
    if cfg.profile_spec.smooth is not None:
        sm = cfg.profile_spec.smooth
        prof["smooth"] = {
            "form": sm.form,
            "amplitude": sm.amplitude,
            "center": sm.center,
            "width": sm.width,
            "x_min": sm.x_min,
            "x_max": sm.x_max,
            "step": sm.step,
        }
    else:
        prof["slabs"] = [list(s) for s in (cfg.profile_spec.slabs or ())]
    doc = {
        "version": cfg.version,
        "profile": prof,
        "energy": list(cfg.energies),
        "transforms": [{"sigma": t.sigma, "rho": t.rho} for t in cfg.transforms],
        "cell": list(cfg.cell) if cfg.cell is not None else None,
        "incidence": cfg.incidence,
        "tolerances": {
            "tol_u": cfg.tolerances.tol_u,
            "constancy_tol": cfg.tolerances.constancy_tol,
            "map_tol": cfg.tolerances.map_tol,
            "field_tol": cfg.tolerances.field_tol,
            "min_width": cfg.tolerances.min_width,
            "grid_step": cfg.tolerances.grid_step,
            "pad": cfg.tolerances.pad,
            "n_samples": cfg.tolerances.n_samples,
        },
    }
    return json_text(doc)


def override_tolerances(cfg: RunConfig, **kwargs) -> RunConfig:
    """New config with the given tolerance fields replaced (None = keep)."""
    updates = {k: v for k, v in kwargs.items() if v is not None}
    if not updates:
        return cfg
    return replace(cfg, tolerances=replace(cfg.tolerances, **updates))
