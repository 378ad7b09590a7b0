"""Run configuration: a YAML key-value document merged with command-line flags."""

from dataclasses import dataclass, fields, replace
import math

import yaml

from .errors import ConfigError
from .su2 import ProblemParams

# YAML keys that differ from the attribute name
_ALIASES = {"lambda": "lam"}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on. Times are physical (t, not tau)."""

    omega0: float = None
    gamma1: float = None
    gamma2: float = None
    times: tuple = ()
    target: str = None
    lam: float = None
    resolution: int = 2048
    tol: float = 1e-8
    out: str = None
    seed: int = 0
    samples: int = 100
    gamma_max: float = 4.0
    grid: dict = None
    oracle: bool = True
    alternate: bool = True
    traces: bool = True
    extremal: dict = None

    def params(self, need=("omega0", "gamma1", "gamma2")):
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            raise ConfigError(f"missing parameter(s): {', '.join(missing)}")
        try:
            return ProblemParams(self.omega0, self.gamma1, self.gamma2)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            out["lambda" if f.name == "lam" else f.name] = v
        return out


def _as_float(name, v):
    if isinstance(v, bool):
        raise ConfigError(f"{name} must be a number")
    try:
        x = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {v!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{name} must be finite")
    return x


def _as_times(v):
    if isinstance(v, str):
        v = [s for s in v.replace(",", " ").split() if s]
    if isinstance(v, (int, float)):
        v = [v]
    times = tuple(_as_float("times", t) for t in v)
    if any(t < 0 for t in times):
        raise ConfigError("times must be non-negative")
    return times


def _as_grid(v):
    if v is None:
        return None
    if not isinstance(v, dict):
        raise ConfigError("grid must be a mapping of gamma1/gamma2/lambda lists")
    out = {}
    for k, vals in v.items():
        if k not in ("gamma1", "gamma2", "lambda"):
            raise ConfigError(f"unknown grid axis {k!r}")
        if vals is None:
            vals = []
        if not isinstance(vals, (list, tuple)):
            vals = [vals]
        out[k] = [_as_float(f"grid.{k}", x) for x in vals]
    return out


def _validate(values):
    conv = {}
    for k, v in values.items():
        if v is None:
            conv[k] = None
        elif k in ("omega0", "gamma1", "gamma2", "lam", "tol", "gamma_max"):
            conv[k] = _as_float(k, v)
        elif k in ("resolution", "seed", "samples"):
            try:
                ok = not isinstance(v, bool) and int(v) == float(v)
            except (TypeError, ValueError):
                ok = False
            if not ok:
                raise ConfigError(f"{k} must be an integer, got {v!r}")
            conv[k] = int(v)
        elif k == "times":
            conv[k] = _as_times(v)
        elif k == "grid":
            conv[k] = _as_grid(v)
        elif k in ("oracle", "alternate", "traces"):
            if not isinstance(v, bool):
                raise ConfigError(f"{k} must be true or false")
            conv[k] = v
        elif k in ("target", "out"):
            conv[k] = str(v)
        elif k == "extremal":
            if not isinstance(v, dict):
                raise ConfigError("extremal must be a mapping with branch, omega, phi, t")
            conv[k] = dict(v)
        else:
            conv[k] = v
    if conv.get("resolution") is not None and conv["resolution"] < 16:
        raise ConfigError("resolution must be at least 16")
    if conv.get("tol") is not None and conv["tol"] <= 0:
        raise ConfigError("tol must be positive")
    if conv.get("samples") is not None and conv["samples"] < 0:
        raise ConfigError("samples must be non-negative")
    return conv


def load_config(path):
    """Read a YAML mapping; unknown keys are configuration errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path!r}: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a key-value mapping")
    return data


def build_config(file_values=None, overrides=None):
    """Merge file values with flag overrides (flags win) into a RunConfig."""
    names = {f.name for f in fields(RunConfig)}
    merged = {}
    for src in (file_values or {}, overrides or {}):
        for key, v in src.items():
            name = _ALIASES.get(key, key)
            if name not in names:
                raise ConfigError(f"unknown config key {key!r}")
            if src is overrides and v is None:
                continue
            merged[name] = v
    return replace(RunConfig(), **_validate(merged))
