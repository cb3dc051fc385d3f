"""INI configuration for the command line.

Sections and keys (all optional; defaults in brackets)::

    [params]  mu [1] xi [0] lam [1] alpha [1] a [1] gamma [2] eps [0.1] zeta [1]
    [grid]    extent [6.283185307179586, 6.283185307179586]
              points [64, 64]      boundary [periodic | dirichlet-rectangle]
    [scheme]  dt [2e-3] t_end [0.5] imex_theta [1] cfl_safety [0.9]
              director_substeps [1] output_every [10] seed [1]
    [sweep]   eps [0.1, 0.05, 0.025, 0.0125]  workers [1]  test_mode [1, 0]

Lists are comma separated.  Unknown sections or keys are errors, so a
typo never silently falls back to a default.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ConfigError
from .fields import Grid, Params
from .trajectory import SchemeConfig

_PARAM_KEYS = {f.name for f in fields(Params)}
_SCHEME_KEYS = {f.name for f in fields(SchemeConfig)}
_ALLOWED = {
    "params": _PARAM_KEYS,
    "grid": {"extent", "points", "boundary"},
    "scheme": _SCHEME_KEYS | {"seed"},
    "sweep": {"eps", "workers", "test_mode"},
}


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(" ", "").split(",") if x)


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


@dataclass
class RunConfig:
    params: Params = field(default_factory=Params)
    grid: Grid = field(default_factory=lambda: Grid((2 * np.pi, 2 * np.pi), (64, 64)))
    scheme: SchemeConfig = field(default_factory=lambda: SchemeConfig(dt=2e-3, t_end=0.5,
                                                                      output_every=10))
    seed: int = 1
    eps_list: tuple = (0.1, 0.05, 0.025, 0.0125)
    workers: int = 1
    test_mode: tuple = (1, 0)


def parse_config(text: str) -> RunConfig:
    """Parse INI text into a :class:`RunConfig`; any problem raises ConfigError."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    for sec in cp.sections():
        if sec not in _ALLOWED:
            raise ConfigError(f"unknown section [{sec}]")
        extra = set(cp[sec]) - _ALLOWED[sec]
        if extra:
            raise ConfigError(f"unknown keys in [{sec}]: {', '.join(sorted(extra))}")
    cfg = RunConfig()
    try:
        if cp.has_section("params"):
            kw = {k: float(v) for k, v in cp["params"].items()}
            cfg.params = Params(**kw)
        if cp.has_section("grid"):
            g = cp["grid"]
            extent = _floats(g.get("extent", "6.283185307179586, 6.283185307179586"))
            points = _ints(g.get("points", "64, 64"))
            cfg.grid = Grid(extent, points, g.get("boundary", "periodic"))
        if cp.has_section("scheme"):
            s = dict(cp["scheme"])
            cfg.seed = int(s.pop("seed", cfg.seed))
            kw = {}
            for k, v in s.items():
                kw[k] = int(v) if k in ("director_substeps", "output_every") else float(v)
            base = dict(dt=2e-3, t_end=0.5, output_every=10)
            base.update(kw)
            cfg.scheme = SchemeConfig(**base)
        if cp.has_section("sweep"):
            w = cp["sweep"]
            if "eps" in w:
                cfg.eps_list = _floats(w["eps"])
            cfg.workers = int(w.get("workers", cfg.workers))
            if "test_mode" in w:
                cfg.test_mode = _ints(w["test_mode"])
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    if any(not 0 < e <= 1 for e in cfg.eps_list):
        raise ConfigError("sweep eps values must lie in (0, 1]")
    if len(cfg.test_mode) != cfg.grid.dim:
        raise ConfigError("test_mode needs one integer per grid axis")
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
