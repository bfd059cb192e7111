"""Configuration: INI file over defaults, environment variables over both.

Sections and keys mirror the problem structure: [problem] N/q/mu,
[constants] working-constant mode and values, [grid] the solve mesh,
[solver] descent controls, [sweep] the mass grid. Any key can be overridden
per process with BHGS_<SECTION>__<KEY> (two underscores), e.g.
BHGS_SOLVER__GRAD_TOL=1e-9.

Numeric validation that encodes the admissible parameter ranges lives in the
domain types themselves (LandscapeParams, SolverConfig, build_grid); this
module only parses, applies precedence, and rejects unknown keys.
"""
from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass

import numpy as np

from .grid import RadialGrid, build_grid
from .landscape import LandscapeParams
from .minimizer import SolverConfig

__all__ = ["ConfigError", "Config", "load_config", "resolve_params",
           "sweep_masses", "DEFAULTS", "ENV_PREFIX"]

ENV_PREFIX = "BHGS_"

DEFAULTS: dict[str, dict[str, str]] = {
    "problem": {"n": "5", "q": "3.0", "mu": "1.0"},
    "constants": {
        "mode": "synthetic",        # synthetic: use c_gn/s_sob below as-is
        "c_gn": "1.0",
        "s_sob": "1.0",
        "gn_n": "1025",             # estimation grids (mode = estimated)
        "gn_r_max": "40.0",
        "sob_n": "8193",
        "sob_r_max": "256.0",
    },
    "grid": {"n": "2049", "r_max": "1000.0"},
    "solver": {
        "step0": "1.0",
        "shrink": "0.5",
        "grow": "1.3",
        "grad_tol": "1e-8",
        "q_tol": "5e-7",
        "max_iter": "2000",
        "seed_shape": "1.0",
        "safeguard_margin": "1e-3",
        "safeguard_max_frac": "0.5",
        "stall_iters": "30",
    },
    "sweep": {
        "k": "8",
        "c_min_frac": "0.05",
        "c_max_frac": "0.95",
        "c_grid": "",               # optional comma list of c/c0 fractions
        "boundary_samples": "100",
        "mono_tol": "1e-8",
        "add_tol": "1e-6",
        "triple_match_tol": "1e-9",
    },
}


class ConfigError(Exception):
    """Carries a machine-readable kind alongside the message."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class Config:
    raw: dict[str, dict[str, str]]

    def get_str(self, section: str, key: str) -> str:
        return self.raw[section][key]

    def get_float(self, section: str, key: str) -> float:
        txt = self.get_str(section, key)
        try:
            return float(txt)
        except ValueError as exc:
            raise ConfigError(
                "config-value", f"[{section}] {key}={txt!r} is not a number") from exc

    def get_int(self, section: str, key: str) -> int:
        txt = self.get_str(section, key)
        try:
            return int(txt)
        except ValueError as exc:
            raise ConfigError(
                "config-value", f"[{section}] {key}={txt!r} is not an integer") from exc

    # typed views -----------------------------------------------------------
    def problem(self, c_gn: float = 1.0, s_sob: float = 1.0) -> LandscapeParams:
        return LandscapeParams(N=self.get_int("problem", "n"),
                               q=self.get_float("problem", "q"),
                               mu=self.get_float("problem", "mu"),
                               C_gn=c_gn, S_sob=s_sob)

    @property
    def constants_mode(self) -> str:
        mode = self.get_str("constants", "mode")
        if mode not in ("synthetic", "estimated"):
            raise ConfigError(
                "config-value",
                f"[constants] mode must be synthetic or estimated, got {mode!r}")
        return mode

    def solve_grid(self) -> RadialGrid:
        return build_grid(self.get_int("problem", "n"),
                          self.get_int("grid", "n"),
                          self.get_float("grid", "r_max"))

    def solver(self) -> SolverConfig:
        return SolverConfig(
            step0=self.get_float("solver", "step0"),
            shrink=self.get_float("solver", "shrink"),
            grow=self.get_float("solver", "grow"),
            grad_tol=self.get_float("solver", "grad_tol"),
            q_tol=self.get_float("solver", "q_tol"),
            max_iter=self.get_int("solver", "max_iter"),
            seed_shape=self.get_float("solver", "seed_shape"),
            safeguard_margin=self.get_float("solver", "safeguard_margin"),
            safeguard_max_frac=self.get_float("solver", "safeguard_max_frac"),
            stall_iters=self.get_int("solver", "stall_iters"),
        )


def load_config(path: str | None = None,
                env: dict[str, str] | None = None) -> Config:
    """Defaults, then the INI file at path (if given), then BHGS_ env keys."""
    raw = {sec: dict(kv) for sec, kv in DEFAULTS.items()}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError("config-not-found", f"config file not found: {path}")
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError("config-parse", f"{path}: {exc}") from exc
        for sec in parser.sections():
            if sec not in raw:
                raise ConfigError("config-value", f"{path}: unknown section [{sec}]")
            for key, val in parser.items(sec):
                if key not in raw[sec]:
                    raise ConfigError(
                        "config-value", f"{path}: unknown key [{sec}] {key}")
                raw[sec][key] = val
    env = os.environ if env is None else env
    for name, val in env.items():
        if not name.startswith(ENV_PREFIX):
            continue
        body = name[len(ENV_PREFIX):]
        if "__" not in body:
            raise ConfigError(
                "config-value",
                f"environment override {name} must look like "
                f"{ENV_PREFIX}SECTION__KEY")
        sec, key = (part.lower() for part in body.split("__", 1))
        if sec not in raw or key not in raw[sec]:
            raise ConfigError(
                "config-value", f"environment override {name} matches no key")
        raw[sec][key] = val
    return Config(raw=raw)


def resolve_params(cfg: Config) -> tuple[LandscapeParams, dict]:
    """LandscapeParams with working constants per the configured mode.

    In estimated mode the constants are numerical lower bounds, so the
    derived c0 and rho0 sit above their true values; the info dict carries
    that caveat for the CLI to surface.
    """
    mode = cfg.constants_mode
    if mode == "synthetic":
        c_gn = cfg.get_float("constants", "c_gn")
        s_sob = cfg.get_float("constants", "s_sob")
        info = {"mode": mode, "C_gn": c_gn, "S_sob": s_sob}
        return cfg.problem(c_gn, s_sob), info
    from .minimizer import estimate_gn_constant, estimate_sobolev_constant
    probe = cfg.problem()
    gn_grid = build_grid(probe.N, cfg.get_int("constants", "gn_n"),
                         cfg.get_float("constants", "gn_r_max"))
    sob_grid = build_grid(probe.N, cfg.get_int("constants", "sob_n"),
                          cfg.get_float("constants", "sob_r_max"))
    c_gn = estimate_gn_constant(probe, gn_grid, probe.q)
    s_sob = estimate_sobolev_constant(probe, sob_grid)
    info = {
        "mode": mode, "C_gn": c_gn, "S_sob": s_sob,
        "warning": ("constants are certified lower bounds; the derived c0 and "
                    "rho0 overestimate their true values"),
    }
    return cfg.problem(c_gn, s_sob), info


def sweep_masses(cfg: Config, c0: float) -> np.ndarray:
    """Ascending mass grid: explicit c_grid fractions of c0, else k
    log-spaced points in (c_min_frac, c_max_frac) * c0."""
    listing = cfg.get_str("sweep", "c_grid").strip()
    if listing:
        try:
            fracs = sorted(float(tok) for tok in listing.split(","))
        except ValueError as exc:
            raise ConfigError(
                "config-value", "[sweep] c_grid is not a comma list of numbers"
            ) from exc
        if len(fracs) < 4:
            raise ConfigError("config-value", "[sweep] c_grid needs >= 4 points")
        if fracs[0] <= 0 or fracs[-1] >= 1:
            raise ConfigError(
                "config-value", "[sweep] c_grid fractions must lie in (0, 1)")
        return c0 * np.array(fracs)
    k = cfg.get_int("sweep", "k")
    if k < 4:
        raise ConfigError("config-value", f"[sweep] k must be >= 4, got {k}")
    lo = cfg.get_float("sweep", "c_min_frac")
    hi = cfg.get_float("sweep", "c_max_frac")
    if not (0 < lo < hi < 1):
        raise ConfigError(
            "config-value",
            f"[sweep] need 0 < c_min_frac < c_max_frac < 1, got {lo}, {hi}")
    return c0 * np.exp(np.linspace(math.log(lo), math.log(hi), k))
