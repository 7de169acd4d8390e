"""Experiment configuration: named experiments, schemas, file loading.

A config is a single JSON object with the keys `experiment`, `params`,
`output_dir`, `formats` and `rng_seed`.  Parameter handling is strict on
purpose: supplying a `params` table replaces the experiment defaults
outright, so a table that omits a required entry (an eps sweep, say) is an
error rather than a silent fallback.  Optional entries keep their defaults.
"""

from __future__ import annotations

import difflib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .artifacts import FORMATS


class ConfigError(ValueError):
    """Malformed configuration; the message carries the offending location."""


@dataclass(frozen=True)
class ParamSpec:
    kind: str
    default: object
    required: bool = False
    help: str = ""


def _p(kind: str, default, required: bool = False, help: str = "") -> ParamSpec:
    return ParamSpec(kind, default, required, help)


@dataclass(frozen=True)
class ExperimentSpec:
    summary: str
    params: Mapping[str, ParamSpec] = field(default_factory=dict)


EXPERIMENTS: dict[str, ExperimentSpec] = {
    "standard-map-portrait": ExperimentSpec(
        "angle-action phase portraits of the standard map over an eps sweep",
        {"eps": _p("number list", [0.0, 0.4, 0.8, 1.2], required=True),
         "n_seeds": _p("positive int", 40),
         "n_steps": _p("positive int", 400)}),
    "golden-breakup": ExperimentSpec(
        "bracket the coupling where the golden invariant circle breaks up",
        {"eps_low": _p("number", 0.1),
         "eps_high": _p("number", 1.4),
         "bracket_width": _p("positive number", 0.05),
         "tol": _p("positive number", 1e-10),
         "n_harmonics": _p("positive int", 64)}),
    "forced-oscillator-portrait": ExperimentSpec(
        "stroboscopic portraits of a periodically forced nonlinear oscillator",
        {"eps": _p("number list", [0.0, 0.001, 0.005, 0.02], required=True),
         "omega0": _p("positive number", 0.6),
         "n_seeds": _p("positive int", 8),
         "n_steps": _p("positive int", 120),
         "tol": _p("positive number", 1e-8)}),
    "averaging-demo": ExperimentSpec(
        "sup-norm gap between a forced flow and its average over [0, 1/eps]",
        {"eps": _p("number list", [0.1, 0.03, 0.01], required=True),
         "x0": _p("number", 0.8),
         "tol": _p("positive number", 1e-10)}),
    "lie-triangle-demo": ExperimentSpec(
        "exact canonical normalization of H = I + eps I cos(phi)"),
    "tihonov": ExperimentSpec(
        "fast-variable tracking of the slow manifold for a driven decay",
        {"eps": _p("number list", [0.1, 0.05, 0.02], required=True),
         "t_final": _p("positive number", 3.0)}),
    "gevrey-truncation": ExperimentSpec(
        "optimal truncation of a factorially divergent expansion",
        {"eps": _p("number list", [0.2, 0.1, 0.05]),
         "n_terms": _p("positive int", 21)}),
    "hopf-delay": ExperimentSpec(
        "bifurcation delay of a slow passage through a Hopf point",
        {"y0": _p("number", -0.5),
         "eps": _p("positive number", 0.01),
         "r0": _p("positive number", 0.1),
         "r_threshold": _p("positive number", 0.1)}),
    "buffer-point": ExperimentSpec(
        "delay saturation at the buffer point of an analytic slow drive",
        {"t0_values": _p("number list", [-2.0, -0.5]),
         "eps": _p("positive number", 0.005)}),
    "vdp-relaxation": ExperimentSpec(
        "relaxation-oscillation metrics of the van der Pol cycle",
        {"eps": _p("number list", [1e-4, 10.0 ** -3.3, 10.0 ** -2.5, 1e-2],
                   required=True),
         "tol": _p("positive number", 1e-9)}),
    "tb-diagram": ExperimentSpec(
        "two-parameter diagram of the double-zero (Takens-Bogdanov) unfolding",
        {"lambda1": _p("number list",
                       [-0.09, -0.064, -0.04, -0.0225, -0.01, 0.01]),
         "lambda2": _p("number list",
                       [-0.1, -0.05, 0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3,
                        0.35]),
         "locus_nodes": _p("positive int", 3)}),
    "cusp-diagram": ExperimentSpec(
        "equilibrium count of the cubic family over a parameter rectangle",
        {"lambda1_range": _p("number pair", [-1.5, 1.5]),
         "lambda2_range": _p("number pair", [-1.0, 1.0]),
         "n": _p("positive int", 41)}),
    "acceptance-suite": ExperimentSpec(
        "machine-readable pass/fail report over the acceptance criteria",
        {"criteria": _p("criteria list", list(range(1, 13)))}),
}

_TOP_LEVEL_KEYS = ("experiment", "params", "output_dir", "formats", "rng_seed")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict
    output_dir: str
    formats: tuple[str, ...]
    rng_seed: int

    def manifest_dict(self) -> dict:
        return {"experiment": self.experiment,
                "params": dict(self.params),
                "output_dir": self.output_dir,
                "formats": list(self.formats),
                "rng_seed": self.rng_seed}

    def wants(self, fmt: str) -> bool:
        return fmt in self.formats


def nearest_experiment(name: str) -> str | None:
    hits = difflib.get_close_matches(name, EXPERIMENTS, n=1, cutoff=0.4)
    return hits[0] if hits else None


def _is_number(v) -> bool:
    return (isinstance(v, (int, float)) and not isinstance(v, bool)
            and math.isfinite(v))


def _check_param(experiment: str, key: str, kind: str, value):
    where = f"{experiment}: parameter '{key}'"
    if kind == "number":
        if not _is_number(value):
            raise ConfigError(f"{where} must be a finite number")
        return float(value)
    if kind == "positive number":
        if not _is_number(value) or value <= 0:
            raise ConfigError(f"{where} must be a positive number")
        return float(value)
    if kind == "positive int":
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"{where} must be a positive integer")
        return int(value)
    if kind == "number list":
        if (not isinstance(value, (list, tuple)) or len(value) == 0
                or not all(_is_number(v) for v in value)):
            raise ConfigError(f"{where} must be a non-empty list of numbers")
        return [float(v) for v in value]
    if kind == "number pair":
        if (not isinstance(value, (list, tuple)) or len(value) != 2
                or not all(_is_number(v) for v in value)
                or not value[0] < value[1]):
            raise ConfigError(f"{where} must be an increasing pair [lo, hi]")
        return [float(value[0]), float(value[1])]
    if kind == "criteria list":
        if (not isinstance(value, (list, tuple)) or len(value) == 0
                or not all(isinstance(v, int) and not isinstance(v, bool)
                           and 1 <= v <= 12 for v in value)):
            raise ConfigError(f"{where} must be a non-empty list of "
                              f"criterion ids in 1..12")
        return [int(v) for v in value]
    raise AssertionError(f"unknown schema kind {kind!r}")


def _resolve_params(experiment: str, table) -> dict:
    spec = EXPERIMENTS[experiment].params
    if table is None:
        return {k: _check_param(experiment, k, ps.kind, ps.default)
                for k, ps in spec.items()}
    if not isinstance(table, Mapping):
        raise ConfigError(f"{experiment}: 'params' must be a JSON object")
    unknown = sorted(set(table) - set(spec))
    if unknown:
        allowed = ", ".join(spec) if spec else "none"
        raise ConfigError(f"{experiment}: unknown parameter "
                          f"'{unknown[0]}'; allowed parameters: {allowed}")
    resolved = {}
    for key, ps in spec.items():
        if key in table:
            resolved[key] = _check_param(experiment, key, ps.kind, table[key])
        elif ps.required:
            raise ConfigError(f"{experiment}: required parameter '{key}' is "
                              f"missing from params")
        else:
            resolved[key] = _check_param(experiment, key, ps.kind, ps.default)
    return resolved


def _resolve_formats(value) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if (not isinstance(value, (list, tuple)) or len(value) == 0
            or not all(isinstance(v, str) for v in value)):
        raise ConfigError("'formats' must be a non-empty list drawn from "
                          + ", ".join(FORMATS))
    bad = sorted(set(value) - set(FORMATS))
    if bad:
        raise ConfigError(f"unknown format '{bad[0]}'; valid formats: "
                          + ", ".join(FORMATS))
    return tuple(f for f in FORMATS if f in value)


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: the top level must be a JSON object")
    return raw


def resolve_config(raw: Mapping, *, experiment: str | None = None,
                   output_dir: str | None = None,
                   formats=None, rng_seed: int | None = None
                   ) -> ExperimentConfig:
    """Merge a raw config mapping with command-line overrides."""
    unknown = sorted(set(raw) - set(_TOP_LEVEL_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key '{unknown[0]}'; valid keys: "
                          + ", ".join(_TOP_LEVEL_KEYS))

    name = experiment if experiment is not None else raw.get("experiment")
    if name is None:
        raise ConfigError("no experiment selected; name one on the command "
                          "line or set 'experiment' in the config file")
    if not isinstance(name, str) or name not in EXPERIMENTS:
        near = nearest_experiment(str(name))
        hint = (f"; did you mean '{near}'?" if near
                else "; valid names: " + ", ".join(EXPERIMENTS))
        raise ConfigError(f"unknown experiment '{name}'" + hint)

    params = _resolve_params(name, raw.get("params"))

    fmt_value = formats if formats is not None else raw.get("formats")
    fmts = _resolve_formats(fmt_value) if fmt_value is not None else FORMATS

    out = output_dir if output_dir is not None else raw.get("output_dir")
    if out is None:
        out = name
    if not isinstance(out, str) or not out:
        raise ConfigError("'output_dir' must be a non-empty string")

    seed = rng_seed if rng_seed is not None else raw.get("rng_seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("'rng_seed' must be an integer")

    return ExperimentConfig(experiment=name, params=params, output_dir=out,
                            formats=fmts, rng_seed=seed)
