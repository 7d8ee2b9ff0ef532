"""Experiment configuration: JSON in, validated dataclass out."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from ..cycle_type import (
    CycleType,
    all_p_cycles,
    ewens_type,
    fixed_plus_cycle,
    from_counts,
    involution_type,
)

CONFIG_FIELDS = {"name", "type_spec", "n", "trials", "seed", "params", "tolerances"}
REQUIRED_FIELDS = {"name", "type_spec", "n", "trials"}
TYPE_KINDS = {
    "counts": {"counts"},
    "all_p_cycles": {"p"},
    "single_cycle": set(),
    "involution": {"fixed", "alpha"},
    "fixed_plus_cycle": {"fixed", "exponent"},
    "ewens": {"theta"},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TypeSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in TYPE_KINDS:
            raise ConfigError(f"unknown type_spec kind {self.kind!r}; expected one of {sorted(TYPE_KINDS)}")
        extra = set(self.params) - TYPE_KINDS[self.kind]
        if extra:
            raise ConfigError(f"unknown params for {self.kind}: {sorted(extra)}")

    @property
    def is_random(self) -> bool:
        return self.kind == "ewens"

    def fixed_type(self, n: int) -> CycleType:
        """The deterministic cycle type of size ``n`` (not for random kinds)."""
        k, p = self.kind, self.params
        if k == "counts":
            t = from_counts(p["counts"])
            if t.n != n:
                raise ConfigError(f"counts describe n={t.n}, config says n={n}")
            return t
        if k == "all_p_cycles":
            return all_p_cycles(n, int(p["p"]))
        if k == "single_cycle":
            return fixed_plus_cycle(n, 0)
        if k == "involution":
            if "fixed" in p:
                return involution_type(n, int(p["fixed"]))
            fixed = int(round(float(p["alpha"]) * sqrt(n)))
            if (n - fixed) % 2:
                fixed += 1 if fixed < n else -1
            return involution_type(n, fixed)
        if k == "fixed_plus_cycle":
            if "fixed" in p:
                return fixed_plus_cycle(n, int(p["fixed"]))
            return fixed_plus_cycle(n, int(round(n ** float(p["exponent"]))))
        raise ConfigError(f"type kind {k!r} is random; draw it per trial")

    def draw(self, n: int, rng: np.random.Generator) -> CycleType:
        if self.kind == "ewens":
            return ewens_type(n, float(self.params["theta"]), rng)
        return self.fixed_type(n)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    type_spec: TypeSpec
    n: int
    trials: int
    seed: int = 0
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        for key, bracket in self.tolerances.items():
            if not isinstance(bracket, (int, float)) and not (isinstance(bracket, (list, tuple)) and len(bracket) == 2):
                raise ConfigError(f"tolerance {key!r} must be a number or a [low, high] pair")
        if not self.type_spec.is_random:
            try:
                self.type_spec.fixed_type(self.n)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"invalid type_spec: {exc}") from exc

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return ExperimentConfig(self.name, self.type_spec, self.n, self.trials, seed, self.params, self.tolerances)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "type_spec": self.type_spec.to_dict(),
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "params": self.params,
            "tolerances": self.tolerances,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(d) - CONFIG_FIELDS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = REQUIRED_FIELDS - set(d)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        ts = d["type_spec"]
        if not isinstance(ts, dict) or set(ts) - {"kind", "params"} or "kind" not in ts:
            raise ConfigError("type_spec must be {kind, params}")
        try:
            return cls(
                name=str(d["name"]),
                type_spec=TypeSpec(ts["kind"], dict(ts.get("params", {}))),
                n=int(d["n"]),
                trials=int(d["trials"]),
                seed=int(d.get("seed", 0)),
                params=dict(d.get("params", {})),
                tolerances=dict(d.get("tolerances", {})),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)
