"""Experiment configuration: one flat JSON document with fixed sections.

The document has six sections -- ``model``, ``budgets``, ``grids``,
``seeds``, ``outputs``, ``overrides`` -- plus a top-level ``threads`` knob
for the worker-pool width.  Thread count never changes any numeric result
(reductions are performed in replica-index order), it only changes wall
time, so two runs of the same config are comparable even when one of them
overrode ``threads`` on the command line.

Configs round-trip losslessly: ``from_dict(cfg.to_dict())`` reproduces the
config exactly, and the JSON text written by ``save`` parses back to the
same document (floats are serialized via ``repr``, which is lossless for
IEEE doubles).  Partial documents are allowed on input -- missing keys take
the documented defaults -- but unknown sections or keys are rejected so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Sequence

from .environment import validate_parameters
from .errors import ParameterValidationError

__all__ = [
    "DEFAULT_MASTER_SEED",
    "ExperimentConfig",
    "default_ts_grid",
]

DEFAULT_MASTER_SEED = 20260822

_FORMATS = ("csv", "json")


def default_ts_grid() -> tuple[tuple[float, float], ...]:
    """Six (t, s) pairs whose ratios t/(t+s) sweep 0.2 .. 0.8."""
    return (
        (1.0, 4.0),
        (1.0, 7.0 / 3.0),
        (1.0, 1.5),
        (1.0, 1.0),
        (1.0, 2.0 / 3.0),
        (1.0, 0.25),
    )


def _reject_unknown(section: str, given: dict, allowed: Sequence[str]) -> None:
    for key in given:
        if key not in allowed:
            raise ParameterValidationError(
                f"unknown key {key!r} in config section {section!r}; "
                f"allowed keys: {', '.join(allowed)}"
            )


def _as_int(section: str, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParameterValidationError(f"{section}.{key} must be an integer; got {value!r}")
    return value


def _as_float(section: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterValidationError(f"{section}.{key} must be a number; got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ParameterValidationError(f"{section}.{key} must be finite; got {value!r}")
    return out


def _as_grid(section: str, key: str, value: Any) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ParameterValidationError(f"{section}.{key} must be a nonempty list of numbers")
    out = tuple(_as_float(section, key, item) for item in value)
    if any(item <= 0 for item in out):
        raise ParameterValidationError(f"{section}.{key} entries must be positive")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ParameterValidationError(f"{section}.{key} must be strictly increasing")
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run configuration.

    Defaults describe the accepted-parameter experiment (n=14, p=3,
    beta=3, gamma=2.7, so alpha=0.3); tests and small studies override the
    model section.  ``threads`` of None means "use every available core".
    """

    # model
    n: int = 14
    p: int = 3
    beta: float = 3.0
    gamma: float = 2.7
    # budgets
    samples: int = 100_000
    replicas: int = 500
    step_cap: int = 100_000_000
    # grids
    u_grid: tuple[float, ...] = (0.25, 0.4, 0.63, 1.0, 1.59, 2.52, 4.0)
    # geometric in the window where the intensity responds as a power law at
    # reachable n; below it the transform is dominated by the bulk of small
    # increments and the local slope flattens toward zero
    v_grid: tuple[float, ...] = (1.0, 1.78, 3.16, 5.62, 10.0, 17.8, 31.6, 56.2, 100.0)
    eps_grid: tuple[float, ...] = (0.05, 0.1, 0.2)
    ts_grid: tuple[tuple[float, float], ...] = field(default_factory=default_ts_grid)
    # seeds
    master_seed: int = DEFAULT_MASTER_SEED
    # outputs
    directory: str = "results"
    formats: tuple[str, ...] = ("csv", "json")
    # overrides
    block_count: int | None = None
    zeta_table: dict[int, float] | None = None
    # worker pool width; None = available cores
    threads: int | None = None

    def validate(self) -> "ExperimentConfig":
        """Check every constraint, raising with the violated one named."""
        if self.beta == 0.0:
            # reference model: admissibility does not apply, but the walk
            # size must still make sense
            if not isinstance(self.n, int) or self.n < 2:
                raise ParameterValidationError(f"model.n must be an integer >= 2; got {self.n!r}")
            if not isinstance(self.p, int) or self.p < 3:
                raise ParameterValidationError(f"model.p must be an integer >= 3; got {self.p!r}")
            if self.gamma < 0:
                raise ParameterValidationError(
                    f"model.gamma must be nonnegative; got {self.gamma}"
                )
        else:
            validate_parameters(self.n, self.p, self.beta, self.gamma, self.zeta_table)
        if self.samples < 1:
            raise ParameterValidationError(f"budgets.samples must be >= 1; got {self.samples}")
        if self.replicas < 1:
            raise ParameterValidationError(f"budgets.replicas must be >= 1; got {self.replicas}")
        if self.step_cap < 1:
            raise ParameterValidationError(f"budgets.step_cap must be >= 1; got {self.step_cap}")
        for t, s in self.ts_grid:
            if t < 0 or s <= 0:
                raise ParameterValidationError(
                    f"grids.ts_grid pairs need t >= 0 and s > 0; got ({t}, {s})"
                )
        if not (0 <= self.master_seed < 1 << 64):
            raise ParameterValidationError(
                f"seeds.master_seed must lie in [0, 2^64); got {self.master_seed}"
            )
        if not self.directory:
            raise ParameterValidationError("outputs.directory must be a nonempty path")
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise ParameterValidationError(
                    f"outputs.formats entries must come from {_FORMATS}; got {fmt!r}"
                )
        if not self.formats:
            raise ParameterValidationError("outputs.formats must list at least one format")
        if self.block_count is not None and self.block_count < 1:
            raise ParameterValidationError(
                f"overrides.block_count must be >= 1 when set; got {self.block_count}"
            )
        if self.threads is not None and self.threads < 1:
            raise ParameterValidationError(f"threads must be >= 1 when set; got {self.threads}")
        return self

    def resolved_threads(self) -> int:
        if self.threads is not None:
            return self.threads
        return os.cpu_count() or 1

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        """Plain-JSON document, fully resolved (defaults expanded)."""
        return {
            "model": {"n": self.n, "p": self.p, "beta": self.beta, "gamma": self.gamma},
            "budgets": {
                "samples": self.samples,
                "replicas": self.replicas,
                "step_cap": self.step_cap,
            },
            "grids": {
                "u_grid": list(self.u_grid),
                "v_grid": list(self.v_grid),
                "eps_grid": list(self.eps_grid),
                "ts_grid": [[t, s] for t, s in self.ts_grid],
            },
            "seeds": {"master_seed": self.master_seed},
            "outputs": {"directory": self.directory, "formats": list(self.formats)},
            "overrides": {
                "block_count": self.block_count,
                "zeta_table": (
                    None
                    if self.zeta_table is None
                    else {str(p): value for p, value in sorted(self.zeta_table.items())}
                ),
            },
            "threads": self.threads,
        }

    @classmethod
    def from_dict(cls, document: dict) -> "ExperimentConfig":
        if not isinstance(document, dict):
            raise ParameterValidationError("config document must be a JSON object")
        _reject_unknown(
            "<top level>",
            document,
            ("model", "budgets", "grids", "seeds", "outputs", "overrides", "threads"),
        )
        base = cls()
        kwargs: dict[str, Any] = {}

        model = document.get("model", {})
        _reject_unknown("model", model, ("n", "p", "beta", "gamma"))
        if "n" in model:
            kwargs["n"] = _as_int("model", "n", model["n"])
        if "p" in model:
            kwargs["p"] = _as_int("model", "p", model["p"])
        if "beta" in model:
            kwargs["beta"] = _as_float("model", "beta", model["beta"])
        if "gamma" in model:
            kwargs["gamma"] = _as_float("model", "gamma", model["gamma"])

        budgets = document.get("budgets", {})
        _reject_unknown("budgets", budgets, ("samples", "replicas", "step_cap"))
        for key in ("samples", "replicas", "step_cap"):
            if key in budgets:
                kwargs[key] = _as_int("budgets", key, budgets[key])

        grids = document.get("grids", {})
        _reject_unknown("grids", grids, ("u_grid", "v_grid", "eps_grid", "ts_grid"))
        for key in ("u_grid", "v_grid", "eps_grid"):
            if key in grids:
                kwargs[key] = _as_grid("grids", key, grids[key])
        if "ts_grid" in grids:
            raw = grids["ts_grid"]
            if not isinstance(raw, (list, tuple)) or not raw:
                raise ParameterValidationError("grids.ts_grid must be a nonempty list of [t, s]")
            pairs = []
            for item in raw:
                if not isinstance(item, (list, tuple)) or len(item) != 2:
                    raise ParameterValidationError(
                        f"grids.ts_grid entries must be [t, s] pairs; got {item!r}"
                    )
                pairs.append(
                    (_as_float("grids", "ts_grid", item[0]), _as_float("grids", "ts_grid", item[1]))
                )
            kwargs["ts_grid"] = tuple(pairs)

        seeds = document.get("seeds", {})
        _reject_unknown("seeds", seeds, ("master_seed",))
        if "master_seed" in seeds:
            kwargs["master_seed"] = _as_int("seeds", "master_seed", seeds["master_seed"])

        outputs = document.get("outputs", {})
        _reject_unknown("outputs", outputs, ("directory", "formats"))
        if "directory" in outputs:
            if not isinstance(outputs["directory"], str):
                raise ParameterValidationError("outputs.directory must be a string")
            kwargs["directory"] = outputs["directory"]
        if "formats" in outputs:
            raw = outputs["formats"]
            if not isinstance(raw, (list, tuple)):
                raise ParameterValidationError("outputs.formats must be a list")
            kwargs["formats"] = tuple(str(fmt) for fmt in raw)

        overrides = document.get("overrides", {})
        _reject_unknown("overrides", overrides, ("block_count", "zeta_table"))
        if overrides.get("block_count") is not None:
            kwargs["block_count"] = _as_int("overrides", "block_count", overrides["block_count"])
        if overrides.get("zeta_table") is not None:
            raw = overrides["zeta_table"]
            if not isinstance(raw, dict):
                raise ParameterValidationError(
                    "overrides.zeta_table must map interaction order to a value"
                )
            table = {}
            for key, value in raw.items():
                try:
                    order = int(key)
                except (TypeError, ValueError):
                    raise ParameterValidationError(
                        f"overrides.zeta_table keys must be integers; got {key!r}"
                    ) from None
                table[order] = _as_float("overrides", "zeta_table", value)
            kwargs["zeta_table"] = table
        if document.get("threads") is not None:
            kwargs["threads"] = _as_int("<top level>", "threads", document["threads"])

        merged = {**base.__dict__, **kwargs}
        return cls(**merged).validate()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(self.to_json())

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as handle:
            try:
                document = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ParameterValidationError(f"config file is not valid JSON: {exc}") from exc
        return cls.from_dict(document)

    def replace(self, **changes) -> "ExperimentConfig":
        merged = {**self.__dict__, **changes}
        return type(self)(**merged).validate()
