"""Experiment configuration for noise sweeps."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

CODE_CHOICES = ("None", "Steane", "D3Surface", "D5Surface")
MODE_CHOICES = ("D", "BP", "BPD")
MAX_NOISE = 1e-2
DEFAULT_GRID = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    classifier: int = 1
    codes: tuple = CODE_CHOICES
    modes: tuple = MODE_CHOICES
    noise_grid: tuple = DEFAULT_GRID
    shots: int = 2000
    master_seed: int = 0
    rounds_per_layer: int = 1
    output_path: str = field(default="sweep.csv")

    def __post_init__(self) -> None:
        if self.classifier not in (1, 2):
            raise ConfigError("classifier must be 1 or 2 (qubits)")
        for code in self.codes:
            if code not in CODE_CHOICES:
                raise ConfigError(f"unknown code {code!r}")
        for mode in self.modes:
            if mode not in MODE_CHOICES:
                raise ConfigError(f"unknown error mode {mode!r}")
        for p in self.noise_grid:
            if not 0.0 < p <= MAX_NOISE:
                raise ConfigError(
                    f"noise grid value {p} outside (0, {MAX_NOISE}] — the codes'"
                    " correction threshold caps the sweep"
                )
        if self.shots < 100:
            raise ConfigError("shots must be at least 100")
        if self.rounds_per_layer < 1:
            raise ConfigError("rounds_per_layer must be positive")
        object.__setattr__(self, "codes", tuple(self.codes))
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "noise_grid", tuple(float(p) for p in self.noise_grid))


def load_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {f for f in ExperimentConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("codes", "modes", "noise_grid"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return ExperimentConfig(**raw)
