"""Experiment configuration: JSON schema, validation and scenario construction.

Angles are in degrees in the JSON file and converted to radians once, here.
An empty JSON object yields the default scenario: M = N = 10 half-wavelength
ULAs, K = 5 fully-overlapped subarrays, target at 10 degrees, interferers at
-30 and -10 degrees, 100 training snapshots and diagonal load 10.
"""
from __future__ import annotations

import enum
import hashlib
import json
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .arrays import ArrayConfig, Scheme, make_partition
from .sinr import Beamformer, DistributedSource, PointSource, Scenario


class Experiment(str, enum.Enum):
    BEAMPATTERN = "beampattern"
    SINR_CURVE = "sinr-curve"
    MVDR_PATTERN = "mvdr-pattern"
    VERIFY_PROP1 = "verify-prop1"
    VERIFY_PROP2 = "verify-prop2"
    HK_CURVES = "hk-curves"


class ConfigError(ValueError):
    """Configuration file could not be parsed or failed validation."""


class DistributedSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lo_deg: float = Field(-50.0, ge=-90.0, le=90.0)
    hi_deg: float = Field(-20.0, ge=-90.0, le=90.0)
    n_patches: int = Field(61, ge=1)

    @model_validator(mode="after")
    def _ordered(self):
        if self.lo_deg > self.hi_deg:
            raise ValueError("lo_deg must not exceed hi_deg")
        return self


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    experiment: Experiment = Experiment.BEAMPATTERN
    m_tx: int = Field(10, ge=1)
    n_rx: int = Field(10, ge=1)
    d_tx: float = Field(0.5, gt=0)
    d_rx: float = Field(0.5, gt=0)
    k_subarrays: int = Field(5, ge=1)
    scheme: Scheme = Scheme.FULLY_OVERLAPPED
    theta_s_deg: float = Field(10.0, ge=-90.0, le=90.0)
    interferers_deg: list[float] = Field(default_factory=lambda: [-30.0, -10.0])
    distributed: Optional[DistributedSpec] = None
    inr_db: float = 30.0
    inr_equals_snr: bool = False
    snr_db: list[float] = Field(default_factory=lambda: [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    target_snr_db: float = 0.0
    noise_power: float = Field(1.0, gt=0)
    beamformer: Beamformer = Beamformer.CONVENTIONAL
    snapshot_count: int = Field(100, ge=1)
    diagonal_load: float = Field(10.0, ge=0)
    runs: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    grid_deg: Optional[float] = Field(None, gt=0, le=0.1)

    @model_validator(mode="before")
    @classmethod
    def _distributed_replaces_points(cls, data):
        if isinstance(data, dict) and data.get("distributed") is not None:
            data = dict(data)
            data.setdefault("interferers_deg", [])
        return data

    @model_validator(mode="after")
    def _consistent(self):
        if self.k_subarrays > self.m_tx:
            raise ValueError(f"k_subarrays={self.k_subarrays} exceeds m_tx={self.m_tx}")
        if self.scheme is Scheme.NON_OVERLAPPED and self.m_tx % self.k_subarrays:
            raise ValueError("non-overlapped scheme needs k_subarrays to divide m_tx")
        if self.distributed is not None and self.interferers_deg:
            raise ValueError("give either interferers_deg or distributed, not both")
        if any(abs(t) > 90.0 for t in self.interferers_deg):
            raise ValueError("interferer angles must lie in [-90, 90] degrees")
        return self

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(self.m_tx, self.n_rx, self.d_tx, self.d_rx)

    @property
    def theta_s(self) -> float:
        return float(np.deg2rad(self.theta_s_deg))

    def resolution_deg(self) -> float:
        if self.grid_deg is not None:
            return self.grid_deg
        if self.experiment in (Experiment.VERIFY_PROP1, Experiment.VERIFY_PROP2):
            return 0.02
        return 0.1

    def scenario(self, snr_db: float | None = None) -> Scenario:
        """Scenario at one SNR (defaults to ``target_snr_db``) and the configured INR."""
        snr = self.target_snr_db if snr_db is None else snr_db
        inr = snr if self.inr_equals_snr else self.inr_db
        p_i = self.noise_power * 10.0 ** (inr / 10.0)
        distributed = None
        if self.distributed is not None:
            distributed = DistributedSource(
                float(np.deg2rad(self.distributed.lo_deg)),
                float(np.deg2rad(self.distributed.hi_deg)),
                p_i,
                self.distributed.n_patches,
            )
        return Scenario(
            cfg=self.array,
            part=make_partition(self.scheme, self.k_subarrays, self.m_tx),
            theta_s=self.theta_s,
            target_power=self.noise_power * 10.0 ** (snr / 10.0),
            interferers=tuple(PointSource(float(np.deg2rad(t)), p_i) for t in self.interferers_deg),
            distributed=distributed,
            noise_power=self.noise_power,
            snapshot_count=self.snapshot_count,
            pulse_runs=self.runs,
            seed=self.seed,
            diagonal_load=self.diagonal_load,
        )

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def scenario_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"{path}: {e['msg']}")
    return "; ".join(lines)


def parse_config(data: dict, **overrides) -> ExperimentConfig:
    """Validate a config mapping; non-``None`` overrides replace file values."""
    if not isinstance(data, dict):
        raise ConfigError("<root>: config must be a JSON object")
    data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as err:
        raise ConfigError(_format_errors(err)) from None


def load_config(path: str | Path | None, **overrides) -> ExperimentConfig:
    """Read and validate a JSON experiment config.

    ``path=None`` starts from the defaults. Errors name the offending field.
    """
    data: dict = {}
    if path is not None:
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as err:
            raise ConfigError(f"{path}: {err.strerror}") from None
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from None
    return parse_config(data, **overrides)
