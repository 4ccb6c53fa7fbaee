"""Offline calibration: percentile clipping and quantizer configuration.

The scale is chosen so the p-th percentile of the absolute calibration
activations maps to the top standard code magnitude (127). The two
region thresholds default to fixed multiples of the scale:

* ``low_threshold  = 64 * (scale / fine_divisor)`` -- the exact saturation
  point of the 6-bit fine codebook, so the fine region has no dead zone.
* ``high_threshold = 127 * scale`` -- the standard INT8 clip point, so the
  coarse region starts exactly where a plain INT8 quantizer would clip.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import (
    DegenerateRange,
    EmptyTensor,
    InvalidConfig,
    PercentileOutOfRange,
)

MAX_STANDARD_CODE = 127

__all__ = [
    "QuantConfig",
    "percentile_abs",
    "calibrate_scale",
    "derive_config",
    "calibrate",
]


@dataclass(frozen=True)
class QuantConfig:
    """Calibrated quantizer parameters, the offline-stored artifact.

    ``percentile`` and ``calib_count`` are provenance metadata only; they do
    not affect encoding and are not stored in packed tensor files.
    """

    scale: float
    low_threshold: float
    high_threshold: float
    fine_divisor: float = 4.0
    coarse_multiplier: float = 4.0
    percentile: float = 100.0
    calib_count: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        fields = (
            self.scale,
            self.low_threshold,
            self.high_threshold,
            self.fine_divisor,
            self.coarse_multiplier,
        )
        if not all(math.isfinite(v) for v in fields):
            raise InvalidConfig("non-finite config field")
        if self.scale <= 0:
            raise InvalidConfig(f"scale must be > 0, got {self.scale}")
        if not (0 < self.low_threshold < self.high_threshold):
            raise InvalidConfig(
                f"need 0 < L < H, got L={self.low_threshold} H={self.high_threshold}"
            )
        if self.fine_divisor < 1 or self.coarse_multiplier < 1:
            raise InvalidConfig("fine_divisor and coarse_multiplier must be >= 1")

    @property
    def fine_step(self) -> float:
        return self.scale / self.fine_divisor

    @property
    def coarse_step(self) -> float:
        return self.scale * self.coarse_multiplier

    def scaled(self, c: float) -> "QuantConfig":
        """Config with scale and both thresholds multiplied by c > 0."""
        return QuantConfig(
            scale=self.scale * c,
            low_threshold=self.low_threshold * c,
            high_threshold=self.high_threshold * c,
            fine_divisor=self.fine_divisor,
            coarse_multiplier=self.coarse_multiplier,
            percentile=self.percentile,
            calib_count=self.calib_count,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "QuantConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"config is not valid JSON: {e}") from e
        required = {"scale", "low_threshold", "high_threshold",
                    "fine_divisor", "coarse_multiplier"}
        missing = required - doc.keys()
        if missing:
            raise InvalidConfig(f"config missing keys: {sorted(missing)}")
        return cls(
            scale=float(doc["scale"]),
            low_threshold=float(doc["low_threshold"]),
            high_threshold=float(doc["high_threshold"]),
            fine_divisor=float(doc["fine_divisor"]),
            coarse_multiplier=float(doc["coarse_multiplier"]),
            percentile=float(doc.get("percentile", 100.0)),
            calib_count=int(doc.get("calib_count", 0)),
        )


def percentile_abs(values, p: float) -> float:
    """p-th percentile of |values| by linear interpolation between order
    statistics: r = (p/100)*(n-1); result interpolates w[floor(r)] and the
    next order statistic by frac(r).
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise EmptyTensor("cannot take a percentile of an empty tensor")
    if not (0 < p <= 100):
        raise PercentileOutOfRange(f"percentile must be in (0, 100], got {p}")
    w = np.sort(np.abs(v))
    r = (p / 100.0) * (w.size - 1)
    lo = int(math.floor(r))
    frac = r - lo
    if lo >= w.size - 1:
        return float(w[-1])
    return float(w[lo] + frac * (w[lo + 1] - w[lo]))


def calibrate_scale(values, p: float) -> float:
    """Scale such that the p-th percentile of |values| maps to code 127."""
    clip = percentile_abs(values, p)
    if clip <= 0:
        raise DegenerateRange("all-zero calibration data (percentile of |v| is 0)")
    return clip / MAX_STANDARD_CODE


def derive_config(scale: float, fine_divisor: float = 4.0,
                  coarse_multiplier: float = 4.0, percentile: float = 100.0,
                  calib_count: int = 0) -> QuantConfig:
    """Build a QuantConfig with the default threshold rule from a scale."""
    if scale <= 0:
        raise InvalidConfig(f"scale must be > 0, got {scale}")
    if fine_divisor < 1 or coarse_multiplier < 1:
        raise InvalidConfig("fine_divisor and coarse_multiplier must be >= 1")
    low = 64.0 * (scale / fine_divisor)
    high = MAX_STANDARD_CODE * scale
    if low >= high:
        raise InvalidConfig(f"derived L={low} >= H={high}")
    return QuantConfig(
        scale=scale,
        low_threshold=low,
        high_threshold=high,
        fine_divisor=fine_divisor,
        coarse_multiplier=coarse_multiplier,
        percentile=percentile,
        calib_count=calib_count,
    )


def calibrate(values, p: float, fine_divisor: float = 4.0,
              coarse_multiplier: float = 4.0) -> QuantConfig:
    """Percentile-calibrate a scale and derive the full config in one step."""
    scale = calibrate_scale(values, p)
    n = int(np.asarray(values).size)
    return derive_config(scale, fine_divisor, coarse_multiplier,
                         percentile=p, calib_count=n)
