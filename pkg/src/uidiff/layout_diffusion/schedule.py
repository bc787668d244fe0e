"""Absorbing-state corruption schedule for discrete layout diffusion."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DiscreteSchedule:
    """Linear cumulative masking probability: mask_prob(t) = t / T.

    mask_prob(0) = 0, mask_prob(T) = 1, non-decreasing in between.
    """

    timesteps: int = 100

    def __post_init__(self):
        if self.timesteps < 1:
            raise ValueError(f"timesteps must be >= 1, got {self.timesteps}")

    def mask_prob(self, t: int) -> float:
        if not 0 <= t <= self.timesteps:
            raise ValueError(f"t must be in [0, {self.timesteps}], got {t}")
        return t / self.timesteps

    def reveal_prob(self, t: int) -> float:
        """Probability a masked token is revealed on the t -> t-1 step."""
        if not 1 <= t <= self.timesteps:
            raise ValueError(f"t must be in [1, {self.timesteps}], got {t}")
        return (self.mask_prob(t) - self.mask_prob(t - 1)) / self.mask_prob(t)

    def to_dict(self) -> dict:
        return {"kind": "linear_mask", "timesteps": self.timesteps}

    @staticmethod
    def from_dict(data: dict) -> "DiscreteSchedule":
        if data.get("kind") != "linear_mask":
            raise ValueError(f"unknown schedule kind {data.get('kind')!r}")
        return DiscreteSchedule(timesteps=int(data["timesteps"]))
