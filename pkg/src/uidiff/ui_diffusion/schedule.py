"""Gaussian noising schedule for the latent diffusion stage.

Linear beta schedule; alpha_bar is indexed 0..T with alpha_bar[0] = 1 exactly,
so t = 0 is the identity and t = T is (nearly) pure noise. The noising law is
x_t = sqrt(alpha_bar_t) * x_0 + sqrt(1 - alpha_bar_t) * eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch


@dataclass(frozen=True)
class ContinuousSchedule:
    t_train: int = 1000
    beta_start: float = 1e-4
    beta_end: float = 0.02
    alpha_bar: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        betas = np.linspace(self.beta_start, self.beta_end, self.t_train)
        alpha_bar = np.concatenate([[1.0], np.cumprod(1.0 - betas)])
        object.__setattr__(self, "alpha_bar", alpha_bar)

    def signal_rate(self, t) -> torch.Tensor:
        """sqrt(alpha_bar_t); t may be an int or an integer tensor."""
        ab = torch.as_tensor(self.alpha_bar)
        return torch.sqrt(ab[t])

    def noise_rate(self, t) -> torch.Tensor:
        ab = torch.as_tensor(self.alpha_bar)
        return torch.sqrt(1.0 - ab[t])

    def sampling_timesteps(self, steps: int) -> list[int]:
        """Evenly spaced decreasing timesteps for the deterministic sampler."""
        if not 1 <= steps <= self.t_train:
            raise ValueError(f"steps must be in [1, {self.t_train}], got {steps}")
        ts = np.linspace(self.t_train, 1, steps)
        return [int(round(v)) for v in ts]

    def to_dict(self) -> dict:
        return {
            "kind": "linear_beta",
            "t_train": self.t_train,
            "beta_start": self.beta_start,
            "beta_end": self.beta_end,
        }

    @staticmethod
    def from_dict(data: dict) -> "ContinuousSchedule":
        if data.get("kind") != "linear_beta":
            raise ValueError(f"unknown schedule kind {data.get('kind')!r}")
        return ContinuousSchedule(
            t_train=int(data["t_train"]),
            beta_start=float(data["beta_start"]),
            beta_end=float(data["beta_end"]),
        )


def add_noise(
    latent: torch.Tensor, t, eps: torch.Tensor, schedule: ContinuousSchedule
) -> torch.Tensor:
    """Apply the forward noising law at timestep t (scalar or per-batch tensor)."""
    if eps.shape != latent.shape:
        raise ValueError(f"eps shape {eps.shape} != latent shape {latent.shape}")
    signal = schedule.signal_rate(t).to(latent.dtype)
    noise = schedule.noise_rate(t).to(latent.dtype)
    if signal.ndim == 1:  # per-batch timesteps
        signal = signal.view(-1, *([1] * (latent.ndim - 1)))
        noise = noise.view(-1, *([1] * (latent.ndim - 1)))
    return signal * latent + noise * eps
