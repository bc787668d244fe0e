"""Versioned checkpoint container for the layout denoiser."""

from __future__ import annotations

from pathlib import Path

import torch

from ..core import TokenizerConfig
from .model import DenoiserConfig, LayoutDenoiser
from .schedule import DiscreteSchedule

FORMAT = "uidiff-layout-checkpoint"
VERSION = 1


class CheckpointError(ValueError):
    pass


def save_layout_checkpoint(
    model: LayoutDenoiser, schedule: DiscreteSchedule, path: str | Path
) -> None:
    payload = {
        "format": FORMAT,
        "version": VERSION,
        "schedule": schedule.to_dict(),
        "tokenizer": {"bins": model.tokenizer.bins, "e_max": model.tokenizer.e_max},
        "model": model.config.to_dict(),
        "trained": model.trained,
        "state_dict": model.state_dict(),
    }
    torch.save(payload, path)


def load_layout_checkpoint(path: str | Path) -> tuple[LayoutDenoiser, DiscreteSchedule]:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    if payload.get("format") != FORMAT:
        raise CheckpointError(f"{path} is not a layout checkpoint")
    if payload.get("version") != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {payload.get('version')}")
    schedule = DiscreteSchedule.from_dict(payload["schedule"])
    tokenizer = TokenizerConfig(**payload["tokenizer"])
    model = LayoutDenoiser(
        tokenizer=tokenizer,
        config=DenoiserConfig.from_dict(payload["model"]),
        timesteps=schedule.timesteps,
    )
    model.load_state_dict(payload["state_dict"])
    model.trained = bool(payload["trained"])
    model.eval()
    return model, schedule
