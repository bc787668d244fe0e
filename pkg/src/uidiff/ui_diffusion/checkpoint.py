"""Versioned checkpoint container for the UI generator bundle.

Holds all four component state dicts, their configs, the schedule, the
palette version, and a hash manifest of the frozen components that load-time
verification recomputes and compares.
"""

from __future__ import annotations

from pathlib import Path

import torch

from .codec import ImageCodec
from .control import ControlBranch
from .pipeline import CheckpointMismatch, UiComponents
from .schedule import ContinuousSchedule
from .text_encoder import TextEncoder
from .unet import LatentDenoiser, UNetConfig

FORMAT = "uidiff-ui-checkpoint"
VERSION = 1


def save_ui_checkpoint(components: UiComponents, path: str | Path) -> None:
    payload = {
        "format": FORMAT,
        "version": VERSION,
        "profile": components.profile,
        "schedule": components.schedule.to_dict(),
        "palette_version": components.palette_version,
        "unet_config": components.denoiser.config.to_dict(),
        "codec_base": components.codec.encoder[0].out_channels,
        "text_vocab": list(components.text_encoder.vocab),
        "frozen_hashes": components.frozen_hashes(),
        "state": {
            "text_encoder": components.text_encoder.state_dict(),
            "codec": components.codec.state_dict(),
            "denoiser": components.denoiser.state_dict(),
            "control": components.control.state_dict(),
        },
    }
    torch.save(payload, path)


def load_ui_checkpoint(path: str | Path) -> UiComponents:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    if payload.get("format") != FORMAT:
        raise CheckpointMismatch(f"{path} is not a UI checkpoint")
    if payload.get("version") != VERSION:
        raise CheckpointMismatch(f"unsupported checkpoint version {payload.get('version')}")

    text_encoder = TextEncoder()
    if list(text_encoder.vocab) != payload["text_vocab"]:
        raise CheckpointMismatch("tokenizer vocabulary differs from checkpoint")
    text_encoder.load_state_dict(payload["state"]["text_encoder"])
    text_encoder.freeze()

    codec = ImageCodec(base=payload["codec_base"])
    codec.load_state_dict(payload["state"]["codec"])
    codec.freeze()

    denoiser = LatentDenoiser(UNetConfig.from_dict(payload["unet_config"]))
    denoiser.load_state_dict(payload["state"]["denoiser"])
    denoiser.freeze()

    control = ControlBranch(denoiser)
    control.load_state_dict(payload["state"]["control"])

    components = UiComponents(
        text_encoder,
        codec,
        denoiser,
        control,
        schedule=ContinuousSchedule.from_dict(payload["schedule"]),
        palette_version=payload["palette_version"],
        profile=payload["profile"],
    )
    recomputed = components.frozen_hashes()
    if recomputed != payload["frozen_hashes"]:
        raise CheckpointMismatch("frozen-component hashes do not match the checkpoint manifest")
    return components
