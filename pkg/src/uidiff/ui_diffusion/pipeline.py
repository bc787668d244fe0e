"""The four-component UI generator bundle, toy-profile pretraining and the
deterministic inference sampler."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import torch

from ..core import Layout, require_valid
from ..nnutil import hash_parameters
from ..rico.captions import DEFAULT_PROMPT
from ..rico.ingest import ManifestEntry
from ..wireframe import DEFAULT_PALETTE, Palette, load_png, render_wireframe
from .codec import ImageCodec, image_to_tensor, pretrain_codec, tensor_to_image
from .control import ControlBranch, control_denoise_step
from .schedule import ContinuousSchedule, add_noise
from .text_encoder import TextEncoder, pretrain_text_encoder
from .unet import LatentDenoiser, UNetConfig

log = logging.getLogger(__name__)


class CheckpointMismatch(ValueError):
    pass


@dataclass
class UiComponents:
    """Text encoder + latent denoiser + image codec (frozen) and the
    trainable control branch, plus the schedule they were built against."""

    text_encoder: TextEncoder
    codec: ImageCodec
    denoiser: LatentDenoiser
    control: ControlBranch
    schedule: ContinuousSchedule = field(default_factory=ContinuousSchedule)
    palette_version: str = DEFAULT_PALETTE.version
    profile: str = "toy"

    def frozen_hashes(self) -> dict[str, str]:
        return {
            "text_encoder": hash_parameters(self.text_encoder),
            "denoiser": hash_parameters(self.denoiser),
            "codec": hash_parameters(self.codec),
        }


@dataclass
class ToyTrainConfig:
    text_steps: int = 300
    codec_steps: int = 600
    base_steps: int = 600
    base_batch: int = 4
    base_lr: float = 1e-3
    prompt_dropout: float = 0.5
    unet: UNetConfig = field(default_factory=UNetConfig)
    seed: int = 0


def pretrain_base_denoiser(
    denoiser: LatentDenoiser,
    codec: ImageCodec,
    text_encoder: TextEncoder,
    entries: list[ManifestEntry],
    steps: int,
    batch_size: int = 4,
    learning_rate: float = 1e-3,
    prompt_dropout: float = 0.5,
    seed: int = 0,
    schedule: ContinuousSchedule | None = None,
) -> list[float]:
    """Noise-prediction pretraining of the base model (no control), then freeze."""
    schedule = schedule or ContinuousSchedule()
    rng = np.random.default_rng(seed)
    noise_gen = torch.Generator().manual_seed(seed)
    with torch.no_grad():
        latents = torch.stack(
            [codec.encode(image_to_tensor(load_png(e.image)))[0] for e in entries]
        )
        caption_embs = [text_encoder.encode_text(e.caption) for e in entries]
        default_emb = text_encoder.encode_text(DEFAULT_PROMPT)
    opt = torch.optim.AdamW(denoiser.parameters(), lr=learning_rate)
    losses = []
    denoiser.train()
    for _ in range(steps):
        idx = rng.integers(0, len(entries), size=batch_size)
        use_default = rng.random(batch_size) < prompt_dropout
        emb = torch.stack(
            [default_emb if use_default[j] else caption_embs[i] for j, i in enumerate(idx)]
        )
        t = torch.from_numpy(rng.integers(1, schedule.t_train + 1, size=batch_size))
        z0 = latents[torch.from_numpy(idx)]
        eps = torch.randn(z0.shape, generator=noise_gen)
        z_t = add_noise(z0, t, eps, schedule)
        loss = torch.nn.functional.mse_loss(denoiser(z_t, t, emb), eps)
        opt.zero_grad()
        loss.backward()
        opt.step()
        losses.append(float(loss.detach()))
    denoiser.freeze()
    return losses


def build_toy_components(
    entries: list[ManifestEntry], cfg: ToyTrainConfig = ToyTrainConfig()
) -> tuple[UiComponents, dict[str, list[float]]]:
    """Train every toy-profile network from scratch on a manifest."""
    logs: dict[str, list[float]] = {}

    text_encoder = TextEncoder(seed=cfg.seed)
    logs["text"] = pretrain_text_encoder(
        text_encoder, [e.caption for e in entries], steps=cfg.text_steps, seed=cfg.seed
    )
    log.info("text encoder pretrained (%d steps)", cfg.text_steps)

    codec = ImageCodec(seed=cfg.seed)
    images = [load_png(e.image) for e in entries]
    logs["codec"] = pretrain_codec(codec, images, steps=cfg.codec_steps, seed=cfg.seed)
    log.info("codec pretrained (%d steps)", cfg.codec_steps)

    schedule = ContinuousSchedule()
    denoiser = LatentDenoiser(cfg.unet, seed=cfg.seed)
    logs["base"] = pretrain_base_denoiser(
        denoiser,
        codec,
        text_encoder,
        entries,
        steps=cfg.base_steps,
        batch_size=cfg.base_batch,
        learning_rate=cfg.base_lr,
        prompt_dropout=cfg.prompt_dropout,
        seed=cfg.seed,
        schedule=schedule,
    )
    log.info("base denoiser pretrained (%d steps)", cfg.base_steps)

    control = ControlBranch(denoiser, seed=cfg.seed)
    return UiComponents(text_encoder, codec, denoiser, control, schedule), logs


def fresh_toy_components(
    unet: UNetConfig = UNetConfig(), seed: int = 0
) -> UiComponents:
    """Untrained toy bundle (frozen at random init); useful for structural tests."""
    text_encoder = TextEncoder(seed=seed)
    text_encoder.freeze()
    codec = ImageCodec(seed=seed)
    codec.freeze()
    denoiser = LatentDenoiser(unet, seed=seed)
    denoiser.freeze()
    control = ControlBranch(denoiser, seed=seed)
    return UiComponents(text_encoder, codec, denoiser, control)


def generate_ui(
    components: UiComponents,
    prompt: str,
    layout: Layout,
    seed: int,
    steps: int = 50,
    palette: Palette = DEFAULT_PALETTE,
    frozen_only: bool = False,
) -> np.ndarray:
    """Deterministic layout + prompt -> 288x512 UI image (uint8 HWC).

    frozen_only bypasses the control branch, sampling the base model alone.
    """
    require_valid(layout)
    if palette.version != components.palette_version:
        raise CheckpointMismatch(
            f"palette {palette.version} does not match checkpoint "
            f"palette {components.palette_version}"
        )
    schedule = components.schedule
    wf_tensor = None
    if not frozen_only:
        wf_tensor = image_to_tensor(render_wireframe(layout, palette))
    text_emb = components.text_encoder.encode_text(prompt)[None]

    gen = torch.Generator().manual_seed(seed)
    h, w = 512 // 8, 288 // 8
    z = torch.randn((1, 4, h, w), generator=gen)

    timesteps = schedule.sampling_timesteps(steps)
    components.denoiser.eval()
    components.control.eval()
    alpha_bar = schedule.alpha_bar
    with torch.no_grad():
        for i, t in enumerate(timesteps):
            t_tensor = torch.tensor([t], dtype=torch.int64)
            eps = control_denoise_step(
                z,
                t_tensor,
                text_emb,
                wf_tensor,
                components.denoiser,
                None if frozen_only else components.control,
            )
            ab_t = float(alpha_bar[t])
            ab_next = float(alpha_bar[timesteps[i + 1]]) if i + 1 < len(timesteps) else 1.0
            x0 = (z - (1 - ab_t) ** 0.5 * eps) / ab_t**0.5
            z = ab_next**0.5 * x0 + (1 - ab_next) ** 0.5 * eps
        image = components.codec.decode(z)
    return tensor_to_image(image)


def autoencode(components: UiComponents, image: np.ndarray):
    """(latent, reconstruction) through the frozen codec."""
    return components.codec.autoencode(image)
