"""Control-branch fine-tuning against a preprocessed dataset manifest.

Only control-branch parameters receive updates: the text encoder, the latent
denoiser and the image codec stay locked, which is verified by hashing their
parameter blobs before and after the run (any drift is a hard failure).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import torch

from ..nnutil import hash_parameters
from ..rico.captions import DEFAULT_PROMPT
from ..rico.ingest import ManifestEntry
from ..wireframe import load_png
from .codec import image_to_tensor
from .control import control_denoise_step
from .schedule import add_noise

log = logging.getLogger(__name__)


class FrozenDrift(RuntimeError):
    pass


class NonFiniteLoss(RuntimeError):
    pass


@dataclass
class FinetuneConfig:
    epochs: int = 1
    batch_size: int = 4
    learning_rate: float = 1e-5
    weight_decay: float = 0.01
    prompt_dropout: float = 0.5
    seed: int = 0
    max_steps: int | None = None


def finetune_control(entries: list[ManifestEntry], components, cfg: FinetuneConfig) -> list[float]:
    """Run the fine-tune; returns the per-step loss log."""
    if not entries:
        raise ValueError("manifest has no records")
    text, codec, denoiser, control = (
        components.text_encoder,
        components.codec,
        components.denoiser,
        components.control,
    )
    schedule = components.schedule
    frozen = {
        "text_encoder": hash_parameters(text),
        "denoiser": hash_parameters(denoiser),
        "codec": hash_parameters(codec),
    }

    # Frozen components are deterministic, so per-record latents and both
    # caption variants' embeddings can be computed once up front.
    latents = []
    wireframes = []
    caption_embs = []
    with torch.no_grad():
        for entry in entries:
            latents.append(codec.encode(image_to_tensor(load_png(entry.image)))[0])
            wireframes.append(load_png(entry.conditioning))
            caption_embs.append(text.encode_text(entry.caption))
        default_emb = text.encode_text(DEFAULT_PROMPT)
    latents = torch.stack(latents)

    rng = np.random.default_rng(cfg.seed)
    noise_gen = torch.Generator().manual_seed(cfg.seed)
    optimizer = torch.optim.AdamW(
        control.parameters(), lr=cfg.learning_rate, weight_decay=cfg.weight_decay
    )

    losses: list[float] = []
    done = False
    for _ in range(cfg.epochs):
        if done:
            break
        order = rng.permutation(len(entries))
        for start in range(0, len(order), cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            batch = len(idx)
            # Prompt dropout is re-drawn each epoch pass, one draw per record.
            use_default = rng.random(batch) < cfg.prompt_dropout
            text_emb = torch.stack(
                [
                    default_emb if use_default[j] else caption_embs[i]
                    for j, i in enumerate(idx)
                ]
            )
            wf = torch.cat([image_to_tensor(wireframes[i]) for i in idx])
            t = torch.from_numpy(rng.integers(1, schedule.t_train + 1, size=batch))
            z0 = latents[torch.from_numpy(idx)]
            eps = torch.randn(z0.shape, generator=noise_gen)
            z_t = add_noise(z0, t, eps, schedule)

            eps_hat = control_denoise_step(z_t, t, text_emb, wf, denoiser, control)
            loss = torch.nn.functional.mse_loss(eps_hat, eps)
            value = float(loss.detach())
            if not np.isfinite(value):
                raise NonFiniteLoss(f"non-finite loss {value} on records {idx.tolist()}")
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(value)
            if cfg.max_steps is not None and len(losses) >= cfg.max_steps:
                done = True
                break

    after = {
        "text_encoder": hash_parameters(text),
        "denoiser": hash_parameters(denoiser),
        "codec": hash_parameters(codec),
    }
    drifted = [name for name in frozen if frozen[name] != after[name]]
    if drifted:
        raise FrozenDrift(f"frozen components changed during fine-tune: {drifted}")
    log.info("fine-tune finished: %d steps, final loss %.5f", len(losses), losses[-1])
    return losses
