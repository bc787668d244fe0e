"""Image codec: 288x512 RGB <-> 36x64 latent grid (downsample factor 8).

A small convolutional autoencoder trained on synthetic screens, then frozen.
Latents are standardized by a scale learned at pretraining time so the
diffusion stage sees roughly unit-variance inputs.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from ..nnutil import seeded_init

LATENT_CHANNELS = 4
DOWNSAMPLE = 8


class ShapeMismatch(ValueError):
    pass


def image_to_tensor(image: np.ndarray) -> torch.Tensor:
    """uint8 (H, W, 3) -> float32 (1, 3, H, W) in [0, 1]."""
    if image.ndim != 3 or image.shape[2] != 3:
        raise ShapeMismatch(f"expected (H, W, 3) image, got {image.shape}")
    return torch.from_numpy(image.astype(np.float32) / 255.0).permute(2, 0, 1)[None]


def tensor_to_image(x: torch.Tensor) -> np.ndarray:
    """(1, 3, H, W) float in [0, 1] -> uint8 (H, W, 3), round-half-up."""
    arr = x[0].permute(1, 2, 0).detach().numpy()
    return np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


class ImageCodec(nn.Module):
    def __init__(self, seed: int = 0, base: int = 16):
        super().__init__()
        self.frozen = False
        with seeded_init(seed):
            self.encoder = nn.Sequential(
                nn.Conv2d(3, base, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(base, base * 2, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(base * 2, base * 2, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(base * 2, LATENT_CHANNELS, 3, padding=1),
            )
            # Channel counts taper with resolution so the full-resolution
            # convs stay cheap on CPU.
            self.decoder = nn.Sequential(
                nn.Conv2d(LATENT_CHANNELS, base * 2, 3, padding=1),
                nn.SiLU(),
                nn.Upsample(scale_factor=2, mode="nearest"),
                nn.Conv2d(base * 2, base, 3, padding=1),
                nn.SiLU(),
                nn.Upsample(scale_factor=2, mode="nearest"),
                nn.Conv2d(base, base // 2, 3, padding=1),
                nn.SiLU(),
                nn.Upsample(scale_factor=2, mode="nearest"),
                nn.Conv2d(base // 2, 3, 3, padding=1),
            )
        self.register_buffer("latent_scale", torch.ones(()))

    def encode(self, x: torch.Tensor) -> torch.Tensor:
        """(B, 3, H, W) in [0, 1] -> standardized latent (B, 4, H/8, W/8)."""
        if x.shape[-2] % DOWNSAMPLE or x.shape[-1] % DOWNSAMPLE:
            raise ShapeMismatch(f"image dims must be multiples of {DOWNSAMPLE}: {tuple(x.shape)}")
        return self.encoder(x) * self.latent_scale

    def decode(self, z: torch.Tensor) -> torch.Tensor:
        if z.shape[1] != LATENT_CHANNELS:
            raise ShapeMismatch(f"latent must have {LATENT_CHANNELS} channels: {tuple(z.shape)}")
        return torch.sigmoid(self.decoder(z / self.latent_scale))

    def freeze(self) -> None:
        self.requires_grad_(False)
        self.eval()
        self.frozen = True

    def autoencode(self, image: np.ndarray) -> tuple[torch.Tensor, np.ndarray]:
        """uint8 (H, W, 3) -> (latent (4, H/8, W/8), reconstructed uint8 image)."""
        self.eval()
        x = image_to_tensor(image)
        with torch.no_grad():
            z = self.encode(x)
            recon = self.decode(z)
        return z[0], tensor_to_image(recon)


def pretrain_codec(
    codec: ImageCodec,
    images: list[np.ndarray],
    steps: int = 600,
    batch_size: int = 4,
    learning_rate: float = 3e-3,
    seed: int = 0,
) -> list[float]:
    """MSE reconstruction pretrain on uint8 screens, then freeze.

    The learning rate drops to a quarter after two thirds of the steps.
    Fits latent_scale to the observed latent standard deviation afterwards.
    """
    rng = np.random.default_rng(seed)
    tensors = torch.cat([image_to_tensor(img) for img in images])
    opt = torch.optim.Adam(codec.parameters(), lr=learning_rate)
    losses = []
    codec.train()
    for step in range(steps):
        if step == (2 * steps) // 3:
            for group in opt.param_groups:
                group["lr"] = learning_rate / 4
        idx = rng.integers(0, len(images), size=batch_size)
        batch = tensors[torch.from_numpy(idx)]
        recon = torch.sigmoid(codec.decoder(codec.encoder(batch)))
        loss = nn.functional.mse_loss(recon, batch)
        opt.zero_grad()
        loss.backward()
        opt.step()
        losses.append(float(loss.detach()))

    with torch.no_grad():
        sample = tensors[: min(len(images), 32)]
        std = codec.encoder(sample).std()
        codec.latent_scale.fill_(1.0 / max(float(std), 1e-6))
    codec.freeze()
    return losses
