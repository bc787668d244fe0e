"""Latent noise predictor: a compact hierarchical encoder-decoder with skip
connections, conditioned on the timestep and a pooled prompt embedding.

The encoder half (conv_in .. mid, plus the conditioning projections) is the
part the control branch clones; the decoder consumes the skip tensors, which
is where control residuals are injected.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from ..nnutil import seeded_init, sinusoidal_embedding
from .codec import LATENT_CHANNELS, ShapeMismatch
from .text_encoder import EMBED_DIM


@dataclass(frozen=True)
class UNetConfig:
    base: int = 32

    @property
    def emb_dim(self) -> int:
        return self.base * 2

    def to_dict(self) -> dict:
        return {"base": self.base}

    @staticmethod
    def from_dict(data: dict) -> "UNetConfig":
        return UNetConfig(**data)


def _norm(channels: int) -> nn.GroupNorm:
    return nn.GroupNorm(min(8, channels), channels)


class ResBlock(nn.Module):
    def __init__(self, in_ch: int, out_ch: int, emb_dim: int):
        super().__init__()
        self.norm1 = _norm(in_ch)
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, padding=1)
        self.emb_proj = nn.Linear(emb_dim, out_ch)
        self.norm2 = _norm(out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1)
        self.skip = nn.Conv2d(in_ch, out_ch, 1) if in_ch != out_ch else nn.Identity()

    def forward(self, x: torch.Tensor, emb: torch.Tensor) -> torch.Tensor:
        h = self.conv1(nn.functional.silu(self.norm1(x)))
        h = h + self.emb_proj(nn.functional.silu(emb))[:, :, None, None]
        h = self.conv2(nn.functional.silu(self.norm2(h)))
        return h + self.skip(x)


# Modules the control branch clones ("encoder half" + conditioning projections).
ENCODER_MODULES = (
    "time_mlp",
    "text_proj",
    "conv_in",
    "enc1",
    "down1",
    "enc2",
    "down2",
    "mid",
)


class LatentDenoiser(nn.Module):
    """Predicts the noise eps from (noisy latent, timestep, text embeddings)."""

    def __init__(self, config: UNetConfig = UNetConfig(), seed: int = 0):
        super().__init__()
        self.config = config
        self.frozen = False
        base, emb = config.base, config.emb_dim
        with seeded_init(seed):
            self.time_mlp = nn.Sequential(
                nn.Linear(emb, emb), nn.SiLU(), nn.Linear(emb, emb)
            )
            self.text_proj = nn.Linear(EMBED_DIM, emb)
            self.conv_in = nn.Conv2d(LATENT_CHANNELS, base, 3, padding=1)
            self.enc1 = ResBlock(base, base, emb)
            self.down1 = nn.Conv2d(base, base, 3, stride=2, padding=1)
            self.enc2 = ResBlock(base, base * 2, emb)
            self.down2 = nn.Conv2d(base * 2, base * 2, 3, stride=2, padding=1)
            self.mid = ResBlock(base * 2, base * 2, emb)
            self.dec_mid = ResBlock(base * 2, base * 2, emb)
            self.up2 = nn.Conv2d(base * 2, base * 2, 3, padding=1)
            self.dec2 = ResBlock(base * 4, base * 2, emb)
            self.up1 = nn.Conv2d(base * 2, base, 3, padding=1)
            self.dec1 = ResBlock(base * 2, base, emb)
            self.out_norm = _norm(base)
            self.conv_out = nn.Conv2d(base, LATENT_CHANNELS, 3, padding=1)

    def conditioning(self, t: torch.Tensor, text_emb: torch.Tensor) -> torch.Tensor:
        """Combine timestep and pooled prompt embeddings into one vector."""
        dtype = self.conv_in.weight.dtype
        temb = self.time_mlp(sinusoidal_embedding(t, self.config.emb_dim).to(dtype))
        return temb + self.text_proj(text_emb.mean(dim=1).to(dtype))

    def encode_features(
        self, z: torch.Tensor, emb: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        h1 = self.enc1(self.conv_in(z), emb)
        h3 = self.enc2(self.down1(h1), emb)
        m = self.mid(self.down2(h3), emb)
        return h1, h3, m

    def forward(
        self,
        z: torch.Tensor,
        t: torch.Tensor,
        text_emb: torch.Tensor,
        control_residuals: tuple[torch.Tensor, torch.Tensor, torch.Tensor] | None = None,
    ) -> torch.Tensor:
        if z.shape[1] != LATENT_CHANNELS:
            raise ShapeMismatch(f"latent must have {LATENT_CHANNELS} channels: {tuple(z.shape)}")
        if text_emb.ndim != 3 or text_emb.shape[0] != z.shape[0]:
            raise ShapeMismatch(
                f"text embeddings {tuple(text_emb.shape)} do not match batch {z.shape[0]}"
            )
        emb = self.conditioning(t, text_emb)
        h1, h3, m = self.encode_features(z, emb)
        if control_residuals is not None:
            c1, c3, cm = control_residuals
            if c1.shape != h1.shape or c3.shape != h3.shape or cm.shape != m.shape:
                raise ShapeMismatch("control residual shapes do not match skip tensors")
            h1 = h1 + c1
            h3 = h3 + c3
            m = m + cm

        x = self.dec_mid(m, emb)
        x = self.up2(nn.functional.interpolate(x, scale_factor=2, mode="nearest"))
        x = self.dec2(torch.cat([x, h3], dim=1), emb)
        x = self.up1(nn.functional.interpolate(x, scale_factor=2, mode="nearest"))
        x = self.dec1(torch.cat([x, h1], dim=1), emb)
        return self.conv_out(nn.functional.silu(self.out_norm(x)))

    def freeze(self) -> None:
        self.requires_grad_(False)
        self.eval()
        self.frozen = True
