"""Trainable control branch joined to the frozen denoiser by zero convolutions.

The branch clones the denoiser's encoder half, adds a strided conv stack that
brings the 288x512 wireframe down to latent resolution, and emits one
residual per skip connection (plus the mid features), each passed through a
1x1 convolution whose weights and biases start at exactly zero. At
initialization the branch therefore contributes nothing and the joint model
reproduces the frozen model bit for bit.
"""

from __future__ import annotations

import torch
from torch import nn

from ..nnutil import seeded_init
from .unet import ENCODER_MODULES, LatentDenoiser, ResBlock, ShapeMismatch


class ControlBranch(nn.Module):
    def __init__(self, frozen: LatentDenoiser, seed: int = 0):
        super().__init__()
        config = frozen.config
        self.config = config
        base, emb = config.base, config.emb_dim
        with seeded_init(seed):
            # Same shapes as the frozen encoder half; weights cloned below.
            self.time_mlp = nn.Sequential(
                nn.Linear(emb, emb), nn.SiLU(), nn.Linear(emb, emb)
            )
            self.text_proj = nn.Linear(frozen.text_proj.in_features, emb)
            self.conv_in = nn.Conv2d(frozen.conv_in.in_channels, base, 3, padding=1)
            self.enc1 = ResBlock(base, base, emb)
            self.down1 = nn.Conv2d(base, base, 3, stride=2, padding=1)
            self.enc2 = ResBlock(base, base * 2, emb)
            self.down2 = nn.Conv2d(base * 2, base * 2, 3, stride=2, padding=1)
            self.mid = ResBlock(base * 2, base * 2, emb)

            self.cond_encoder = nn.Sequential(
                nn.Conv2d(3, 16, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(16, 32, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(32, 32, 3, stride=2, padding=1),
                nn.SiLU(),
                nn.Conv2d(32, base, 3, padding=1),
            )
        self.zero_convs = nn.ModuleList(
            [
                nn.Conv2d(base, base, 1),
                nn.Conv2d(base * 2, base * 2, 1),
                nn.Conv2d(base * 2, base * 2, 1),
            ]
        )
        for conv in self.zero_convs:
            nn.init.zeros_(conv.weight)
            nn.init.zeros_(conv.bias)
        self.clone_from(frozen)

    def clone_from(self, frozen: LatentDenoiser) -> None:
        """Copy the frozen encoder half's weights into this trainable copy."""
        for name in ENCODER_MODULES:
            getattr(self, name).load_state_dict(getattr(frozen, name).state_dict())

    def conditioning(self, t: torch.Tensor, text_emb: torch.Tensor) -> torch.Tensor:
        dtype = self.conv_in.weight.dtype
        from ..nnutil import sinusoidal_embedding

        temb = self.time_mlp(sinusoidal_embedding(t, self.config.emb_dim).to(dtype))
        return temb + self.text_proj(text_emb.mean(dim=1).to(dtype))

    def forward(
        self,
        z: torch.Tensor,
        t: torch.Tensor,
        text_emb: torch.Tensor,
        wireframe: torch.Tensor,
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """Residuals for (skip1, skip2, mid) of the frozen decoder."""
        if wireframe.shape[0] != z.shape[0] or wireframe.shape[1] != 3:
            raise ShapeMismatch(f"wireframe shape {tuple(wireframe.shape)} invalid")
        cond = self.cond_encoder(wireframe)
        if cond.shape[-2:] != z.shape[-2:]:
            raise ShapeMismatch(
                f"encoded wireframe {tuple(cond.shape)} does not reach latent "
                f"resolution {tuple(z.shape)}"
            )
        emb = self.conditioning(t, text_emb)
        h1 = self.enc1(self.conv_in(z) + cond, emb)
        h3 = self.enc2(self.down1(h1), emb)
        m = self.mid(self.down2(h3), emb)
        return self.zero_convs[0](h1), self.zero_convs[1](h3), self.zero_convs[2](m)


def control_denoise_step(
    noisy_latent: torch.Tensor,
    t: torch.Tensor,
    text_emb: torch.Tensor,
    wireframe: torch.Tensor | None,
    frozen: LatentDenoiser,
    control: ControlBranch | None,
) -> torch.Tensor:
    """One noise prediction through the frozen model, optionally steered by
    the control branch's zero-convolved residuals."""
    residuals = None
    if control is not None:
        if wireframe is None:
            raise ShapeMismatch("control branch requires a wireframe tensor")
        residuals = control(noisy_latent, t, text_emb, wireframe)
    return frozen(noisy_latent, t, text_emb, residuals)
