"""Bidirectional sequence denoiser over layout token sequences.

Five attribute kinds (category, x, y, w, h) get their own embedding tables
and output heads; MASK ids exist in the input vocabularies but are excluded
from every output head, so predicted distributions can never place mass on
MASK. A sinusoidal timestep embedding is added to every position.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from ..core import TOKENS_PER_SLOT, TokenizerConfig
from ..nnutil import seeded_init, sinusoidal_embedding


@dataclass(frozen=True)
class DenoiserConfig:
    layers: int = 4
    width: int = 128
    heads: int = 4
    ffn_mult: int = 4

    def to_dict(self) -> dict:
        return {
            "layers": self.layers,
            "width": self.width,
            "heads": self.heads,
            "ffn_mult": self.ffn_mult,
        }

    @staticmethod
    def from_dict(data: dict) -> "DenoiserConfig":
        return DenoiserConfig(**data)


class LayoutDenoiser(nn.Module):
    def __init__(
        self,
        tokenizer: TokenizerConfig = TokenizerConfig(),
        config: DenoiserConfig = DenoiserConfig(),
        timesteps: int = 100,
        seed: int = 0,
    ):
        super().__init__()
        self.tokenizer = tokenizer
        self.config = config
        self.timesteps = timesteps
        self.trained = False
        width = config.width

        with seeded_init(seed):
            # Input vocabularies include PAD and MASK.
            self.token_embeddings = nn.ModuleList(
                [
                    nn.Embedding(tokenizer.vocab_size(kind), width)
                    for kind in range(TOKENS_PER_SLOT)
                ]
            )
            self.position_embedding = nn.Embedding(tokenizer.seq_len, width)
            self.time_mlp = nn.Sequential(
                nn.Linear(width, width), nn.GELU(), nn.Linear(width, width)
            )
            layer = nn.TransformerEncoderLayer(
                d_model=width,
                nhead=config.heads,
                dim_feedforward=width * config.ffn_mult,
                dropout=0.0,
                activation="gelu",
                batch_first=True,
                norm_first=True,
            )
            self.encoder = nn.TransformerEncoder(
                layer, num_layers=config.layers, enable_nested_tensor=False
            )
            # Output vocabularies include PAD but never MASK.
            self.heads = nn.ModuleList(
                [
                    nn.Linear(width, tokenizer.vocab_size(kind) - 1)
                    for kind in range(TOKENS_PER_SLOT)
                ]
            )

    def forward(self, tokens: torch.Tensor, t: torch.Tensor) -> list[torch.Tensor]:
        """tokens (B, seq_len) int64, t (B,) int64 -> per-kind logits
        [(B, e_max, vocab_size(kind) - 1)] for kind = 0..4."""
        batch, seq_len = tokens.shape
        e_max = self.tokenizer.e_max
        slots = tokens.view(batch, e_max, TOKENS_PER_SLOT)

        parts = [
            self.token_embeddings[kind](slots[:, :, kind])
            for kind in range(TOKENS_PER_SLOT)
        ]
        x = torch.stack(parts, dim=2).view(batch, seq_len, -1)
        positions = torch.arange(seq_len, device=tokens.device)
        x = x + self.position_embedding(positions)
        temb = sinusoidal_embedding(t, self.config.width).to(x.dtype)
        x = x + self.time_mlp(temb).unsqueeze(1)

        hidden = self.encoder(x).view(batch, e_max, TOKENS_PER_SLOT, -1)
        return [
            self.heads[kind](hidden[:, :, kind, :]) for kind in range(TOKENS_PER_SLOT)
        ]

    def mark_trained(self) -> None:
        self.trained = True
