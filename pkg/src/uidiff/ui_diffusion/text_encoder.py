"""Compact frozen text encoder for prompts.

Word-level tokenizer over a fixed vocabulary derived from the caption
template language plus category names; a small bidirectional transformer
maps a prompt to a fixed-shape (L_txt x D_txt) embedding grid. The encoder
is briefly pretrained by masked-word reconstruction on template captions and
then frozen; inference is deterministic and cached per prompt.
"""

from __future__ import annotations

import logging
import re

import numpy as np
import torch
from torch import nn

from ..core import CATEGORIES
from ..nnutil import seeded_init
from ..rico.captions import _COMPONENT_TEMPLATES, _SCREEN_TEMPLATES, DEFAULT_PROMPT

log = logging.getLogger(__name__)

PAD, UNK, MASK = 0, 1, 2
SPECIALS = ("<pad>", "<unk>", "<mask>")

MAX_TOKENS = 64
EMBED_DIM = 64


def _words(text: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", text.lower())


def build_vocabulary() -> tuple[str, ...]:
    """Deterministic vocabulary: template language + category names."""
    words: set[str] = set()
    for variants in _SCREEN_TEMPLATES.values():
        for template in variants:
            words.update(_words(re.sub(r"\{\w+\}", " ", template)))
    for template in _COMPONENT_TEMPLATES:
        words.update(_words(re.sub(r"\{\w+\}", " ", template)))
    for cat in CATEGORIES:
        words.update(_words(cat.name))
    words.update(_words(DEFAULT_PROMPT))
    words.update(("top", "center", "bottom", "a", "an", "app", "page", "with", "ui"))
    return SPECIALS + tuple(sorted(words))


class TextEncoder(nn.Module):
    """Frozen prompt encoder; output shape is always (MAX_TOKENS, EMBED_DIM)."""

    def __init__(self, seed: int = 0, layers: int = 2, heads: int = 4):
        super().__init__()
        self.vocab = build_vocabulary()
        self.index = {w: i for i, w in enumerate(self.vocab)}
        self.frozen = False
        self._cache: dict[str, torch.Tensor] = {}
        with seeded_init(seed):
            self.embedding = nn.Embedding(len(self.vocab), EMBED_DIM)
            self.position = nn.Embedding(MAX_TOKENS, EMBED_DIM)
            layer = nn.TransformerEncoderLayer(
                d_model=EMBED_DIM,
                nhead=heads,
                dim_feedforward=EMBED_DIM * 2,
                dropout=0.0,
                activation="gelu",
                batch_first=True,
                norm_first=True,
            )
            self.encoder = nn.TransformerEncoder(
                layer, num_layers=layers, enable_nested_tensor=False
            )
            self.reconstruction_head = nn.Linear(EMBED_DIM, len(self.vocab))

    def tokenize(self, prompt: str) -> np.ndarray:
        words = _words(prompt)
        if len(words) > MAX_TOKENS:
            log.warning(
                "prompt has %d words, truncating to %d: %r", len(words), MAX_TOKENS, prompt
            )
            words = words[:MAX_TOKENS]
        ids = [self.index.get(w, UNK) for w in words]
        ids += [PAD] * (MAX_TOKENS - len(ids))
        return np.array(ids, dtype=np.int64)

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        """(B, MAX_TOKENS) ids -> (B, MAX_TOKENS, EMBED_DIM) embeddings."""
        x = self.embedding(token_ids) + self.position(
            torch.arange(MAX_TOKENS, device=token_ids.device)
        )
        return self.encoder(x)

    def encode_text(self, prompt: str) -> torch.Tensor:
        """Deterministic (MAX_TOKENS, EMBED_DIM) embedding of one prompt; cached."""
        if prompt in self._cache:
            return self._cache[prompt]
        self.eval()
        ids = torch.from_numpy(self.tokenize(prompt))[None, :]
        with torch.no_grad():
            emb = self.forward(ids)[0].clone()
        if self.frozen:
            self._cache[prompt] = emb
        return emb

    def freeze(self) -> None:
        self.requires_grad_(False)
        self.eval()
        self.frozen = True
        self._cache.clear()


def pretrain_text_encoder(
    encoder: TextEncoder, captions: list[str], steps: int = 300, seed: int = 0,
    batch_size: int = 16, learning_rate: float = 1e-3,
) -> list[float]:
    """Masked-word reconstruction pretrain, then freeze."""
    rng = np.random.default_rng(seed)
    opt = torch.optim.AdamW(encoder.parameters(), lr=learning_rate)
    token_rows = np.stack([encoder.tokenize(c) for c in captions])
    losses = []
    encoder.train()
    for _ in range(steps):
        rows = token_rows[rng.integers(0, len(token_rows), size=batch_size)]
        mask = (rng.random(rows.shape) < 0.3) & (rows != PAD)
        corrupted = np.where(mask, MASK, rows)
        hidden = encoder(torch.from_numpy(corrupted))
        logits = encoder.reconstruction_head(hidden)
        sel = torch.from_numpy(mask)
        if not sel.any():
            continue
        loss = nn.functional.cross_entropy(logits[sel], torch.from_numpy(rows)[sel])
        opt.zero_grad()
        loss.backward()
        opt.step()
        losses.append(float(loss.detach()))
    encoder.freeze()
    return losses
