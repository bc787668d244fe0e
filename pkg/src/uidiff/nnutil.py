"""Small shared helpers for the torch models: seeded init, timestep
embeddings, parameter hashing."""

from __future__ import annotations

import hashlib
import math
from contextlib import contextmanager

import torch
from torch import nn


@contextmanager
def seeded_init(seed: int):
    """Deterministic module construction without touching the global RNG."""
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        yield


def sinusoidal_embedding(t: torch.Tensor, dim: int, max_period: float = 10_000.0) -> torch.Tensor:
    """Classic sin/cos timestep embedding; t is an integer tensor of shape (B,)."""
    half = dim // 2
    freqs = torch.exp(
        -math.log(max_period) * torch.arange(half, dtype=torch.float64) / half
    ).to(t.device)
    args = t.double().unsqueeze(-1) * freqs
    emb = torch.cat([torch.sin(args), torch.cos(args)], dim=-1)
    if dim % 2:
        emb = torch.nn.functional.pad(emb, (0, 1))
    return emb


def hash_parameters(module: nn.Module) -> str:
    """SHA-256 over the module's state dict (keys and raw tensor bytes)."""
    h = hashlib.sha256()
    for key, tensor in sorted(module.state_dict().items()):
        h.update(key.encode())
        h.update(tensor.detach().cpu().contiguous().numpy().tobytes())
    return h.hexdigest()


def hash_config(data) -> str:
    """Stable hash of a JSON-serializable config blob."""
    import json

    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


def count_changed_parameters(before: dict, module: nn.Module) -> int:
    """Number of parameters whose tensors differ from a snapshot."""
    changed = 0
    after = dict(module.named_parameters())
    for name, old in before.items():
        if not torch.equal(old, after[name].detach()):
            changed += 1
    return changed


def snapshot_parameters(module: nn.Module) -> dict:
    return {name: p.detach().clone() for name, p in module.named_parameters()}
