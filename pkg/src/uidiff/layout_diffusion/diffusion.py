"""Forward corruption, denoiser training and conditional sampling.

Corruption is absorbing-state: non-PAD tokens independently collapse to MASK
with the schedule's cumulative probability; PAD tokens are never touched.
Sampling runs the reverse chain from an all-MASK state; a component condition
clamps the first k slots' category tokens (sorted by category id), which the
chain never revisits, so every requested category appears in the output.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import torch

from ..core import (
    CATEGORIES,
    KIND_CAT,
    TOKENS_PER_SLOT,
    ComponentCategory,
    Layout,
    TokenizerConfig,
    TokenSequence,
    category_by_name,
    detokenize_layout,
)
from .model import LayoutDenoiser
from .schedule import DiscreteSchedule


class ConditionTooLarge(ValueError):
    pass


class UntrainedDenoiser(RuntimeError):
    pass


class NonFiniteLoss(RuntimeError):
    def __init__(self, message: str, batch_ids=None):
        super().__init__(message)
        self.batch_ids = batch_ids


@dataclass(frozen=True)
class ComponentCondition:
    """Multiset of required component categories."""

    counts: tuple[tuple[int, int], ...]  # ((category_id, count), ...) sorted by id

    @staticmethod
    def of(items: Mapping[ComponentCategory | str | int, int] | None) -> "ComponentCondition":
        counter: Counter[int] = Counter()
        for key, count in (items or {}).items():
            if count < 1:
                raise ValueError(f"count for {key!r} must be >= 1, got {count}")
            if isinstance(key, ComponentCategory):
                cat_id = key.id
            elif isinstance(key, int):
                cat_id = CATEGORIES[key].id
            else:
                cat_id = category_by_name(key).id
            counter[cat_id] += count
        return ComponentCondition(tuple(sorted(counter.items())))

    @staticmethod
    def from_string(text: str) -> "ComponentCondition":
        """Parse "text button:2, toolbar:1" (bare names imply count 1)."""
        items: dict[str, int] = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            name, _, count = part.partition(":")
            items[name.strip()] = items.get(name.strip(), 0) + (
                int(count) if count.strip() else 1
            )
        return ComponentCondition.of(items)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def expanded_ids(self) -> list[int]:
        """Category ids repeated by count, ascending."""
        out: list[int] = []
        for cat_id, count in self.counts:
            out.extend([cat_id] * count)
        return out

    def to_dict(self) -> dict[str, int]:
        return {CATEGORIES[cat_id].name: count for cat_id, count in self.counts}


def corrupt(
    seq: TokenSequence, t: int, schedule: DiscreteSchedule, rng: np.random.Generator
) -> TokenSequence:
    """Mask each non-PAD token independently with probability mask_prob(t)."""
    if seq.is_mask().any():
        raise ValueError("sequence to corrupt must not contain MASK")
    p = schedule.mask_prob(t)
    draw = rng.random(seq.tokens.shape)
    to_mask = ~seq.is_pad() & (draw < p)
    tokens = np.where(to_mask, seq.config.mask_tokens(), seq.tokens)
    return TokenSequence(tokens, seq.config)


def _corrupt_batch(
    tokens: np.ndarray,
    t: np.ndarray,
    cfg: TokenizerConfig,
    schedule: DiscreteSchedule,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    p = t.astype(np.float64) / schedule.timesteps
    pad = tokens == cfg.pad_tokens()[None, :]
    draw = rng.random(tokens.shape)
    masked = ~pad & (draw < p[:, None])
    corrupted = np.where(masked, cfg.mask_tokens()[None, :], tokens)
    return corrupted, masked


def masked_cross_entropy(
    logits: list[torch.Tensor], clean: torch.Tensor, masked: torch.Tensor
) -> torch.Tensor:
    """Mean cross-entropy over masked positions only; 0 when nothing is masked.

    clean and masked have shape (B, e_max, TOKENS_PER_SLOT).
    """
    total = logits[0].new_zeros(())
    count = 0
    for kind in range(TOKENS_PER_SLOT):
        sel = masked[:, :, kind]
        n = int(sel.sum())
        if n == 0:
            continue
        kind_logits = logits[kind][sel]
        targets = clean[:, :, kind][sel]
        total = total + torch.nn.functional.cross_entropy(
            kind_logits, targets, reduction="sum"
        )
        count += n
    if count == 0:
        return logits[0].new_zeros(())
    return total / count


@dataclass
class LayoutTrainConfig:
    steps: int = 2000
    batch_size: int = 8
    learning_rate: float = 3e-4
    weight_decay: float = 0.01
    seed: int = 0


class LayoutDiffusionTrainer:
    """Single-threaded, seed-deterministic trainer for the layout denoiser."""

    def __init__(
        self,
        model: LayoutDenoiser,
        schedule: DiscreteSchedule,
        cfg: LayoutTrainConfig = LayoutTrainConfig(),
    ):
        self.model = model
        self.schedule = schedule
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.optimizer = torch.optim.AdamW(
            model.parameters(), lr=cfg.learning_rate, weight_decay=cfg.weight_decay
        )
        self.losses: list[float] = []

    def training_step(self, batch_tokens: np.ndarray, batch_ids=None) -> float:
        """One corruption + denoising + update step over a (B, seq_len) batch."""
        cfg = self.model.tokenizer
        batch = batch_tokens.shape[0]
        t = self.rng.integers(0, self.schedule.timesteps + 1, size=batch)
        corrupted, masked = _corrupt_batch(batch_tokens, t, cfg, self.schedule, self.rng)

        logits = self.model(
            torch.from_numpy(corrupted), torch.from_numpy(t.astype(np.int64))
        )
        clean = torch.from_numpy(batch_tokens).view(batch, cfg.e_max, TOKENS_PER_SLOT)
        masked_t = torch.from_numpy(masked).view(batch, cfg.e_max, TOKENS_PER_SLOT)
        loss = masked_cross_entropy(logits, clean, masked_t)

        value = float(loss.detach())
        if not np.isfinite(value):
            raise NonFiniteLoss(f"non-finite loss {value}", batch_ids=batch_ids)
        if loss.requires_grad and masked.any():
            self.optimizer.zero_grad()
            loss.backward()
            self.optimizer.step()
        self.losses.append(value)
        return value

    def train(self, sequences: list[TokenSequence], steps: int | None = None) -> list[float]:
        tokens = np.stack([s.tokens for s in sequences])
        for _ in range(steps if steps is not None else self.cfg.steps):
            idx = self.rng.integers(0, len(sequences), size=self.cfg.batch_size)
            self.training_step(tokens[idx], batch_ids=idx.tolist())
        self.model.mark_trained()
        return self.losses


def sample(
    model: LayoutDenoiser,
    schedule: DiscreteSchedule,
    condition: ComponentCondition | None,
    rng: np.random.Generator,
    canvas: tuple[int, int] = (288, 512),
    allow_untrained: bool = False,
) -> Layout:
    """Reverse the corruption chain into a Layout.

    Geometry positions sample over bin tokens only; slot occupancy is decided
    by the category position (a PAD category empties the whole slot), so the
    result never mixes PAD and non-PAD within a slot and never contains MASK.
    """
    cfg = model.tokenizer
    if condition is not None and condition.total > cfg.e_max:
        raise ConditionTooLarge(
            f"condition lists {condition.total} components, e_max={cfg.e_max}"
        )
    if not model.trained and not allow_untrained:
        raise UntrainedDenoiser(
            "denoiser has not been trained; pass allow_untrained=True to sample anyway"
        )

    mask_tokens = cfg.mask_tokens()
    state = mask_tokens.copy()
    clamped = np.zeros(cfg.seq_len, dtype=bool)
    if condition is not None:
        for slot, cat_id in enumerate(condition.expanded_ids()):
            state[slot * TOKENS_PER_SLOT + KIND_CAT] = cat_id
            clamped[slot * TOKENS_PER_SLOT + KIND_CAT] = True

    model.eval()
    n_bins = cfg.bins
    for t in range(schedule.timesteps, 0, -1):
        masked = state == mask_tokens
        if not masked.any():
            break
        with torch.no_grad():
            logits = model(
                torch.from_numpy(state[None, :]),
                torch.tensor([t], dtype=torch.int64),
            )
        reveal = rng.random(cfg.seq_len) < schedule.reveal_prob(t)
        for pos in np.nonzero(masked & reveal)[0]:
            kind = pos % TOKENS_PER_SLOT
            slot = pos // TOKENS_PER_SLOT
            position_logits = logits[kind][0, slot]
            if kind != KIND_CAT:
                position_logits = position_logits[:n_bins]  # occupancy is the category's call
            probs = torch.softmax(position_logits.double(), dim=0).numpy()
            probs = probs / probs.sum()
            state[pos] = rng.choice(len(probs), p=probs)

    # Slot coherence: a PAD category empties its slot.
    pad_tokens = cfg.pad_tokens()
    slots = state.reshape(cfg.e_max, TOKENS_PER_SLOT)
    pad_slots = slots[:, KIND_CAT] == cfg.pad_token(KIND_CAT)
    slots[pad_slots] = pad_tokens.reshape(cfg.e_max, TOKENS_PER_SLOT)[pad_slots]

    return detokenize_layout(TokenSequence(state, cfg), canvas=canvas)
