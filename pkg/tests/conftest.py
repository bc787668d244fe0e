import numpy as np
import pytest
import torch

from uidiff.core import TokenizerConfig, tokenize_layout
from uidiff.layout_diffusion import (
    DenoiserConfig,
    DiscreteSchedule,
    LayoutDenoiser,
    LayoutDiffusionTrainer,
    LayoutTrainConfig,
    save_layout_checkpoint,
)
from uidiff.rico import sample_synthetic_layout
from uidiff.ui_diffusion import UNetConfig, fresh_toy_components, save_ui_checkpoint


@pytest.fixture(scope="session")
def tiny_layout_ckpt(tmp_path_factory):
    """A briefly trained miniature layout model checkpoint."""
    torch.set_num_threads(1)
    model = LayoutDenoiser(
        TokenizerConfig(),
        DenoiserConfig(layers=1, width=32, heads=2, ffn_mult=2),
        seed=0,
    )
    schedule = DiscreteSchedule()
    rng = np.random.default_rng(0)
    seqs = [tokenize_layout(sample_synthetic_layout(rng)) for _ in range(16)]
    trainer = LayoutDiffusionTrainer(
        model, schedule, LayoutTrainConfig(batch_size=8, learning_rate=1e-3, seed=0)
    )
    trainer.train(seqs, steps=30)
    path = tmp_path_factory.mktemp("ckpt") / "layout.ckpt"
    save_layout_checkpoint(model, schedule, path)
    return path


@pytest.fixture(scope="session")
def tiny_ui_ckpt(tmp_path_factory):
    """An untrained (random frozen) miniature UI bundle checkpoint."""
    components = fresh_toy_components(UNetConfig(base=8), seed=0)
    path = tmp_path_factory.mktemp("ckpt") / "ui.ckpt"
    save_ui_checkpoint(components, path)
    return path
