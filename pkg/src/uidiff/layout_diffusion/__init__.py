from .checkpoint import CheckpointError, load_layout_checkpoint, save_layout_checkpoint
from .diffusion import (
    ComponentCondition,
    ConditionTooLarge,
    LayoutDiffusionTrainer,
    LayoutTrainConfig,
    NonFiniteLoss,
    UntrainedDenoiser,
    corrupt,
    masked_cross_entropy,
    sample,
)
from .model import DenoiserConfig, LayoutDenoiser
from .schedule import DiscreteSchedule

__all__ = [
    "CheckpointError",
    "load_layout_checkpoint",
    "save_layout_checkpoint",
    "ComponentCondition",
    "ConditionTooLarge",
    "LayoutDiffusionTrainer",
    "LayoutTrainConfig",
    "NonFiniteLoss",
    "UntrainedDenoiser",
    "corrupt",
    "masked_cross_entropy",
    "sample",
    "DenoiserConfig",
    "LayoutDenoiser",
    "DiscreteSchedule",
]
