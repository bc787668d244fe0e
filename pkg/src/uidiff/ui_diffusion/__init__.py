from .checkpoint import load_ui_checkpoint, save_ui_checkpoint
from .codec import (
    LATENT_CHANNELS,
    ImageCodec,
    ShapeMismatch,
    image_to_tensor,
    pretrain_codec,
    tensor_to_image,
)
from .control import ControlBranch, control_denoise_step
from .finetune import FinetuneConfig, FrozenDrift, NonFiniteLoss, finetune_control
from .pipeline import (
    CheckpointMismatch,
    ToyTrainConfig,
    UiComponents,
    autoencode,
    build_toy_components,
    fresh_toy_components,
    generate_ui,
    pretrain_base_denoiser,
)
from .schedule import ContinuousSchedule, add_noise
from .text_encoder import EMBED_DIM, MAX_TOKENS, TextEncoder, pretrain_text_encoder
from .unet import LatentDenoiser, UNetConfig

__all__ = [
    "load_ui_checkpoint",
    "save_ui_checkpoint",
    "LATENT_CHANNELS",
    "ImageCodec",
    "ShapeMismatch",
    "image_to_tensor",
    "pretrain_codec",
    "tensor_to_image",
    "ControlBranch",
    "control_denoise_step",
    "FinetuneConfig",
    "FrozenDrift",
    "NonFiniteLoss",
    "finetune_control",
    "CheckpointMismatch",
    "ToyTrainConfig",
    "UiComponents",
    "autoencode",
    "build_toy_components",
    "fresh_toy_components",
    "generate_ui",
    "pretrain_base_denoiser",
    "ContinuousSchedule",
    "add_noise",
    "EMBED_DIM",
    "MAX_TOKENS",
    "TextEncoder",
    "pretrain_text_encoder",
    "LatentDenoiser",
    "UNetConfig",
]
