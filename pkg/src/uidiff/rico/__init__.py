from .captions import (
    DEFAULT_PROMPT,
    DEFAULT_TEMPLATES,
    CaptionTemplateSet,
    apply_prompt_dropout,
    generate_caption,
)
from .hierarchy import MalformedHierarchy, parse_hierarchy
from .ingest import (
    CorruptImage,
    DatasetStats,
    DimensionMismatch,
    IngestConfig,
    IOFailure,
    ManifestEntry,
    Rejected,
    RicoRecord,
    TrainingRecord,
    build_training_set,
    preprocess_record,
    read_manifest,
    scan_rico_root,
)
from .synthetic import (
    generate_synthetic_dataset,
    render_fake_screenshot,
    sample_synthetic_layout,
)

__all__ = [
    "DEFAULT_PROMPT",
    "DEFAULT_TEMPLATES",
    "CaptionTemplateSet",
    "apply_prompt_dropout",
    "generate_caption",
    "MalformedHierarchy",
    "parse_hierarchy",
    "CorruptImage",
    "DatasetStats",
    "DimensionMismatch",
    "IngestConfig",
    "IOFailure",
    "ManifestEntry",
    "Rejected",
    "RicoRecord",
    "TrainingRecord",
    "build_training_set",
    "preprocess_record",
    "read_manifest",
    "scan_rico_root",
    "generate_synthetic_dataset",
    "render_fake_screenshot",
    "sample_synthetic_layout",
]
