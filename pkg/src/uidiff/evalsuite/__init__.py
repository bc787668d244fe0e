from .report import (
    CoverageResult,
    EvalReport,
    EvalRequest,
    EvalResult,
    IdMismatch,
    SampleRow,
    component_coverage,
    evaluate_batch,
    write_report,
)
from .scorer import (
    BackendUnavailable,
    CompatibilityScorer,
    EmbeddingBackend,
    PretrainedBackend,
    SeededMockBackend,
    compatibility_score,
)

__all__ = [
    "CoverageResult",
    "EvalReport",
    "EvalRequest",
    "EvalResult",
    "IdMismatch",
    "SampleRow",
    "component_coverage",
    "evaluate_batch",
    "write_report",
    "BackendUnavailable",
    "CompatibilityScorer",
    "EmbeddingBackend",
    "PretrainedBackend",
    "SeededMockBackend",
    "compatibility_score",
]
