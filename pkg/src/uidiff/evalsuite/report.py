"""Batch evaluation: compatibility, component coverage, layout metrics."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import Layout, layout_metrics
from ..layout_diffusion import ComponentCondition
from .scorer import CompatibilityScorer


class IdMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CoverageResult:
    recall: float
    missing: dict[str, int]
    extra: dict[str, int]

    def to_dict(self) -> dict:
        return {"recall": self.recall, "missing": self.missing, "extra": self.extra}


def component_coverage(requested: ComponentCondition, produced: Layout) -> CoverageResult:
    """Multiset recall of requested categories in the produced layout.

    An empty request is vacuously covered (recall 1.0).
    """
    req = Counter(dict((k, v) for k, v in requested.to_dict().items()))
    prod = Counter(el.category.name for el in produced.elements)
    if not req:
        return CoverageResult(1.0, {}, dict(prod))
    matched = sum((req & prod).values())
    return CoverageResult(
        recall=matched / sum(req.values()),
        missing=dict(req - prod),
        extra=dict(prod - req),
    )


@dataclass(frozen=True)
class EvalRequest:
    id: str
    prompt: str
    condition: ComponentCondition


@dataclass(frozen=True)
class EvalResult:
    id: str
    image: np.ndarray | None
    layout: Layout


@dataclass(frozen=True)
class SampleRow:
    id: str
    compatibility: float | None
    coverage: CoverageResult
    metrics: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "compatibility": self.compatibility,
            "coverage": self.coverage.to_dict(),
            "metrics": self.metrics,
        }


@dataclass
class EvalReport:
    rows: list[SampleRow] = field(default_factory=list)

    @property
    def aggregates(self) -> dict:
        scores = [r.compatibility for r in self.rows if r.compatibility is not None]
        recalls = [r.coverage.recall for r in self.rows]
        missing: Counter = Counter()
        for r in self.rows:
            missing.update(r.coverage.missing)
        return {
            "samples": len(self.rows),
            "compatibility_mean": float(np.mean(scores)) if scores else None,
            "compatibility_variance": float(np.var(scores)) if scores else None,
            "recall_mean": float(np.mean(recalls)) if recalls else None,
            "missing_by_category": dict(missing),
            "overlap_mean": (
                float(np.mean([r.metrics["overlap"] for r in self.rows]))
                if self.rows
                else None
            ),
            "coverage_mean": (
                float(np.mean([r.metrics["coverage"] for r in self.rows]))
                if self.rows
                else None
            ),
        }

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "aggregates": self.aggregates}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "EvalReport":
        data = json.loads(text)
        rows = [
            SampleRow(
                id=r["id"],
                compatibility=r["compatibility"],
                coverage=CoverageResult(
                    recall=r["coverage"]["recall"],
                    missing=r["coverage"]["missing"],
                    extra=r["coverage"]["extra"],
                ),
                metrics=r["metrics"],
            )
            for r in data["rows"]
        ]
        return EvalReport(rows)

    def table(self) -> str:
        """Human-readable fixed-width summary."""
        lines = [f"{'id':<16} {'compat':>7} {'recall':>7} {'overlap':>8} {'coverage':>9}"]
        for r in self.rows:
            compat = f"{r.compatibility:.3f}" if r.compatibility is not None else "-"
            lines.append(
                f"{r.id:<16} {compat:>7} {r.coverage.recall:>7.2f} "
                f"{r.metrics['overlap']:>8.3f} {r.metrics['coverage']:>9.3f}"
            )
        agg = self.aggregates
        mean = agg["compatibility_mean"]
        lines.append(
            f"{'MEAN':<16} {(f'{mean:.3f}' if mean is not None else '-'):>7} "
            f"{(agg['recall_mean'] or 0.0):>7.2f} {(agg['overlap_mean'] or 0.0):>8.3f} "
            f"{(agg['coverage_mean'] or 0.0):>9.3f}"
        )
        return "\n".join(lines)


def evaluate_batch(
    requests: list[EvalRequest],
    results: list[EvalResult],
    scorer: CompatibilityScorer | None,
) -> EvalReport:
    """Score aligned (request, result) pairs into a self-consistent report."""
    req_ids = [r.id for r in requests]
    res_ids = [r.id for r in results]
    if sorted(req_ids) != sorted(res_ids):
        raise IdMismatch(f"request ids {sorted(req_ids)} != result ids {sorted(res_ids)}")
    by_id = {r.id: r for r in results}

    rows = []
    for request in requests:
        result = by_id[request.id]
        compat = None
        if scorer is not None and result.image is not None:
            compat = scorer.score(result.image, request.prompt)
        rows.append(
            SampleRow(
                id=request.id,
                compatibility=compat,
                coverage=component_coverage(request.condition, result.layout),
                metrics=layout_metrics(result.layout),
            )
        )
    return EvalReport(rows)


def write_report(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(report.to_json())
