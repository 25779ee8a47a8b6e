"""
Positive/negative contrast analysis

Mine the positive and negative contexts separately, drop every positive
concept whose intent is also a negative concept intent, and summarize the
iceberg of what is left.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from config import COLUMN_SEPARATOR, MISSING_CATEGORY
from fca.binarize import BinarizationSchema, LabeledDataset, apply_schema, infer_schema
from fca.context import AttributeSet, FormalContext, derive_intent
from fca.errors import (
    AttributeMismatchError,
    ContextMismatchError,
    EmptyClassError,
    EmptyContextError,
    FcaError,
    PipelineError,
)
from fca.lattice import Percent, as_percent, iceberg
from fca.mining import Concept, concept_record, enumerate_concepts

logger = logging.getLogger(__name__)

MISSING_SUFFIX = f"{COLUMN_SEPARATOR}{MISSING_CATEGORY}"


def is_missing_data(concept: Concept) -> bool:
    """True when the intent contains any FEATURE=NAN attribute"""
    return any(name.endswith(MISSING_SUFFIX) for name in concept.intent_names)


@dataclass(frozen=True)
class ContrastReport:
    positive_objects: int
    negative_objects: int
    positive_count: int
    negative_count: int
    reduced: Tuple[Concept, ...]
    removed_count: int
    min_support: Fraction
    iceberg: Tuple[Concept, ...]
    coverage_percent: Fraction
    missing_data_coverage_percent: Fraction
    negative_support: Dict[int, Fraction]  # intent bits -> % of negatives containing it
    schema: BinarizationSchema

    @property
    def missing_data_concepts(self) -> List[Concept]:
        return [c for c in self.iceberg if is_missing_data(c)]


def split_by_label(
    ds: LabeledDataset,
    schema: BinarizationSchema
) -> Tuple[FormalContext, FormalContext]:
    """
    Binarize the whole dataset with one schema, then partition objects by label

    Returns:
        (positive context, negative context) with identical attribute lists
    """
    full = apply_schema(ds.table, schema)
    positives = ds.positive_indices
    negatives = ds.negative_indices
    if not positives:
        raise EmptyClassError("empty positive class")
    if not negatives:
        raise EmptyClassError("empty negative class")
    return full.subcontext(positives), full.subcontext(negatives)


def _attribute_names(concepts: Sequence[Concept]) -> Optional[Tuple[str, ...]]:
    for c in concepts:
        if c.context is not None:
            return c.context.attribute_names
    return None


def contrast_reduce(positive: Sequence[Concept], negative: Sequence[Concept]) -> List[Concept]:
    """
    Keep the positive concepts whose intent is not a negative concept intent

    Concepts are matched on intent only; extents live in different object sets.
    """
    pos_names = _attribute_names(positive)
    neg_names = _attribute_names(negative)
    if pos_names is not None and neg_names is not None and pos_names != neg_names:
        raise AttributeMismatchError("positive and negative concepts use different attributes")
    dims = {c.intent.dimension for c in positive} | {c.intent.dimension for c in negative}
    if len(dims) > 1:
        raise AttributeMismatchError(f"intent dimensions differ: {sorted(dims)}")

    negative_intents = {c.intent.bits for c in negative}
    return [c for c in positive if c.intent.bits not in negative_intents]


def coverage(concepts: Sequence[Concept], ctx: FormalContext) -> Fraction:
    """Percentage of ctx objects in the union of the concept extents"""
    if ctx.n_objects == 0:
        raise EmptyContextError("coverage is undefined for a context without objects")
    covered = 0
    for c in concepts:
        if c.extent.dimension != ctx.n_objects:
            raise ContextMismatchError("concept extent does not match the context size")
        covered |= c.extent.bits
    return Fraction(100 * covered.bit_count(), ctx.n_objects)


def pattern_support(ctx: FormalContext, intent_bits: int) -> Fraction:
    """Percentage of ctx objects whose rows contain every attribute in intent_bits"""
    if ctx.n_objects == 0:
        raise EmptyContextError("support is undefined for a context without objects")
    holders = derive_intent(ctx, AttributeSet(intent_bits, ctx.n_attributes))
    return Fraction(100 * len(holders), ctx.n_objects)


@contextmanager
def _stage(name: str) -> Iterator[None]:
    started = time.perf_counter()
    try:
        yield
    except PipelineError:
        raise
    except FcaError as e:
        raise PipelineError(name, e) from e
    logger.info("Stage %s done in %.2fs", name, time.perf_counter() - started)


def run_pipeline(
    ds: LabeledDataset,
    min_support: Percent,
    schema: Optional[BinarizationSchema] = None,
    threads: Optional[int] = None,
    max_concepts: Optional[int] = None,
    progress: bool = False
) -> ContrastReport:
    """
    Schema -> split -> mine both -> reduce -> iceberg -> coverage

    Args:
        ds: Labeled trait data
        min_support: Iceberg threshold in percent of positive objects
        schema: Reuse this schema instead of inferring one on the full dataset
        threads: Worker cap for mining

    Raises:
        PipelineError: tagged with the failing stage
    """
    with _stage("threshold"):
        threshold = as_percent(min_support)

    with _stage("binarize"):
        if schema is None:
            schema = infer_schema(ds.table)

    with _stage("split"):
        pos_ctx, neg_ctx = split_by_label(ds, schema)
    logger.info(
        "Split into %d positive and %d negative objects over %d attributes",
        pos_ctx.n_objects, neg_ctx.n_objects, pos_ctx.n_attributes
    )

    with _stage("mine-positive"):
        positive = enumerate_concepts(pos_ctx, threads=threads, max_concepts=max_concepts, progress=progress)
    with _stage("mine-negative"):
        negative = enumerate_concepts(neg_ctx, threads=threads, max_concepts=max_concepts, progress=progress)
    logger.info("Mined %d positive and %d negative concepts", len(positive), len(negative))

    with _stage("reduce"):
        reduced = contrast_reduce(positive, negative)
    logger.info("Reduced positive set: %d concepts (%d removed)", len(reduced), len(positive) - len(reduced))

    with _stage("iceberg"):
        selected = iceberg(reduced, threshold)
        missing = [c for c in selected if is_missing_data(c)]
        report = ContrastReport(
            positive_objects=pos_ctx.n_objects,
            negative_objects=neg_ctx.n_objects,
            positive_count=len(positive),
            negative_count=len(negative),
            reduced=tuple(reduced),
            removed_count=len(positive) - len(reduced),
            min_support=threshold,
            iceberg=tuple(selected),
            coverage_percent=coverage(selected, pos_ctx),
            missing_data_coverage_percent=coverage(missing, pos_ctx),
            negative_support={c.intent.bits: pattern_support(neg_ctx, c.intent.bits) for c in reduced},
            schema=schema
        )
    return report


def _concept_entry(report: ContrastReport, concept: Concept) -> Dict[str, Any]:
    entry = concept_record(concept)
    entry["is_missing_data"] = is_missing_data(concept)
    entry["negative_support"] = float(report.negative_support[concept.intent.bits])
    return entry


def report_to_dict(report: ContrastReport, provenance: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    JSON-ready report document

    Contains no timestamps so identical inputs give byte-identical files.
    """
    return {
        "provenance": {
            **(provenance or {}),
            "min_support": float(report.min_support),
            "schema": report.schema.model_dump(mode="json")
        },
        "counts": {
            "positive_objects": report.positive_objects,
            "negative_objects": report.negative_objects,
            "positive_concepts": report.positive_count,
            "negative_concepts": report.negative_count,
            "reduced_concepts": len(report.reduced),
            "removed_concepts": report.removed_count,
            "iceberg_concepts": len(report.iceberg),
            "missing_data_concepts": len(report.missing_data_concepts)
        },
        "coverage": {
            "iceberg_percent": float(report.coverage_percent),
            "missing_data_percent": float(report.missing_data_coverage_percent)
        },
        "iceberg": [_concept_entry(report, c) for c in report.iceberg],
        "reduced": [_concept_entry(report, c) for c in report.reduced]
    }
