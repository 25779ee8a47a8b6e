"""
Utility functions for the concept contrast toolkit
"""

import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from config import OUTPUT_SETTINGS


def read_text(path: str) -> str:
    """
    Read a UTF-8 text file without translating line endings

    Args:
        path: File path

    Returns:
        File contents
    """
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return f.read()


def write_text(text: str, path: Optional[str] = None) -> Optional[str]:
    """
    Write text to a file (LF line endings) or to standard output

    Args:
        text: Content to write
        path: Output path, or None / "-" for standard output

    Returns:
        Path written, or None for standard output
    """
    if path is None or path == '-':
        sys.stdout.write(text)
        sys.stdout.flush()
        return None

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)

    return path


def to_json(data: Any) -> str:
    """Serialize with a fixed layout so equal data gives equal bytes"""
    return json.dumps(data, indent=OUTPUT_SETTINGS["indent"], ensure_ascii=False) + '\n'


def save_json(data: Dict[str, Any], path: Optional[str] = None) -> Optional[str]:
    """
    Save a JSON document

    Args:
        data: JSON-ready dictionary
        path: Output path, or None for standard output

    Returns:
        Path to saved file
    """
    return write_text(to_json(data), path)


def load_json(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def file_digest(path: str) -> str:
    """
    SHA-256 of a file's bytes

    Args:
        path: File path

    Returns:
        Hex digest
    """
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def format_percent(value: Union[Fraction, float, None], digits: int = 1) -> str:
    if value is None:
        return "n/a"
    return f"{float(value):.{digits}f}%"


def format_report_summary(report) -> str:
    """
    Generate a summary of a contrast report

    Args:
        report: ContrastReport

    Returns:
        Formatted summary string
    """
    summary_lines = [
        f"\n{'='*50}",
        "CONTRAST SUMMARY",
        f"{'='*50}",
        f"Objects: {report.positive_objects} positive / {report.negative_objects} negative",
        f"Concepts: {report.positive_count} positive / {report.negative_count} negative",
        f"Reduced positive set: {len(report.reduced)} ({report.removed_count} removed)",
        f"Iceberg at {format_percent(report.min_support)}: {len(report.iceberg)} concepts, "
        f"{len(report.missing_data_concepts)} missing-data",
        f"Coverage: {format_percent(report.coverage_percent)} of positives "
        f"(missing-data concepts: {format_percent(report.missing_data_coverage_percent)})",
        ""
    ]

    if report.iceberg:
        summary_lines.append("Patterns:")
        for concept in report.iceberg:
            names = ", ".join(concept.intent_names) or "{}"
            negative = report.negative_support[concept.intent.bits]
            summary_lines.append(
                f"  - {format_percent(concept.support_percent)} of positives "
                f"({format_percent(negative)} of negatives): {names}"
            )

    summary_lines.append(f"{'='*50}\n")

    return '\n'.join(summary_lines)
