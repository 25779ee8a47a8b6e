"""
Numeric trait tables -> formal contexts

Numeric columns are split at their median into HIGH / LOW / NAN, latitude
columns into S / TROPICAL / N / NAN, longitude columns into WEST / EAST / NAN.
Each object sets exactly one generated attribute per source column.
"""

import io
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError, model_validator

from config import (
    CATEGORIES,
    COLUMN_SEPARATOR,
    COORDINATE_RANGES,
    LATITUDE_BINS,
    LONGITUDE_SPLIT,
    MISSING_CATEGORY,
    MISSING_SENTINEL,
    MISSING_VALUE_TOKENS,
)
from fca.context import FormalContext
from fca.errors import SchemaError

logger = logging.getLogger(__name__)


class Role(str, Enum):
    NUMERIC = "numeric"
    LATITUDE = "latitude"
    LONGITUDE = "longitude"


THRESHOLD_COUNTS = {Role.NUMERIC: 1, Role.LATITUDE: 2, Role.LONGITUDE: 1}


class RoleConfig(BaseModel):
    """Which CSV columns are used and how; roles are never inferred from names"""

    id_column: str
    columns: Dict[str, Role]
    label_column: Optional[str] = None
    positive_label: Optional[str] = None
    negative_label: Optional[str] = None  # when set, any other label is an error
    missing_tokens: List[str] = list(MISSING_VALUE_TOKENS)

    @model_validator(mode="after")
    def _check_label(self):
        if self.label_column is not None and self.positive_label is None:
            raise ValueError("positive_label is required when label_column is set")
        if self.negative_label is not None and self.negative_label == self.positive_label:
            raise ValueError("positive_label and negative_label must differ")
        if self.id_column in self.columns or self.label_column in self.columns:
            raise ValueError("id/label columns cannot also be feature columns")
        return self


class FeatureRule(BaseModel):
    """Discretization of one source column"""

    name: str
    role: Role
    thresholds: List[float]
    categories: List[str]

    @model_validator(mode="after")
    def _check_shape(self):
        expected = CATEGORIES[self.role.value]
        if self.categories != expected:
            raise ValueError(f"categories for {self.role.value} must be {expected}")
        if len(self.thresholds) != THRESHOLD_COUNTS[self.role]:
            raise ValueError(
                f"{self.role.value} needs {THRESHOLD_COUNTS[self.role]} threshold(s)"
            )
        if self.thresholds != sorted(self.thresholds):
            raise ValueError("thresholds must be ascending")
        if not all(math.isfinite(t) for t in self.thresholds):
            raise ValueError("thresholds must be finite")
        return self

    @property
    def output_columns(self) -> List[str]:
        return [f"{self.name}{COLUMN_SEPARATOR}{cat}" for cat in self.categories]

    def category_of(self, value: float) -> str:
        """
        Category for one value (NaN = missing)

        A value equal to the median is LOW; latitude bins are half-open
        [-90,-30), [-30,30), [30,90].
        """
        if math.isnan(value):
            return MISSING_CATEGORY
        if self.role is Role.NUMERIC:
            return "HIGH" if value > self.thresholds[0] else "LOW"

        low, high = COORDINATE_RANGES[self.role.value]
        if not low <= value <= high:
            raise SchemaError(f"{self.role.value} {value} outside [{low:g}, {high:g}]", column=self.name)
        if self.role is Role.LATITUDE:
            south, north = self.thresholds
            if value < south:
                return "S"
            return "TROPICAL" if value < north else "N"
        return "WEST" if value < self.thresholds[0] else "EAST"


class BinarizationSchema(BaseModel):
    """Ordered per-column rules; the JSON form is the reusable schema file"""

    features: List[FeatureRule]

    @property
    def output_columns(self) -> List[str]:
        columns = []
        for rule in self.features:
            columns.extend(rule.output_columns)
        return columns

    def rule(self, name: str) -> FeatureRule:
        for rule in self.features:
            if rule.name == name:
                return rule
        raise SchemaError("not in schema", column=name)


@dataclass(frozen=True, eq=False)
class TraitColumn:
    name: str
    role: Role
    values: np.ndarray  # float64, NaN = missing


@dataclass(frozen=True, eq=False)
class TraitTable:
    """Species x trait values with explicit column roles"""

    object_ids: Tuple[str, ...]
    columns: Tuple[TraitColumn, ...]

    def __post_init__(self):
        if len(set(self.object_ids)) != len(self.object_ids):
            raise SchemaError("object ids are not unique")
        for col in self.columns:
            if len(col.values) != len(self.object_ids):
                raise SchemaError(
                    f"{len(col.values)} values for {len(self.object_ids)} objects",
                    column=col.name
                )

    @property
    def n_objects(self) -> int:
        return len(self.object_ids)

    def column(self, name: str) -> TraitColumn:
        for col in self.columns:
            if col.name == name:
                return col
        raise SchemaError("not in table", column=name)

    def take(self, indices: Sequence[int]) -> "TraitTable":
        """Rows in the given order"""
        idx = np.asarray(indices, dtype=int)
        return TraitTable(
            tuple(self.object_ids[i] for i in idx),
            tuple(TraitColumn(c.name, c.role, c.values[idx]) for c in self.columns)
        )


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    table: TraitTable
    labels: Tuple[bool, ...]  # True = positive

    def __post_init__(self):
        if len(self.labels) != self.table.n_objects:
            raise SchemaError(
                f"{len(self.labels)} labels for {self.table.n_objects} objects"
            )

    @property
    def positive_indices(self) -> List[int]:
        return [i for i, label in enumerate(self.labels) if label]

    @property
    def negative_indices(self) -> List[int]:
        return [i for i, label in enumerate(self.labels) if not label]


def _parse_number(cell: str, tokens: Sequence[str], column: str, row: str) -> float:
    text = cell.strip()
    if text in tokens:
        return math.nan
    try:
        value = float(text)
    except ValueError:
        raise SchemaError(f"unparseable value {cell!r} for {row!r}", column=column) from None
    if math.isnan(value) or value == MISSING_SENTINEL:
        return math.nan
    if not math.isfinite(value):
        raise SchemaError(f"non-finite value {cell!r} for {row!r}", column=column)
    return value


def _read_frame(text: str, roles: RoleConfig) -> pd.DataFrame:
    # header read as a data row; pandas would rename duplicate names
    try:
        frame = pd.read_csv(io.StringIO(text), header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise SchemaError("empty trait table") from None
    except pd.errors.ParserError as e:
        raise SchemaError(f"malformed CSV: {e}") from None

    header = [str(c).strip() for c in frame.iloc[0].tolist()]
    seen = set()
    for name in header:
        if name in seen:
            raise SchemaError("duplicate column name", column=name)
        seen.add(name)
    frame = frame.iloc[1:].reset_index(drop=True)
    frame.columns = header

    wanted = [roles.id_column, *roles.columns]
    if roles.label_column is not None:
        wanted.append(roles.label_column)
    for name in wanted:
        if name not in frame.columns:
            raise SchemaError("unknown column in role config", column=name)
    return frame


def _cells(frame: pd.DataFrame, name: str, ids: Sequence[str]) -> List[str]:
    """Column values as text; a row shorter than the header is an error"""
    cells = []
    for r, cell in enumerate(frame[name].tolist()):
        if pd.isna(cell):
            row = ids[r] if ids else f"#{r + 1}"
            raise SchemaError(f"row {row!r} has fewer fields than the header", column=name)
        cells.append(str(cell))
    return cells


def _build_table(frame: pd.DataFrame, roles: RoleConfig) -> TraitTable:
    ids = tuple(c.strip() for c in _cells(frame, roles.id_column, ()))
    columns = []
    for name, role in roles.columns.items():
        values = np.array(
            [
                _parse_number(cell, roles.missing_tokens, name, ids[r])
                for r, cell in enumerate(_cells(frame, name, ids))
            ],
            dtype=float
        )
        columns.append(TraitColumn(name, role, values))
    return TraitTable(ids, tuple(columns))


def parse_trait_csv(text: str, role_config: RoleConfig) -> TraitTable:
    """
    Parse a trait CSV using an explicit role config

    Args:
        text: CSV text with a header row
        role_config: Column roles and id column

    Returns:
        TraitTable with columns in role-config order
    """
    frame = _read_frame(text, role_config)
    return _build_table(frame, role_config)


def parse_labeled_csv(text: str, role_config: RoleConfig) -> LabeledDataset:
    """Parse a trait CSV whose label column marks positive objects"""
    if role_config.label_column is None:
        raise SchemaError("role config has no label_column")
    frame = _read_frame(text, role_config)
    table = _build_table(frame, role_config)
    column = role_config.label_column
    accepted = {role_config.positive_label, role_config.negative_label}
    labels = []
    for row, cell in zip(table.object_ids, _cells(frame, column, table.object_ids)):
        value = cell.strip()
        if not value:
            raise SchemaError(f"missing label for {row!r}", column=column)
        if role_config.negative_label is not None and value not in accepted:
            raise SchemaError(f"unexpected label {value!r} for {row!r}", column=column)
        labels.append(value == role_config.positive_label)
    return LabeledDataset(table, tuple(labels))


def infer_schema(table: TraitTable) -> BinarizationSchema:
    """
    Compute medians for numeric columns and fixed bins for coordinates

    Raises:
        SchemaError: all-missing column or coordinate out of range
    """
    rules = []
    for col in table.columns:
        present = col.values[~np.isnan(col.values)]
        if present.size == 0:
            raise SchemaError("all values are missing", column=col.name)

        if col.role is Role.NUMERIC:
            thresholds = [float(np.median(present))]
        else:
            low, high = COORDINATE_RANGES[col.role.value]
            bad = present[(present < low) | (present > high)]
            if bad.size:
                raise SchemaError(
                    f"{col.role.value} {bad[0]:g} outside [{low:g}, {high:g}]",
                    column=col.name
                )
            thresholds = list(LATITUDE_BINS) if col.role is Role.LATITUDE else [LONGITUDE_SPLIT]

        rules.append(FeatureRule(
            name=col.name,
            role=col.role,
            thresholds=thresholds,
            categories=list(CATEGORIES[col.role.value])
        ))
        logger.debug("%s (%s): thresholds %s", col.name, col.role.value, thresholds)
    return BinarizationSchema(features=rules)


def apply_schema(table: TraitTable, schema: BinarizationSchema) -> FormalContext:
    """
    Binarize a table: one output column per (source column, category)

    Raises:
        SchemaError: table and schema columns or roles differ
    """
    table_names = [c.name for c in table.columns]
    schema_names = [r.name for r in schema.features]
    if table_names != schema_names:
        raise SchemaError(f"schema columns {schema_names} do not match table columns {table_names}")

    rows = [0] * table.n_objects
    offset = 0
    for col, rule in zip(table.columns, schema.features):
        if col.role is not rule.role:
            raise SchemaError(
                f"role {col.role.value} in table, {rule.role.value} in schema",
                column=col.name
            )
        position = {cat: offset + k for k, cat in enumerate(rule.categories)}
        for i, value in enumerate(col.values):
            rows[i] |= 1 << position[rule.category_of(float(value))]
        offset += len(rule.categories)

    return FormalContext.from_rows(table.object_ids, schema.output_columns, rows)


# Schema / role config files

def load_role_config(text: str) -> RoleConfig:
    try:
        return RoleConfig.model_validate_json(text)
    except ValidationError as e:
        raise SchemaError(f"invalid role config: {e}") from None


def role_config_from_dict(data: dict) -> RoleConfig:
    try:
        return RoleConfig.model_validate(data)
    except ValidationError as e:
        raise SchemaError(f"invalid role config: {e}") from None


def save_schema(schema: BinarizationSchema) -> str:
    return schema.model_dump_json(indent=2) + "\n"


def load_schema(text: str) -> BinarizationSchema:
    try:
        return BinarizationSchema.model_validate_json(text)
    except ValidationError as e:
        raise SchemaError(f"invalid schema file: {e}") from None
