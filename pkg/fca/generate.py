"""
Seeded test-data generators (benchmarks, property sweeps, demo inputs)
"""

import io
from typing import Optional

import numpy as np
import pandas as pd

from config import PANTHERIA_ROLE_CONFIG
from fca.binarize import LabeledDataset, Role, TraitColumn, TraitTable
from fca.context import FormalContext


def random_context(
    n_objects: int,
    n_attributes: int,
    density: float,
    seed: Optional[int] = None
) -> FormalContext:
    """Bernoulli(density) incidence; objects o1..on, attributes a1..am"""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density {density} outside [0, 1]")
    rng = np.random.default_rng(seed)
    matrix = rng.random((n_objects, n_attributes)) < density
    return FormalContext.from_matrix(
        [f"o{i + 1}" for i in range(n_objects)],
        [f"a{j + 1}" for j in range(n_attributes)],
        matrix.tolist()
    )


def random_labeled_dataset(
    n_objects: int,
    n_features: int,
    positive_fraction: float = 0.3,
    missing_rate: float = 0.15,
    seed: Optional[int] = None
) -> LabeledDataset:
    """
    Numeric traits drawn from a few levels (so median ties happen) plus
    missing values; at least one positive and one negative object
    """
    if n_objects < 2:
        raise ValueError("need at least two objects for two classes")
    rng = np.random.default_rng(seed)
    columns = []
    for f in range(n_features):
        values = rng.integers(0, 5, size=n_objects).astype(float)
        values[rng.random(n_objects) < missing_rate] = np.nan
        if np.isnan(values).all():
            values[0] = 1.0
        columns.append(TraitColumn(f"F{f + 1}", Role.NUMERIC, values))

    labels = rng.random(n_objects) < positive_fraction
    labels[0] = True
    labels[-1] = False
    table = TraitTable(tuple(f"s{i + 1}" for i in range(n_objects)), tuple(columns))
    return LabeledDataset(table, tuple(bool(v) for v in labels))


def synthetic_trait_csv(
    n_species: int,
    seed: Optional[int] = None,
    positive_fraction: float = 0.095,
    missing_rate: float = 0.2
) -> str:
    """
    PanTHERIA-shaped CSV with the 15 predictor columns, the species id
    column and a 0/1 label column; missing cells use the -999 sentinel
    """
    rng = np.random.default_rng(seed)
    roles = PANTHERIA_ROLE_CONFIG["columns"]
    data = {PANTHERIA_ROLE_CONFIG["id_column"]: [f"Species_{i + 1:05d}" for i in range(n_species)]}

    max_lat = rng.uniform(-50.0, 80.0, size=n_species)
    min_lat = max_lat - rng.uniform(0.0, 30.0, size=n_species)
    for name, role in roles.items():
        if role == "numeric":
            values = np.round(rng.lognormal(mean=3.0, sigma=1.2, size=n_species), 3)
        elif role == "longitude":
            values = np.round(rng.uniform(-180.0, 180.0, size=n_species), 3)
        elif "MaxLat" in name:
            values = np.round(max_lat, 3)
        else:
            values = np.round(np.clip(min_lat, -90.0, 90.0), 3)
        values = values.astype(object)
        missing = rng.random(n_species) < missing_rate
        missing[0] = False
        values[missing] = -999
        data[name] = values

    labels = (rng.random(n_species) < positive_fraction).astype(int)
    if n_species >= 2:
        labels[0], labels[-1] = 1, 0
    data[PANTHERIA_ROLE_CONFIG["label_column"]] = labels

    buffer = io.StringIO()
    pd.DataFrame(data).to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()
