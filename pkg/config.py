"""
Configuration for the Concept Contrast toolkit
Discretization rules, mining limits and output settings
"""

import os

TOOL_NAME = "concept-contrast"

# Cells treated as missing in trait tables
MISSING_VALUE_TOKENS = ["", "NA", "NaN", "-999", "-999.0"]

# PanTHERIA stores missing measurements as -999
MISSING_SENTINEL = -999.0

MISSING_CATEGORY = "NAN"

# Generated attribute names are FEATURE=CATEGORY
COLUMN_SEPARATOR = "="

# Output categories per role, in column order
CATEGORIES = {
    "numeric": ["HIGH", "LOW", "NAN"],
    "latitude": ["S", "TROPICAL", "N", "NAN"],
    "longitude": ["WEST", "EAST", "NAN"]
}

# Half-open bins [-90,-30), [-30,30), [30,90]
LATITUDE_BINS = [-30.0, 30.0]

# lon < -25 is WEST (the Americas), everything else EAST
LONGITUDE_SPLIT = -25.0

COORDINATE_RANGES = {
    "latitude": (-90.0, 90.0),
    "longitude": (-180.0, 180.0)
}

# Top 15 predictor features of the rodent trait data
PANTHERIA_FEATURES = {
    "X26.1_GR_Area_km2": "numeric",
    "X23.1_SexualMaturityAge_d": "numeric",
    "X27.2_HuPopDen_Mean_n.km2": "numeric",
    "logNeoBM": "numeric",
    "X15.1_LitterSize": "numeric",
    "X5.1_AdultBodyMass_g": "numeric",
    "X9.1_GestationLen_d": "numeric",
    "X25.1_WeaningAge_d": "numeric",
    "X13.1_AdultHeadBodyLen_mm": "numeric",
    "SpeciesDensity": "numeric",
    "X30.2_PET_Mean_mm": "numeric",
    "X26.2_GR_MaxLat_dd": "latitude",
    "X16.1_LittersPerYear": "numeric",
    "X26.5_GR_MaxLong_dd": "longitude",
    "X26.3_GR_MinLat_dd": "latitude"
}

PANTHERIA_ROLE_CONFIG = {
    "id_column": "MSW05_Binomial",
    "label_column": "reservoir",
    "positive_label": "1",
    "negative_label": "0",
    "columns": PANTHERIA_FEATURES
}

# Mining settings
MINING_SETTINGS = {
    "max_concepts": 5_000_000,
    "brute_force_max_attributes": 25,
    "split_depth": 2,  # levels expanded in-process before handing branches to workers
    "threads": os.cpu_count() or 1
}

ICEBERG_SETTINGS = {
    "default_min_support": 18.0
}

DOT_SETTINGS = {
    "rankdir": "BT",
    "support_decimals": 1,
    "node_shape": "box",
    "empty_label": "{}"
}

OUTPUT_SETTINGS = {
    "indent": 2
}
