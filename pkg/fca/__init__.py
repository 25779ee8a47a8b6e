__version__ = "0.1.0"

from .context import (
    AttributeSet,
    FormalContext,
    ObjectSet,
    close_attributes,
    close_objects,
    derive_extent,
    derive_intent,
    parse_binary_csv,
    parse_cxt,
    write_binary_csv,
    write_cxt,
)
from .mining import (
    BaseMiner,
    BruteForceMiner,
    CloseByOneMiner,
    Concept,
    brute_force_concepts,
    create_miner,
    enumerate_concepts,
    support,
    write_concepts_jsonl,
)
from .lattice import (
    ConceptLattice,
    DotOptions,
    build_lattice,
    build_suborder,
    export_dot,
    iceberg,
    join,
    meet,
    order_leq,
)
from .binarize import (
    BinarizationSchema,
    LabeledDataset,
    RoleConfig,
    TraitTable,
    apply_schema,
    infer_schema,
    parse_labeled_csv,
    parse_trait_csv,
)
from .contrast import (
    ContrastReport,
    contrast_reduce,
    coverage,
    report_to_dict,
    run_pipeline,
    split_by_label,
)

__all__ = [
    'AttributeSet',
    'FormalContext',
    'ObjectSet',
    'close_attributes',
    'close_objects',
    'derive_extent',
    'derive_intent',
    'parse_binary_csv',
    'parse_cxt',
    'write_binary_csv',
    'write_cxt',
    'BaseMiner',
    'BruteForceMiner',
    'CloseByOneMiner',
    'Concept',
    'brute_force_concepts',
    'create_miner',
    'enumerate_concepts',
    'support',
    'write_concepts_jsonl',
    'ConceptLattice',
    'DotOptions',
    'build_lattice',
    'build_suborder',
    'export_dot',
    'iceberg',
    'join',
    'meet',
    'order_leq',
    'BinarizationSchema',
    'LabeledDataset',
    'RoleConfig',
    'TraitTable',
    'apply_schema',
    'infer_schema',
    'parse_labeled_csv',
    'parse_trait_csv',
    'ContrastReport',
    'contrast_reduce',
    'coverage',
    'report_to_dict',
    'run_pipeline',
    'split_by_label'
]
