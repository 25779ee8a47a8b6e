#!/usr/bin/env python3
"""
Concept Contrast
Command-line entry point for formal concept analysis of trait data

Usage:
    python main.py mine data/k1.cxt                       # JSONL concepts to stdout
    python main.py mine data/k1.cxt --min-support 50      # iceberg only
    python main.py lattice data/k1.cxt -o k1.dot          # DOT of the covering relation
    python main.py convert data/k1.cxt -o k1.csv          # .cxt <-> binary CSV
    python main.py binarize traits.csv --roles roles.json -o traits.cxt --schema-out schema.json
    python main.py contrast traits.csv --roles roles.json --min-support 18 -o report.json
    python main.py gen --kind context --objects 1000 --attributes 50 --density 0.15 --seed 7 -o bench.cxt
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from config import ICEBERG_SETTINGS, MINING_SETTINGS, PANTHERIA_ROLE_CONFIG, TOOL_NAME
from fca import __version__
from fca.binarize import (
    RoleConfig,
    apply_schema,
    infer_schema,
    load_role_config,
    load_schema,
    parse_labeled_csv,
    parse_trait_csv,
    role_config_from_dict,
    save_schema,
)
from fca.context import FormalContext, parse_binary_csv, parse_cxt, write_binary_csv, write_cxt
from fca.contrast import report_to_dict, run_pipeline
from fca.errors import CapacityError, FcaError, PipelineError
from fca.generate import random_context, synthetic_trait_csv
from fca.lattice import DotOptions, as_percent, build_lattice, build_suborder, export_dot, iceberg
from fca.mining import enumerate_concepts, write_concepts_jsonl
from utils.helpers import file_digest, format_report_summary, read_text, save_json, to_json, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAPACITY = 2

CONTEXT_EXTENSIONS = {".cxt": "cxt", ".csv": "csv"}
OUTPUT_FORMATS = {"jsonl", "dot", "cxt", "csv", "json-report"}
FIXED_OUTPUT_FORMATS = {"mine": "jsonl", "lattice": "dot", "binarize": "cxt", "contrast": "json-report"}


class CliArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code instead of argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    inputs: List[str] = field(default_factory=list)
    roles: Optional[str] = None
    schema: Optional[str] = None
    label_column: Optional[str] = None
    positive_label: Optional[str] = None
    min_support: Optional[str] = None
    output: Optional[str] = None
    output_format: str = "jsonl"
    threads: Optional[int] = None
    max_concepts: Optional[int] = None
    progress: bool = False

    def validate(self) -> None:
        """Check paths and numeric flags before anything is computed"""
        for path in self.inputs:
            if not os.path.isfile(path):
                raise FileNotFoundError(f"input file not found: {path}")
        for path in (self.roles, self.schema):
            if path is not None and not os.path.isfile(path):
                raise FileNotFoundError(f"config file not found: {path}")
        if self.min_support is not None:
            as_percent(self.min_support)
        if self.threads is not None and self.threads < 1:
            raise ValueError("--threads must be at least 1")
        if self.max_concepts is not None and self.max_concepts < 1:
            raise ValueError("--max-concepts must be at least 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")


def context_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext not in CONTEXT_EXTENSIONS:
        raise ValueError(f"cannot tell context format of {path!r} (expected .cxt or .csv)")
    return CONTEXT_EXTENSIONS[ext]


def load_context(path: str) -> FormalContext:
    """Read a .cxt or binary CSV context chosen by file extension"""
    text = read_text(path)
    ctx = parse_cxt(text) if context_format(path) == "cxt" else parse_binary_csv(text)
    logger.info(
        "Loaded %s: %d objects, %d attributes, %d incidences",
        path, ctx.n_objects, ctx.n_attributes, ctx.incidence_count
    )
    return ctx


def load_roles(run: RunConfig) -> RoleConfig:
    roles = load_role_config(read_text(run.roles))
    if run.label_column is None and run.positive_label is None:
        return roles
    data = roles.model_dump(mode="json")
    if run.label_column is not None:
        data["label_column"] = run.label_column
    if run.positive_label is not None:
        if data.get("negative_label") == run.positive_label:
            data["negative_label"] = data["positive_label"]
        data["positive_label"] = run.positive_label
    return role_config_from_dict(data)


def mine_context(run: RunConfig, ctx: FormalContext):
    started = time.perf_counter()
    concepts = enumerate_concepts(
        ctx,
        threads=run.threads,
        max_concepts=run.max_concepts,
        progress=run.progress
    )
    logger.info("Found %d concepts in %.2fs", len(concepts), time.perf_counter() - started)
    return concepts


def cmd_convert(run: RunConfig, args) -> int:
    ctx = load_context(run.inputs[0])
    if run.output_format == "cxt":
        text = write_cxt(ctx)
    else:
        text = write_binary_csv(ctx, style=args.style)
    write_text(text, run.output)
    logger.info("Wrote %s", run.output)
    return EXIT_OK


def cmd_mine(run: RunConfig, args) -> int:
    ctx = load_context(run.inputs[0])
    concepts = mine_context(run, ctx)
    if run.min_support is not None:
        concepts = iceberg(concepts, run.min_support)
        logger.info("%d concepts at support >= %s%%", len(concepts), run.min_support)
    write_text(write_concepts_jsonl(concepts), run.output)
    return EXIT_OK


def cmd_lattice(run: RunConfig, args) -> int:
    ctx = load_context(run.inputs[0])
    concepts = mine_context(run, ctx)
    if run.min_support is None:
        lattice = build_lattice(ctx, concepts)
    else:
        lattice = build_suborder(ctx, iceberg(concepts, run.min_support))
    logger.info("Order has %d nodes and %d covering edges", len(lattice), len(lattice.covers))
    options = DotOptions(show_extent_size=args.show_extent_size)
    write_text(export_dot(lattice, options), run.output)
    return EXIT_OK


def cmd_binarize(run: RunConfig, args) -> int:
    roles = load_roles(run)
    table = parse_trait_csv(read_text(run.inputs[0]), roles)
    schema = load_schema(read_text(run.schema)) if run.schema else infer_schema(table)
    ctx = apply_schema(table, schema)
    logger.info("Binarized %d objects into %d attributes", ctx.n_objects, ctx.n_attributes)
    print(f"{ctx.n_attributes} attributes", file=sys.stderr)

    write_text(write_cxt(ctx), run.output)
    if args.schema_out:
        write_text(save_schema(schema), args.schema_out)
        logger.info("Saved schema to %s", args.schema_out)
    return EXIT_OK


def cmd_contrast(run: RunConfig, args) -> int:
    roles = load_roles(run)
    path = run.inputs[0]
    dataset = parse_labeled_csv(read_text(path), roles)
    schema = load_schema(read_text(run.schema)) if run.schema else None

    report = run_pipeline(
        dataset,
        run.min_support,
        schema=schema,
        threads=run.threads,
        max_concepts=run.max_concepts,
        progress=run.progress
    )

    provenance = {
        "tool": TOOL_NAME,
        "version": __version__,
        "input": os.path.basename(path),
        "input_sha256": file_digest(path),
        "label_column": roles.label_column,
        "positive_label": roles.positive_label
    }
    save_json(report_to_dict(report, provenance), run.output)
    logger.info(format_report_summary(report))

    if args.dot:
        # an empty iceberg still yields a valid (node-free) graph
        ctx = report.iceberg[0].context if report.iceberg else FormalContext.from_rows([], [], [])
        order = build_suborder(ctx, report.iceberg)
        write_text(export_dot(order, DotOptions(graph_name="iceberg")), args.dot)
        logger.info("Wrote iceberg order to %s", args.dot)
    if args.schema_out:
        write_text(save_schema(report.schema), args.schema_out)
    return EXIT_OK


def cmd_gen(run: RunConfig, args) -> int:
    if args.kind == "context":
        ctx = random_context(args.objects, args.attributes, args.density, seed=args.seed)
        logger.info(
            "Generated %d x %d context with %d incidences",
            ctx.n_objects, ctx.n_attributes, ctx.incidence_count
        )
        text = write_cxt(ctx) if run.output_format == "cxt" else write_binary_csv(ctx)
        write_text(text, run.output)
        return EXIT_OK

    write_text(synthetic_trait_csv(args.species, seed=args.seed), run.output)
    logger.info("Generated trait table with %d species", args.species)
    if args.roles:
        roles = role_config_from_dict(PANTHERIA_ROLE_CONFIG)
        write_text(to_json(roles.model_dump(mode="json")), args.roles)
        logger.info("Saved role config to %s", args.roles)
    return EXIT_OK


COMMANDS = {
    "convert": cmd_convert,
    "mine": cmd_mine,
    "lattice": cmd_lattice,
    "binarize": cmd_binarize,
    "contrast": cmd_contrast,
    "gen": cmd_gen
}


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog=TOOL_NAME,
        description='Formal concept analysis and positive/negative contrast of trait data'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument(
        '--threads', '-j',
        type=int,
        default=None,
        help=f'Worker cap for mining (default: {MINING_SETTINGS["threads"]})'
    )
    parser.add_argument(
        '--max-concepts',
        type=int,
        default=None,
        help=f'Capacity limit (default: {MINING_SETTINGS["max_concepts"]})'
    )
    parser.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    verbosity.add_argument('--quiet', '-q', action='store_true', help='Warnings and errors only')

    sub = parser.add_subparsers(dest='command', required=True, parser_class=CliArgumentParser)

    convert = sub.add_parser('convert', help='Translate between .cxt and binary CSV')
    convert.add_argument('input')
    convert.add_argument('--output', '-o', required=True, help='Target file (.cxt or .csv)')
    convert.add_argument('--style', choices=['X', '01'], default='X', help='Binary CSV cell style')

    mine = sub.add_parser('mine', help='Enumerate all formal concepts as JSON Lines')
    mine.add_argument('input')
    mine.add_argument('--min-support', help='Keep concepts covering at least this %% of objects')
    mine.add_argument('--output', '-o', help='Output file (default: stdout)')

    lattice = sub.add_parser('lattice', help='Write the concept lattice as DOT')
    lattice.add_argument('input')
    lattice.add_argument('--min-support', help='Draw only the iceberg at this support')
    lattice.add_argument('--show-extent-size', action='store_true')
    lattice.add_argument('--output', '-o', help='Output file (default: stdout)')

    binarize = sub.add_parser('binarize', help='Discretize a trait CSV into a formal context')
    binarize.add_argument('input')
    binarize.add_argument('--roles', required=True, help='Role config JSON')
    binarize.add_argument('--schema', help='Reapply this schema instead of inferring one')
    binarize.add_argument('--schema-out', help='Save the schema used')
    binarize.add_argument('--output', '-o', help='Context file (.cxt, default: stdout)')

    contrast = sub.add_parser('contrast', help='Positive/negative contrast report')
    contrast.add_argument('input')
    contrast.add_argument('--roles', required=True, help='Role config JSON')
    contrast.add_argument('--label-column', help='Override the label column of the role config')
    contrast.add_argument('--positive-label', help='Override the positive label value')
    contrast.add_argument(
        '--min-support',
        default=str(ICEBERG_SETTINGS["default_min_support"]),
        help=f'Iceberg threshold in %% of positives (default: {ICEBERG_SETTINGS["default_min_support"]:g})'
    )
    contrast.add_argument('--schema', help='Reuse this schema instead of inferring one')
    contrast.add_argument('--schema-out', help='Save the shared schema')
    contrast.add_argument('--dot', help='Also write the iceberg order as DOT')
    contrast.add_argument('--output', '-o', help='Report JSON (default: stdout)')

    gen = sub.add_parser('gen', help='Generate seeded test data')
    gen.add_argument('--kind', choices=['context', 'traits'], default='context')
    gen.add_argument('--objects', type=int, default=100)
    gen.add_argument('--attributes', type=int, default=20)
    gen.add_argument('--density', type=float, default=0.2)
    gen.add_argument('--species', type=int, default=1000)
    gen.add_argument('--seed', type=int, default=None)
    gen.add_argument('--roles', help='With --kind traits: also write the matching role config')
    gen.add_argument('--output', '-o', help='Output file (default: stdout)')

    return parser


def output_format_for(args) -> str:
    """Fixed per command, except where the output extension picks cxt or csv"""
    if args.command in FIXED_OUTPUT_FORMATS:
        return FIXED_OUTPUT_FORMATS[args.command]
    if args.command == "gen" and args.kind == "traits":
        return "csv"
    if args.output is None or args.output == "-":
        return "cxt"
    return context_format(args.output)


def run_config_from_args(args) -> RunConfig:
    return RunConfig(
        subcommand=args.command,
        inputs=[args.input] if getattr(args, 'input', None) else [],
        roles=getattr(args, 'roles', None) if args.command in ('binarize', 'contrast') else None,
        schema=getattr(args, 'schema', None),
        label_column=getattr(args, 'label_column', None),
        positive_label=getattr(args, 'positive_label', None),
        min_support=getattr(args, 'min_support', None),
        output=args.output,
        output_format=output_format_for(args),
        threads=args.threads,
        max_concepts=args.max_concepts,
        progress=args.progress
    )


def configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
        force=True
    )


def _is_capacity(error: BaseException) -> bool:
    if isinstance(error, (CapacityError, MemoryError)):
        return True
    return isinstance(error, PipelineError) and isinstance(error.cause, (CapacityError, MemoryError))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT

    configure_logging(args)
    try:
        run = run_config_from_args(args)
        run.validate()
        return COMMANDS[args.command](run, args)
    except (CapacityError, PipelineError, MemoryError) as e:
        if _is_capacity(e):
            logger.error("Capacity exceeded: %s", e)
            return EXIT_CAPACITY
        logger.error("%s", e)
        return EXIT_INPUT
    except (FcaError, OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
