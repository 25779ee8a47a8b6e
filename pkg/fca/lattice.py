"""
Order structure over concept sets: partial order, covering relation,
meet/join, iceberg filtering and DOT export
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from config import DOT_SETTINGS
from fca.context import (
    AttributeSet,
    FormalContext,
    ObjectSet,
    close_attributes,
    close_objects,
    derive_extent,
    derive_intent,
)
from fca.errors import ContextMismatchError, LatticeError, SupportRangeError
from fca.mining import Concept, canonical_key

logger = logging.getLogger(__name__)

Percent = Union[int, float, str, Fraction]


def as_percent(value: Percent) -> Fraction:
    """Exact percentage in [0, 100]; floats go through their shortest repr"""
    if isinstance(value, float):
        value = repr(value)
    try:
        percent = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SupportRangeError(f"support {value!r} is not a number") from None
    if not 0 <= percent <= 100:
        raise SupportRangeError(f"support {value} outside [0, 100]")
    return percent


def _same_context(a: Optional[FormalContext], b: Optional[FormalContext]) -> bool:
    if a is None or b is None:
        return True
    return a is b or a == b


def _check_members(ctx: FormalContext, concepts: Iterable[Concept]) -> None:
    for c in concepts:
        if not _same_context(c.context, ctx):
            raise ContextMismatchError("concept does not belong to this context")
        if c.extent.dimension != ctx.n_objects or c.intent.dimension != ctx.n_attributes:
            raise ContextMismatchError("concept dimensions do not match the context")


def order_leq(c1: Concept, c2: Concept) -> bool:
    """(A1, B1) ≼ (A2, B2) iff A1 ⊆ A2 (equivalently B1 ⊇ B2)"""
    if not _same_context(c1.context, c2.context):
        raise ContextMismatchError("cannot compare concepts of different contexts")
    by_extent = c1.extent <= c2.extent
    by_intent = c1.intent >= c2.intent
    if by_extent != by_intent:
        raise ContextMismatchError(
            "extent and intent order disagree; the pair is not from one concept lattice"
        )
    return by_extent


@dataclass(frozen=True)
class ConceptLattice:
    """
    Concepts in canonical order plus their covering relation

    covers holds (child, parent) index pairs where parent is an immediate
    successor (more general concept) of child.
    """

    context: FormalContext = field(repr=False)
    concepts: Tuple[Concept, ...]
    covers: Tuple[Tuple[int, int], ...]
    top_index: Optional[int]
    bottom_index: Optional[int]
    _parents: Dict[int, List[int]] = field(init=False, repr=False, compare=False)
    _children: Dict[int, List[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parents = {i: [] for i in range(len(self.concepts))}
        children = {i: [] for i in range(len(self.concepts))}
        for child, parent in self.covers:
            parents[child].append(parent)
            children[parent].append(child)
        object.__setattr__(self, "_parents", parents)
        object.__setattr__(self, "_children", children)

    def __len__(self) -> int:
        return len(self.concepts)

    def parents(self, index: int) -> List[int]:
        return list(self._parents[index])

    def children(self, index: int) -> List[int]:
        return list(self._children[index])

    def upset(self, index: int) -> Set[int]:
        """All strictly more general concepts"""
        return self._reach(index, self._parents)

    def downset(self, index: int) -> Set[int]:
        """All strictly more specific concepts"""
        return self._reach(index, self._children)

    @staticmethod
    def _reach(index: int, edges: Dict[int, List[int]]) -> Set[int]:
        visited = set()
        queue = deque([index])
        while queue:
            node = queue.popleft()
            for nxt in edges[node]:
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
        return visited

    def leq(self, i: int, j: int) -> bool:
        """concepts[i] ≼ concepts[j], read off the covering relation"""
        return i == j or j in self.upset(i)

    def to_digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for i, c in enumerate(self.concepts):
            graph.add_node(
                i,
                intent=c.intent_names,
                support=None if c.support_percent is None else float(c.support_percent)
            )
        graph.add_edges_from(self.covers)
        return graph


def _covering_pairs(concepts: Sequence[Concept]) -> List[Tuple[int, int]]:
    """
    Transitive reduction of ≼ over concepts in canonical order

    In canonical order every strict upper bound of concept i has a smaller
    index, so only earlier concepts are scanned.
    """
    extents = [c.extent.bits for c in concepts]
    sizes = [len(c.extent) for c in concepts]
    pairs = []
    for child, extent in enumerate(extents):
        uppers = [
            p for p in range(child)
            if extents[p] != extent and extent & ~extents[p] == 0
        ]
        uppers.sort(key=lambda p: (sizes[p], p))
        minimal: List[int] = []
        for p in uppers:
            if not any(extents[q] & ~extents[p] == 0 for q in minimal):
                minimal.append(p)
        pairs.extend((child, parent) for parent in sorted(minimal))
    return pairs


def _assemble(ctx: FormalContext, concepts: Sequence[Concept]) -> ConceptLattice:
    ordered = sorted(concepts, key=canonical_key)
    seen = set()
    for c in ordered:
        if c.intent.bits in seen:
            raise LatticeError(f"duplicated concept with intent {c.intent_names}")
        seen.add(c.intent.bits)

    covers = _covering_pairs(ordered)
    has_parent = {child for child, _ in covers}
    has_child = {parent for _, parent in covers}
    maximal = [i for i in range(len(ordered)) if i not in has_parent]
    minimal = [i for i in range(len(ordered)) if i not in has_child]

    return ConceptLattice(
        context=ctx,
        concepts=tuple(ordered),
        covers=tuple(covers),
        top_index=maximal[0] if len(maximal) == 1 else None,
        bottom_index=minimal[0] if len(minimal) == 1 else None
    )


def build_lattice(ctx: FormalContext, concepts: Sequence[Concept]) -> ConceptLattice:
    """
    Build the concept lattice of ctx from its complete concept set

    Raises:
        LatticeError: if concepts are duplicated, invalid or incomplete
            (some meet of two intents, object intent or the bottom is missing)
    """
    _check_members(ctx, concepts)
    for c in concepts:
        if derive_intent(ctx, c.intent) != c.extent or derive_extent(ctx, c.extent) != c.intent:
            raise LatticeError(f"not a formal concept: intent {c.intent_names}")

    lattice = _assemble(ctx, concepts)

    intents = {c.intent.bits for c in lattice.concepts}
    required = set(ctx.incidence_rows)
    required.add(ctx.all_attributes.bits)
    required.add(close_attributes(ctx, AttributeSet.empty(ctx.n_attributes)).bits)
    missing = required - intents
    if missing:
        raise LatticeError(f"incomplete concept set: {len(missing)} required intent(s) missing")
    ordered = [c.intent.bits for c in lattice.concepts]
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a & b not in intents:
                raise LatticeError("incomplete concept set: meet closure fails")

    logger.debug("Built lattice with %d concepts and %d covers", len(lattice), len(lattice.covers))
    return lattice


def build_suborder(ctx: FormalContext, concepts: Sequence[Concept]) -> ConceptLattice:
    """
    Covering relation of ≼ restricted to an arbitrary concept subset

    Used for iceberg and contrast-reduced sets, which need not be lattices;
    top_index / bottom_index are None unless a unique maximum / minimum exists.
    """
    _check_members(ctx, concepts)
    return _assemble(ctx, concepts)


def _check_operands(ctx: FormalContext, concepts: Sequence[Concept]) -> None:
    if not concepts:
        raise LatticeError("meet/join of an empty collection")
    _check_members(ctx, concepts)


def meet(ctx: FormalContext, concepts: Iterable[Concept]) -> Concept:
    """⋀ (A_t, B_t) = (⋂ A_t, (⋃ B_t)**)"""
    concepts = list(concepts)
    _check_operands(ctx, concepts)
    extent = ObjectSet.full(ctx.n_objects)
    union = AttributeSet.empty(ctx.n_attributes)
    for c in concepts:
        extent = extent & c.extent
        union = union | c.intent
    intent = close_attributes(ctx, union)
    return Concept.from_bits(ctx, extent.bits, intent.bits)


def join(ctx: FormalContext, concepts: Iterable[Concept]) -> Concept:
    """⋁ (A_t, B_t) = ((⋃ A_t)**, ⋂ B_t)"""
    concepts = list(concepts)
    _check_operands(ctx, concepts)
    union = ObjectSet.empty(ctx.n_objects)
    intent = AttributeSet.full(ctx.n_attributes)
    for c in concepts:
        union = union | c.extent
        intent = intent & c.intent
    extent = close_objects(ctx, union)
    return Concept.from_bits(ctx, extent.bits, intent.bits)


def iceberg(concepts: Iterable[Concept], min_support: Percent) -> List[Concept]:
    """
    Concepts with support >= min_support, input order preserved

    Concepts of an object-less context have no support and are kept.
    """
    threshold = as_percent(min_support)
    return [
        c for c in concepts
        if c.support_percent is None or c.support_percent >= threshold
    ]


@dataclass
class DotOptions:
    show_support: bool = True
    show_extent_size: bool = False
    graph_name: str = "lattice"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _node_label(concept: Concept, options: DotOptions) -> str:
    names = concept.intent_names
    parts = [", ".join(_dot_escape(n) for n in names) if names else DOT_SETTINGS["empty_label"]]
    if options.show_support and concept.support_percent is not None:
        parts.append(f"{float(concept.support_percent):.{DOT_SETTINGS['support_decimals']}f}%")
    if options.show_extent_size:
        parts.append(f"|A|={len(concept.extent)}")
    return "\\n".join(parts)


def export_dot(lattice: ConceptLattice, options: Optional[DotOptions] = None) -> str:
    """
    Render the covering relation as a DOT digraph

    Edges point from the more specific to the more general concept and
    rankdir=BT draws generic concepts on top.
    """
    options = options or DotOptions()
    lines = [
        f'digraph "{_dot_escape(options.graph_name)}" {{',
        f"  rankdir={DOT_SETTINGS['rankdir']};",
        f"  node [shape={DOT_SETTINGS['node_shape']}];"
    ]
    for i, concept in enumerate(lattice.concepts):
        lines.append(f'  {i} [label="{_node_label(concept, options)}"];')
    for child, parent in sorted(lattice.covers):
        lines.append(f"  {child} -> {parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"
