"""
Concept enumeration

Miners follow one interface (BaseMiner) so the fast enumerator and the
brute-force oracle are interchangeable; create_miner() picks one by name.
"""

import json
import logging
import sys
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from config import MINING_SETTINGS
from fca.context import (
    AttributeSet,
    FormalContext,
    ObjectSet,
    full_mask,
    iter_bits,
)
from fca.errors import CapacityError, ContextMismatchError, EmptyContextError

logger = logging.getLogger(__name__)

# (extent bits, intent bits)
RawConcept = Tuple[int, int]
# (extent bits, inherited intent bits, first attribute to try)
Branch = Tuple[int, int, int]


@dataclass(frozen=True, slots=True)
class Concept:
    """
    A formal concept (extent, intent) of `context`

    Equality and hashing use extent and intent only.
    """

    extent: ObjectSet
    intent: AttributeSet
    support_percent: Optional[Fraction] = field(default=None, compare=False)
    context: Optional[FormalContext] = field(default=None, compare=False, repr=False)

    @classmethod
    def from_bits(cls, ctx: FormalContext, extent: int, intent: int) -> "Concept":
        return cls(
            ObjectSet(extent, ctx.n_objects),
            AttributeSet(intent, ctx.n_attributes),
            _support_of(extent.bit_count(), ctx.n_objects),
            ctx
        )

    @property
    def extent_names(self) -> List[str]:
        return self.context.object_names_of(self.extent)

    @property
    def intent_names(self) -> List[str]:
        return self.context.attribute_names_of(self.intent)


def _support_of(size: int, n_objects: int) -> Optional[Fraction]:
    if n_objects == 0:
        return None
    return Fraction(100 * size, n_objects)


def canonical_key(concept: Concept) -> int:
    """
    Sort key for the canonical concept order

    Intents compare as binary words with the highest attribute index most
    significant, i.e. lexicographically on their descending index sequences.
    A superset always sorts after its subsets, so the order is a linear
    extension of the lattice order with the top concept first.
    """
    return concept.intent.bits


def support(ctx: FormalContext, concept: Concept) -> Fraction:
    """Support(C) = |Ext(C)| / |U| x 100, as an exact fraction"""
    if ctx.n_objects == 0:
        raise EmptyContextError("support is undefined for a context without objects")
    if concept.context is not None and concept.context is not ctx and concept.context != ctx:
        raise ContextMismatchError("concept does not belong to this context")
    if concept.extent.dimension != ctx.n_objects:
        raise ContextMismatchError("concept extent does not match the context size")
    return Fraction(100 * len(concept.extent), ctx.n_objects)


# Close-by-One with canonicity test, intents completed incrementally
# while scanning attributes (In-Close style)

def _expand(
    cols: Sequence[int],
    notcols: Sequence[int],
    n_attributes: int,
    extent: int,
    intent: int,
    start: int
) -> Tuple[int, List[Tuple[int, int]]]:
    """
    Complete `intent` for `extent` and collect canonical children

    Returns the closed intent and (child extent, attribute) pairs.
    """
    children = []
    for j in range(start, n_attributes):
        bit = 1 << j
        if intent & bit:
            continue
        child = extent & cols[j]
        if child == extent:
            intent |= bit
            continue
        for k in range(j):
            if not intent >> k & 1 and not child & notcols[k]:
                break
        else:
            children.append((child, j))
    return intent, children


def _close_by_one(
    cols: Sequence[int],
    notcols: Sequence[int],
    n_attributes: int,
    branch: Branch,
    limit: int
) -> List[RawConcept]:
    found = []
    stack = [branch]
    while stack:
        extent, intent, start = stack.pop()
        intent, children = _expand(cols, notcols, n_attributes, extent, intent, start)
        found.append((extent, intent))
        if len(found) > limit:
            raise CapacityError("concept limit exceeded", found=len(found))
        for child, j in reversed(children):
            stack.append((child, intent | (1 << j), j + 1))
    return found


_WORKER_STATE: Dict[str, Any] = {}


def _init_worker(cols, notcols, n_attributes, limit):
    _WORKER_STATE.update(cols=cols, notcols=notcols, n_attributes=n_attributes, limit=limit)


def _mine_branch(branch: Branch) -> List[RawConcept]:
    state = _WORKER_STATE
    return _close_by_one(state["cols"], state["notcols"], state["n_attributes"], branch, state["limit"])


class BaseMiner(ABC):
    """
    Abstract base class for concept enumerators
    """

    def __init__(self, max_concepts: Optional[int] = None):
        self.max_concepts = max_concepts or MINING_SETTINGS["max_concepts"]

    @property
    @abstractmethod
    def name(self) -> str:
        """Return the miner name used by create_miner()"""
        pass

    @abstractmethod
    def mine_raw(self, ctx: FormalContext) -> List[RawConcept]:
        """
        Enumerate every concept of ctx as (extent bits, intent bits)

        Order and duplicates do not matter here; mine() canonicalizes.
        """
        pass

    def mine(self, ctx: FormalContext) -> List[Concept]:
        """
        Enumerate all concepts of ctx in canonical order

        Args:
            ctx: Formal context

        Returns:
            List of Concept, sorted by canonical_key
        """
        raw = self.mine_raw(ctx)
        if len(raw) > self.max_concepts:
            raise CapacityError("concept limit exceeded", found=len(raw))
        unique = {intent: extent for extent, intent in raw}
        if len(unique) != len(raw):
            logger.warning("%s produced %d duplicate intents", self.name, len(raw) - len(unique))
        return [Concept.from_bits(ctx, unique[intent], intent) for intent in sorted(unique)]


class CloseByOneMiner(BaseMiner):
    """
    Closed-set traversal with a canonicity test

    The first `split_depth` levels of the search tree are expanded in-process;
    the remaining branches are independent and go to a process pool when
    more than one worker is allowed.
    """

    def __init__(
        self,
        threads: Optional[int] = None,
        max_concepts: Optional[int] = None,
        split_depth: Optional[int] = None,
        progress: bool = False
    ):
        super().__init__(max_concepts)
        self.threads = max(1, threads or MINING_SETTINGS["threads"])
        self.split_depth = MINING_SETTINGS["split_depth"] if split_depth is None else split_depth
        self.progress = progress

    @property
    def name(self) -> str:
        return "close-by-one"

    def mine_raw(self, ctx: FormalContext) -> List[RawConcept]:
        m = ctx.n_attributes
        everyone = full_mask(ctx.n_objects)
        cols = ctx.incidence_cols
        notcols = tuple(everyone & ~col for col in cols)
        limit = self.max_concepts

        found: List[RawConcept] = []
        frontier: List[Branch] = [(everyone, 0, 0)]
        for _ in range(self.split_depth):
            next_frontier = []
            for extent, intent, start in frontier:
                intent, children = _expand(cols, notcols, m, extent, intent, start)
                found.append((extent, intent))
                next_frontier.extend((child, intent | (1 << j), j + 1) for child, j in children)
            frontier = next_frontier
            if not frontier:
                break
        if len(found) > limit:
            raise CapacityError("concept limit exceeded", found=len(found))

        if not frontier:
            return found

        workers = min(self.threads, len(frontier))
        logger.debug("Mining %d branches with %d worker(s)", len(frontier), workers)
        bar = tqdm(
            total=len(frontier),
            disable=not self.progress,
            desc="Mining branches",
            unit="branch",
            file=sys.stderr
        )
        try:
            if workers == 1:
                for branch in frontier:
                    found.extend(_close_by_one(cols, notcols, m, branch, limit - len(found)))
                    bar.update(1)
            else:
                with ProcessPoolExecutor(
                    max_workers=workers,
                    initializer=_init_worker,
                    initargs=(cols, notcols, m, limit)
                ) as pool:
                    for result in pool.map(_mine_branch, frontier, chunksize=1):
                        found.extend(result)
                        bar.update(1)
                        if len(found) > limit:
                            pool.shutdown(wait=False, cancel_futures=True)
                            raise CapacityError("concept limit exceeded", found=len(found))
        except CapacityError as e:
            # branch-local counts do not include concepts already collected
            raise CapacityError("concept limit exceeded", found=max(e.found, len(found))) from None
        finally:
            bar.close()

        return found


class BruteForceMiner(BaseMiner):
    """
    Verification oracle: close every subset of V and keep the fixpoints
    """

    @property
    def name(self) -> str:
        return "brute-force"

    def mine_raw(self, ctx: FormalContext) -> List[RawConcept]:
        limit = MINING_SETTINGS["brute_force_max_attributes"]
        m = ctx.n_attributes
        if m > limit:
            raise CapacityError(
                f"brute force is limited to {limit} attributes, context has {m}"
            )
        everyone = full_mask(ctx.n_objects)
        all_attributes = full_mask(m)
        rows, cols = ctx.incidence_rows, ctx.incidence_cols

        closed = {}
        for subset in range(1 << m):
            extent = everyone
            for j in iter_bits(subset):
                extent &= cols[j]
            intent = all_attributes
            for i in iter_bits(extent):
                intent &= rows[i]
            closed[intent] = extent
        return [(extent, intent) for intent, extent in closed.items()]


MINERS = {
    "close-by-one": CloseByOneMiner,
    "brute-force": BruteForceMiner
}


def create_miner(name: str = "close-by-one", **kwargs) -> BaseMiner:
    """
    Factory for concept miners

    Args:
        name: Key from MINERS
        **kwargs: Passed to the miner constructor

    Returns:
        Miner instance
    """
    miner_class = MINERS.get(name)
    if miner_class is None:
        raise ValueError(f"Unknown miner: {name}")
    return miner_class(**kwargs)


def enumerate_concepts(
    ctx: FormalContext,
    threads: Optional[int] = None,
    max_concepts: Optional[int] = None,
    progress: bool = False
) -> List[Concept]:
    """All concepts of ctx, canonical order, any worker count"""
    miner = CloseByOneMiner(threads=threads, max_concepts=max_concepts, progress=progress)
    return miner.mine(ctx)


def brute_force_concepts(ctx: FormalContext) -> List[Concept]:
    """Oracle enumeration over all 2^|V| attribute subsets"""
    return BruteForceMiner().mine(ctx)


# JSON Lines serialization

def concept_record(concept: Concept) -> Dict[str, Any]:
    support_value = concept.support_percent
    return {
        "extent": concept.extent_names,
        "intent": concept.intent_names,
        "support": None if support_value is None else float(support_value)
    }


def write_concepts_jsonl(concepts: Iterable[Concept]) -> str:
    return "".join(
        json.dumps(concept_record(c), ensure_ascii=False) + "\n"
        for c in concepts
    )
