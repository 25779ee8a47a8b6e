"""
Formal context data model, derivation/closure operators and file formats

Objects and attributes are dense integer indices in file order. Every set is a
Python int used as a bit vector (bit i = index i), so intersections are a
single `&` on the whole row or column.
"""

import io
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

import pandas as pd

from fca.errors import ContextFormatError, DimensionError

logger = logging.getLogger(__name__)

CXT_HEADER = "B"
INCIDENT = "X"
NOT_INCIDENT = "."
CSV_TRUE = {"1", "X"}
CSV_FALSE = {"0", "."}


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits in ascending order"""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def full_mask(size: int) -> int:
    return (1 << size) - 1


@dataclass(frozen=True, slots=True)
class IndexSet:
    """
    Immutable subset of range(dimension) backed by an int bit vector

    Set operations are only defined between sets of the same kind and
    dimension; anything else raises DimensionError.
    """

    bits: int
    dimension: int

    def __post_init__(self):
        if self.dimension < 0:
            raise DimensionError(f"negative dimension {self.dimension}")
        if self.bits < 0 or self.bits >> self.dimension:
            raise DimensionError(
                f"bits outside dimension {self.dimension} for {type(self).__name__}"
            )

    @classmethod
    def from_indices(cls, indices: Iterable[int], dimension: int):
        bits = 0
        for i in indices:
            if not 0 <= i < dimension:
                raise DimensionError(f"index {i} outside dimension {dimension}")
            bits |= 1 << i
        return cls(bits, dimension)

    @classmethod
    def full(cls, dimension: int):
        return cls(full_mask(dimension), dimension)

    @classmethod
    def empty(cls, dimension: int):
        return cls(0, dimension)

    def _check(self, other: "IndexSet") -> None:
        if type(other) is not type(self):
            raise DimensionError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.dimension != self.dimension:
            raise DimensionError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.dimension and bool(self.bits >> index & 1)

    def __and__(self, other):
        self._check(other)
        return type(self)(self.bits & other.bits, self.dimension)

    def __or__(self, other):
        self._check(other)
        return type(self)(self.bits | other.bits, self.dimension)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.bits & ~other.bits, self.dimension)

    def __le__(self, other) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other) -> bool:
        self._check(other)
        return other.bits & ~self.bits == 0

    def __gt__(self, other) -> bool:
        return self >= other and self.bits != other.bits

    def issubset(self, other) -> bool:
        return self <= other

    def issuperset(self, other) -> bool:
        return self >= other

    def indices(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.bits))


class ObjectSet(IndexSet):
    """A ⊆ U for some context"""
    __slots__ = ()


class AttributeSet(IndexSet):
    """B ⊆ V for some context"""
    __slots__ = ()


@dataclass(frozen=True)
class FormalContext:
    """
    K = (U, V, R) with R stored row-wise and column-wise

    incidence_rows[i] is the attribute bit vector of object i (xR);
    incidence_cols[j] is the object bit vector of attribute j (Ry).
    """

    object_names: Tuple[str, ...]
    attribute_names: Tuple[str, ...]
    incidence_rows: Tuple[int, ...]
    incidence_cols: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "object_names", tuple(self.object_names))
        object.__setattr__(self, "attribute_names", tuple(self.attribute_names))
        object.__setattr__(self, "incidence_rows", tuple(self.incidence_rows))
        object.__setattr__(self, "incidence_cols", tuple(self.incidence_cols))

        _check_names(self.object_names, "object")
        _check_names(self.attribute_names, "attribute")

        if len(self.incidence_rows) != len(self.object_names):
            raise DimensionError(
                f"{len(self.incidence_rows)} rows for {len(self.object_names)} objects"
            )
        if len(self.incidence_cols) != len(self.attribute_names):
            raise DimensionError(
                f"{len(self.incidence_cols)} columns for {len(self.attribute_names)} attributes"
            )
        if _transpose(self.incidence_rows, len(self.attribute_names)) != self.incidence_cols:
            raise DimensionError("row and column incidence disagree")

    @classmethod
    def from_rows(
        cls,
        object_names: Sequence[str],
        attribute_names: Sequence[str],
        rows: Sequence[int]
    ) -> "FormalContext":
        """Build a context from per-object attribute bit vectors"""
        rows = tuple(rows)
        limit = full_mask(len(attribute_names))
        for i, row in enumerate(rows):
            if row < 0 or row & ~limit:
                raise DimensionError(f"row {i} has bits outside {len(attribute_names)} attributes")
        return cls(
            tuple(object_names),
            tuple(attribute_names),
            rows,
            _transpose(rows, len(attribute_names))
        )

    @classmethod
    def from_matrix(
        cls,
        object_names: Sequence[str],
        attribute_names: Sequence[str],
        matrix: Iterable[Iterable[bool]]
    ) -> "FormalContext":
        """Build a context from a boolean matrix (lists or a numpy array)"""
        rows = []
        for i, cells in enumerate(matrix):
            cells = list(cells)
            if len(cells) != len(attribute_names):
                raise DimensionError(
                    f"matrix row {i} has {len(cells)} cells, expected {len(attribute_names)}"
                )
            rows.append(sum(1 << j for j, cell in enumerate(cells) if cell))
        return cls.from_rows(object_names, attribute_names, rows)

    @property
    def n_objects(self) -> int:
        return len(self.object_names)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_names)

    @property
    def incidence_count(self) -> int:
        return sum(row.bit_count() for row in self.incidence_rows)

    @property
    def all_objects(self) -> ObjectSet:
        return ObjectSet.full(self.n_objects)

    @property
    def all_attributes(self) -> AttributeSet:
        return AttributeSet.full(self.n_attributes)

    def has(self, obj: int, attr: int) -> bool:
        return bool(self.incidence_rows[obj] >> attr & 1)

    def objects(self, *names: str) -> ObjectSet:
        index = {name: i for i, name in enumerate(self.object_names)}
        try:
            return ObjectSet.from_indices((index[n] for n in names), self.n_objects)
        except KeyError as e:
            raise DimensionError(f"unknown object {e.args[0]!r}") from None

    def attributes(self, *names: str) -> AttributeSet:
        index = {name: j for j, name in enumerate(self.attribute_names)}
        try:
            return AttributeSet.from_indices((index[n] for n in names), self.n_attributes)
        except KeyError as e:
            raise DimensionError(f"unknown attribute {e.args[0]!r}") from None

    def object_names_of(self, objects: ObjectSet) -> List[str]:
        return [self.object_names[i] for i in objects]

    def attribute_names_of(self, attributes: AttributeSet) -> List[str]:
        return [self.attribute_names[j] for j in attributes]

    def subcontext(self, object_indices: Sequence[int]) -> "FormalContext":
        """Keep the given objects (in the given order) and every attribute"""
        return FormalContext.from_rows(
            [self.object_names[i] for i in object_indices],
            self.attribute_names,
            [self.incidence_rows[i] for i in object_indices]
        )

    def to_frame(self) -> pd.DataFrame:
        """Boolean incidence table indexed by object name"""
        data = [
            [bool(row >> j & 1) for j in range(self.n_attributes)]
            for row in self.incidence_rows
        ]
        return pd.DataFrame(
            data,
            index=pd.Index(self.object_names, dtype=object),
            columns=pd.Index(self.attribute_names, dtype=object),
            dtype=bool
        )


def _transpose(rows: Sequence[int], width: int) -> Tuple[int, ...]:
    cols = [0] * width
    for i, row in enumerate(rows):
        bit = 1 << i
        for j in iter_bits(row):
            if j >= width:
                raise DimensionError(f"row {i} references attribute {j} of {width}")
            cols[j] |= bit
    return tuple(cols)


def _check_names(names: Sequence[str], kind: str) -> None:
    seen = set()
    for name in names:
        if not isinstance(name, str):
            raise ContextFormatError(f"{kind} name {name!r} is not a string")
        if "\n" in name or "\r" in name:
            raise ContextFormatError(f"{kind} name {name!r} contains a line break")
        if name in seen:
            raise ContextFormatError(f"duplicate {kind} name {name!r}")
        seen.add(name)


def _expect(s: IndexSet, kind: type, size: int) -> None:
    if type(s) is not kind:
        raise DimensionError(f"expected {kind.__name__}, got {type(s).__name__}")
    if s.dimension != size:
        raise DimensionError(
            f"{kind.__name__} of dimension {s.dimension} used with context of size {size}"
        )


# Derivation operators (Galois connection)

def derive_extent(ctx: FormalContext, objects: ObjectSet) -> AttributeSet:
    """
    A* - attributes shared by every object in A

    For A = ∅ this is every attribute.
    """
    _expect(objects, ObjectSet, ctx.n_objects)
    bits = full_mask(ctx.n_attributes)
    rows = ctx.incidence_rows
    for i in iter_bits(objects.bits):
        bits &= rows[i]
        if not bits:
            break
    return AttributeSet(bits, ctx.n_attributes)


def derive_intent(ctx: FormalContext, attributes: AttributeSet) -> ObjectSet:
    """
    B* - objects having every attribute in B

    For B = ∅ this is every object.
    """
    _expect(attributes, AttributeSet, ctx.n_attributes)
    bits = full_mask(ctx.n_objects)
    cols = ctx.incidence_cols
    for j in iter_bits(attributes.bits):
        bits &= cols[j]
        if not bits:
            break
    return ObjectSet(bits, ctx.n_objects)


def close_attributes(ctx: FormalContext, attributes: AttributeSet) -> AttributeSet:
    """B** - smallest closed attribute set containing B"""
    return derive_extent(ctx, derive_intent(ctx, attributes))


def close_objects(ctx: FormalContext, objects: ObjectSet) -> ObjectSet:
    """A** - smallest closed object set containing A"""
    return derive_intent(ctx, derive_extent(ctx, objects))


# Burmeister .cxt format

def parse_cxt(text: str) -> FormalContext:
    """
    Parse a Burmeister .cxt document

    Args:
        text: Document text (LF line endings; CRLF is normalized)

    Returns:
        FormalContext with exactly the declared counts

    Raises:
        ContextFormatError: with the 1-based line number of the problem
    """
    if "\r" in text:
        logger.debug("Normalizing CRLF line endings")
        text = text.replace("\r\n", "\n")

    if not text.endswith("\n"):
        raise ContextFormatError(
            "missing trailing newline (truncated input?)",
            line=text.count("\n") + 1
        )

    lines = text[:-1].split("\n")

    def line_at(number: int, what: str) -> str:
        if number > len(lines):
            raise ContextFormatError(f"truncated input, expected {what}", line=number)
        return lines[number - 1]

    if line_at(1, "header") != CXT_HEADER:
        raise ContextFormatError(f"expected header {CXT_HEADER!r}", line=1)
    if line_at(2, "blank line") != "":
        raise ContextFormatError("expected blank line", line=2)

    counts = []
    for number, what in ((3, "object count"), (4, "attribute count")):
        raw = line_at(number, what)
        if not raw.isdigit():
            raise ContextFormatError(f"{what} {raw!r} is not a non-negative integer", line=number)
        counts.append(int(raw))
    n_objects, n_attributes = counts

    if line_at(5, "blank line") != "":
        raise ContextFormatError("expected blank line", line=5)

    first = 6
    object_names = [line_at(first + i, "object name") for i in range(n_objects)]
    first += n_objects
    attribute_names = [line_at(first + j, "attribute name") for j in range(n_attributes)]
    first += n_attributes

    rows = []
    for i in range(n_objects):
        number = first + i
        raw = line_at(number, f"incidence row for {object_names[i]!r}")
        if len(raw) != n_attributes:
            raise ContextFormatError(
                f"dimension mismatch: row has {len(raw)} cells, expected {n_attributes}",
                line=number
            )
        bits = 0
        for j, cell in enumerate(raw):
            if cell == INCIDENT:
                bits |= 1 << j
            elif cell != NOT_INCIDENT:
                raise ContextFormatError(f"illegal cell character {cell!r}", line=number)
        rows.append(bits)

    if len(lines) > first + n_objects - 1:
        raise ContextFormatError(
            "unexpected content after the last incidence row",
            line=first + n_objects
        )

    _check_duplicates(object_names, "object", 6)
    _check_duplicates(attribute_names, "attribute", 6 + n_objects)

    return FormalContext.from_rows(object_names, attribute_names, rows)


def _check_duplicates(names: List[str], kind: str, first_line: int) -> None:
    seen = {}
    for offset, name in enumerate(names):
        if name in seen:
            raise ContextFormatError(
                f"duplicate {kind} name {name!r} (first on line {seen[name]})",
                line=first_line + offset
            )
        seen[name] = first_line + offset


def write_cxt(ctx: FormalContext) -> str:
    """Render a context as a Burmeister .cxt document"""
    lines = [CXT_HEADER, "", str(ctx.n_objects), str(ctx.n_attributes), ""]
    lines.extend(ctx.object_names)
    lines.extend(ctx.attribute_names)
    for row in ctx.incidence_rows:
        lines.append("".join(
            INCIDENT if row >> j & 1 else NOT_INCIDENT
            for j in range(ctx.n_attributes)
        ))
    return "\n".join(lines) + "\n"


# Binary CSV tables

def parse_binary_csv(text: str) -> FormalContext:
    """
    Parse a binary table: header row = attribute names, first column = object names

    Cells may be 0/1 or ./X.
    """
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True
        )
    except pd.errors.EmptyDataError:
        raise ContextFormatError("empty table") from None
    except pd.errors.ParserError as e:
        raise ContextFormatError(f"ragged rows: {e}") from None

    header = [str(cell).strip() for cell in frame.iloc[0].tolist()]
    attribute_names = header[1:]

    object_names = []
    rows = []
    for r in range(1, len(frame)):
        cells = frame.iloc[r].tolist()
        name = str(cells[0]).strip()
        bits = 0
        for j, cell in enumerate(cells[1:]):
            if pd.isna(cell):
                raise ContextFormatError(
                    "ragged row: fewer cells than the header",
                    line=r + 1, row=name
                )
            value = str(cell).strip()
            if value in CSV_TRUE:
                bits |= 1 << j
            elif value not in CSV_FALSE:
                raise ContextFormatError(
                    f"non-binary cell value {value!r}",
                    line=r + 1, row=name, column=attribute_names[j]
                )
        object_names.append(name)
        rows.append(bits)

    return FormalContext.from_rows(object_names, attribute_names, rows)


def write_binary_csv(ctx: FormalContext, style: str = "X") -> str:
    """Render a context as a binary CSV table (style "X" for ./X, "01" for 0/1)"""
    if style == "X":
        yes, no = INCIDENT, NOT_INCIDENT
    elif style == "01":
        yes, no = "1", "0"
    else:
        raise ValueError(f"unknown cell style {style!r}")

    frame = pd.DataFrame(
        [
            [yes if row >> j & 1 else no for j in range(ctx.n_attributes)]
            for row in ctx.incidence_rows
        ],
        index=pd.Index(ctx.object_names, dtype=object, name=""),
        columns=pd.Index(ctx.attribute_names, dtype=object),
        dtype=object
    )
    return frame.to_csv(lineterminator="\n")
