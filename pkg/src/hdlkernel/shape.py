"""Interface shapes, leaf indices, wire bundles and plug maps.

A shape is a tree whose leaves are tagged unit wires. An index is the path
from the root to one leaf: ``"L"``/``"R"`` select a side of a binary sum and an
integer ``i`` selects copy ``i`` of an n-ary sum. Canonical leaf order is
left-to-right, so every shape also has a flat numbering ``0..leaf_count-1``
which is what bundles and netlists store.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .errors import InvalidMap, NotASum, ShapeMismatch

Step = Union[str, int]
Index = tuple  # tuple[Step, ...]

L = "L"
R = "R"


class Shape:
    """Base class of the three shape constructors."""

    __slots__ = ()

    def __add__(self, other: "Shape") -> "Sum":
        return Sum(self, other)


@dataclass(frozen=True)
class Unit(Shape):
    tag: str

    def __post_init__(self):
        if not isinstance(self.tag, str) or not self.tag:
            raise ValueError("unit tag must be a non-empty string")

    def __str__(self):
        return f"1_{self.tag}"


@dataclass(frozen=True)
class Sum(Shape):
    left: Shape
    right: Shape

    def __post_init__(self):
        if not isinstance(self.left, Shape) or not isinstance(self.right, Shape):
            raise TypeError("Sum components must be shapes")

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class SumN(Shape):
    base: Shape
    count: int

    def __post_init__(self):
        if not isinstance(self.base, Shape):
            raise TypeError("SumN base must be a shape")
        if not isinstance(self.count, int) or self.count < 0:
            raise ValueError(f"SumN count must be a natural number, got {self.count!r}")

    def __str__(self):
        return f"sumn({self.base}, {self.count})"


def bits(tag: str, n: int) -> SumN:
    """``n`` wires tagged ``tag``; the shape of an n-bit word."""
    return SumN(Unit(tag), n)


@lru_cache(maxsize=None)
def leaf_count(s: Shape) -> int:
    if isinstance(s, Unit):
        return 1
    if isinstance(s, Sum):
        return leaf_count(s.left) + leaf_count(s.right)
    if isinstance(s, SumN):
        return s.count * leaf_count(s.base)
    raise TypeError(f"not a shape: {s!r}")


@lru_cache(maxsize=None)
def enumerate_indices(s: Shape) -> tuple:
    """All leaf indices of ``s`` in canonical left-to-right order."""
    if isinstance(s, Unit):
        return ((),)
    if isinstance(s, Sum):
        return tuple((L,) + i for i in enumerate_indices(s.left)) + tuple(
            (R,) + i for i in enumerate_indices(s.right)
        )
    if isinstance(s, SumN):
        inner = enumerate_indices(s.base)
        return tuple((k,) + i for k in range(s.count) for i in inner)
    raise TypeError(f"not a shape: {s!r}")


@lru_cache(maxsize=None)
def _position_table(s: Shape) -> dict:
    return {idx: pos for pos, idx in enumerate(enumerate_indices(s))}


def position(s: Shape, index: Index) -> int:
    """Flat position of ``index`` in the canonical order of ``s``."""
    try:
        return _position_table(s)[tuple(index)]
    except (KeyError, TypeError):
        raise InvalidMap(f"{format_index(index)} is not a valid index of {s}") from None


def index_at(s: Shape, pos: int) -> Index:
    return enumerate_indices(s)[pos]


def is_valid_index(s: Shape, index: Index) -> bool:
    try:
        return tuple(index) in _position_table(s)
    except TypeError:
        return False


def leaf_tag(s: Shape, index: Index) -> str:
    node = subshape(s, index)
    if not isinstance(node, Unit):
        raise InvalidMap(f"{format_index(index)} does not end at a leaf of {s}")
    return node.tag


@lru_cache(maxsize=None)
def leaf_tags(s: Shape) -> tuple:
    """Tags of all leaves in canonical order."""
    return tuple(leaf_tag(s, i) for i in enumerate_indices(s))


def subshape(s: Shape, path: Sequence[Step]) -> Shape:
    """The sub-tree of ``s`` reached by following ``path`` (need not be a leaf)."""
    node = s
    for step in path:
        if isinstance(node, Sum) and step == L:
            node = node.left
        elif isinstance(node, Sum) and step == R:
            node = node.right
        elif isinstance(node, SumN) and isinstance(step, int) and 0 <= step < node.count:
            node = node.base
        else:
            raise InvalidMap(f"{format_index(path)} is not a path of {s}")
    return node


def format_index(index: Sequence[Step]) -> str:
    if not index:
        return "ε"
    return ".".join(str(step) for step in index)


def parse_index(text: str) -> Index:
    if text in ("ε", "", "-"):
        return ()
    steps = []
    for part in text.split("."):
        if part in (L, R):
            steps.append(part)
        elif part.isdigit():
            steps.append(int(part))
        else:
            raise ValueError(f"bad index step {part!r}")
    return tuple(steps)


def first_difference(a: Shape, b: Shape, _path: tuple = ()) -> str:
    """Dotted path of the first node where ``a`` and ``b`` differ, or ``None``."""
    if a == b:
        return None
    if isinstance(a, Sum) and isinstance(b, Sum):
        if a.left != b.left:
            return first_difference(a.left, b.left, _path + (L,))
        return first_difference(a.right, b.right, _path + (R,))
    if isinstance(a, SumN) and isinstance(b, SumN) and a.count == b.count and a.count > 0:
        return first_difference(a.base, b.base, _path + (0,))
    return ".".join(str(p) for p in _path)


def same_layout(a: Shape, b: Shape) -> bool:
    """Shape equality ignoring tags (used only for diagnostics)."""
    if isinstance(a, Unit) and isinstance(b, Unit):
        return True
    if isinstance(a, Sum) and isinstance(b, Sum):
        return same_layout(a.left, b.left) and same_layout(a.right, b.right)
    if isinstance(a, SumN) and isinstance(b, SumN):
        return a.count == b.count and same_layout(a.base, b.base)
    return False


def require_equal(expected: Shape, actual: Shape, context: str) -> None:
    if expected != actual:
        if same_layout(expected, actual):
            context = f"{context} (same layout, different tags)"
        raise ShapeMismatch(expected, actual, context)


# ---------------------------------------------------------------------------
# bundles


class Bundle:
    """A total assignment of one value per leaf of ``shape``.

    Values are stored as a tuple in canonical leaf order; ``b[index]`` looks a
    value up by its structured index.
    """

    __slots__ = ("shape", "values")

    def __init__(self, shape: Shape, values: Iterable[Any]):
        values = tuple(values)
        if len(values) != leaf_count(shape):
            raise ValueError(
                f"bundle over {shape} needs {leaf_count(shape)} values, got {len(values)}"
            )
        self.shape = shape
        self.values = values

    @classmethod
    def from_mapping(cls, shape: Shape, mapping: Mapping[Index, Any]) -> "Bundle":
        indices = enumerate_indices(shape)
        norm = {tuple(k): v for k, v in mapping.items()}
        if norm.keys() != set(indices):
            missing = [format_index(i) for i in indices if i not in norm]
            extra = [format_index(k) for k in norm if not is_valid_index(shape, k)]
            raise InvalidMap(f"bundle not total on {shape}: missing {missing}, extra {extra}")
        return cls(shape, (norm[i] for i in indices))

    def __getitem__(self, index: Index):
        return self.values[position(self.shape, index)]

    def as_dict(self) -> dict:
        return dict(zip(enumerate_indices(self.shape), self.values))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, Bundle):
            return NotImplemented
        return self.shape == other.shape and self.values == other.values

    def __hash__(self):
        return hash((self.shape, self.values))

    def __repr__(self):
        items = ", ".join(
            f"{format_index(i)}↦{_fmt_value(v)}"
            for i, v in zip(enumerate_indices(self.shape), self.values)
        )
        return f"Bundle({{{items}}})"


def _fmt_value(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, tuple) and all(isinstance(x, bool) for x in v):
        return "".join("1" if x else "0" for x in v)
    return repr(v)


def bundle_left(b: Bundle) -> Bundle:
    if not isinstance(b.shape, Sum):
        raise NotASum(f"bundle_left needs a Sum shape, got {b.shape}")
    k = leaf_count(b.shape.left)
    return Bundle(b.shape.left, b.values[:k])


def bundle_right(b: Bundle) -> Bundle:
    if not isinstance(b.shape, Sum):
        raise NotASum(f"bundle_right needs a Sum shape, got {b.shape}")
    k = leaf_count(b.shape.left)
    return Bundle(b.shape.right, b.values[k:])


def bundle_append(x: Bundle, y: Bundle) -> Bundle:
    return Bundle(Sum(x.shape, y.shape), x.values + y.values)


def bundle_precompose(f: "PlugMap", b: Bundle) -> Bundle:
    """``result[o] = b[f(o)]`` for every leaf ``o`` of ``f.target``."""
    require_equal(f.source, b.shape, "bundle_precompose")
    vals = b.values
    return Bundle(f.target, (vals[i] for i in f.table))


# ---------------------------------------------------------------------------
# plug maps


@dataclass(frozen=True)
class PlugMap:
    """Total map from the leaves of ``target`` (plug outputs) to leaves of ``source``.

    ``table[j]`` is the flat source position read by flat target position ``j``.
    Fan-out (a source position used several times) is allowed.
    """

    source: Shape
    target: Shape
    table: tuple

    def __post_init__(self):
        n_src = leaf_count(self.source)
        if len(self.table) != leaf_count(self.target):
            raise InvalidMap(
                f"plug map must cover all {leaf_count(self.target)} output leaves, "
                f"got {len(self.table)} entries"
            )
        for j, i in enumerate(self.table):
            if not isinstance(i, int) or not 0 <= i < n_src:
                raise InvalidMap(
                    f"output {format_index(index_at(self.target, j))} maps to "
                    f"position {i!r}, outside 0..{n_src - 1} of {self.source}"
                )

    @classmethod
    def from_function(cls, source: Shape, target: Shape, fn: Callable[[Index], Index]) -> "PlugMap":
        table = []
        for o in enumerate_indices(target):
            i = fn(o)
            if i is None or not is_valid_index(source, i):
                raise InvalidMap(
                    f"output {format_index(o)} maps to "
                    f"{i if i is None else format_index(i)}, not a leaf of {source}"
                )
            table.append(position(source, i))
        return cls(source, target, tuple(table))

    @classmethod
    def from_mapping(cls, source: Shape, target: Shape, mapping: Mapping[Index, Index]) -> "PlugMap":
        mapping = {tuple(k): v for k, v in mapping.items()}
        extra = [k for k in mapping if not is_valid_index(target, k)]
        if extra:
            raise InvalidMap(f"{format_index(extra[0])} is not an output leaf of {target}")
        return cls.from_function(source, target, lambda o: mapping.get(o))

    def __call__(self, index: Index) -> Index:
        return index_at(self.source, self.table[position(self.target, index)])

    def then(self, other: "PlugMap") -> "PlugMap":
        """The map of ``Plug(self) |> Plug(other)``."""
        require_equal(self.target, other.source, "plug composition")
        return PlugMap(self.source, other.target, tuple(self.table[j] for j in other.table))


def identity_map(s: Shape) -> PlugMap:
    return PlugMap(s, s, tuple(range(leaf_count(s))))
