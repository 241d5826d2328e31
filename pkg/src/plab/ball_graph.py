"""Component ball graphs and their co-normal and Cartesian products.

A component graph is a perfect matching on its first ``2 * pairs`` vertex
ids (``2j`` is matched with ``2j + 1``) followed by ``isolated`` vertices of
degree zero.  Product vertices are plain tuples of component vertex ids and
are indexed in lexicographic order, first coordinate most significant.
"""

from __future__ import annotations

import enum
import itertools
import json
import operator
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from plab.errors import InvalidVertexError, PreconditionError, SizeCapError

DEFAULT_VERTEX_CAP = 10**6

Vertex = tuple[int, ...]


class VertexClass(enum.Enum):
    EXTREME = "extreme"
    SPHERE_NON_EXTREME = "sphere-non-extreme"
    INTERIOR = "interior"


@dataclass(frozen=True)
class ComponentGraph:
    """One factor ``B_i``: a matching plus isolated vertices."""

    pairs: int
    isolated: int = 0
    index: int = 0

    def __post_init__(self):
        if self.pairs < 0 or self.isolated < 0:
            raise ValueError("pairs and isolated must be non-negative")

    @property
    def size(self) -> int:
        return 2 * self.pairs + self.isolated

    @property
    def sphere(self) -> range:
        """Vertex ids that have a neighbour, i.e. the sphere subgraph."""
        return range(2 * self.pairs)

    def in_sphere(self, v: int) -> bool:
        return 0 <= v < 2 * self.pairs

    def partner(self, v: int) -> int | None:
        if self.in_sphere(v):
            return v ^ 1
        return None

    def adjacent(self, a: int, b: int) -> bool:
        return self.in_sphere(a) and b == a ^ 1

    def to_dict(self) -> dict:
        return {"pairs": self.pairs, "isolated": self.isolated}


@dataclass(frozen=True)
class ProductShape:
    """The family ``B_0, ..., B_{n-1}`` of component graphs."""

    components: tuple[ComponentGraph, ...]

    def __post_init__(self):
        comps = tuple(
            ComponentGraph(c.pairs, c.isolated, index=i) for i, c in enumerate(self.components)
        )
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a product shape needs at least one component")
        for c in comps:
            if c.size < 1:
                raise ValueError(f"component {c.index} has no vertices")

    @classmethod
    def of(cls, *specs: tuple[int, int]) -> "ProductShape":
        """Build from ``(pairs, isolated)`` tuples."""
        return cls(tuple(ComponentGraph(p, m) for p, m in specs))

    @classmethod
    def from_dict(cls, data: dict) -> "ProductShape":
        try:
            comps = data["components"]
            return cls(
                tuple(ComponentGraph(int(c["pairs"]), int(c.get("isolated", 0))) for c in comps)
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed shape description: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ProductShape":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"components": [c.to_dict() for c in self.components]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def n(self) -> int:
        return len(self.components)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.components)

    @cached_property
    def num_vertices(self) -> int:
        total = 1
        for s in self.sizes:
            total *= s
        return total

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            strides[i] = strides[i + 1] * self.sizes[i + 1]
        return tuple(strides)

    @property
    def has_extreme(self) -> bool:
        return all(c.pairs >= 1 for c in self.components)

    def check_vertex(self, u: Sequence[int]) -> Vertex:
        try:
            u = tuple(operator.index(x) for x in u)
        except TypeError:
            raise InvalidVertexError(f"vertex {u!r} has non-integer coordinates") from None
        if len(u) != self.n:
            raise InvalidVertexError(f"vertex {u} has {len(u)} coordinates, shape has {self.n}")
        for i, (x, s) in enumerate(zip(u, self.sizes)):
            if not 0 <= x < s:
                raise InvalidVertexError(f"coordinate {i} of {u} is not a vertex of B_{i}")
        return u

    def index(self, u: Vertex) -> int:
        return sum(x * s for x, s in zip(u, self._strides))

    def vertex(self, idx: int) -> Vertex:
        out = []
        for s in self._strides:
            q, idx = divmod(idx, s)
            out.append(q)
        return tuple(out)

    @cached_property
    def vertex_list(self) -> tuple[Vertex, ...]:
        return tuple(itertools.product(*(range(s) for s in self.sizes)))

    def flip(self, u: Vertex, coords: Iterable[int]) -> Vertex:
        """Replace ``u[i]`` by its partner for each ``i`` in ``coords``."""
        out = list(u)
        for i in coords:
            out[i] ^= 1
        return tuple(out)

    @cached_property
    def conormal_bitsets(self) -> tuple[int, ...]:
        """Adjacency of ``B_*`` as one int bitmask per vertex index."""
        n = self.n
        # per coordinate: which indices carry a given value there
        carriers = []
        for i in range(n):
            masks = [0] * self.sizes[i]
            carriers.append(masks)
        for idx, u in enumerate(self.vertex_list):
            for i in range(n):
                carriers[i][u[i]] |= 1 << idx
        rows = []
        for u in self.vertex_list:
            row = 0
            for i, c in enumerate(self.components):
                if c.in_sphere(u[i]):
                    row |= carriers[i][u[i] ^ 1]
            rows.append(row)
        return tuple(rows)


def conormal_adjacent(shape: ProductShape, u: Sequence[int], v: Sequence[int]) -> bool:
    """True iff some coordinate pair is a matched edge."""
    u = shape.check_vertex(u)
    v = shape.check_vertex(v)
    return any(c.adjacent(a, b) for c, a, b in zip(shape.components, u, v))


def cartesian_adjacent(shape: ProductShape, u: Sequence[int], v: Sequence[int]) -> bool:
    """True iff exactly one coordinate moves, along a matched edge."""
    u = shape.check_vertex(u)
    v = shape.check_vertex(v)
    diff = [i for i in range(shape.n) if u[i] != v[i]]
    return len(diff) == 1 and shape.components[diff[0]].adjacent(u[diff[0]], v[diff[0]])


def vertex_class(shape: ProductShape, u: Sequence[int]) -> VertexClass:
    u = shape.check_vertex(u)
    on = sum(c.in_sphere(x) for c, x in zip(shape.components, u))
    if on == shape.n:
        return VertexClass.EXTREME
    if on:
        return VertexClass.SPHERE_NON_EXTREME
    return VertexClass.INTERIOR


def is_extreme(shape: ProductShape, u: Vertex) -> bool:
    return all(c.in_sphere(x) for c, x in zip(shape.components, u))


def in_sphere(shape: ProductShape, u: Vertex) -> bool:
    return any(c.in_sphere(x) for c, x in zip(shape.components, u))


def enumerate_vertices(shape: ProductShape, cap: int = DEFAULT_VERTEX_CAP) -> list[Vertex]:
    """All product vertices in lexicographic order."""
    if shape.num_vertices > cap:
        raise SizeCapError(f"{shape.num_vertices} vertices exceed the cap of {cap}")
    return list(shape.vertex_list)


def extreme_vertices(shape: ProductShape) -> list[Vertex]:
    """The vertex set ``E``, lexicographic; empty if some component has no pairs."""
    return list(itertools.product(*(c.sphere for c in shape.components)))


def hypercube_component(shape: ProductShape, x: Sequence[int]) -> dict[frozenset, Vertex]:
    """The Cartesian component ``T(x)`` of an extreme vertex.

    Keyed by the set ``J`` of coordinates on which the member agrees with
    ``x``; every other coordinate is replaced by its partner.
    """
    x = shape.check_vertex(x)
    if not is_extreme(shape, x):
        raise PreconditionError(f"{x} is not an extreme vertex")
    coords = range(shape.n)
    out = {}
    for r in range(shape.n + 1):
        for keep in itertools.combinations(coords, r):
            J = frozenset(keep)
            out[J] = shape.flip(x, (i for i in coords if i not in J))
    return out
