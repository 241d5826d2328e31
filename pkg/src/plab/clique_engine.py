"""Cliques of the co-normal product and the pieces of the extension argument."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from plab import kernels
from plab.ball_graph import (
    DEFAULT_VERTEX_CAP,
    ProductShape,
    Vertex,
)
from plab.errors import PreconditionError, SizeCapError


@dataclass(frozen=True)
class Clique:
    shape: ProductShape
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.shape.check_vertex(u) for u in self.members)
        object.__setattr__(self, "members", members)
        if not is_clique(self.shape, members):
            raise PreconditionError("members are not pairwise adjacent in B_*")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)


def is_clique(shape: ProductShape, members: Iterable[Vertex]) -> bool:
    members = sorted({shape.check_vertex(u) for u in members})
    adj = shape.conormal_bitsets
    idx = [shape.index(u) for u in members]
    for a in range(len(idx)):
        row = adj[idx[a]]
        for b in range(a + 1, len(idx)):
            if not (row >> idx[b]) & 1:
                return False
    return True


def common_neighbours(shape: ProductShape, members: Iterable[Vertex]) -> set[Vertex]:
    adj = shape.conormal_bitsets
    mask = (1 << shape.num_vertices) - 1
    for u in members:
        mask &= adj[shape.index(u)]
    out = set()
    while mask:
        low = mask & -mask
        out.add(shape.vertex(low.bit_length() - 1))
        mask ^= low
    return out


def extend_clique(shape: ProductShape, clique: Iterable[Vertex]) -> set[Vertex]:
    """Every vertex adjacent to all members of a ``(2^n - 1)``-clique.

    The set is returned whole so callers can assert it has at most one
    element rather than having that assumed here.
    """
    members = {shape.check_vertex(u) for u in clique}
    if len(members) != 2**shape.n - 1:
        raise PreconditionError(
            f"clique has {len(members)} members, expected {2**shape.n - 1}"
        )
    if not is_clique(shape, members):
        raise PreconditionError("members are not pairwise adjacent in B_*")
    return common_neighbours(shape, members)


def max_clique_size(shape: ProductShape, cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Exact clique number of ``B_*``.

    Below 64 vertices a plain bounded recursion is used; larger products go
    through branch and bound with a greedy-coloring bound.
    """
    if shape.num_vertices > cap:
        raise SizeCapError(f"{shape.num_vertices} vertices exceed the cap of {cap}")
    adj = shape.conormal_bitsets
    if shape.num_vertices < 64:
        return kernels.max_clique_exhaustive(adj)
    return kernels.max_clique(adj)


@dataclass(frozen=True)
class ExtensionScan:
    """Outcome of scanning every ``(2^n - 1)``-clique of a shape."""

    cliques: int
    max_extensions: int
    witness: tuple[Vertex, ...] | None


def scan_extensions(shape: ProductShape, cap: int = DEFAULT_VERTEX_CAP) -> ExtensionScan:
    if shape.num_vertices > cap:
        raise SizeCapError(f"{shape.num_vertices} vertices exceed the cap of {cap}")
    count, max_ext, witness = kernels.scan_clique_extensions(
        shape.conormal_bitsets, 2**shape.n - 1
    )
    if witness is not None:
        witness = tuple(shape.vertex(i) for i in witness)
    return ExtensionScan(count, max_ext, witness)


def _coord_adjacent(shape: ProductShape, i: int, a: Vertex, b: Vertex) -> bool:
    return shape.components[i].adjacent(a[i], b[i])


def maximal_edgeless_partition(
    shape: ProductShape,
    family: Iterable[Vertex],
    i: int,
    anchor_in_c: Vertex,
    anchor_in_d: Vertex,
) -> tuple[set[Vertex], set[Vertex]]:
    """Split a ``2^n``-clique so the ``i``-th projection of ``C`` has no edge.

    ``C`` is seeded with ``anchor_in_c`` and the first member whose ``i``-th
    coordinate is matched with that of ``anchor_in_d``, then grown greedily in
    lexicographic order until no further member fits.
    """
    members = sorted({shape.check_vertex(u) for u in family})
    anchor_in_c = shape.check_vertex(anchor_in_c)
    anchor_in_d = shape.check_vertex(anchor_in_d)
    if len(members) != 2**shape.n:
        raise PreconditionError(f"family has {len(members)} members, expected {2**shape.n}")
    if not is_clique(shape, members):
        raise PreconditionError("family is not a clique of B_*")
    if anchor_in_c == anchor_in_d or anchor_in_c not in members or anchor_in_d not in members:
        raise PreconditionError("anchors must be distinct members of the family")
    if not 0 <= i < shape.n:
        raise PreconditionError(f"coordinate {i} out of range")
    if anchor_in_c[i] == anchor_in_d[i]:
        raise PreconditionError(
            f"anchors agree at coordinate {i}; no edgeless partition separates them"
        )
    seed = next((y for y in members if _coord_adjacent(shape, i, y, anchor_in_d)), None)
    if seed is None:
        raise PreconditionError(
            f"no member is matched with {anchor_in_d} at coordinate {i}"
        )
    C = [anchor_in_c]
    if seed != anchor_in_c:
        if _coord_adjacent(shape, i, seed, anchor_in_c):
            raise PreconditionError("anchor and seed are matched at the split coordinate")
        C.append(seed)
    for y in members:
        if y in C:
            continue
        if not any(_coord_adjacent(shape, i, y, c) for c in C):
            C.append(y)
    C = set(C)
    D = set(members) - C
    if anchor_in_d not in D:
        raise PreconditionError("greedy growth absorbed the D-anchor")
    return C, D
