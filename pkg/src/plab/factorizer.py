"""Injective homomorphisms of ``B_*`` and their componentwise factorization.

An injective homomorphism ``G`` of the co-normal product is shown to act as
``G(x)[sigma(i)] = g_i(x[i])`` whenever ``x[i]`` lies on the sphere of
``B_i``.  :func:`factor` recovers ``sigma`` and the local maps ``g_i`` from
the hypercubes ``T(x)`` through extreme vertices and then checks the
identity on every vertex, so an exhaustive run doubles as a search for
counterexamples.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from plab import kernels
from plab.ball_graph import (
    ProductShape,
    Vertex,
    extreme_vertices,
    in_sphere,
    is_extreme,
)
from plab.checks import CheckResult
from plab.errors import (
    ConstructionError,
    FactorizationError,
    PreconditionError,
    SizeCapError,
    TotalityError,
)

DEFAULT_ENUMERATION_CAP = 12


@dataclass(frozen=True)
class Homomorphism:
    """A total vertex map on ``B_*``, stored as image indices."""

    shape: ProductShape
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.shape.num_vertices:
            raise TotalityError(
                f"map covers {len(self.images)} of {self.shape.num_vertices} vertices"
            )

    @classmethod
    def from_mapping(cls, shape: ProductShape, mapping: Mapping) -> "Homomorphism":
        images = []
        for u in shape.vertex_list:
            if u not in mapping:
                raise TotalityError(f"map is undefined at {u}")
            images.append(shape.index(shape.check_vertex(mapping[u])))
        return cls(shape, tuple(images))

    @classmethod
    def identity(cls, shape: ProductShape) -> "Homomorphism":
        return cls(shape, tuple(range(shape.num_vertices)))

    def __call__(self, u: Sequence[int]) -> Vertex:
        return self.shape.vertex(self.images[self.shape.index(tuple(u))])

    def as_mapping(self) -> dict[Vertex, Vertex]:
        vs = self.shape.vertex_list
        return {vs[i]: vs[j] for i, j in enumerate(self.images)}

    def to_text(self) -> str:
        """Interchange text: a shape header then one ``u -> v`` line per vertex."""
        lines = ["shape " + self.shape.to_json()]
        for u, v in self.as_mapping().items():
            lines.append(f"{','.join(map(str, u))} -> {','.join(map(str, v))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Homomorphism":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("shape "):
            raise ValueError("homomorphism text must start with a 'shape {...}' header")
        shape = ProductShape.from_json(lines[0][len("shape "):])
        mapping = {}
        for ln in lines[1:]:
            try:
                lhs, rhs = (part.strip() for part in ln.split("->"))
                u = tuple(int(t) for t in lhs.split(","))
                v = tuple(int(t) for t in rhs.split(","))
            except ValueError:
                raise ValueError(f"malformed map line: {ln!r}") from None
            mapping[shape.check_vertex(u)] = v
        return cls.from_mapping(shape, mapping)


@dataclass(frozen=True)
class Factorization:
    """A coordinate permutation and one local map per sphere.

    ``local_maps[i][s]`` is ``g_i(s)`` for each sphere vertex ``s`` of
    ``B_i``; its values are sphere vertices of ``B_{sigma(i)}``.
    """

    sigma: tuple[int, ...]
    local_maps: tuple[tuple[int, ...], ...]

    def g(self, i: int, s: int) -> int:
        return self.local_maps[i][s]

    def validate(self, shape: ProductShape) -> None:
        n = shape.n
        if sorted(self.sigma) != list(range(n)):
            raise ConstructionError(f"sigma {self.sigma} is not a permutation of range({n})")
        if len(self.local_maps) != n:
            raise ConstructionError("need exactly one local map per component")
        for i, g in enumerate(self.local_maps):
            src = shape.components[i]
            dst = shape.components[self.sigma[i]]
            if len(g) != 2 * src.pairs:
                raise ConstructionError(f"g_{i} must be defined on all {2 * src.pairs} sphere vertices")
            if any(not dst.in_sphere(t) for t in g):
                raise ConstructionError(f"g_{i} leaves the sphere of B_{self.sigma[i]}")
            if len(set(g)) != len(g):
                raise ConstructionError(f"g_{i} is not injective")
            for s, t in enumerate(g):
                if g[s ^ 1] != t ^ 1:
                    raise ConstructionError(f"g_{i} does not commute with the partner map at {s}")

    def to_json(self) -> str:
        return json.dumps(
            {"sigma": list(self.sigma), "locals": [list(g) for g in self.local_maps]},
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Factorization":
        data = json.loads(text)
        return cls(tuple(data["sigma"]), tuple(tuple(g) for g in data["locals"]))

    @classmethod
    def identity(cls, shape: ProductShape) -> "Factorization":
        return cls(
            tuple(range(shape.n)),
            tuple(tuple(c.sphere) for c in shape.components),
        )


def _as_hom(shape: ProductShape, hom) -> Homomorphism:
    if isinstance(hom, Homomorphism):
        if hom.shape != shape:
            raise PreconditionError("homomorphism belongs to a different shape")
        return hom
    return Homomorphism.from_mapping(shape, hom)


def verify_homomorphism(shape: ProductShape, hom) -> CheckResult:
    """Injectivity and edge preservation, reporting the first violation."""
    hom = _as_hom(shape, hom)
    img = hom.images
    seen = {}
    for i, j in enumerate(img):
        if j in seen:
            u, v = shape.vertex(seen[j]), shape.vertex(i)
            return CheckResult(False, detail="not injective", witness=(u, v))
        seen[j] = i
    adj = shape.conormal_bitsets
    for i, row in enumerate(adj):
        target = adj[img[i]]
        mask = row >> (i + 1)
        k = i + 1
        while mask:
            if mask & 1 and not (target >> img[k]) & 1:
                return CheckResult(
                    False,
                    detail="edge not preserved",
                    witness=(shape.vertex(i), shape.vertex(k)),
                )
            mask >>= 1
            k += 1
    return CheckResult(True)


def enumerate_injective_homomorphisms(
    shape: ProductShape, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Homomorphism]:
    """Every injective endo-homomorphism of ``B_*``, in backtracking order."""
    if shape.num_vertices > cap:
        raise SizeCapError(f"{shape.num_vertices} vertices exceed the enumeration cap of {cap}")
    for images in kernels.injective_homomorphisms(shape.conormal_bitsets):
        yield Homomorphism(shape, images)


def _single_flip_target(shape: ProductShape, y0: Vertex, y: Vertex) -> int | None:
    diff = [m for m in range(shape.n) if y0[m] != y[m]]
    if len(diff) == 1 and shape.components[diff[0]].adjacent(y0[diff[0]], y[diff[0]]):
        return diff[0]
    return None


def local_permutation(shape: ProductShape, hom: Homomorphism, x0: Vertex) -> tuple[int, ...]:
    """Coordinate permutation induced by ``hom`` on the hypercube ``T(x0)``.

    Raises :class:`FactorizationError` if the image of ``T(x0)`` is not the
    hypercube through ``hom(x0)`` or the induced map is not a cube
    isomorphism of the form "flip coordinate k -> flip coordinate tau(k)".
    """
    n = shape.n
    y0 = hom(x0)
    if not is_extreme(shape, y0):
        raise FactorizationError(f"extreme vertex {x0} maps to non-extreme {y0}", x0)
    tau = []
    for k in range(n):
        xk = shape.flip(x0, [k])
        m = _single_flip_target(shape, y0, hom(xk))
        if m is None:
            raise FactorizationError(
                f"Cartesian edge {x0} ~ {xk} is not mapped to a Cartesian edge", xk
            )
        tau.append(m)
    if sorted(tau) != list(range(n)):
        raise FactorizationError(f"cube edges at {x0} collapse onto coordinates {tau}", x0)
    for r in range(2, n + 1):
        for flipped in itertools.combinations(range(n), r):
            x = shape.flip(x0, flipped)
            expected = shape.flip(y0, [tau[k] for k in flipped])
            if hom(x) != expected:
                raise FactorizationError(
                    f"T({x0}) is not mapped isomorphically onto T({y0})", x
                )
    return tuple(tau)


def compatible_sigmas(shape: ProductShape, hom) -> set[tuple[int, ...]]:
    """All coordinate permutations induced on the hypercubes through ``E``."""
    hom = _as_hom(shape, hom)
    return {local_permutation(shape, hom, x0) for x0 in extreme_vertices(shape)}


def factor(shape: ProductShape, hom) -> Factorization:
    hom = _as_hom(shape, hom)
    if not shape.has_extreme:
        raise PreconditionError("every component needs at least one pair")
    res = verify_homomorphism(shape, hom)
    if not res:
        raise PreconditionError(f"not an injective homomorphism: {res.detail} at {res.witness}")
    n = shape.n
    E = extreme_vertices(shape)

    # sigma from the first extreme vertex; every other cube must agree
    sigma = local_permutation(shape, hom, E[0])
    for x0 in E[1:]:
        tau = local_permutation(shape, hom, x0)
        if tau != sigma:
            raise FactorizationError(
                f"cube at {x0} induces {tau}, base cube induced {sigma}", x0
            )

    g: list[dict[int, int]] = [{} for _ in range(n)]
    for x in E:
        y = hom(x)
        for i in range(n):
            t = y[sigma[i]]
            prev = g[i].setdefault(x[i], t)
            if prev != t:
                raise FactorizationError(
                    f"g_{i}({x[i]}) is both {prev} and {t}", x
                )
    local_maps = tuple(tuple(g[i][s] for s in shape.components[i].sphere) for i in range(n))
    fact = Factorization(sigma, local_maps)
    try:
        fact.validate(shape)
    except ConstructionError as exc:
        raise FactorizationError(f"recovered local maps are invalid: {exc}") from None

    for q in shape.vertex_list:
        y = hom(q)
        for i, c in enumerate(shape.components):
            if c.in_sphere(q[i]) and y[sigma[i]] != local_maps[i][q[i]]:
                raise FactorizationError(
                    f"identity fails at {q}, coordinate {i}: "
                    f"{y[sigma[i]]} != g_{i}({q[i]}) = {local_maps[i][q[i]]}",
                    q,
                )
    return fact


def _forced_image(shape: ProductShape, fact: Factorization, x: Vertex) -> list[int | None]:
    y: list[int | None] = [None] * shape.n
    for i, c in enumerate(shape.components):
        if c.in_sphere(x[i]):
            y[fact.sigma[i]] = fact.local_maps[i][x[i]]
    return y


def build_from_factors(
    shape: ProductShape, fact: Factorization, interior_map: Mapping | None = None
) -> Homomorphism:
    """Assemble the homomorphism determined by ``fact`` on sphere coordinates.

    Coordinates of the image not pinned by a local map come from
    ``interior_map`` (full image vertices keyed by the non-extreme source);
    without one, target coordinate ``sigma(i)`` copies ``x[i]``.
    """
    fact.validate(shape)
    images = []
    for x in shape.vertex_list:
        forced = _forced_image(shape, fact, x)
        if None not in forced:
            y = tuple(forced)
        elif interior_map is not None:
            if x not in interior_map:
                raise ConstructionError(f"interior map has no image for {x}")
            try:
                y = shape.check_vertex(interior_map[x])
            except ValueError as exc:
                raise ConstructionError(str(exc)) from None
            for m, t in enumerate(forced):
                if t is not None and y[m] != t:
                    raise ConstructionError(
                        f"image {y} of {x} disagrees with g at coordinate {m}"
                    )
        else:
            y = list(forced)
            for i in range(shape.n):
                if y[fact.sigma[i]] is None:
                    if x[i] >= shape.sizes[fact.sigma[i]]:
                        raise ConstructionError(
                            f"cannot copy coordinate {i} of {x} into B_{fact.sigma[i]}"
                        )
                    y[fact.sigma[i]] = x[i]
            y = tuple(y)
        images.append(shape.index(y))
    hom = Homomorphism(shape, tuple(images))
    res = verify_homomorphism(shape, hom)
    if not res:
        raise ConstructionError(f"assembled map is {res.detail} at {res.witness}")
    return hom


def random_factorization(shape: ProductShape, rng: random.Random) -> Factorization:
    """Uniform sigma among pair-count-preserving permutations, random odd g_i."""
    n = shape.n
    by_pairs: dict[int, list[int]] = {}
    for i, c in enumerate(shape.components):
        by_pairs.setdefault(c.pairs, []).append(i)
    sigma = [0] * n
    for group in by_pairs.values():
        targets = group[:]
        rng.shuffle(targets)
        for i, t in zip(group, targets):
            sigma[i] = t
    local_maps = tuple(_random_odd_bijection(c.pairs, rng) for c in shape.components)
    return Factorization(tuple(sigma), local_maps)


def random_interior_map(
    shape: ProductShape, fact: Factorization, rng: random.Random
) -> dict[Vertex, Vertex] | None:
    """A random injective completion of ``fact`` off ``E``, or None if none exists.

    Completions are found by augmenting-path matching over a shuffled
    candidate order, so every feasible completion has positive probability.
    """
    taken = set()
    left = []
    for x in shape.vertex_list:
        forced = _forced_image(shape, fact, x)
        if None in forced:
            left.append((x, forced))
        else:
            taken.add(tuple(forced))
    rng.shuffle(left)
    cands = {}
    for x, forced in left:
        free = [m for m, t in enumerate(forced) if t is None]
        opts = []
        for vals in itertools.product(*(range(shape.sizes[m]) for m in free)):
            y = list(forced)
            for m, t in zip(free, vals):
                y[m] = t
            y = tuple(y)
            if y not in taken:
                opts.append(y)
        rng.shuffle(opts)
        cands[x] = opts
    owner: dict[Vertex, Vertex] = {}

    def augment(x, visited):
        for y in cands[x]:
            if y in visited:
                continue
            visited.add(y)
            if y not in owner or augment(owner[y], visited):
                owner[y] = x
                return True
        return False

    for x, _ in left:
        if not augment(x, set()):
            return None
    return {x: y for y, x in owner.items()}


def random_homomorphism(
    shape: ProductShape, rng: random.Random, attempts: int = 20
) -> tuple[Factorization, Homomorphism]:
    """A random homomorphism built from random factors, with its factors."""
    for _ in range(attempts):
        fact = random_factorization(shape, rng)
        interior = random_interior_map(shape, fact, rng)
        if interior is not None:
            return fact, build_from_factors(shape, fact, interior)
    # identity sigma always admits a completion
    fact = Factorization(
        tuple(range(shape.n)),
        tuple(_random_odd_bijection(c.pairs, rng) for c in shape.components),
    )
    return fact, build_from_factors(shape, fact, random_interior_map(shape, fact, rng))


def _random_odd_bijection(pairs: int, rng: random.Random) -> tuple[int, ...]:
    order = list(range(pairs))
    rng.shuffle(order)
    g = [0] * (2 * pairs)
    for j, jj in enumerate(order):
        flip = rng.randrange(2)
        g[2 * j] = 2 * jj + flip
        g[2 * j + 1] = 2 * jj + (1 - flip)
    return tuple(g)


def _image_set(hom: Homomorphism, vertices) -> set[Vertex]:
    return {hom(u) for u in vertices}


def check_E_square_homomorphism(shape: ProductShape, hom) -> CheckResult:
    """Cartesian adjacency between extreme vertices is preserved."""
    hom = _as_hom(shape, hom)
    for xa in extreme_vertices(shape):
        ya = hom(xa)
        for k in range(shape.n):
            xb = shape.flip(xa, [k])
            if _single_flip_target(shape, ya, hom(xb)) is None:
                return CheckResult(False, detail="Cartesian edge on E broken", witness=(xa, xb))
    return CheckResult(True)


def check_interior_lemma(shape: ProductShape, hom, fact: Factorization) -> CheckResult:
    """Sphere coordinates pin the image coordinate on every vertex, not only on E."""
    hom = _as_hom(shape, hom)
    for q in shape.vertex_list:
        y = hom(q)
        for i, c in enumerate(shape.components):
            if c.in_sphere(q[i]) and y[fact.sigma[i]] != fact.local_maps[i][q[i]]:
                return CheckResult(False, detail=f"coordinate {i} not pinned", witness=q)
    return CheckResult(True)


def _sphere_vertices(shape):
    return [u for u in shape.vertex_list if in_sphere(shape, u)]


def check_bijective_factors(shape: ProductShape, hom, fact: Factorization) -> CheckResult:
    """If ``S`` or ``E`` is covered by its own image, every ``g_i`` is onto."""
    hom = _as_hom(shape, hom)
    S = _sphere_vertices(shape)
    E = extreme_vertices(shape)
    hyp_s = set(S) <= _image_set(hom, S)
    hyp_e = set(E) <= _image_set(hom, E)
    if not (hyp_s or hyp_e):
        return CheckResult(True, hypothesis_held=False, detail="hypothesis not met")
    for i, g in enumerate(fact.local_maps):
        target = set(shape.components[fact.sigma[i]].sphere)
        if set(g) != target:
            return CheckResult(
                False, detail=f"g_{i} misses {sorted(target - set(g))}", witness=i
            )
    return CheckResult(True)


def check_sphere_implies_extreme(shape: ProductShape, hom) -> CheckResult:
    """If ``S`` is covered by its own image, so is ``E``."""
    hom = _as_hom(shape, hom)
    S = _sphere_vertices(shape)
    if not set(S) <= _image_set(hom, S):
        return CheckResult(True, hypothesis_held=False, detail="hypothesis not met")
    image_e = _image_set(hom, extreme_vertices(shape))
    for e in extreme_vertices(shape):
        if e not in image_e:
            return CheckResult(False, detail="extreme vertex without extreme preimage", witness=e)
    return CheckResult(True)
