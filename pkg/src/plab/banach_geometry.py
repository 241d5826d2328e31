"""Finite-dimensional l_p components, their l_inf-sums and the plasticity checks.

Points of a sum space are flat float arrays; the last axis is the
concatenation of the component blocks, so every routine here also accepts a
batch of points with shape ``(m, total_dim)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import ortho_group

from plab.ball_graph import ProductShape
from plab.checks import CheckResult
from plab.errors import DomainError, HypothesisError, PreconditionError, SamplingError
from plab.factorizer import Factorization, Homomorphism, build_from_factors, verify_homomorphism

ALGEBRAIC_TOL = 1e-9
DIAMETER_TOL = 1e-6


@dataclass(frozen=True)
class LpComponent:
    dim: int
    p: float = 2.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if not (self.p >= 1):
            raise ValueError("p must be at least 1")

    @property
    def strictly_convex(self) -> bool:
        return 1 < self.p < math.inf

    def norm(self, x):
        x = np.asarray(x, dtype=float)
        if self.p == math.inf:
            return np.abs(x).max(axis=-1)
        if self.p == 1:
            return np.abs(x).sum(axis=-1)
        if self.p == 2:
            return np.sqrt((x * x).sum(axis=-1))
        # scale first so large exponents do not overflow
        m = np.abs(x).max(axis=-1, keepdims=True)
        safe = np.where(m > 0, m, 1.0)
        return m[..., 0] * ((np.abs(x) / safe) ** self.p).sum(axis=-1) ** (1.0 / self.p)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "p": "inf" if self.p == math.inf else self.p}


@dataclass(frozen=True)
class SumSpace:
    components: tuple[LpComponent, ...]
    offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a sum space needs at least one component")
        offs = [0]
        for c in self.components:
            offs.append(offs[-1] + c.dim)
        object.__setattr__(self, "offsets", tuple(offs))

    @classmethod
    def of(cls, *specs: tuple[int, float]) -> "SumSpace":
        return cls(tuple(LpComponent(d, p) for d, p in specs))

    @classmethod
    def from_dict(cls, data: dict) -> "SumSpace":
        comps = []
        for c in data["components"]:
            p = c.get("p", 2.0)
            p = math.inf if p in ("inf", "Infinity", math.inf) else float(p)
            comps.append(LpComponent(int(c["dim"]), p))
        return cls(tuple(comps))

    def to_dict(self) -> dict:
        return {"components": [c.to_dict() for c in self.components]}

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def block(self, z, i: int):
        return np.asarray(z)[..., self.offsets[i]:self.offsets[i + 1]]

    def blocks(self, z) -> list:
        return [self.block(z, i) for i in range(self.n)]

    def join(self, blocks: Sequence) -> np.ndarray:
        return np.concatenate([np.asarray(b, dtype=float) for b in blocks], axis=-1)

    def block_norms(self, z) -> np.ndarray:
        return np.stack([c.norm(self.block(z, i)) for i, c in enumerate(self.components)], axis=-1)

    def norm(self, z):
        return self.block_norms(z).max(axis=-1)

    def delete_block(self, z, i: int) -> np.ndarray:
        """The complementary projection: ``z`` with block ``i`` removed."""
        z = np.asarray(z)
        return np.concatenate([z[..., : self.offsets[i]], z[..., self.offsets[i + 1]:]], axis=-1)


# ------------------------------------------------------------------ sampling

def sample_sphere(component: LpComponent, size: int, rng: np.random.Generator) -> np.ndarray:
    """Unit vectors of an l_p component.

    Gaussian directions for p = 2; otherwise generalized-Gaussian
    coordinates with density proportional to exp(-|t|^p), normalized.
    """
    d = component.dim
    while True:
        if component.p == 2:
            x = rng.standard_normal((size, d))
        elif component.p == math.inf:
            x = rng.uniform(-1.0, 1.0, (size, d))
        else:
            g = rng.gamma(1.0 / component.p, 1.0, (size, d)) ** (1.0 / component.p)
            x = g * rng.choice((-1.0, 1.0), (size, d))
        nrm = component.norm(x)
        if np.all(nrm > 1e-12):
            return x / nrm[:, None]


def sample_with_profile(
    space: SumSpace, unit: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Ball points whose blocks flagged in ``unit`` (shape (m, n)) have norm 1.

    Remaining blocks get a radius drawn uniformly from [0, 1).
    """
    unit = np.asarray(unit, dtype=bool)
    m = unit.shape[0]
    blocks = []
    for i, c in enumerate(space.components):
        u = sample_sphere(c, m, rng)
        r = np.where(unit[:, i], 1.0, rng.uniform(0.0, 1.0, m))
        blocks.append(u * r[:, None])
    return space.join(blocks)


def sample_ball(space: SumSpace, size: int, rng: np.random.Generator) -> np.ndarray:
    """Ball points mixing interior, sphere and extreme profiles.

    Each block independently has norm exactly 1 with probability 1/4,
    norm 0 with probability 1/8, and a uniform radius otherwise.
    """
    kind = rng.uniform(size=(size, space.n))
    unit = kind < 0.25
    pts = sample_with_profile(space, unit, rng)
    zero = kind > 0.875
    for i in range(space.n):
        blk = pts[:, space.offsets[i]:space.offsets[i + 1]]
        blk[zero[:, i]] = 0.0
    return pts


def sample_sum_sphere(space: SumSpace, size: int, rng: np.random.Generator) -> np.ndarray:
    """Points of norm exactly 1: one random block forced onto its sphere."""
    forced = rng.integers(0, space.n, size)
    unit = np.zeros((size, space.n), dtype=bool)
    unit[np.arange(size), forced] = True
    unit |= rng.uniform(size=(size, space.n)) < 0.25
    return sample_with_profile(space, unit, rng)


# ------------------------------------------------------------ extreme points

def is_extreme(space: SumSpace, z, tol: float = ALGEBRAIC_TOL) -> bool:
    z = np.asarray(z, dtype=float)
    norms = space.block_norms(z)
    if norms.max() > 1 + tol:
        raise DomainError(f"point has norm {norms.max():.17g} > 1")
    return bool(np.all(np.abs(norms - 1.0) <= tol))


# ------------------------------------------------------- ball -> graph bridge

@dataclass(frozen=True)
class BallGraph:
    conormal: frozenset
    cartesian: frozenset


def ball_to_graph(space: SumSpace, points, tol: float = ALGEBRAIC_TOL) -> BallGraph:
    """Distance-2 graph on a finite point set, plus its Cartesian subgraph.

    ``conormal`` holds index pairs ``(a, b)``, ``a < b``, at sum-norm distance
    2; ``cartesian`` those among them whose difference lives in one block.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if np.any(space.norm(pts) > 1 + tol):
        raise DomainError("points must lie in the unit ball")
    m = len(pts)
    diff = pts[:, None, :] - pts[None, :, :]
    bn = space.block_norms(diff)  # (m, m, n)
    active = bn >= 2 - tol
    still = bn <= tol
    con = set()
    car = set()
    for a in range(m):
        for b in range(a + 1, m):
            act = active[a, b]
            if act.any():
                con.add((a, b))
                if act.sum() == 1 and np.all(still[a, b] | act):
                    car.add((a, b))
    return BallGraph(frozenset(con), frozenset(car))


@dataclass(frozen=True)
class BallGrid:
    """A finite product point set realizing the vertex set of a shape.

    ``component_points[i][v]`` is the point of ``B_i`` carrying vertex id
    ``v``; sphere ids ``2j`` and ``2j + 1`` are antipodal unit vectors.
    """

    space: SumSpace
    shape: ProductShape
    component_points: tuple

    @property
    def points(self) -> np.ndarray:
        return np.array(
            [
                np.concatenate([self.component_points[i][v] for i, v in enumerate(u)])
                for u in self.shape.vertex_list
            ]
        )

    def locate(self, i: int, x, tol: float = 1e-7) -> int:
        dist = self.space.components[i].norm(self.component_points[i] - np.asarray(x))
        k = int(np.argmin(dist))
        if dist[k] > tol:
            raise DomainError(f"point {x} is not on the grid of component {i}")
        return k


def signed_basis_grid(space: SumSpace, radii: Sequence[float] = (0.5,)) -> BallGrid:
    """Grid of ``+-e_j`` on each sphere, ``0`` and ``+-r e_j`` inside.

    Closed under signed permutations of coordinates, so homogeneous
    extensions of signed-permutation families map it onto itself.
    """
    comps = []
    pts_all = []
    for c in space.components:
        eye = np.eye(c.dim)
        pts = []
        for j in range(c.dim):
            pts += [eye[j], -eye[j]]
        pts.append(np.zeros(c.dim))
        for r in radii:
            for j in range(c.dim):
                pts += [r * eye[j], -r * eye[j]]
        comps.append((c.dim, len(pts) - 2 * c.dim))
        pts_all.append(np.array(pts))
    return BallGrid(space, ProductShape.of(*comps), tuple(pts_all))


def random_grid(space: SumSpace, shape: ProductShape, rng: np.random.Generator,
                interior_radius: float = 0.5) -> BallGrid:
    """Random antipodal sphere pairs and small interior points per component."""
    if shape.n != space.n:
        raise PreconditionError("shape and space have different numbers of components")
    pts_all = []
    for c, g in zip(space.components, shape.components):
        u = sample_sphere(c, g.pairs, rng) if g.pairs else np.zeros((0, c.dim))
        pts = []
        for x in u:
            pts += [x, -x]
        if g.isolated:
            inner = sample_sphere(c, g.isolated, rng)
            r = rng.uniform(0.0, interior_radius, g.isolated)
            r[0] = 0.0
            pts += list(inner * r[:, None])
        pts_all.append(np.array(pts).reshape(len(pts), c.dim))
    return BallGrid(space, shape, tuple(pts_all))


def bridge_check(grid: BallGrid, tol: float = ALGEBRAIC_TOL) -> CheckResult:
    """Compare metric adjacency on the grid with the abstract product graphs."""
    from plab.ball_graph import cartesian_adjacent, conormal_adjacent

    g = ball_to_graph(grid.space, grid.points, tol)
    vs = grid.shape.vertex_list
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            con = conormal_adjacent(grid.shape, vs[a], vs[b])
            car = cartesian_adjacent(grid.shape, vs[a], vs[b])
            if con != ((a, b) in g.conormal) or car != ((a, b) in g.cartesian):
                return CheckResult(False, detail="metric and graph adjacency differ",
                                   witness=(vs[a], vs[b]))
    return CheckResult(True)


# ------------------------------------------------------------- sphere maps

@dataclass(frozen=True)
class SphereMap:
    """An odd bijection between component spheres, with its inverse.

    ``forward`` and ``backward`` act on arrays of unit vectors along the last
    axis.  Linear isometries are the shipped instances.
    """

    forward: Callable
    backward: Callable
    matrix: np.ndarray | None = None

    @classmethod
    def linear(cls, matrix) -> "SphereMap":
        m = np.array(matrix, dtype=float)
        inv = np.linalg.inv(m)
        return cls(lambda x: np.asarray(x) @ m.T, lambda y: np.asarray(y) @ inv.T, m)

    def __call__(self, x):
        return self.forward(x)


def random_signed_permutation(dim: int, rng: np.random.Generator) -> np.ndarray:
    m = np.zeros((dim, dim))
    m[np.arange(dim), rng.permutation(dim)] = rng.choice((-1.0, 1.0), dim)
    return m


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim == 1:
        return np.array([[rng.choice((-1.0, 1.0))]])
    return ortho_group.rvs(dim, random_state=rng)


@dataclass(frozen=True)
class SphereMapFamily:
    space: SumSpace
    sigma: tuple[int, ...]
    maps: tuple[SphereMap, ...]

    def __post_init__(self):
        n = self.space.n
        if sorted(self.sigma) != list(range(n)) or len(self.maps) != n:
            raise PreconditionError("sigma must be a permutation with one map per component")
        for i, s in enumerate(self.sigma):
            if self.space.components[i].dim != self.space.components[s].dim:
                raise PreconditionError(f"component {i} and its target {s} differ in dimension")

    def inverse_sigma(self) -> tuple[int, ...]:
        inv = [0] * len(self.sigma)
        for i, s in enumerate(self.sigma):
            inv[s] = i
        return tuple(inv)


def random_family(space: SumSpace, rng: np.random.Generator,
                  orthogonal: bool = True) -> SphereMapFamily:
    """Random sigma within (dim, p) classes and random linear isometries.

    Full orthogonal maps are used for p = 2 when ``orthogonal`` is set,
    signed permutations otherwise (the only linear isometries of l_p, p != 2).
    """
    classes: dict = {}
    for i, c in enumerate(space.components):
        classes.setdefault((c.dim, c.p), []).append(i)
    sigma = [0] * space.n
    for group in classes.values():
        targets = list(rng.permutation(group))
        for i, t in zip(group, targets):
            sigma[i] = int(t)
    maps = []
    for c in space.components:
        if c.p == 2 and orthogonal:
            maps.append(SphereMap.linear(random_orthogonal(c.dim, rng)))
        else:
            maps.append(SphereMap.linear(random_signed_permutation(c.dim, rng)))
    return SphereMapFamily(space, tuple(sigma), tuple(maps))


def identity_family(space: SumSpace) -> SphereMapFamily:
    return SphereMapFamily(
        space,
        tuple(range(space.n)),
        tuple(SphereMap.linear(np.eye(c.dim)) for c in space.components),
    )


# --------------------------------------------------- homogeneous extensions

@dataclass(frozen=True)
class HomogeneousExtension:
    """Radial extension of a sphere-map family to the whole ball.

    ``direction="gamma"`` sends block ``i`` to block ``sigma(i)`` through
    ``g_i``; ``"phi"`` is its inverse.
    """

    family: SphereMapFamily
    direction: str = "gamma"

    def __post_init__(self):
        if self.direction not in ("gamma", "phi"):
            raise ValueError("direction must be 'gamma' or 'phi'")

    def inverse(self) -> "HomogeneousExtension":
        return HomogeneousExtension(self.family, "phi" if self.direction == "gamma" else "gamma")

    def __call__(self, z):
        return apply_extension(self, z)


def _radial(component: LpComponent, x: np.ndarray, fn: Callable) -> np.ndarray:
    r = component.norm(x)
    pos = r > 0
    safe = np.where(pos, r, 1.0)
    out = fn(x / safe[..., None]) * r[..., None]
    return np.where(pos[..., None], out, 0.0)


def apply_extension(ext: HomogeneousExtension, z) -> np.ndarray:
    space = ext.family.space
    z = np.asarray(z, dtype=float)
    sigma = ext.family.sigma
    out = [None] * space.n
    for i, g in enumerate(ext.family.maps):
        if ext.direction == "gamma":
            out[sigma[i]] = _radial(space.components[i], space.block(z, i), g.forward)
        else:
            out[i] = _radial(space.components[sigma[i]], space.block(z, sigma[i]), g.backward)
    return space.join(out)


def check_homogeneity(
    space: SumSpace,
    map_under_test: Callable,
    ext: HomogeneousExtension,
    k: int,
    samples: int,
    tol: float,
    rng: np.random.Generator,
) -> CheckResult:
    """Compare a map with ``ext`` on points of norm 1 in at least ``n - k`` blocks."""
    n = space.n
    if not 0 <= k <= n:
        raise SamplingError(f"cannot sample norm-1 profiles in {n - k} of {n} blocks")
    free = np.argsort(rng.uniform(size=(samples, n)), axis=1)[:, :k]
    unit = np.ones((samples, n), dtype=bool)
    np.put_along_axis(unit, free, False, axis=1)
    z = sample_with_profile(space, unit, rng)
    dev = space.norm(np.asarray(map_under_test(z)) - apply_extension(ext, z))
    worst = int(np.argmax(dev))
    if dev[worst] > tol:
        return CheckResult(False, detail=f"deviation {dev[worst]:.3e} > {tol:.1e}",
                           witness=z[worst].tolist(), measure=float(dev[worst]))
    return CheckResult(True, measure=float(dev.max()))


def homogeneity_equiv_readings(
    space: SumSpace, ext: HomogeneousExtension, k: int, samples: int,
    rng: np.random.Generator, tol: float = ALGEBRAIC_TOL,
) -> dict[str, float]:
    """Rebuild the auxiliary point ``q`` both ways and test ``G(q) = x``.

    ``G`` is ``ext`` (a gamma map) and ``f`` its inverse.  Reading
    ``"sigma"`` scales block ``i`` of ``f(y)`` by the norm of block
    ``sigma(i)`` of ``x``; reading ``"identity"`` by the norm of block ``i``.
    Returns the fraction of samples on which each reading gives ``G(q) = x``.
    """
    n = space.n
    G = ext
    f = ext.inverse()
    free = np.argsort(rng.uniform(size=(samples, n)), axis=1)[:, :k]
    unit = np.ones((samples, n), dtype=bool)
    np.put_along_axis(unit, free, False, axis=1)
    x = sample_with_profile(space, unit, rng)
    a = space.block_norms(x)
    y_blocks = []
    for i, c in enumerate(space.components):
        xi = space.block(x, i)
        fallback = sample_sphere(c, samples, rng)
        pos = a[:, i] > 0
        y_blocks.append(np.where(pos[:, None], xi / np.where(pos, a[:, i], 1.0)[:, None], fallback))
    y = space.join(y_blocks)
    fy = f(y)
    sigma = ext.family.sigma
    out = {}
    for name, scale in (("sigma", [a[:, sigma[i]] for i in range(n)]),
                        ("identity", [a[:, i] for i in range(n)])):
        q = space.join([space.block(fy, i) * scale[i][:, None] for i in range(n)])
        ok = space.norm(G(q) - x) <= tol
        out[name] = float(ok.mean())
    return out


# ------------------------------------------------------ tangent-ball step

@dataclass(frozen=True)
class TangentBallEstimate:
    diameter: float
    point: np.ndarray


def _excess_lp(w: np.ndarray, d: np.ndarray, s: float, p: float) -> float:
    """``||w + s d||_p^p - ||w||_p^p`` for ``d`` in the tangent hyperplane at ``w``.

    The first-order part vanishes on the hyperplane and is dropped, leaving
    a sum of non-negative terms that are each evaluated without cancellation.
    """
    total = 0.0
    for wj, dj in zip(w, d):
        if dj == 0.0:
            continue
        if wj == 0.0:
            total += abs(s * dj) ** p
            continue
        t = s * dj / wj
        if abs(t) < 1e-4:
            h = t * t * (p * (p - 1) / 2 + t * (p * (p - 1) * (p - 2) / 6
                                                + t * p * (p - 1) * (p - 2) * (p - 3) / 24))
        else:
            h = abs(1.0 + t) ** p - 1.0 - p * t
        total += abs(wj) ** p * max(h, 0.0)
    return total


def _excess_polyhedral(component: LpComponent, w: np.ndarray, d: np.ndarray, s: float) -> float:
    # flat faces: allow a few ulps of rounding before calling a step infeasible
    return float(component.norm(w + s * d) - component.norm(w)) - 8 * np.finfo(float).eps


def _reach(component: LpComponent, w: np.ndarray, d: np.ndarray) -> float:
    """Largest ``s`` in [0, 2] with ``w + s d`` still in the ball of radius ``||w||``."""
    if not component.strictly_convex:
        excess = lambda s: _excess_polyhedral(component, w, d, s)  # noqa: E731
    else:
        excess = lambda s: _excess_lp(w, d, s, component.p)  # noqa: E731
    if excess(2.0) <= 0:
        return 2.0
    lo, hi = -1074.0, 1.0  # log2 bounds
    if excess(2.0 ** lo) > 0:
        return 0.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if excess(2.0 ** mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 2.0 ** lo


def _norming_functional(component: LpComponent, w: np.ndarray) -> np.ndarray:
    """A functional ``phi`` with ``phi(w) = 1`` and norm 1 on the component."""
    if component.p == math.inf:
        j = int(np.argmax(np.abs(w)))
        phi = np.zeros_like(w)
        phi[j] = 1.0 / w[j]
        return phi
    if component.p == 1:
        return np.sign(w) / np.abs(w).sum()
    g = np.sign(w) * np.abs(w) ** (component.p - 1)
    return g / float(g @ w)


def two_ball_intersection_diameter(
    component: LpComponent,
    c1, r1: float, c2, r2: float,
    samples: int = 64,
    rng: np.random.Generator | None = None,
    tol: float = ALGEBRAIC_TOL,
) -> TangentBallEstimate:
    """Upper estimate of ``diam(B(c1, r1) & B(c2, r2))`` for externally tangent balls.

    Every point of the intersection is ``c1 + r1 u`` with ``u`` on the face of
    the unit ball exposed by the direction ``w`` from ``c1`` to ``c2``; the
    estimate is ``2 min(r1, r2)`` times the largest step from ``w`` along
    sampled directions of the supporting hyperplane that stays in the ball.
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    if r1 < 0 or r2 < 0:
        raise PreconditionError("radii must be non-negative")
    dist = float(component.norm(c2 - c1))
    if abs(dist - (r1 + r2)) > tol * max(1.0, dist):
        raise PreconditionError(f"balls are not tangent: |c1 - c2| = {dist!r}, r1 + r2 = {r1 + r2!r}")
    if dist == 0:
        return TangentBallEstimate(0.0, c1.copy())
    w = (c2 - c1) / dist
    point = c1 + r1 * w
    if min(r1, r2) == 0 or component.dim == 1:
        return TangentBallEstimate(0.0, point)
    rng = rng if rng is not None else np.random.default_rng(0)
    phi = _norming_functional(component, w)
    best = 0.0
    dirs = rng.standard_normal((samples, component.dim))
    # the coordinate axes of the hyperplane are where flat faces show up first
    dirs = np.vstack([dirs, np.eye(component.dim)])
    for d in dirs:
        d = d - (phi @ d) * w
        nd = float(component.norm(d))
        if nd < 1e-12:
            continue
        d = d / nd
        best = max(best, _reach(component, w, d), _reach(component, w, -d))
    return TangentBallEstimate(2.0 * min(r1, r2) * best, point)


def random_tangent_configuration(component: LpComponent, rng: np.random.Generator):
    """Random centres and radii with ``|c1 - c2| = r1 + r2``."""
    c1 = rng.uniform(-1.0, 1.0, component.dim)
    r1, r2 = rng.uniform(0.05, 1.5, 2)
    w = sample_sphere(component, 1, rng)[0]
    c2 = c1 + (r1 + r2) * w
    return c1, float(r1), c2, float(r2)


# ------------------------------------------------------ isometry certificate

@dataclass(frozen=True)
class IsometryCertificate:
    hypotheses: dict
    max_defect: float
    is_isometry: bool
    witnesses: dict

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def passed(self) -> bool:
        return self.hypotheses_hold and self.is_isometry

    def __bool__(self):
        return self.passed


def certify_isometry(
    space: SumSpace,
    map_under_test: Callable,
    pairs: tuple[np.ndarray, np.ndarray] | None = None,
    tol: float = ALGEBRAIC_TOL,
    inverse: Callable | None = None,
    rng: np.random.Generator | None = None,
    num_pairs: int = 10_000,
    num_sphere: int = 1_000,
) -> IsometryCertificate:
    """Sampled check of the sufficient conditions for a ball map to be an isometry.

    Conditions: bijective on samples (round trips through ``inverse`` when
    given, pairwise distinct images otherwise), maps the sphere onto itself,
    commutes with scaling by ``alpha`` in [-1, 1] on sphere points, and is
    1-Lipschitz on ``pairs``.  The distance defect is measured on the same
    pairs.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    f = map_under_test
    if pairs is None:
        u = sample_ball(space, num_pairs, rng)
        v = sample_ball(space, num_pairs, rng)
    else:
        u, v = (np.asarray(a, dtype=float) for a in pairs)
    s = sample_sum_sphere(space, num_sphere, rng)
    alpha = rng.uniform(-1.0, 1.0, num_sphere)
    hyp = {}
    wit = {}

    fu, fv = np.asarray(f(u)), np.asarray(f(v))
    if inverse is not None:
        back = space.norm(np.asarray(inverse(fu)) - u)
        fwd = space.norm(np.asarray(f(np.asarray(inverse(u)))) - u)
        err = np.maximum(back, fwd)
        hyp["bijective"] = bool(err.max() <= tol)
        if not hyp["bijective"]:
            wit["bijective"] = u[int(np.argmax(err))].tolist()
    else:
        sep = space.norm(fu - fv)
        bad = (sep <= 0) & (space.norm(u - v) > 0)
        hyp["bijective"] = not bool(bad.any())
        if bad.any():
            wit["bijective"] = u[int(np.argmax(bad))].tolist()

    fs = np.asarray(f(s))
    off = np.abs(space.norm(fs) - 1.0)
    if inverse is not None:
        off = np.maximum(off, np.abs(space.norm(np.asarray(inverse(s))) - 1.0))
    hyp["sphere_onto_sphere"] = bool(off.max() <= tol)
    if not hyp["sphere_onto_sphere"]:
        wit["sphere_onto_sphere"] = s[int(np.argmax(off))].tolist()

    scale_err = space.norm(np.asarray(f(alpha[:, None] * s)) - alpha[:, None] * fs)
    hyp["odd_scaling"] = bool(scale_err.max() <= tol)
    if not hyp["odd_scaling"]:
        wit["odd_scaling"] = s[int(np.argmax(scale_err))].tolist()

    d_in = space.norm(u - v)
    d_out = space.norm(fu - fv)
    stretch = d_out - d_in
    hyp["lipschitz"] = bool(stretch.max() <= tol)
    if not hyp["lipschitz"]:
        k = int(np.argmax(stretch))
        wit["lipschitz"] = (u[k].tolist(), v[k].tolist())

    defect = np.abs(stretch)
    k = int(np.argmax(defect))
    max_defect = float(defect[k])
    if max_defect > tol:
        wit["defect"] = (u[k].tolist(), v[k].tolist())
    return IsometryCertificate(hyp, max_defect, max_defect <= tol, wit)


# ----------------------------------------------------- metric -> graph map

def nonexpansive_to_graph_hom(
    space: SumSpace, map_under_test: Callable, grid: BallGrid, tol: float = ALGEBRAIC_TOL
) -> Homomorphism:
    """The vertex map a non-contractive ball map induces on a grid.

    Distances may not shrink; since all points lie in the unit ball, pairs at
    distance 2 are then mapped to pairs at distance 2, so the induced map is
    an injective homomorphism of the grid's co-normal product graph.
    """
    pts = grid.points
    img = np.asarray(map_under_test(pts), dtype=float)
    d_in = space.norm(pts[:, None, :] - pts[None, :, :])
    d_out = space.norm(img[:, None, :] - img[None, :, :])
    shrink = d_in - d_out
    if shrink.max() > tol:
        a, b = np.unravel_index(int(np.argmax(shrink)), shrink.shape)
        raise HypothesisError(
            f"map contracts a pair by {shrink[a, b]:.3e}",
            witness=(pts[a].tolist(), pts[b].tolist()),
        )
    dist = space.norm(img[:, None, :] - pts[None, :, :])
    idx = dist.argmin(axis=1)
    if np.any(dist[np.arange(len(pts)), idx] > 1e-7):
        raise DomainError("map leaves the grid")
    hom = Homomorphism(grid.shape, tuple(int(i) for i in idx))
    res = verify_homomorphism(grid.shape, hom)
    if not res:
        raise HypothesisError(f"induced map is {res.detail}", witness=res.witness)
    return hom


def family_on_grid(grid: BallGrid, family: SphereMapFamily) -> tuple[Factorization, Homomorphism]:
    """The graph factors of a family, read off component by component.

    Sphere vertex ``s`` of ``B_i`` goes to the grid id of ``g_i(s)``; the
    interior completion is the grid id of the radial extension of ``g_i``.
    This never applies the family to whole product points, so it is an
    independent route to the homomorphism :func:`nonexpansive_to_graph_hom`
    produces for the gamma map.
    """
    space, shape = grid.space, grid.shape
    comp_maps = []
    for i, g in enumerate(family.maps):
        src = grid.component_points[i]
        imgs = _radial(space.components[i], src, g.forward)
        comp_maps.append([grid.locate(family.sigma[i], y) for y in imgs])
    local = tuple(tuple(comp_maps[i][s] for s in c.sphere) for i, c in enumerate(shape.components))
    fact = Factorization(family.sigma, local)
    interior = {}
    for x in shape.vertex_list:
        y = [0] * shape.n
        for i in range(shape.n):
            y[family.sigma[i]] = comp_maps[i][x[i]]
        interior[x] = tuple(y)
    return fact, build_from_factors(shape, fact, interior)


# ------------------------------------------------------------ text export

def export_points(points) -> str:
    """One point per line, coordinates space-separated at 17 significant digits."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return "".join(" ".join(format(float(t), ".17g") for t in row) + "\n" for row in pts)


def import_points(text: str) -> np.ndarray:
    rows = [[float(t) for t in line.split()] for line in text.splitlines() if line.strip()]
    return np.array(rows, dtype=float)
