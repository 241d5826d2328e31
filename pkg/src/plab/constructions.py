"""Finite models of the shift construction and the separable-closure operator.

Everything except :func:`check_rat_scaling` runs in exact rational arithmetic
(:class:`fractions.Fraction`), so norms and defects are compared with ``==``.
Model spaces are ``l_1`` or ``l_inf`` on rational vectors, the two norms whose
values stay rational.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial import cKDTree

from plab.checks import CheckResult
from plab.errors import DomainError, PreconditionError

RVec = tuple[Fraction, ...]


@dataclass(frozen=True)
class RationalSpace:
    """``Q^dim`` with the l_1 or l_inf norm."""

    dim: int
    p: float = math.inf

    def __post_init__(self):
        if self.p not in (1, math.inf):
            raise ValueError("rational model spaces use p = 1 or p = inf")

    def norm(self, x: Sequence[Fraction]) -> Fraction:
        if not x:
            return Fraction(0)
        if self.p == 1:
            return sum((abs(t) for t in x), Fraction(0))
        return max(abs(t) for t in x)

    def zero(self) -> RVec:
        return (Fraction(0),) * self.dim

    def in_ball(self, x) -> bool:
        return self.norm(x) <= 1


def vec(*coords) -> RVec:
    return tuple(Fraction(c) for c in coords)


def _sub(a: RVec, b: RVec) -> RVec:
    return tuple(x - y for x, y in zip(a, b))


def _is_zero(a: RVec) -> bool:
    return all(t == 0 for t in a)


# ----------------------------------------------------------- shift model

@dataclass(frozen=True)
class FiniteBijection:
    """A bijection between finite subsets of two model balls."""

    source: RationalSpace
    target: RationalSpace
    table: Mapping[RVec, RVec]

    def __post_init__(self):
        table = {tuple(Fraction(t) for t in k): tuple(Fraction(t) for t in v)
                 for k, v in dict(self.table).items()}
        object.__setattr__(self, "table", table)
        if len(set(table.values())) != len(table):
            raise PreconditionError("map is not injective")
        for x, y in table.items():
            if not (self.source.in_ball(x) and self.target.in_ball(y)):
                raise PreconditionError(f"{x} -> {y} leaves a unit ball")

    @property
    def inverse_table(self) -> dict[RVec, RVec]:
        return {v: k for k, v in self.table.items()}

    def __call__(self, x: RVec) -> RVec:
        try:
            return self.table[tuple(x)]
        except KeyError:
            raise DomainError(f"map is undefined at {x}") from None

    def inverse(self, y: RVec) -> RVec:
        try:
            return self.inverse_table[tuple(y)]
        except KeyError:
            raise DomainError(f"inverse is undefined at {y}") from None

    def defect(self, x: RVec, x2: RVec) -> Fraction:
        return self.source.norm(_sub(x, x2)) - self.target.norm(_sub(self(x), self(x2)))

    def is_nonexpansive(self) -> bool:
        pts = list(self.table)
        return all(self.defect(a, b) >= 0 for a in pts for b in pts)


@dataclass(frozen=True)
class SeqPoint:
    """A finitely supported point of the bi-infinite sum.

    Indices below zero carry points of the source space ``X``, the others
    points of ``Y``.  Zero blocks are dropped on construction.
    """

    blocks: Mapping[int, RVec] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(i): tuple(Fraction(t) for t in b) for i, b in dict(self.blocks).items()}
        clean = {i: b for i, b in sorted(clean.items()) if not _is_zero(b)}
        object.__setattr__(self, "blocks", clean)

    def __hash__(self):
        return hash(tuple(self.blocks.items()))

    def __eq__(self, other):
        return isinstance(other, SeqPoint) and self.blocks == other.blocks

    def at(self, i: int, space: RationalSpace) -> RVec:
        return self.blocks.get(i, space.zero())


@dataclass(frozen=True)
class ShiftModel:
    f: FiniteBijection

    @property
    def X(self) -> RationalSpace:
        return self.f.source

    @property
    def Y(self) -> RationalSpace:
        return self.f.target

    def space_at(self, i: int) -> RationalSpace:
        return self.X if i < 0 else self.Y

    def norm(self, z: SeqPoint) -> Fraction:
        return max((self.space_at(i).norm(b) for i, b in z.blocks.items()), default=Fraction(0))

    def distance(self, a: SeqPoint, b: SeqPoint) -> Fraction:
        idx = set(a.blocks) | set(b.blocks)
        return max(
            (self.space_at(i).norm(_sub(a.at(i, self.space_at(i)), b.at(i, self.space_at(i))))
             for i in idx),
            default=Fraction(0),
        )

    def embed(self, x: RVec, index: int = -1) -> SeqPoint:
        return SeqPoint({index: x})


def shift_construct(model: ShiftModel, z: SeqPoint) -> SeqPoint:
    """Move every block one index up, passing block ``-1`` through ``f``."""
    if model.norm(z) > 1:
        raise DomainError("point is outside the unit ball")
    out = {i + 1: b for i, b in z.blocks.items() if i != -1}
    out[0] = model.f(z.at(-1, model.X))
    return SeqPoint(out)


def inverse_shift(model: ShiftModel, w: SeqPoint) -> SeqPoint:
    if model.norm(w) > 1:
        raise DomainError("point is outside the unit ball")
    out = {i - 1: b for i, b in w.blocks.items() if i != 0}
    out[-1] = model.f.inverse(w.at(0, model.Y))
    return SeqPoint(out)


@dataclass(frozen=True)
class ShiftReport:
    nonexpansive: bool
    injective: bool
    surjective: bool
    defect_conserved: bool
    max_defect_source: Fraction
    witnesses: dict

    @property
    def passed(self) -> bool:
        return self.nonexpansive and self.injective and self.surjective and self.defect_conserved

    def __bool__(self):
        return self.passed


def shift_properties(
    model: ShiftModel,
    pairs: Iterable[tuple[SeqPoint, SeqPoint]],
    codomain: Iterable[SeqPoint] = (),
) -> ShiftReport:
    """Check the constructed map on sampled pairs and embedded pairs of ``f``.

    Non-expansiveness and injectivity are checked on ``pairs``; surjectivity
    by pulling each ``codomain`` point back through the inverse shift; defect
    conservation on every pair of the finite domain of ``f`` placed at
    index ``-1``.
    """
    wit = {}
    nonexp = inj = surj = conserved = True
    for z1, z2 in pairs:
        a, b = shift_construct(model, z1), shift_construct(model, z2)
        if model.distance(a, b) > model.distance(z1, z2):
            nonexp = False
            wit.setdefault("nonexpansive", (z1, z2))
        if z1 != z2 and a == b:
            inj = False
            wit.setdefault("injective", (z1, z2))
        if inverse_shift(model, a) != z1:
            inj = False
            wit.setdefault("injective", (z1, z2))
    for w in codomain:
        z = inverse_shift(model, w)
        if model.norm(z) > 1 or shift_construct(model, z) != w:
            surj = False
            wit.setdefault("surjective", w)
    worst = Fraction(0)
    dom = list(model.f.table)
    for x in dom:
        for x2 in dom:
            d_f = model.f.defect(x, x2)
            ex, ex2 = model.embed(x), model.embed(x2)
            d_shift = model.distance(ex, ex2) - model.distance(
                shift_construct(model, ex), shift_construct(model, ex2)
            )
            if d_shift != d_f:
                conserved = False
                wit.setdefault("defect", (x, x2))
            worst = max(worst, d_f)
    return ShiftReport(nonexp, inj, surj, conserved, worst, wit)


def _random_rational(rng: random.Random, den: int) -> Fraction:
    return Fraction(rng.randint(-den, den), den)


def random_ball_point(space: RationalSpace, rng: random.Random, den: int = 12) -> RVec:
    x = tuple(_random_rational(rng, den) for _ in range(space.dim))
    nrm = space.norm(x)
    if nrm > 1:
        x = tuple(t / nrm for t in x)
    return x


def random_model(
    rng: random.Random,
    dim: int = 2,
    p: float = math.inf,
    size: int = 6,
    isometric: bool = False,
) -> ShiftModel:
    """A non-expansive bijection ``x -> A x`` on a finite rational point set.

    ``A`` has rational entries and operator norm at most 1 for the chosen
    norm; with ``isometric`` it is a signed permutation.
    """
    X = RationalSpace(dim, p)
    while True:
        if isometric:
            perm = list(range(dim))
            rng.shuffle(perm)
            A = [[Fraction(0)] * dim for _ in range(dim)]
            for r, c in enumerate(perm):
                A[r][c] = Fraction(rng.choice((-1, 1)))
        else:
            A = [[Fraction(rng.randint(-6, 6), 6) for _ in range(dim)] for _ in range(dim)]
            # l_inf operator norm is the max row sum, l_1 the max column sum
            if p == math.inf:
                scale = max(sum(abs(t) for t in row) for row in A)
            else:
                scale = max(sum(abs(A[r][c]) for r in range(dim)) for c in range(dim))
            if scale == 0:
                continue
            if scale > 1:
                A = [[t / scale for t in row] for row in A]
        pts = {X.zero()}
        while len(pts) < size:
            pts.add(random_ball_point(X, rng))
        table = {x: tuple(sum((A[r][c] * x[c] for c in range(dim)), Fraction(0))
                          for r in range(dim)) for x in pts}
        if len(set(table.values())) == len(table):
            return ShiftModel(FiniteBijection(X, X, table))


def random_seq_point(model: ShiftModel, rng: random.Random, lo: int = -3, hi: int = 2,
                     anchor: str = "domain") -> SeqPoint:
    """Random point with support in ``[lo, hi]``.

    ``anchor="domain"`` draws block ``-1`` from the domain of ``f``;
    ``"range"`` draws block ``0`` from its range, for surjectivity samples.
    """
    blocks = {}
    for i in range(lo, hi + 1):
        if rng.random() < 0.6:
            blocks[i] = random_ball_point(model.space_at(i), rng)
    if anchor == "domain":
        blocks[-1] = rng.choice(sorted(model.f.table))
    else:
        blocks[0] = rng.choice(sorted(model.f.inverse_table))
    return SeqPoint(blocks)


# -------------------------------------------------------- closure operator

RULES = ("seed", "f", "finv", "scale", "sum")


@dataclass(frozen=True)
class ClosureState:
    """Depth-``k`` approximation of the closure of the seeds under ``H``.

    ``derivations[e]`` is ``(rule, parents, q)`` with ``q`` the scale factor
    for ``scale`` steps and None otherwise.
    """

    space: RationalSpace
    depth: int
    elements: tuple[RVec, ...]
    derivations: tuple[tuple[str, tuple[int, ...], Fraction | None], ...]
    fixed_point: bool = False

    @classmethod
    def seed(cls, space: RationalSpace, seeds: Iterable[Sequence]) -> "ClosureState":
        elems = []
        for s in seeds:
            v = tuple(Fraction(t) for t in s)
            if v not in elems:
                elems.append(v)
        return cls(space, 0, tuple(elems), tuple(("seed", (), None) for _ in elems))

    def __len__(self):
        return len(self.elements)


def _rationals(cap: int) -> list[Fraction]:
    qs = {Fraction(a, b) for b in range(1, cap + 1) for a in range(-cap, cap + 1)}
    return sorted(qs)


def closure_step(
    state: ClosureState,
    f: Callable[[RVec], RVec],
    finv: Callable[[RVec], RVec],
    rational_cap: int = 2,
    sum_cap: int = 64,
) -> ClosureState:
    """Apply ``H`` once: images under ``f`` and ``f^-1`` of ball elements,
    rational multiples with numerator and denominator up to ``rational_cap``,
    and at most ``sum_cap`` new pairwise sums.
    """
    space = state.space
    elems = list(state.elements)
    index = {e: k for k, e in enumerate(elems)}
    derivs = list(state.derivations)
    base = len(elems)

    def add(v, rule, parents, q=None):
        v = tuple(v)
        if v not in index:
            index[v] = len(elems)
            elems.append(v)
            derivs.append((rule, parents, q))
            return True
        return False

    for k in range(base):
        e = state.elements[k]
        if space.in_ball(e):
            add(f(e), "f", (k,))
            add(finv(e), "finv", (k,))
    qs = _rationals(rational_cap)
    for k in range(base):
        e = state.elements[k]
        for q in qs:
            add(tuple(q * t for t in e), "scale", (k,), q)
    added = 0
    for a in range(base):
        for b in range(a, base):
            if added >= sum_cap:
                break
            s = tuple(x + y for x, y in zip(state.elements[a], state.elements[b]))
            if add(s, "sum", (a, b)):
                added += 1
    return ClosureState(space, state.depth + 1, tuple(elems), tuple(derivs),
                        fixed_point=len(elems) == base)


def export_derivations(state: ClosureState) -> str:
    """One ``id: rule(parent-ids)`` line per element."""
    lines = []
    for k, (rule, parents, q) in enumerate(state.derivations):
        name = f"scale({q})" if rule == "scale" else rule
        lines.append(f"{k}: {name}({','.join(map(str, parents))})")
    return "\n".join(lines) + "\n"


def parse_derivations(text: str) -> list[tuple[str, tuple[int, ...], Fraction | None]]:
    out = []
    for line in text.strip().splitlines():
        ident, body = line.split(":", 1)
        body = body.strip()
        head, _, rest = body.rpartition("(")
        parents = tuple(int(t) for t in rest.rstrip(")").split(",") if t)
        q = None
        if head.startswith("scale("):
            q = Fraction(head[len("scale("):-1])
            head = "scale"
        if head not in RULES:
            raise ValueError(f"unknown rule in line {line!r}")
        if int(ident) != len(out):
            raise ValueError(f"derivation ids out of order at {line!r}")
        out.append((head, parents, q))
    return out


def replay(
    seeds: Sequence[RVec],
    derivations: Sequence[tuple[str, tuple[int, ...], Fraction | None]],
    f: Callable[[RVec], RVec],
    finv: Callable[[RVec], RVec],
) -> list[RVec]:
    """Recompute every element from its derivation tree."""
    seeds = iter(seeds)
    out: list[RVec] = []
    for rule, parents, q in derivations:
        if rule == "seed":
            out.append(tuple(Fraction(t) for t in next(seeds)))
        elif rule == "f":
            out.append(tuple(f(out[parents[0]])))
        elif rule == "finv":
            out.append(tuple(finv(out[parents[0]])))
        elif rule == "scale":
            out.append(tuple(q * t for t in out[parents[0]]))
        elif rule == "sum":
            a, b = parents
            out.append(tuple(x + y for x, y in zip(out[a], out[b])))
        else:
            raise ValueError(f"unknown rule {rule!r}")
    return out


def linear_generator(matrix: Sequence[Sequence]) -> Callable[[RVec], RVec]:
    A = [[Fraction(t) for t in row] for row in matrix]
    return lambda x: tuple(sum((a * t for a, t in zip(row, x)), Fraction(0)) for row in A)


def table_generator(table: Mapping) -> Callable[[RVec], RVec]:
    """A generator defined only on the listed points."""
    tab = {tuple(Fraction(t) for t in k): tuple(Fraction(t) for t in v) for k, v in table.items()}

    def g(x):
        try:
            return tab[tuple(x)]
        except KeyError:
            raise DomainError(f"generator undefined at {x}") from None

    return g


# ------------------------------------------------------- rational scaling

def check_rat_scaling(component, generators, grid_epsilon: float) -> CheckResult:
    """Compare eps-nets of ``cl(A & B)`` and ``cl(A) & B`` for a rational span ``A``.

    ``A`` is the Q-span of ``generators`` in a finite-dimensional l_p
    component.  ``A & B`` is approximated by rational combinations in the
    ball, ``cl(A) & B`` by a fine real parametrization of the span's unit
    ball including its boundary.  Every grid point within ``eps`` of one set
    must lie within ``2 eps`` of the other; ``measure`` reports the worst
    such distance in units of ``eps``.
    """
    eps = float(grid_epsilon)
    d = component.dim
    p = component.p
    norm = component.norm
    G = np.asarray(generators, dtype=float).reshape(-1, d)
    G = G[np.linalg.norm(G, axis=1) > 0]
    if len(G):
        u, sv, vt = np.linalg.svd(G, full_matrices=False)
        rank = int((sv > 1e-12 * sv[0]).sum())
    else:
        rank = 0

    if rank == 0:
        inside = np.zeros((1, d))
        closed = np.zeros((1, d))
    else:
        # independent generators for the rational lattice
        chosen = []
        for g in G:
            trial = np.array(chosen + [g])
            if np.linalg.matrix_rank(trial, tol=1e-12) == len(trial):
                chosen.append(g)
        L = np.array(chosen)
        r2 = max(1.0, d ** (0.5 - 1.0 / p)) if p != math.inf else math.sqrt(d)
        smin = np.linalg.svd(L, compute_uv=False).min()
        coef_bound = r2 / smin
        den = math.ceil(2 * norm(L).max() / eps)
        span = math.ceil(coef_bound * den)
        ticks = np.arange(-span, span + 1) / den
        mesh = np.stack(np.meshgrid(*([ticks] * rank), indexing="ij"), -1).reshape(-1, rank)
        pts = mesh @ L
        inside = pts[norm(pts) <= 1.0]

        basis = vt[:rank]
        step = eps / 4
        m = math.ceil(r2 / step)
        t = np.arange(-m, m + 1) * step
        mesh = np.stack(np.meshgrid(*([t] * rank), indexing="ij"), -1).reshape(-1, rank)
        pts = mesh @ basis
        body = pts[norm(pts) <= 1.0]
        dirs = np.random.default_rng(0).standard_normal((int(40 / eps) * rank, rank)) @ basis
        dirs = dirs / norm(dirs)[:, None]
        closed = np.vstack([body, dirs])

    m = math.ceil(1 / eps)
    t = np.arange(-m, m + 1) * eps
    grid = np.stack(np.meshgrid(*([t] * d), indexing="ij"), -1).reshape(-1, d)
    grid = grid[norm(grid) <= 1.0]
    kd_p = p if p != math.inf else np.inf
    d1, _ = cKDTree(inside).query(grid, p=kd_p)
    d2, _ = cKDTree(closed).query(grid, p=kd_p)
    near1 = d1 <= eps
    near2 = d2 <= eps
    worst = max(
        float(d2[near1].max(initial=0.0)),
        float(d1[near2].max(initial=0.0)),
    )
    ok = worst <= 2 * eps
    bad = None
    if not ok:
        mask = (near1 & (d2 > 2 * eps)) | (near2 & (d1 > 2 * eps))
        bad = grid[np.argmax(mask)].tolist()
    return CheckResult(ok, detail=f"{near1.sum()} / {near2.sum()} grid points near each set",
                       witness=bad, measure=worst / eps)
