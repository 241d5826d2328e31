"""Batch driver: one suite per verified statement, JSON configs, JSON reports.

A suite is a list of instances (JSON-able dicts) and a function running the
checks of one instance.  Each instance gets its own seed spawned from the
run seed, so serial and parallel runs produce identical reports.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from plab import banach_geometry as bg
from plab import clique_engine as ce
from plab import constructions as cs
from plab import factorizer as fz
from plab.ball_graph import DEFAULT_VERTEX_CAP, ProductShape
from plab.errors import ConfigError, FactorizationError, PlabError

# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class RunConfig:
    suite: str
    seed: int = 0
    params: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    out: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        for k, v in self.caps.items():
            if not isinstance(v, int) or v <= 0:
                raise ConfigError(f"cap {k!r} must be a positive integer")
        for k, v in self.tolerances.items():
            if not isinstance(v, (int, float)) or v < 0:
                raise ConfigError(f"tolerance {k!r} must be a non-negative number")

    @classmethod
    def from_dict(cls, suite: str, data: dict, seed: int | None = None,
                  out: str | None = None) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = dict(data)
        named = data.pop("suite", suite)
        if named != suite:
            raise ConfigError(f"config is for suite {named!r}, not {suite!r}")
        if suite not in SUITES:
            raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        file_seed = data.pop("seed", 0)
        caps = data.pop("caps", {})
        tols = data.pop("tolerances", {})
        if not isinstance(caps, dict) or not isinstance(tols, dict):
            raise ConfigError("caps and tolerances must be objects")
        definition = SUITES[suite]
        unknown = set(data) - set(definition.defaults)
        if unknown:
            raise ConfigError(f"unknown keys for {suite}: {sorted(unknown)}")
        unknown = set(caps) - set(DEFAULT_CAPS)
        if unknown:
            raise ConfigError(f"unknown caps: {sorted(unknown)}")
        params = {**definition.defaults, **data}
        return cls(
            suite,
            seed if seed is not None else file_seed,
            params,
            {**DEFAULT_CAPS, **caps},
            {**definition.tolerances, **tols},
            out,
        )

    def cap(self, name: str) -> int:
        return self.caps[name]

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])

    def echo(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "params": self.params,
            "caps": self.caps,
            "tolerances": self.tolerances,
        }


DEFAULT_CAPS = {"vertex": DEFAULT_VERTEX_CAP, "enumeration": fz.DEFAULT_ENUMERATION_CAP}


# ---------------------------------------------------------------- report


@dataclass
class Report:
    suite: str
    config: dict
    instances: list
    timing: dict = field(default_factory=dict)

    @property
    def totals(self) -> dict:
        checks = [c for inst in self.instances for c in inst["checks"]]
        failed = sum(not c["passed"] for c in checks)
        return {"checks": len(checks), "failed": failed, "passed": len(checks) - failed}

    @property
    def passed(self) -> bool:
        return self.totals["failed"] == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def failures(self) -> list[dict]:
        return [c for inst in self.instances for c in inst["checks"] if not c["passed"]]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {"suite": self.suite, "config": self.config, "instances": self.instances,
             "totals": self.totals}
        if include_timing:
            d["timing"] = self.timing
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=1) + "\n"


def jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, ProductShape):
        return x.to_dict()
    if isinstance(x, fz.Homomorphism):
        return x.to_text()
    if isinstance(x, fz.Factorization):
        return json.loads(x.to_json())
    return x


class Tally:
    """Aggregates one named check over many sub-cases, keeping the first witness."""

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.failures = 0
        self.vacuous = 0
        self.witness = None
        self.detail = ""
        self.extra: dict = {}

    def add(self, ok: bool, witness=None, detail: str = "", vacuous: bool = False):
        self.count += 1
        if vacuous:
            self.vacuous += 1
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = witness if witness is not None else "unspecified"
                self.detail = detail

    def result(self) -> dict:
        d = {"name": self.name, "passed": self.failures == 0, "count": self.count,
             "failures": self.failures}
        if self.vacuous:
            d["hypothesis_not_met"] = self.vacuous
        if self.failures:
            d["witness"] = jsonable(self.witness)
            d["detail"] = self.detail
        d.update(jsonable(self.extra))
        return d


def check(name: str, ok: bool, witness=None, detail: str = "", **extra) -> dict:
    t = Tally(name)
    t.add(bool(ok), witness, detail)
    t.extra = extra
    return t.result()


# --------------------------------------------------------------- catalog

def catalog_shapes(max_n: int = 0, max_pairs: int = 0, max_isolated: int = 0) -> list[ProductShape]:
    """All shapes within the limits, one per multiset of components.

    A component needs at least one vertex; components are listed in
    non-decreasing ``(pairs, isolated)`` order, which picks one
    representative of every reordering class.
    """
    kinds = [(p, i) for p in range(max_pairs + 1) for i in range(max_isolated + 1) if p or i]
    out = []
    for n in range(1, max_n + 1):
        for combo in itertools.combinations_with_replacement(kinds, n):
            out.append(ProductShape.of(*combo))
    return out


def _shapes(cfg: RunConfig, key: str = "shapes") -> list[ProductShape]:
    shapes = []
    cat = cfg.params.get("catalog") if key == "shapes" else None
    if cat:
        shapes += catalog_shapes(cat.get("max_n", 0), cat.get("max_pairs", 0),
                                 cat.get("max_isolated", 0))
    try:
        shapes += [ProductShape.from_dict(s) for s in cfg.params.get(key) or []]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return shapes


def _spaces(cfg: RunConfig) -> list[bg.SumSpace]:
    try:
        return [bg.SumSpace.from_dict(s) for s in cfg.params["spaces"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed space description: {exc}") from None


# ------------------------------------------------------------- suites

@dataclass(frozen=True)
class Suite:
    instances: Callable[[RunConfig], list]
    run: Callable[[RunConfig, dict, int], list]
    defaults: dict
    tolerances: dict = field(default_factory=dict)


def _shape_instances(cfg):
    return [{"shape": s.to_dict()} for s in _shapes(cfg)]


def _run_clique_ext(cfg, inst, seed):
    shape = ProductShape.from_dict(inst["shape"])
    scan = ce.scan_extensions(shape, cfg.cap("vertex"))
    out = [check("at-most-one-extension", scan.max_extensions <= 1, scan.witness,
                 f"clique with {scan.max_extensions} extensions",
                 cliques=scan.cliques, max_extensions=scan.max_extensions)]
    if all(c.pairs >= 1 for c in shape.components):
        w = ce.max_clique_size(shape, cfg.cap("vertex"))
        out.append(check("clique-number", w == 2**shape.n, shape,
                         f"clique number {w}, expected {2**shape.n}", clique_number=w))
    return out


def _run_max_clique(cfg, inst, seed):
    # the co-normal product multiplies clique numbers; a matching has 2, an edgeless graph 1
    shape = ProductShape.from_dict(inst["shape"])
    w = ce.max_clique_size(shape, cfg.cap("vertex"))
    expected = 2 ** sum(c.pairs >= 1 for c in shape.components)
    return [check("clique-number", w == expected, shape,
                  f"clique number {w}, expected {expected}", clique_number=w)]


def _hom_instances(cfg):
    insts = [{"mode": "exhaustive", "shape": s.to_dict()} for s in _shapes(cfg)]
    chunk = cfg.params["chunk"]
    for s in _shapes(cfg, "random_shapes"):
        total = cfg.params["samples"]
        for start in range(0, total, chunk):
            insts.append({"mode": "random", "shape": s.to_dict(), "start": start,
                          "count": min(chunk, total - start)})
    return insts


def _homs(cfg, inst, seed):
    """Yield ``(hom, fact_or_None)`` for an exhaustive or random instance."""
    shape = ProductShape.from_dict(inst["shape"])
    if inst["mode"] == "exhaustive":
        for hom in fz.enumerate_injective_homomorphisms(shape, cfg.cap("enumeration")):
            yield shape, hom, None
    else:
        rng = random.Random(seed)
        for _ in range(inst["count"]):
            fact, hom = fz.random_homomorphism(shape, rng)
            yield shape, hom, fact


def _factor_or_witness(shape, hom):
    try:
        return fz.factor(shape, hom), None
    except FactorizationError as exc:
        return None, {"homomorphism": hom.to_text(), "error": str(exc),
                      "counterexample": jsonable(exc.counterexample)}


def _run_factorize_exhaustive(cfg, inst, seed):
    t = Tally("factors")
    for shape, hom, _ in _homs(cfg, inst, seed):
        fact, wit = _factor_or_witness(shape, hom)
        t.add(fact is not None, wit, wit["error"] if wit else "")
    return [t.result()]


def _run_roundtrip(cfg, inst, seed):
    t = Tally("roundtrip")
    for shape, hom, fact in _homs(cfg, inst, seed):
        got, wit = _factor_or_witness(shape, hom)
        ok = got is not None and got.to_json() == fact.to_json()
        if wit is None and not ok:
            wit = {"homomorphism": hom.to_text(), "expected": fact.to_json(),
                   "got": got.to_json()}
        t.add(ok, wit, "factorization not recovered")
    return [t.result()]


def _run_e_square(cfg, inst, seed):
    t = Tally("e-square-homomorphism")
    for shape, hom, _ in _homs(cfg, inst, seed):
        r = fz.check_E_square_homomorphism(shape, hom)
        t.add(r.passed, {"homomorphism": hom.to_text(), "edge": r.witness}, r.detail)
    return [t.result()]


def _run_interior(cfg, inst, seed):
    t = Tally("interior")
    for shape, hom, fact in _homs(cfg, inst, seed):
        if fact is None:
            fact, wit = _factor_or_witness(shape, hom)
            if fact is None:
                t.add(False, wit, "no factorization to test against")
                continue
        r = fz.check_interior_lemma(shape, hom, fact)
        t.add(r.passed, {"homomorphism": hom.to_text(), "vertex": r.witness}, r.detail)
    return [t.result()]


def _run_bijective(cfg, inst, seed):
    t = Tally("bijective-factors")
    for shape, hom, fact in _homs(cfg, inst, seed):
        if fact is None:
            fact, wit = _factor_or_witness(shape, hom)
            if fact is None:
                t.add(False, wit, "no factorization to test against")
                continue
        r = fz.check_bijective_factors(shape, hom, fact)
        t.add(r.passed, {"homomorphism": hom.to_text(), "component": r.witness}, r.detail,
              vacuous=not r.hypothesis_held)
    return [t.result()]


def _run_sphere_extreme(cfg, inst, seed):
    t = Tally("sphere-implies-extreme")
    for shape, hom, _ in _homs(cfg, inst, seed):
        r = fz.check_sphere_implies_extreme(shape, hom)
        t.add(r.passed, {"homomorphism": hom.to_text(), "vertex": r.witness}, r.detail,
              vacuous=not r.hypothesis_held)
    return [t.result()]


def _space_instances(cfg):
    return [{"space": s.to_dict()} for s in _spaces(cfg)]


def _family(space, rng):
    return bg.random_family(space, rng, orthogonal=True)


def _run_gamma_phi(cfg, inst, seed):
    space = bg.SumSpace.from_dict(inst["space"])
    rng = np.random.default_rng(seed)
    gamma = bg.HomogeneousExtension(_family(space, rng))
    phi = gamma.inverse()
    z = bg.sample_ball(space, cfg.params["samples"], rng)
    gz = gamma(z)
    inv = np.maximum(space.norm(phi(gz) - z), space.norm(gamma(phi(z)) - z))
    sigma = gamma.family.sigma
    nz, ngz = space.block_norms(z), space.block_norms(gz)
    blk = np.abs(ngz[:, list(sigma)] - nz).max(axis=1)
    k, j = int(np.argmax(inv)), int(np.argmax(blk))
    return [
        check("inverse", inv[k] <= cfg.tol("inverse"), z[k], f"error {inv[k]:.3e}",
              max_error=float(inv[k])),
        check("blockwise-norm", blk[j] <= cfg.tol("norm"), z[j], f"error {blk[j]:.3e}",
              max_error=float(blk[j])),
    ]


def _block_linear(family: bg.SphereMapFamily) -> np.ndarray:
    space = family.space
    off = space.offsets
    M = np.zeros((space.dim, space.dim))
    for i, g in enumerate(family.maps):
        s = family.sigma[i]
        di, ds = space.components[i].dim, space.components[s].dim
        M[off[s]:off[s] + ds, off[i]:off[i] + di] = g.matrix
    return M


def _run_homogeneity(cfg, inst, seed):
    space = bg.SumSpace.from_dict(inst["space"])
    rng = np.random.default_rng(seed)
    gamma = bg.HomogeneousExtension(_family(space, rng))
    M = _block_linear(gamma.family)
    linear = lambda z: np.asarray(z) @ M.T  # noqa: E731
    out = []
    for k in range(space.n + 1):
        r = bg.check_homogeneity(space, linear, gamma, k, cfg.params["samples"],
                                 cfg.tol("homogeneity"), rng)
        out.append(check(f"homogeneous-in-{k}", r.passed, r.witness, r.detail,
                         max_deviation=r.measure))
    readings = bg.homogeneity_equiv_readings(space, gamma, max(space.n - 1, 0),
                                             cfg.params["samples"], rng,
                                             cfg.tol("homogeneity"))
    good = sorted(name for name, frac in readings.items() if frac == 1.0)
    out.append(check("auxiliary-point", bool(good), readings,
                     "neither index reading reproduces the point",
                     readings=readings, satisfied_by=good))
    return out


def _tangent_instances(cfg):
    insts = [{"dim": int(d), "p": p} for d, p in cfg.params["components"]]
    if cfg.params["control"]:
        insts.append({"control": True})
    return insts


def _p(v):
    return math.inf if v in ("inf", math.inf) else float(v)


def _run_tangent(cfg, inst, seed):
    if inst.get("control"):
        comp = bg.LpComponent(2, math.inf)
        est = bg.two_ball_intersection_diameter(comp, [1.0, 0.0], 1.0, [-1.0, 0.0], 1.0)
        return [check("control-flat-face", est.diameter >= 1.0, {"c1": [1, 0], "c2": [-1, 0]},
                      f"diameter {est.diameter!r}", diameter=est.diameter)]
    comp = bg.LpComponent(inst["dim"], _p(inst["p"]))
    rng = np.random.default_rng(seed)
    worst = 0.0
    t = Tally("singleton")
    for _ in range(cfg.params["configurations"]):
        c1, r1, c2, r2 = bg.random_tangent_configuration(comp, rng)
        est = bg.two_ball_intersection_diameter(comp, c1, r1, c2, r2, rng=rng)
        ok = est.diameter <= cfg.tol("diameter")
        t.add(ok, {"c1": c1, "r1": r1, "c2": c2, "r2": r2}, f"diameter {est.diameter!r}")
        worst = max(worst, est.diameter)
    t.extra = {"max_diameter": worst}
    return [t.result()]


def _perturbations(space: bg.SumSpace, phi, gamma):
    """Non-isometric relatives of ``phi`` with whatever inverse is known."""
    def radial_blocks(fn):
        def f(z):
            z = np.asarray(z, dtype=float)
            return space.join([fn(space.block(z, i), c) for i, c in enumerate(space.components)])
        return f

    def power(a):
        def fn(x, c):
            r = c.norm(x)[..., None]
            return np.where(r > 0, x * np.where(r > 0, r, 1.0) ** (a - 1), 0.0)
        return fn

    out = {
        "contraction": (lambda z: 0.9 * phi(z), lambda z: gamma(np.asarray(z) / 0.9)),
        "radial-square": (lambda z: radial_blocks(power(2.0))(phi(z)),
                          lambda z: gamma(radial_blocks(power(0.5))(z))),
        "radial-root": (lambda z: radial_blocks(power(0.5))(phi(z)),
                        lambda z: gamma(radial_blocks(power(2.0))(z))),
        "clip": (lambda z: np.clip(phi(z), -0.75, 0.75), None),
        "ripple": (lambda z: phi(z) + 1e-3 * np.sin(7.0 * np.asarray(z)), None),
    }
    d = space.dim
    squash = np.eye(d)
    squash[0, 0] = 0.5
    out["squash-axis"] = (lambda z: phi(z) @ squash.T, lambda z: gamma(np.asarray(z) @ np.linalg.inv(squash).T))
    return out


def _run_isometry(cfg, inst, seed):
    space = bg.SumSpace.from_dict(inst["space"])
    rng = np.random.default_rng(seed)
    tol = cfg.tol("defect")
    t = Tally("phi-is-isometry")
    harness = Tally("falsification")
    caught = 0
    for _ in range(cfg.params["maps"]):
        gamma = bg.HomogeneousExtension(_family(space, rng))
        phi = gamma.inverse()
        cert = bg.certify_isometry(space, phi, tol=tol, inverse=gamma, rng=rng,
                                   num_pairs=cfg.params["pairs"],
                                   num_sphere=cfg.params["sphere_samples"])
        t.add(cert.passed, {"hypotheses": cert.hypotheses, "witnesses": cert.witnesses},
              f"max defect {cert.max_defect:.3e}")
        for name, (f, finv) in _perturbations(space, phi, gamma).items():
            c = bg.certify_isometry(space, f, tol=tol, inverse=finv, rng=rng,
                                    num_pairs=cfg.params["falsify_pairs"],
                                    num_sphere=cfg.params["sphere_samples"])
            bad = c.hypotheses_hold and c.max_defect > cfg.tol("falsify")
            caught += c.max_defect > cfg.tol("falsify")
            harness.add(not bad, {"perturbation": name, "witnesses": c.witnesses},
                        "all sampled hypotheses hold but the map is not an isometry")
    harness.extra = {"non_isometric_perturbations": caught}
    return [t.result(), harness.result()]


def _run_bridge(cfg, inst, seed):
    space = bg.SumSpace.from_dict(inst["space"])
    rng = np.random.default_rng(seed)
    grid = bg.signed_basis_grid(space)
    r = bg.bridge_check(grid)
    out = [check("metric-graph-agreement", r.passed, r.witness, r.detail)]
    rgrid = bg.random_grid(space, grid.shape, rng)
    r = bg.bridge_check(rgrid)
    out.append(check("random-grid-agreement", r.passed, r.witness, r.detail))
    fam = bg.random_family(space, rng, orthogonal=False)
    try:
        hom = bg.nonexpansive_to_graph_hom(space, bg.HomogeneousExtension(fam), grid)
    except PlabError as exc:
        return out + [check("induced-homomorphism", False, getattr(exc, "witness", None) or str(exc),
                            str(exc))]
    fact, direct = bg.family_on_grid(grid, fam)
    out.append(check("induced-homomorphism", hom == direct,
                     {"metric": hom.to_text(), "componentwise": direct.to_text()},
                     "metric and componentwise routes disagree"))
    got, wit = _factor_or_witness(grid.shape, hom)
    out.append(check("factors-recovered", got == fact,
                     wit or {"expected": fact, "got": got}, "factors differ"))
    return out


def _run_shift(cfg, inst, seed):
    rng = random.Random(seed)
    p = _p(cfg.params["p"])
    model = cs.random_model(rng, cfg.params["dim"], p, cfg.params["domain_size"],
                            isometric=inst["isometric"])
    pairs = [(cs.random_seq_point(model, rng), cs.random_seq_point(model, rng))
             for _ in range(cfg.params["pairs"])]
    cod = [cs.random_seq_point(model, rng, anchor="range") for _ in range(cfg.params["pairs"])]
    rep = cs.shift_properties(model, pairs, cod)
    table = {str(list(map(str, k))): list(map(str, v)) for k, v in model.f.table.items()}
    return [
        check("model-nonexpansive", model.f.is_nonexpansive(), table, "model map expands"),
        check("nonexpansive", rep.nonexpansive, rep.witnesses.get("nonexpansive"), "shift expands"),
        check("bijective", rep.injective and rep.surjective,
              rep.witnesses.get("injective") or rep.witnesses.get("surjective"),
              "shift not bijective on samples"),
        check("defect-conserved", rep.defect_conserved, rep.witnesses.get("defect"),
              "defect changed", max_defect=rep.max_defect_source),
    ]


def _shift_instances(cfg):
    k = cfg.params["isometric_every"]
    return [{"model": m, "isometric": bool(k) and m % k == 0} for m in range(cfg.params["models"])]


def _closure_instances(cfg):
    return [{"seeds": s} for s in cfg.params["seed_sets"]]


def _run_closure(cfg, inst, seed):
    rng = random.Random(seed)
    dim = cfg.params["dim"]
    space = cs.RationalSpace(dim, _p(cfg.params["p"]))
    perm = list(range(dim))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(dim)]
    A = [[signs[r] if c == perm[r] else 0 for c in range(dim)] for r in range(dim)]
    At = [list(row) for row in zip(*A)]
    f, finv = cs.linear_generator(A), cs.linear_generator(At)
    seeds = [tuple(Fraction(t) for t in s) for s in inst["seeds"]]
    state = cs.ClosureState.seed(space, seeds)
    mono, flag_ok = Tally("monotone"), Tally("fixed-point-flag")
    stable = Tally("stays-fixed")
    states = [state]
    for _ in range(cfg.params["depth"]):
        nxt = cs.closure_step(state, f, finv, cfg.params["rational_cap"], cfg.params["sum_cap"])
        mono.add(nxt.elements[: len(state)] == state.elements, nxt.depth)
        flag_ok.add(nxt.fixed_point == (len(nxt) == len(state)), nxt.depth)
        if state.fixed_point:
            stable.add(nxt.fixed_point, nxt.depth, "elements added after a fixed point")
        states.append(nxt)
        state = nxt
    out = [mono.result(), flag_ok.result(), stable.result()]
    zero_only = all(all(t == 0 for t in s) for s in seeds)
    if cfg.params["depth"]:
        expect = zero_only
        got = states[1].fixed_point
        out.append(check("fixed-point-detection", got == expect, inst["seeds"],
                         f"fixed point reported {got}, expected {expect}"))
    text = cs.export_derivations(state)
    replayed = cs.replay([state.elements[k] for k, d in enumerate(state.derivations)
                          if d[0] == "seed"], cs.parse_derivations(text), f, finv)
    bad = next((k for k, (a, b) in enumerate(zip(replayed, state.elements)) if a != b), None)
    out.append(check("replay", bad is None and len(replayed) == len(state),
                     {"element": bad}, "derivation does not reproduce the element",
                     elements=len(state)))
    return out


def _rat_instances(cfg):
    return [{"generators": g} for g in cfg.params["generator_sets"]]


def _run_rat(cfg, inst, seed):
    c = cfg.params["component"]
    comp = bg.LpComponent(int(c["dim"]), _p(c["p"]))
    gens = [[float(Fraction(t)) for t in g] for g in inst["generators"]]
    r = cs.check_rat_scaling(comp, gens, cfg.tol("epsilon"))
    return [check("closure-agreement", r.passed, r.witness, r.detail, ratio=r.measure)]


_HOM_DEFAULTS = {"catalog": None, "shapes": [{"components": [{"pairs": 1, "isolated": 1}] * 2}],
                 "random_shapes": [], "samples": 0, "chunk": 100}
_SPACES = [{"components": [{"dim": 2, "p": 2.0}, {"dim": 2, "p": 3.0}]},
           {"components": [{"dim": 2, "p": 3.0}, {"dim": 2, "p": 3.0}, {"dim": 3, "p": 1.5}]}]

SUITES: dict[str, Suite] = {
    "clique-ext": Suite(_shape_instances, _run_clique_ext,
                        {"catalog": {"max_n": 2, "max_pairs": 2, "max_isolated": 1}, "shapes": []}),
    "max-clique": Suite(_shape_instances, _run_max_clique,
                        {"catalog": {"max_n": 2, "max_pairs": 2, "max_isolated": 1}, "shapes": []}),
    "factorize-exhaustive": Suite(_hom_instances, _run_factorize_exhaustive, _HOM_DEFAULTS),
    "factorize-roundtrip": Suite(_hom_instances, _run_roundtrip,
                                 {**_HOM_DEFAULTS, "shapes": [],
                                  "random_shapes": [{"components": [{"pairs": 1, "isolated": 1}] * 2}],
                                  "samples": 100}),
    "e-square": Suite(_hom_instances, _run_e_square, _HOM_DEFAULTS),
    "interior": Suite(_hom_instances, _run_interior, _HOM_DEFAULTS),
    "bijective-factors": Suite(_hom_instances, _run_bijective, _HOM_DEFAULTS),
    "sphere-extreme": Suite(_hom_instances, _run_sphere_extreme, _HOM_DEFAULTS),
    "gamma-phi": Suite(_space_instances, _run_gamma_phi, {"spaces": _SPACES, "samples": 1000},
                       {"inverse": 1e-9, "norm": 1e-12}),
    "homogeneity": Suite(_space_instances, _run_homogeneity, {"spaces": _SPACES, "samples": 500},
                         {"homogeneity": 1e-9}),
    "tangent-balls": Suite(_tangent_instances, _run_tangent,
                           {"components": [[2, 1.5], [2, 2.0], [2, 3.0]], "configurations": 20,
                            "control": True},
                           {"diameter": bg.DIAMETER_TOL}),
    "isometry-certify": Suite(_space_instances, _run_isometry,
                              {"spaces": _SPACES, "maps": 5, "pairs": 10000, "falsify_pairs": 2000,
                               "sphere_samples": 1000},
                              {"defect": 1e-9, "falsify": 1e-6}),
    "bridge": Suite(_space_instances, _run_bridge, {"spaces": _SPACES}),
    "shift": Suite(_shift_instances, _run_shift,
                   {"models": 20, "dim": 2, "p": "inf", "domain_size": 6, "pairs": 40,
                    "isometric_every": 4}),
    "closure": Suite(_closure_instances, _run_closure,
                     {"seed_sets": [[[0, 0]], [[1, 0]], [[1, 0], ["1/2", "1/3"]]],
                      "dim": 2, "p": "inf", "depth": 2, "rational_cap": 2, "sum_cap": 32}),
    "rat-scaling": Suite(_rat_instances, _run_rat,
                         {"component": {"dim": 2, "p": 2.0},
                          "generator_sets": [[[1, 0]], [], [[1, 0], ["1/3", "2/3"]]]},
                         {"epsilon": 0.05}),
}


# ---------------------------------------------------------------- driver

def instance_seeds(seed: int, count: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _run_one(cfg: RunConfig, inst: dict, seed: int) -> tuple[dict, float]:
    start = time.perf_counter()
    checks = SUITES[cfg.suite].run(cfg, inst, seed)
    replay = {"suite": cfg.suite, "instance": inst, "seed": seed}
    for c in checks:
        if not c["passed"]:
            c["replay"] = replay
    return {"instance": inst, "seed": seed, "checks": checks}, time.perf_counter() - start


def run_suite(cfg: RunConfig, jobs: int = 1, replay: dict | None = None) -> Report:
    """Run every instance of ``cfg.suite``, or only the one named by ``replay``."""
    start = time.perf_counter()
    if replay is not None:
        if replay.get("suite") != cfg.suite:
            raise ConfigError(f"witness belongs to suite {replay.get('suite')!r}")
        work = [(replay["instance"], int(replay["seed"]))]
    else:
        insts = SUITES[cfg.suite].instances(cfg)
        work = list(zip(insts, instance_seeds(cfg.seed, len(insts))))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [cfg] * len(work), *zip(*work)))
    else:
        results = [_run_one(cfg, inst, seed) for inst, seed in work]
    report = Report(cfg.suite, jsonable(cfg.echo()), [jsonable(r) for r, _ in results])
    report.timing = {"total_seconds": time.perf_counter() - start,
                     "instance_seconds": [t for _, t in results]}
    return report


def replays_from(data: dict) -> list[dict]:
    """Replay records in a witness file: one record, or every failure of a report."""
    if "instance" in data and "seed" in data:
        return [data]
    if "instances" in data:
        seen, out = set(), []
        for inst in data["instances"]:
            for c in inst["checks"]:
                r = c.get("replay")
                key = json.dumps(r, sort_keys=True) if r else None
                if r and key not in seen:
                    seen.add(key)
                    out.append(r)
        return out
    raise ConfigError("witness file has neither a replay record nor a report")
