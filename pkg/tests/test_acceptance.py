"""Acceptance criteria 1-10, each driven through the suite runner.

Every test appends one ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

from conftest import ACCEPTANCE_LINES
from plab.runner import RunConfig, run_suite

MINIMAL = {"components": [{"pairs": 1, "isolated": 1}] * 2}
N3 = [
    {"components": [{"pairs": 1, "isolated": 1}] * 3},
    {"components": [{"pairs": 2, "isolated": 1}, {"pairs": 1, "isolated": 1}, {"pairs": 1, "isolated": 0}]},
]


def _run(suite, params, seed=0):
    start = time.perf_counter()
    rep = run_suite(RunConfig.from_dict(suite, {**params, "seed": seed}))
    return rep, time.perf_counter() - start


def _checks(rep, name=None):
    return [c for i in rep.instances for c in i["checks"] if name is None or c["name"] == name]


def _record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_clique_extension():
    cat = {"max_n": 3, "max_pairs": 2, "max_isolated": 2}
    rep, secs = _run("clique-ext", {"catalog": cat})
    shapes = len(rep.instances)
    cliques = sum(c["cliques"] for c in _checks(rep, "at-most-one-extension"))
    worst = max(c["max_extensions"] for c in _checks(rep, "at-most-one-extension"))
    numbers = _checks(rep, "clique-number")
    ok = rep.passed and secs < 120
    _record(1, ok, f"{shapes} shapes, {cliques} cliques, max extensions {worst}, "
                   f"{len(numbers)} clique numbers = 2^n, {secs:.1f}s")


def test_criterion_02_exhaustive_factorization():
    rep, secs = _run("factorize-exhaustive", {"shapes": [MINIMAL]})
    (c,) = _checks(rep)
    ok = rep.passed and c["count"] > 0 and c["failures"] == 0 and secs < 300
    _record(2, ok, f"{c['count']} homomorphisms of the 9-vertex shape, {c['failures']} failures, {secs:.1f}s")


def test_criterion_03_e_square_and_interior():
    params = {"shapes": [MINIMAL], "random_shapes": N3, "samples": 500}
    lines = []
    ok = True
    for suite in ("e-square", "interior"):
        rep, _ = _run(suite, params)
        total = sum(c["count"] for c in _checks(rep))
        failed = sum(c["failures"] for c in _checks(rep))
        ok &= rep.passed and total == 8 + 1000
        lines.append(f"{suite} {total - failed}/{total}")
    _record(3, ok, ", ".join(lines))


def test_criterion_04_round_trip():
    shapes = [
        {"components": [{"pairs": 2, "isolated": 1}]},
        MINIMAL,
        {"components": [{"pairs": 2, "isolated": 0}, {"pairs": 1, "isolated": 2}]},
        {"components": [{"pairs": 1, "isolated": 1}, {"pairs": 1, "isolated": 0}, {"pairs": 1, "isolated": 1}]},
    ]
    rep, _ = _run("factorize-roundtrip", {"random_shapes": shapes, "samples": 250})
    total = sum(c["count"] for c in _checks(rep))
    failed = sum(c["failures"] for c in _checks(rep))
    _record(4, rep.passed and total == 1000, f"{total - failed}/{total} byte-exact recoveries")


def test_criterion_05_bijective_and_extreme():
    parts = []
    ok = True
    for suite in ("bijective-factors", "sphere-extreme"):
        rep, _ = _run(suite, {"shapes": [MINIMAL]})
        (c,) = _checks(rep)
        held = c["count"] - c.get("hypothesis_not_met", 0)
        ok &= rep.passed
        parts.append(f"{suite}: hypothesis held {held}/{c['count']}, violations {c['failures']}")
    _record(5, ok, "; ".join(parts))


SPACES_6 = [
    {"components": [{"dim": 4, "p": 1.5}]},
    {"components": [{"dim": 2, "p": 2.0}, {"dim": 2, "p": 2.0}]},
    {"components": [{"dim": 3, "p": 3.0}, {"dim": 3, "p": 3.0}, {"dim": 1, "p": 1.5}]},
    {"components": [{"dim": 4, "p": 2.0}, {"dim": 2, "p": 1.5}, {"dim": 4, "p": 3.0}]},
    {"components": [{"dim": 2, "p": 1.5}, {"dim": 2, "p": 1.5}, {"dim": 2, "p": 1.5}]},
]


def test_criterion_06_gamma_phi():
    rep, _ = _run("gamma-phi", {"spaces": SPACES_6, "samples": 2000})
    inv = max(c["max_error"] for c in _checks(rep, "inverse"))
    blk = max(c["max_error"] for c in _checks(rep, "blockwise-norm"))
    _record(6, rep.passed, f"10000 points, max inverse error {inv:.2e} (<=1e-9), "
                           f"max block-norm error {blk:.2e} (<=1e-12)")


def test_criterion_07_tangent_balls():
    rep, _ = _run("tangent-balls", {"components": [[2, 1.5], [2, 2.0], [2, 3.0]],
                                    "configurations": 100, "control": True})
    worst = max(c["max_diameter"] for c in _checks(rep, "singleton"))
    (ctrl,) = _checks(rep, "control-flat-face")
    _record(7, rep.passed, f"300 configurations, max diameter {worst:.2e} (<=1e-6); "
                           f"l_inf control diameter {ctrl['diameter']:.3f} (>=1)")


def test_criterion_08_isometry_certificate():
    spaces = [
        {"components": [{"dim": 2, "p": 2.0}, {"dim": 2, "p": 2.0}]},
        {"components": [{"dim": 3, "p": 3.0}, {"dim": 2, "p": 1.5}]},
        {"components": [{"dim": 2, "p": 1.5}, {"dim": 2, "p": 1.5}, {"dim": 3, "p": 2.0}]},
        {"components": [{"dim": 4, "p": 3.0}]},
    ]
    rep, _ = _run("isometry-certify", {"spaces": spaces, "maps": 25, "pairs": 10000})
    maps = sum(c["count"] for c in _checks(rep, "phi-is-isometry"))
    harness = _checks(rep, "falsification")
    tried = sum(c["count"] for c in harness)
    fooled = sum(c["failures"] for c in harness)
    caught = sum(c["non_isometric_perturbations"] for c in harness)
    _record(8, rep.passed and maps == 100,
            f"{maps} phi-maps certified; {tried} perturbed maps, {caught} non-isometric, "
            f"{fooled} passing all hypotheses")


def test_criterion_09_shift_model():
    rep, _ = _run("shift", {"models": 100})
    names = ("model-nonexpansive", "nonexpansive", "bijective", "defect-conserved")
    counts = {n: sum(c["passed"] for c in _checks(rep, n)) for n in names}
    _record(9, rep.passed, ", ".join(f"{n} {v}/100" for n, v in counts.items()))


def test_criterion_10_closure_and_rat_scaling():
    seeds = [[[0, 0]], [[1, 0]], [[1, 0], ["1/2", "1/3"]], [["2/3", "-1/5"]]]
    rep, _ = _run("closure", {"seed_sets": seeds, "depth": 3})
    rat, _ = _run("rat-scaling", {})
    ratios = [round(c["ratio"], 3) for c in _checks(rat)]
    ok = rep.passed and rat.passed
    _record(10, ok, f"closure {rep.totals['passed']}/{rep.totals['checks']} checks; "
                    f"rat-scaling worst ratio per set {ratios} (<=2)")
