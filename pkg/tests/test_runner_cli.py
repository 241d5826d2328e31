import itertools
import json

import pytest

from plab.cli import main
from plab.errors import ConfigError
from plab.runner import SUITES, RunConfig, catalog_shapes, run_suite


def test_catalog_small():
    shapes = catalog_shapes(1, 1, 1)
    assert len(shapes) == 3
    assert {tuple((c.pairs, c.isolated) for c in s.components) for s in shapes} == {
        ((1, 0),), ((0, 1),), ((1, 1),)
    }


def test_catalog_matches_brute_force():
    kinds = [(p, i) for p in range(2) for i in range(2) if p or i]
    brute = set()
    for n in (1, 2):
        for combo in itertools.product(kinds, repeat=n):
            brute.add(tuple(sorted(combo)))
    assert len(catalog_shapes(2, 1, 1)) == len(brute)


def test_catalog_empty():
    assert catalog_shapes() == []


def test_unknown_suite_config():
    with pytest.raises(ConfigError):
        RunConfig.from_dict("nope", {})


def test_bad_cap():
    with pytest.raises(ConfigError):
        RunConfig.from_dict("shift", {"caps": {"vertex": 0}})


def test_every_suite_has_default_config():
    assert len(SUITES) == 16
    for name in SUITES:
        RunConfig.from_dict(name, {})


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_cli_unknown_suite_exits_2(tmp_path):
    assert main(["nope", "--config", _write(tmp_path, "c.json", {})]) == 2


def test_cli_malformed_config_exits_2(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    assert main(["shift", "--config", str(p)]) == 2
    assert main(["shift", "--config", _write(tmp_path, "d.json", {"bogus": 1})]) == 2


def test_cli_missing_config_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["shift"])
    assert exc.value.code == 2


def test_cli_clique_ext_passes(tmp_path):
    cfg = _write(tmp_path, "c.json", {"catalog": {"max_n": 2, "max_pairs": 1, "max_isolated": 1}})
    out = tmp_path / "r.json"
    assert main(["clique-ext", "--config", cfg, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["totals"]["failed"] == 0


def test_cli_factorize_minimal_shape(tmp_path):
    cfg = _write(tmp_path, "c.json", {})
    out = tmp_path / "r.json"
    assert main(["factorize-exhaustive", "--config", cfg, "--out", str(out)]) == 0


def test_reports_byte_stable_and_parallel_identical(tmp_path):
    cfg = _write(tmp_path, "c.json", {"models": 6})
    outs = []
    for jobs in ("1", "1", "3"):
        out = tmp_path / f"r{len(outs)}.json"
        assert main(["shift", "--config", cfg, "--seed", "7", "--jobs", jobs, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert json.loads(outs[0])["config"]["seed"] == 7


def test_failure_carries_witness_and_replays(tmp_path):
    # single-edge components: some homomorphisms do not factor
    cfg = _write(tmp_path, "c.json", {"shapes": [{"components": [{"pairs": 1}, {"pairs": 1}]}]})
    out = tmp_path / "r.json"
    assert main(["factorize-exhaustive", "--config", cfg, "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    failed = [c for i in rep["instances"] for c in i["checks"] if not c["passed"]]
    assert failed and all("witness" in c and "replay" in c for c in failed)
    wit = _write(tmp_path, "w.json", failed[0]["replay"])
    out2 = tmp_path / "r2.json"
    assert main(["factorize-exhaustive", "--config", cfg, "--replay", wit, "--out", str(out2)]) == 1
    rep2 = json.loads(out2.read_text())
    assert rep2["instances"][0]["checks"] == rep["instances"][0]["checks"]


def test_report_exit_code_matches_failures():
    rep = run_suite(RunConfig.from_dict("closure", {}))
    assert rep.exit_code == 0 and rep.totals["failed"] == 0
