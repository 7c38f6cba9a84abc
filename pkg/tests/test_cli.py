import filecmp
import json
import math
import os

import pytest

from scripts.extremes.cli import EXIT_ASSERT, EXIT_CONFIG, EXIT_OK, run
from scripts.extremes.config import load_config, resolve_config
from scripts.extremes.maxima import CadlagStepPath
from scripts.tools import config_digest


def _run_dirs(out, command):
    return sorted(os.path.join(out, d) for d in os.listdir(out) if d.startswith(command + "_"))


def test_invalid_n_exits_with_config_error(tmp_path):
    assert run(["simulate-max", "--n", "0", "--output-dir", str(tmp_path)]) == EXIT_CONFIG


def test_unknown_flag_exits_2(tmp_path):
    assert run(["simulate-max", "--bogus", "1"]) == 2


def test_lsv_without_alpha_exits_2(tmp_path):
    assert run(["simulate-max", "--map", "lsv", "--output-dir", str(tmp_path)]) == EXIT_CONFIG


def test_periodic_center_exits_2(tmp_path):
    argv = ["simulate-max", "--center", repr(2.0 / 3.0), "--output-dir", str(tmp_path)]
    assert run(argv) == EXIT_CONFIG


def test_simulate_max_writes_outputs_with_provenance(tmp_path):
    out = str(tmp_path)
    argv = ["simulate-max", "--n", "200", "--trials", "60", "--seed", "3", "--quiet", "--output-dir", out]
    assert run(argv) == EXIT_OK
    (run_dir,) = _run_dirs(out, "simulate-max")
    files = set(os.listdir(run_dir))
    assert {"maxima.csv", "summary.json", "verdicts.json"} <= files
    with open(os.path.join(run_dir, "maxima.csv"), encoding="utf-8") as f:
        assert f.readline().startswith("# extremes ")
    with open(os.path.join(run_dir, "summary.json"), encoding="utf-8") as f:
        summary = json.load(f)
    prov = summary["provenance"]
    assert prov["seed"] == 3
    assert prov["config"]["n"] == 200
    assert summary["summary"]["limit_family"] == "gumbel"


def test_echoed_config_reproduces_the_hash(tmp_path):
    out = str(tmp_path / "runs")
    assert run(["simulate-max", "--n", "150", "--trials", "40", "--quiet", "--output-dir", out]) == EXIT_OK
    (run_dir,) = _run_dirs(out, "simulate-max")
    with open(os.path.join(run_dir, "summary.json"), encoding="utf-8") as f:
        prov = json.load(f)["provenance"]
    echo = tmp_path / "echo.json"
    echo.write_text(json.dumps(prov["config"]))
    cfg = resolve_config(prov["config"]["command"], load_config(str(echo)))
    assert config_digest(cfg.to_dict()) == prov["config_sha256"]


def test_config_file_with_flag_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    out = str(tmp_path / "runs")
    cfg_path.write_text(json.dumps({"map": "tent", "observable": "neglog", "n": 1000, "trials": 40,
                                    "seed": 2, "output_dir": out}))
    assert run(["simulate-max", "--config", str(cfg_path), "--n", "120", "--quiet"]) == EXIT_OK
    (run_dir,) = _run_dirs(out, "simulate-max")
    with open(os.path.join(run_dir, "summary.json"), encoding="utf-8") as f:
        assert json.load(f)["provenance"]["config"]["n"] == 120


def test_asserted_failure_exits_3(tmp_path):
    # forward em ponto flutuante colapsa o doubling em 0: o máximo fica longe de Gumbel
    argv = ["simulate-max", "--map", "doubling", "--mode", "forward", "--n", "200", "--trials", "100",
            "--quiet", "--output-dir", str(tmp_path)]
    assert run(argv) == EXIT_OK
    assert run(argv + ["--assert"]) == EXIT_ASSERT


def test_selftest_is_identical_across_worker_counts(tmp_path):
    out = str(tmp_path)
    assert run(["selftest", "--seed", "5", "--workers", "1", "--quiet", "--output-dir", out]) == EXIT_OK
    assert run(["selftest", "--seed", "5", "--workers", "2", "--quiet", "--output-dir", out]) == EXIT_OK
    first, second = _run_dirs(out, "selftest")
    names = sorted(os.listdir(first))
    assert names == sorted(os.listdir(second))
    assert "selftest.csv" in names
    match, mismatch, errors = filecmp.cmpfiles(first, second, names, shallow=False)
    assert mismatch == [] and errors == []


def test_skorokhod_dist_command(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    CadlagStepPath((0.0, 1.0), [0.5], [1.0], 0.0).to_csv(str(a))
    CadlagStepPath((0.0, 1.0), [0.6], [1.0], 0.0).to_csv(str(b))
    assert run(["skorokhod-dist", str(a), str(b)]) == EXIT_OK
    assert "d_[0,1] = 0.1" in capsys.readouterr().out


def test_skorokhod_dist_missing_file(tmp_path):
    assert run(["skorokhod-dist", str(tmp_path / "x.csv"), str(tmp_path / "y.csv")]) == EXIT_CONFIG


def _verdicts(run_dir):
    with open(os.path.join(run_dir, "verdicts.json"), encoding="utf-8") as f:
        return {v["test"]: v for v in json.load(f)["verdicts"]}


def _run_one(tmp_path, argv):
    out = str(tmp_path)
    assert run(argv + ["--quiet", "--output-dir", out]) == EXIT_OK
    (run_dir,) = _run_dirs(out, argv[0])
    return run_dir


def test_simulate_records_command(tmp_path):
    run_dir = _run_one(tmp_path, ["simulate-records", "--n", "500", "--trials", "50", "--seed", "4"])
    assert {"records.csv", "counts.csv", "growth.csv"} <= set(os.listdir(run_dir))
    verdicts = _verdicts(run_dir)
    assert "record_time_void(0.25,1]" in verdicts
    assert verdicts["record_count_harmonic"]["asserted"] is False
    with open(os.path.join(run_dir, "summary.json"), encoding="utf-8") as f:
        assert json.load(f)["summary"]["record_horizon"] == 30.0


def test_xi_n_command(tmp_path):
    run_dir = _run_one(tmp_path, ["xi-n", "--n", "500", "--trials", "60", "--threshold", "1", "--threshold", "2"])
    verdicts = _verdicts(run_dir)
    assert {"xi_n_disjoint_correlation", "void_probability_union", "multi_line_void"} <= set(verdicts)
    assert 0.0 <= verdicts["multi_line_void"]["limit_sampler"] <= 1.0


def test_sample_extremal_command(tmp_path):
    run_dir = _run_one(tmp_path, ["sample-extremal", "--trials", "60", "--seed", "2"])
    assert "paths.csv" in os.listdir(run_dir)
    assert {"jump_chain_vs_planar_t0.5", "jump_chain_vs_planar_t1", "jump_chain_vs_planar_t2"} <= set(_verdicts(run_dir))


def test_sample_prm_command(tmp_path):
    argv = ["sample-prm", "--intensity", "uniform", "--window", "0", "10", "--thin", "0.3", "--trials", "300"]
    run_dir = _run_one(tmp_path, argv)
    verdict = _verdicts(run_dir)["prm_count_poisson_w1"]
    assert verdict["mean"] == pytest.approx(3.0)
    assert verdict["trials"] == 300


def test_dprime_command(tmp_path):
    run_dir = _run_one(tmp_path, ["dprime", "--map", "iid", "--n", "2000", "--trials", "20", "--k-block", "10"])
    assert {"dprime_decreasing_in_k", "dprime_iid_k10"} <= set(_verdicts(run_dir))


def test_block_indep_command(tmp_path):
    argv = ["block-indep", "--n", "1000", "--trials", "100", "--window", "0", "0.4", "--window", "0.5", "0.9",
            "--threshold", "1", "--threshold", "2"]
    run_dir = _run_one(tmp_path, argv)
    verdict = _verdicts(run_dir)["block_independence_joint"]
    assert verdict["predicted"] == pytest.approx(math.exp(-1.2))


def test_dprime_with_too_large_block_exits_2(tmp_path):
    argv = ["dprime", "--n", "100", "--k-block", "100", "--trials", "5", "--output-dir", str(tmp_path)]
    assert run(argv) == EXIT_CONFIG


def test_dprime_with_degenerate_threshold_exits_2(tmp_path):
    # x = 1000 põe u_n abaixo de todo valor do observável: toda observação excede
    argv = ["dprime", "--n", "50", "--threshold", "1000", "--k-block", "10", "--trials", "5",
            "--output-dir", str(tmp_path)]
    assert run(argv) == EXIT_CONFIG


def test_record_horizon_below_one_exits_2(tmp_path):
    argv = ["simulate-records", "--record-horizon", "0.5", "--output-dir", str(tmp_path)]
    assert run(argv) == EXIT_CONFIG
