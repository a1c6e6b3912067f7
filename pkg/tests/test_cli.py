import csv
import json

import pytest

from dcsiting.cli import main
from dcsiting.config import ConfigError, RunConfig, load_config
from dcsiting.network import builtin_ieee33, write_network
from dcsiting.objective import CandidateSolution, WeightVector

FAST = ["--population-size", "10", "--iterations", "4"]


def read_json(path):
    return json.loads(path.read_text())


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_loadflow_builtin(tmp_path, capsys):
    assert main(["loadflow", "--builtin", "ieee33", "--out", str(tmp_path)]) == 0
    lf = read_json(tmp_path / "loadflow.json")
    assert lf["converged"]
    assert lf["totals"]["loss_kw"] == pytest.approx(202.67, rel=0.005)
    assert lf["totals"]["vdi"] == pytest.approx(0.1171, rel=0.02)
    assert lf["totals"]["min_v_bus"] == 18
    assert len(lf["buses"]) == 33 and len(lf["branches"]) == 32
    prof = read_csv(tmp_path / "voltage_profile.csv")
    assert prof[0] == ["bus", "v_pu"] and len(prof) == 34
    assert "202.6" in capsys.readouterr().out


def test_loadflow_with_dg(tmp_path):
    args = ["loadflow", "--builtin", "ieee33", "--dg-bus", "14", "--dg-kw", "1097.7", "--out", str(tmp_path)]
    assert main(args) == 0
    t = read_json(tmp_path / "loadflow.json")["totals"]
    assert t["loss_kw"] == pytest.approx(129.37, rel=0.01)
    assert t["min_v_pu"] == pytest.approx(0.9333, abs=0.002)


def test_loadflow_dg_flags_paired(tmp_path, capsys):
    assert main(["loadflow", "--dg-bus", "14", "--out", str(tmp_path)]) == 1
    assert "together" in capsys.readouterr().err


def test_loadflow_loop_file(tmp_path, capsys):
    (tmp_path / "buses.csv").write_text("bus,p_kw,q_kvar\n1,0,0\n2,100,50\n3,100,50\n")
    (tmp_path / "branches.csv").write_text("from,to,r_ohm,x_ohm\n1,2,0.1,0.1\n2,3,0.1,0.1\n3,1,0.1,0.1\n")
    rc = main(["loadflow", "--buses", str(tmp_path / "buses.csv"),
               "--branches", str(tmp_path / "branches.csv"), "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "radial" in capsys.readouterr().err


def test_loadflow_missing_file(tmp_path):
    assert main(["loadflow", "--buses", str(tmp_path / "nope.csv"),
                 "--branches", str(tmp_path / "nope2.csv"), "--out", str(tmp_path)]) == 1


def test_loadflow_nonconvergence_exit_2(tmp_path):
    net = builtin_ieee33()
    write_network(net, tmp_path / "b.csv", tmp_path / "l.csv")
    rows = (tmp_path / "b.csv").read_text().splitlines()
    heavy = [rows[0]] + [
        ",".join([r.split(",")[0], str(float(r.split(",")[1]) * 40), str(float(r.split(",")[2]) * 40)])
        for r in rows[1:]
    ]
    (tmp_path / "b.csv").write_text("\n".join(heavy) + "\n")
    rc = main(["loadflow", "--buses", str(tmp_path / "b.csv"), "--branches", str(tmp_path / "l.csv"),
               "--out", str(tmp_path / "o")])
    assert rc == 2
    assert read_json(tmp_path / "o" / "loadflow.json")["converged"] is False


def test_optimize_normalizes_weights(tmp_path, problem):
    assert main(["optimize", "--builtin", "ieee33", "--weights", "2,1,1", "--seed", "1",
                 *FAST, "--out", str(tmp_path)]) == 0
    res = read_json(tmp_path / "scenario_result.json")
    assert res["result"]["weights"] == [0.5, 0.25, 0.25]
    assert res["breakdown"]["weights"] == [0.5, 0.25, 0.25]
    assert res["breakdown"]["penalty"] == 0
    cand = CandidateSolution(res["result"]["bus"], res["result"]["dg_kw_exact"])
    bd = problem.evaluate(cand, WeightVector(0.5, 0.25, 0.25))
    assert res["breakdown"]["f"] == round(bd.f, 8)
    conv = read_csv(tmp_path / "ga_convergence.csv")
    assert conv[0] == ["generation", "best_f"] and len(conv) == 5


def test_optimize_deterministic(tmp_path):
    args = ["optimize", "--weights", "0.8,0.1,0.1", "--seed", "1", *FAST]
    main([*args, "--out", str(tmp_path / "a")])
    main([*args, "--out", str(tmp_path / "b")])
    a = read_json(tmp_path / "a" / "scenario_result.json")
    b = read_json(tmp_path / "b" / "scenario_result.json")
    a.pop("generated_at"), b.pop("generated_at")
    assert a == b


@pytest.mark.parametrize("weights", ["0.8,0.1", "a,b,c", "0,0,0", "-1,1,1"])
def test_optimize_bad_weights(tmp_path, weights, capsys):
    assert main(["optimize", f"--weights={weights}", "--out", str(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err


def test_scenario_outputs(tmp_path):
    rc = main(["scenario", "--builtin", "ieee33", "--seed", "0", *FAST, "--out", str(tmp_path)])
    final = read_json(tmp_path / "final_design.json")
    assert rc == (0 if final["converged"] else 3)
    rows = read_csv(tmp_path / "scenarios.csv")
    assert rows[0] == ["label", "w1", "w2", "w3", "bus", "dg_kw", "investment_usd",
                       "loss_kw", "vdi", "min_v", "converged"]
    base, a, b, c = rows[1:5]
    assert base[0] == "Base"
    assert float(base[7]) == pytest.approx(202.67, rel=0.005)
    assert float(base[8]) == pytest.approx(0.1171, rel=0.02)
    assert [r[1:4] for r in (a, b, c)] == [["0.8", "0.1", "0.1"], ["0.1", "0.8", "0.1"], ["0.4", "0.2", "0.4"]]
    assert rows[-1][0] == "Final"
    sc = read_json(tmp_path / "scenarios.json")
    contrib = [s["dg_kw_exact"] for s in sc["scenarios"] if s["label"] in final["contributing"]]
    assert final["dg_kw_exact"] == pytest.approx(sum(contrib) / len(contrib), rel=1e-9)
    for s in sc["scenarios"]:
        assert (tmp_path / f"ga_convergence_{s['label']}.csv").is_file()
        assert (tmp_path / f"voltage_profile_{s['label']}.csv").is_file()
    assert (tmp_path / "voltage_profile_Final.csv").is_file()


def test_scenario_exhausted_exit_3(tmp_path):
    # seed 0 picks three distinct buses for A, B and C
    rc = main(["scenario", "--seed", "0", "--s-max", "3", "--out", str(tmp_path)])
    assert rc == 3
    assert read_json(tmp_path / "final_design.json")["converged"] is False


def test_scenario_s_max_too_small(tmp_path):
    assert main(["scenario", "--s-max", "2", "--out", str(tmp_path)]) == 1


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("population_size: 10\niterations: 3\nseed: 7\nout: fromfile\n")
    loaded = load_config(cfg)
    assert (loaded.population_size, loaded.iterations, loaded.seed) == (10, 3, 7)
    assert main(["optimize", "--config", str(cfg), "--weights", "1,1,1", "--seed", "8",
                 "--out", str(tmp_path / "o")]) == 0
    res = read_json(tmp_path / "o" / "scenario_result.json")
    assert len(read_csv(tmp_path / "o" / "ga_convergence.csv")) == 4
    assert res["evaluations"] <= 30
    assert not (tmp_path / "fromfile").exists()


def test_config_relative_paths(tmp_path):
    write_network(builtin_ieee33(), tmp_path / "buses.csv", tmp_path / "branches.csv")
    (tmp_path / "run.yaml").write_text("buses: buses.csv\nbranches: branches.csv\n")
    cfg = load_config(tmp_path / "run.yaml")
    assert cfg.network() == builtin_ieee33()


@pytest.mark.parametrize("text", ["bogus_key: 1\n", "- a\n- b\n", "seed: -1\n", "iterations: 2.5\n"])
def test_config_rejects(tmp_path, text):
    (tmp_path / "c.yaml").write_text(text)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "c.yaml")


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["optimize", "--seed", "x"])
    assert exc.value.code == 1


def test_config_missing_file(tmp_path):
    assert main(["loadflow", "--config", str(tmp_path / "absent.yaml")]) == 1


def test_overrides_ignore_none():
    assert RunConfig().with_overrides(seed=None, out=None) == RunConfig()
