import json

import pytest

from uavgrid.cli import main
from uavgrid.connectivity import ScenarioConfig, estimate_distribution, mixture_cdf, outage
from uavgrid.geometry import PRESETS, RadioParams
from uavgrid.los import Placement
from uavgrid.optimize import HeightSearchSpec, optimize_height


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_distribution_header_and_pipeline_agreement(capsys):
    code, out, err = run_cli(
        ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "100",
         "--n-realizations", "1500", "--seed", "3"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "gamma,F_intersection,F_street,F_mixture"
    assert len(lines) == 102
    assert lines[1].split(",")[0] == "0.0"
    assert lines[-1].split(",")[0] == "1.0"
    assert float(lines[-1].split(",")[3]) == 1.0
    # the per-km2 flag and the per-m2 api hit the same numbers
    radio = RadioParams(r_max=250.0, h_uav=100.0, h_v=10.0, lambda_uav=20 * 1e-6)
    cfg = ScenarioConfig(city=PRESETS["urban"], radio=radio, n_realizations=1500, seed=3)
    dists = estimate_distribution(cfg)
    mix = mixture_cdf(dists[Placement.INTERSECTION], dists[Placement.STREET], PRESETS["urban"])
    row08 = next(l for l in lines[1:] if l.startswith("0.8,"))
    assert float(row08.split(",")[3]) == outage(mix, 0.8)


def test_output_file_and_byte_reproducibility(tmp_path, capsys):
    f1, f2, f3 = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    base = ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "100",
            "--n-realizations", "1200", "--seed", "5"]
    assert main(base + ["--output", str(f1)]) == 0
    assert main(base + ["--output", str(f2)]) == 0
    assert main(base + ["--output", str(f3), "--workers", "2"]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()
    assert f1.read_bytes() == f3.read_bytes()


def test_outage_curve_matches_distribution_at_shared_height(capsys):
    code, out, _ = run_cli(
        ["outage-curve", "--preset", "urban", "--lambda-uav", "20",
         "--h-lo", "100", "--h-hi", "110", "--h-step", "5",
         "--n-realizations", "1500", "--seed", "3"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "h_uav_m,outage"
    assert [l.split(",")[0] for l in lines[1:]] == ["100.0", "105.0", "110.0"]
    code2, out2, _ = run_cli(
        ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "100",
         "--n-realizations", "1500", "--seed", "3"], capsys)
    assert code2 == 0
    row08 = next(l for l in out2.strip().split("\n")[1:] if l.startswith("0.8,"))
    # same seed and same envelope caps: the two commands agree exactly
    assert float(row08.split(",")[3]) == float(lines[1].split(",")[1])


def test_optimize_matches_api(capsys):
    code, out, _ = run_cli(
        ["optimize", "--preset", "urban", "--lambda-uav", "30",
         "--h-lo", "120", "--h-hi", "180", "--grid-step", "20",
         "--n-realizations", "1500", "--seed", "2"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "h_star_m,outage_star"
    h, o = (float(v) for v in lines[1].split(","))
    assert 120.0 <= h <= 180.0 and 0.0 <= o <= 1.0
    want = optimize_height(PRESETS["urban"], 250.0, 10.0, 30 * 1e-6,
                           HeightSearchSpec(h_lo=120.0, h_hi=180.0, grid_step=20.0),
                           n_realizations=1500, seed=2)
    assert (h, o) == want


def test_contour_output_and_target_report(capsys):
    code, out, err = run_cli(
        ["contour", "--preset", "urban", "--lambda-lo", "10", "--lambda-hi", "20",
         "--lambda-step", "10", "--h-lo", "100", "--h-hi", "150", "--h-step", "50",
         "--n-realizations", "800", "--seed", "4", "--target-outage", "1.0"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "lambda_per_km2,h_uav_m,outage"
    assert len(lines) == 5
    assert lines[1].startswith("10.0,100.0,")
    assert lines[2].startswith("10.0,150.0,")
    assert lines[3].startswith("20.0,100.0,")
    assert "min density 10 per km2" in err


def test_validate_cli_pass(capsys):
    code, out, err = run_cli(["validate", "--cases", "4", "--n-draws", "3000", "--seed", "3"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "case_id,d_m,phi_rad,placement,p_analytic,p_oracle,se,pass"
    assert len(lines) == 5
    assert "of 4 cases beyond" in err


def test_validate_cli_flags_disagreement(capsys, monkeypatch):
    import uavgrid.oracle as oracle_mod

    real = oracle_mod.empirical_los_probability

    def skewed(link, city, placement, n, rng):
        p, se = real(link, city, placement, n, rng)
        return max(0.0, p - 0.5), se

    monkeypatch.setattr(oracle_mod, "empirical_los_probability", skewed)
    code, out, err = run_cli(["validate", "--cases", "4", "--n-draws", "2000", "--seed", "3"], capsys)
    assert code == 1


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# base scenario\n"
        "preset=urban\n"
        "lambda-uav=20\n"
        "h_uav=100\n"
        "n-realizations=900\n"
        "seed=11\n"
    )
    code, out, _ = run_cli(["distribution", "--config", str(cfg)], capsys)
    assert code == 0
    code2, out2, _ = run_cli(["distribution", "--config", str(cfg), "--seed", "12"], capsys)
    assert code2 == 0
    assert out != out2
    code3, out3, _ = run_cli(["distribution", "--config", str(cfg), "--seed", "11"], capsys)
    assert code3 == 0
    assert out == out3


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no-such-option=1\n")
    code, _, err = run_cli(
        ["distribution", "--config", str(cfg), "--lambda-uav", "20", "--h-uav", "100",
         "--n-realizations", "100"], capsys)
    assert code == 2
    assert "unknown option" in err


def test_bad_geometry_exits_2(capsys):
    code, _, err = run_cli(
        ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "400",
         "--n-realizations", "100"], capsys)
    assert code == 2
    assert "error:" in err


def test_preset_conflicts_with_explicit_city(capsys):
    code, _, err = run_cli(
        ["distribution", "--preset", "urban", "--mu-s", "10", "--lambda-uav", "20",
         "--h-uav", "100", "--n-realizations", "100"], capsys)
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run_cli(["distribution", "--nope", "1"], capsys)
    assert code == 2


def test_missing_required_flag_exits_2(capsys):
    code, _, _ = run_cli(["distribution", "--preset", "urban"], capsys)
    assert code == 2


def test_explicit_city_flags_reproduce_preset(capsys):
    code, out, _ = run_cli(
        ["distribution", "--mu-s", "13", "--mu-b", "45", "--mu-h", "19",
         "--lambda-uav", "20", "--h-uav", "100", "--n-realizations", "600", "--seed", "2"], capsys)
    code2, out2, _ = run_cli(
        ["distribution", "--preset", "urban",
         "--lambda-uav", "20", "--h-uav", "100", "--n-realizations", "600", "--seed", "2"], capsys)
    assert code == 0 and code2 == 0
    assert out == out2


def test_structured_format(capsys):
    args = ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "100",
            "--n-realizations", "800", "--seed", "9"]
    code, out, _ = run_cli(args + ["--format", "structured"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["tool"] == "uavgrid"
    assert doc["command"] == "distribution"
    assert doc["seed"] == 9
    assert doc["n_realizations"] == 800
    assert doc["version"]
    assert doc["revision"]
    assert doc["columns"] == ["gamma", "F_intersection", "F_street", "F_mixture"]
    assert len(doc["rows"]) == 101
    code2, out2, _ = run_cli(args, capsys)
    csv_rows = [l.split(",") for l in out2.strip().split("\n")[1:]]
    assert [float(r[3]) for r in csv_rows] == [row[3] for row in doc["rows"]]


def test_shared_envelope_couples_cli_runs(capsys):
    """Two ranges under one point envelope: the longer range dominates."""
    common = ["distribution", "--preset", "urban", "--lambda-uav", "20", "--h-uav", "100",
              "--n-realizations", "1500", "--seed", "7", "--d-cap", "287"]
    code_a, out_a, _ = run_cli(common + ["--r-max", "300"], capsys)
    code_b, out_b, _ = run_cli(common + ["--r-max", "200"], capsys)
    assert code_a == 0 and code_b == 0
    fa = [float(l.split(",")[3]) for l in out_a.strip().split("\n")[1:]]
    fb = [float(l.split(",")[3]) for l in out_b.strip().split("\n")[1:]]
    assert all(x <= y for x, y in zip(fa, fb))
