"""Scenario plumbing, determinism, report emission, and the CLI."""

import numpy as np
import pytest

from stableshot import Report, Scenario, builtin_scenarios, emit, run
from stableshot.cli import main
from stableshot.harness import make_functional, validate


def tiny_scenario(**overrides):
    base = dict(
        name="tiny",
        analyses=("stable_limit",),
        T_ladder=(200.0,),
        replicates=30,
        seed=42,
    )
    base.update(overrides)
    return Scenario(**base)


class TestScenario:
    def test_yaml_round_trip(self, tmp_path):
        sc = tiny_scenario()
        f = tmp_path / "s.yaml"
        sc.to_yaml(f)
        assert Scenario.from_yaml(f) == sc

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown scenario keys"):
            Scenario.from_dict({"name": "x", "bogus": 1})

    def test_validate_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            validate(tiny_scenario(alpha=2.5))

    def test_validate_rejects_unsorted_ladder(self):
        with pytest.raises(ValueError):
            validate(tiny_scenario(T_ladder=(1e4, 1e3)))

    def test_validate_rejects_unknown_analysis(self):
        with pytest.raises(ValueError):
            validate(tiny_scenario(analyses=("nope",)))

    def test_validate_rejects_duplicate_functionals(self):
        with pytest.raises(ValueError):
            validate(tiny_scenario(functionals=("identity", "identity")))

    def test_validate_notes(self):
        notes = validate(tiny_scenario())
        assert any("E[Y]" in n for n in notes)

    def test_make_functional(self):
        assert make_functional("identity").name == "identity"
        assert make_functional("clipped:2.5").sup_norm == 2.5
        assert make_functional("cdf:1").name == "cdf_le_1"
        assert make_functional("idle").name == "idle"
        with pytest.raises(ValueError):
            make_functional("mystery:1")


class TestRun:
    def test_empty_analyses(self):
        rep = run(tiny_scenario(analyses=()))
        assert rep.blocks == {}
        assert rep.all_passed

    def test_deterministic_body(self):
        sc = tiny_scenario()
        a, b = run(sc), run(sc)
        assert a.to_text() == b.to_text()
        za = a.blocks["stable_limit"]["identity"]["samples"][200.0]
        zb = b.blocks["stable_limit"]["identity"]["samples"][200.0]
        assert np.array_equal(za, zb)

    def test_worker_count_does_not_change_results(self):
        sc = tiny_scenario()
        a = run(sc, workers=1)
        b = run(sc, workers=2)
        assert a.to_text() == b.to_text()

    def test_analysis_error_is_contained(self):
        # cdf_rate needs >= 3 ladder points: error lands in its block only
        sc = tiny_scenario(analyses=("cdf_rate", "m1_diagnostic"))
        rep = run(sc)
        assert "error" in rep.blocks["cdf_rate"]
        assert "error" not in rep.blocks["m1_diagnostic"]

    def test_gof_collection(self):
        rep = run(tiny_scenario(analyses=("m1_diagnostic",)))
        gofs = rep.gofs()
        assert len(gofs) == 1
        assert "m1_diagnostic" in gofs[0].name


class TestEmit:
    def test_csv_bundle(self, tmp_path):
        rep = run(tiny_scenario())
        files = emit(rep, tmp_path / "out")
        names = {f.split("/")[-1] for f in map(str, files)}
        assert "report.txt" in names
        assert "scenario_echo.yaml" in names
        assert "gof.csv" in names
        assert any(n.startswith("stable_limit_identity_T") for n in names)

    def test_structured_text_only(self, tmp_path):
        rep = run(tiny_scenario(analyses=()))
        files = emit(rep, tmp_path / "out", fmt="structured-text")
        assert len(files) == 2

    def test_bad_format(self, tmp_path):
        with pytest.raises(ValueError):
            emit(run(tiny_scenario(analyses=())), tmp_path, fmt="json")


class TestCli:
    def test_demo_and_validate(self, tmp_path, capsys):
        out = tmp_path / "scenarios"
        assert main(["demo", "--out", str(out)]) == 0
        produced = sorted(p.name for p in out.iterdir())
        assert "m1.yaml" in produced
        assert main(["validate", "--scenario", str(out / "m1.yaml")]) == 0
        assert "scenario ok" in capsys.readouterr().out

    def test_validate_rejects_garbage(self, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("alpha: 3.0\nname: bad\n")
        assert main(["validate", "--scenario", str(bad)]) == 2

    def test_run_exit_codes(self, tmp_path, capsys):
        cfg = tmp_path / "s.yaml"
        tiny_scenario(analyses=("m1_diagnostic",)).to_yaml(cfg)
        code = main(
            ["run", "--scenario", str(cfg), "--out", str(tmp_path / "r")]
        )
        assert code == 0
        assert (tmp_path / "r" / "report.txt").exists()

    def test_run_seed_override(self, tmp_path):
        cfg = tmp_path / "s.yaml"
        tiny_scenario(analyses=("m1_diagnostic",)).to_yaml(cfg)
        assert (
            main(
                [
                    "run", "--scenario", str(cfg),
                    "--out", str(tmp_path / "r2"), "--seed", "7",
                ]
            )
            == 0
        )
        echoed = (tmp_path / "r2" / "scenario_echo.yaml").read_text()
        assert "seed: 7" in echoed


def test_builtin_scenarios_all_validate():
    for name, sc in builtin_scenarios().items():
        assert sc.name == name
        validate(sc)
