"""Command-line interface: subcommands, formats, and exit codes."""

import json
from fractions import Fraction as F
from pathlib import Path

from click.testing import CliRunner

import transportgames as tg
from transportgames.cli import main

SWEEPS = Path(__file__).resolve().parent.parent / "sweeps"

runner = CliRunner()


def write_instance(tmp_path, inst, name="inst.json"):
    path = tmp_path / name
    tg.save_instance(inst, path)
    return str(path)


class TestValidate:
    def test_valid_file(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_five_chain())
        result = runner.invoke(main, ["validate", path])
        assert result.exit_code == 0
        assert "OK" in result.output

    def test_asymmetric_file(self, tmp_path):
        doc = tg.core.instance_to_dict(tg.gen_five_chain())
        doc["distances"][0][1] = 99
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1
        assert "asymmetry" in result.output

    def test_missing_permutations(self, tmp_path):
        doc = tg.core.instance_to_dict(tg.gen_five_chain())
        del doc["permutations"]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1

    def test_unreadable_path(self):
        result = runner.invoke(main, ["validate", "/no/such/file.json"])
        assert result.exit_code == 3


class TestGenerate:
    def test_writes_file(self, tmp_path):
        out = tmp_path / "chain.json"
        result = runner.invoke(main, ["generate", "five-chain", "-o", str(out)])
        assert result.exit_code == 0
        assert tg.load_instance(out) == tg.gen_five_chain()

    def test_stdout_roundtrip(self):
        result = runner.invoke(main, ["generate", "uniform-star", "--n", "3", "--m", "2", "--epsilon", "1/4"])
        assert result.exit_code == 0
        inst = tg.loads_instance(result.output)
        assert inst == tg.gen_uniform_star(3, 2, F(1, 4), "identity")

    def test_rational_option(self, tmp_path):
        out = tmp_path / "spike.json"
        result = runner.invoke(main, ["generate", "nonmetric-spike", "--x", "7/3", "-o", str(out)])
        assert result.exit_code == 0
        assert tg.load_instance(out) == tg.gen_nonmetric_spike(F(7, 3))

    def test_domain_error_exit(self):
        result = runner.invoke(main, ["generate", "nonmetric-spike", "--x", "0"])
        assert result.exit_code == 1

    def test_unknown_family_rejected(self):
        result = runner.invoke(main, ["generate", "mystery"])
        assert result.exit_code != 0


class TestAnalyzeCommand:
    def test_sequential_json(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_four_line())
        result = runner.invoke(main, ["analyze", path, "--mode", "sequential", "--social", "E", "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        block = doc["functions"][0]
        assert block["optimal_value"] == "3"
        assert F(block["worst_ratio"]) == tg.spoa(tg.gen_four_line(), "E").ratio
        assert F(block["best_ratio"]) >= F(5, 3)

    def test_simultaneous_contains_known_equilibrium(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_five_chain())
        result = runner.invoke(main, ["analyze", path, "--mode", "simultaneous", "--social", "U", "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["functions"][0]["equilibrium_count"] >= 1
        found = tg.enumerate_nash(tg.gen_five_chain())
        assert found.contains((2, 1, 1, 2, 1))

    def test_deterministic_output(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_four_line())
        args = ["analyze", path, "--mode", "sequential", "--format", "json"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_order_flag(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_four_line())
        result = runner.invoke(
            main, ["analyze", path, "--mode", "sequential", "--order", "4,3,2,1", "--format", "json"]
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["order"] == [4, 3, 2, 1]

    def test_bad_order(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_four_line())
        result = runner.invoke(main, ["analyze", path, "--mode", "sequential", "--order", "1,2"])
        assert result.exit_code == 1

    def test_budget_exit_code(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_five_chain())
        result = runner.invoke(main, ["analyze", path, "--budget-outcomes", "4"])
        assert result.exit_code == 2

    def test_symmetry_reduction_flag(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_five_chain())
        plain = runner.invoke(main, ["analyze", path, "--format", "json"])
        reduced = runner.invoke(main, ["analyze", path, "--format", "json", "--symmetry-reduction"])
        assert reduced.exit_code == 0
        assert json.loads(plain.output)["functions"] == json.loads(reduced.output)["functions"]

    def test_csv_format(self, tmp_path):
        path = write_instance(tmp_path, tg.gen_four_line())
        result = runner.invoke(main, ["analyze", path, "--social", "D,E", "--format", "csv"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 1 + 2 * 2


class TestVerifyBounds:
    def test_passing_sweep(self):
        result = runner.invoke(main, ["verify-bounds", "--spec", str(SWEEPS / "zero_cluster_utilitarian.json")])
        assert result.exit_code == 0
        assert "pass" in result.output

    def test_failing_sweep(self, tmp_path):
        spec = {
            "family": "zero-cluster-single",
            "points": [{"n": 3}],
            "bounds": [{"function": "U", "measure": "spoa", "relation": "eq", "expected": "2*n"}],
        }
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(spec))
        result = runner.invoke(main, ["verify-bounds", "--spec", str(path)])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_missing_spec_file(self):
        result = runner.invoke(main, ["verify-bounds", "--spec", "/no/such/sweep.json"])
        assert result.exit_code == 3
