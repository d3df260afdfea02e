import json
import re

import pytest

from stopwright.cli import run
from stopwright.games import BOTH, ONLY_1, ONLY_2
from stopwright.serialize import game_to_doc, stopping_time_to_doc

from fuzz import E1_NODES, make_b1, make_e1, make_r1, negate_process, random_process
import random


@pytest.fixture
def files(tmp_path):
    """Write the standard fixture documents to disk; returns path strings."""
    e1 = make_e1()
    rng = random.Random(47)
    paths = {}

    def put(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
        return paths[name]

    put("e1.json", {"nodes": E1_NODES})
    bad = [dict(n) for n in E1_NODES]
    bad[-1]["prob"] = "1/3"
    put("bad.json", {"nodes": bad})
    put("r1.json", stopping_time_to_doc(make_r1()))
    put("b1.json", stopping_time_to_doc(make_b1()))
    put(
        "stopnow.json",
        {"type": "pure", "stop": {"w1": 1, "w2": 1, "w3": 1, "w4": 1}},
    )
    put(
        "problem.json",
        {
            "values": {"1": {"A": "0", "B": "0"}, "2": {w: "1" for w in e1.atoms}},
            "infinity": {w: "0" for w in e1.atoms},
        },
    )
    table = {}
    for c in (ONLY_1, ONLY_2, BOTH):
        one = random_process(rng, e1)
        table[(1, c)] = one
        table[(2, c)] = negate_process(one)
    from stopwright import stopping_game

    put("game.json", game_to_doc(stopping_game(table), e1))
    return paths


def run_capture(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_good_space(self, files, capsys):
        code, out, _ = run_capture(capsys, ["validate", "--space", files["e1.json"]])
        assert code == 0
        assert json.loads(out) == {"valid": True}

    def test_bad_probability_sum(self, files, capsys):
        code, out, err = run_capture(capsys, ["validate", "--space", files["bad.json"]])
        assert code == 1
        assert out == ""
        message = json.loads(err)
        assert message["error"] == "ProbabilitySumError"

    def test_stopping_time_on_space(self, files, capsys):
        code, out, _ = run_capture(
            capsys, ["validate", "--space", files["e1.json"], "--st", files["r1.json"]]
        )
        assert code == 0
        assert json.loads(out) == {"valid": True}

    def test_missing_file(self, files, capsys):
        code, _, err = run_capture(capsys, ["validate", "--space", "nope.json"])
        assert code == 1
        assert json.loads(err)["error"] == "FileNotFound"


class TestConvert:
    def test_r1_to_behavior_is_b1(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            ["convert", "--space", files["e1.json"], "--st", files["r1.json"], "--to", "behavior"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc == stopping_time_to_doc(make_b1())

    def test_output_round_trips_through_dist(self, files, capsys, tmp_path):
        code, out, _ = run_capture(
            capsys,
            ["convert", "--space", files["e1.json"], "--st", files["r1.json"], "--to", "mixed"],
        )
        assert code == 0
        converted = tmp_path / "converted.json"
        converted.write_text(out)
        code, mixed_dist, _ = run_capture(
            capsys, ["dist", "--space", files["e1.json"], "--st", str(converted)]
        )
        assert code == 0
        code, original_dist, _ = run_capture(
            capsys, ["dist", "--space", files["e1.json"], "--st", files["r1.json"]]
        )
        assert code == 0
        assert json.loads(mixed_dist) == json.loads(original_dist)

    def test_usage_error_on_bad_target(self, files, capsys):
        code, _, _ = run_capture(
            capsys,
            ["convert", "--space", files["e1.json"], "--st", files["r1.json"], "--to", "pure"],
        )
        assert code == 2


class TestDistAndEquiv:
    def test_dist_matches_fixture_table(self, files, capsys):
        code, out, _ = run_capture(
            capsys, ["dist", "--space", files["e1.json"], "--st", files["r1.json"]]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["mass"]["w1"] == {"1": "1/8", "2": "1/8", "inf": "0"}
        assert doc["mass"]["w4"] == {"1": "1/16", "2": "3/16", "inf": "0"}

    def test_equiv_true(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            ["equiv", "--space", files["e1.json"], "--st", files["r1.json"], "--st2", files["b1.json"]],
        )
        assert code == 0
        assert json.loads(out) == {"equivalent": True}

    def test_equiv_false(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            ["equiv", "--space", files["e1.json"], "--st", files["r1.json"], "--st2", files["stopnow.json"]],
        )
        assert code == 0
        assert json.loads(out) == {"equivalent": False}


class TestEvaluation:
    def test_payoff(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            ["payoff", "--space", files["e1.json"], "--st", files["r1.json"], "--problem", files["problem.json"]],
        )
        assert code == 0
        assert json.loads(out) == {"payoff": "3/8"}

    def test_payoff_with_epsilon(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            [
                "payoff", "--space", files["e1.json"], "--st", files["r1.json"],
                "--problem", files["problem.json"], "--epsilon", "5/8",
            ],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["epsilon_optimal"] is True

    def test_snell(self, files, capsys):
        code, out, _ = run_capture(
            capsys, ["snell", "--space", files["e1.json"], "--problem", files["problem.json"]]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == "1"
        assert doc["strategy"]["stop"] == {"w1": 2, "w2": 2, "w3": 2, "w4": 2}

    def test_game_value_and_eq_check(self, files, capsys, tmp_path):
        code, out, _ = run_capture(
            capsys, ["game-value", "--space", files["e1.json"], "--game", files["game.json"]]
        )
        assert code == 0
        doc = json.loads(out)
        p1 = tmp_path / "p1.json"
        p2 = tmp_path / "p2.json"
        p1.write_text(json.dumps(doc["profile"]["player1"]))
        p2.write_text(json.dumps(doc["profile"]["player2"]))
        code, out, _ = run_capture(
            capsys,
            [
                "eq-check", "--space", files["e1.json"], "--game", files["game.json"],
                "--st", str(p1), "--st2", str(p2), "--epsilon", "0",
            ],
        )
        assert code == 0
        assert json.loads(out)["equilibrium"] is True

    def test_game_payoff_and_br(self, files, capsys):
        code, out, _ = run_capture(
            capsys,
            [
                "game-payoff", "--space", files["e1.json"], "--game", files["game.json"],
                "--st", files["r1.json"], "--st2", files["b1.json"],
            ],
        )
        assert code == 0
        got = json.loads(out)
        code, out, _ = run_capture(
            capsys,
            [
                "br", "--space", files["e1.json"], "--game", files["game.json"],
                "--st", files["b1.json"], "--player", "1",
            ],
        )
        assert code == 0
        br = json.loads(out)
        # the best response is at least as good as playing r1 against b1
        from fractions import Fraction

        assert Fraction(br["value"]) >= Fraction(got["player1"])


class TestSample:
    def test_deterministic_given_seed(self, files, capsys):
        argv = ["sample", "--space", files["e1.json"], "--st", files["r1.json"],
                "--samples", "5000", "--seed", "7"]
        code, first, _ = run_capture(capsys, argv)
        assert code == 0
        code, second, _ = run_capture(capsys, argv)
        assert first == second
        doc = json.loads(first)
        assert doc["seed"] == 7
        assert sum(sum(row.values()) for row in doc["counts"].values()) == 5000

    def test_env_seed_override(self, files, capsys, monkeypatch):
        monkeypatch.setenv("STOPWRIGHT_SEED", "99")
        code, out, _ = run_capture(
            capsys,
            ["sample", "--space", files["e1.json"], "--st", files["r1.json"], "--samples", "10"],
        )
        assert code == 0
        assert json.loads(out)["seed"] == 99

    def test_explicit_seed_beats_env(self, files, capsys, monkeypatch):
        monkeypatch.setenv("STOPWRIGHT_SEED", "99")
        code, out, _ = run_capture(
            capsys,
            ["sample", "--space", files["e1.json"], "--st", files["r1.json"],
             "--samples", "10", "--seed", "3"],
        )
        assert code == 0
        assert json.loads(out)["seed"] == 3

    def test_zero_samples_is_usage_error(self, files, capsys):
        code, _, _ = run_capture(
            capsys,
            ["sample", "--space", files["e1.json"], "--st", files["r1.json"], "--samples", "0"],
        )
        assert code == 2


class TestOutputFormats:
    def test_table_and_json_carry_identical_numbers(self, files, capsys):
        code, json_out, _ = run_capture(
            capsys, ["dist", "--space", files["e1.json"], "--st", files["r1.json"]]
        )
        assert code == 0
        code, table_out, _ = run_capture(
            capsys,
            ["dist", "--space", files["e1.json"], "--st", files["r1.json"], "--format", "table"],
        )
        assert code == 0
        doc = json.loads(json_out)
        rows = {}
        for line in table_out.strip().splitlines():
            path, value = re.split(r"\s{2,}", line.strip(), maxsplit=1)
            rows[path] = value
        for atom, row in doc["mass"].items():
            for t, value in row.items():
                assert rows[f"mass.{atom}.{t}"] == value

    def test_unknown_subcommand_is_usage_error(self, capsys):
        code, _, _ = run_capture(capsys, ["transmogrify"])
        assert code == 2

    def test_missing_required_flag_is_usage_error(self, files, capsys):
        code, _, _ = run_capture(capsys, ["dist", "--space", files["e1.json"]])
        assert code == 2
