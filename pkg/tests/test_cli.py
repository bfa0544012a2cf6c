import json
import subprocess
import sys

import pytest

from nonleighton.cli import main
from nonleighton.config import ConfigError, RunConfig


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, argv in {
        "K": ["build", "K"],
        "L": ["build", "L"],
        "bs": ["build", "bs", "2", "4"],
        "tree": ["build", "tree", "2"],
        "mapL": ["build", "map-L", "1", "-3", "3"],
        "mapKlit": ["build", "map-K", "1", "-3", "3", "--rule", "literal"],
    }.items():
        p = tmp_path / f"{name}.json"
        assert main(argv + ["--out", str(p), "--quiet"]) == 0
        paths[name] = str(p)
    capsys.readouterr()
    return paths


class TestExitCodes:
    def test_no_arguments(self, capsys):
        code, _, err = run([], capsys)
        assert code == 2 and "usage" in err

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"], capsys)[0] == 2

    def test_bad_build_params(self, capsys):
        assert run(["build", "bs", "2"], capsys)[0] == 2
        assert run(["build", "bs", "x", "y"], capsys)[0] == 2
        assert run(["build", "ball", "1", "3", "3"], capsys)[0] == 2
        assert run(["build", "nothing"], capsys)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(["pi1", "--complex", str(tmp_path / "absent.json")], capsys)[0] == 2

    def test_malformed_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run(["pi1", "--complex", str(p)], capsys)[0] == 2

    def test_deviation_is_one(self, capsys, files):
        code, out, _ = run(["verify-cover", "--map", files["mapKlit"], "--quiet"], capsys)
        assert code == 1
        assert json.loads(out)["pass"] is False


class TestCommands:
    def test_build_and_pi1(self, capsys, files):
        code, out, _ = run(["pi1", "--complex", files["L"], "--spanning-tree", "z", "--quiet"], capsys)
        assert code == 0
        p = json.loads(out)
        assert len(p["generators"]) == 6 and len(p["relators"]) == 5

    def test_pi1_bad_tree(self, capsys, files):
        assert run(["pi1", "--complex", files["L"], "--spanning-tree", "y,z"], capsys)[0] == 2

    def test_simplify_text(self, capsys, tmp_path):
        log = tmp_path / "log.json"
        code, out, _ = run(["simplify", "--generators", "a", "b", "x", "--relator", "x a^-1 b^-1",
                            "--relator", "[a, x]", "--log", str(log), "--quiet"], capsys)
        assert code == 0
        assert len(json.loads(out)["generators"]) == 2
        assert json.loads(log.read_text())

    def test_simplify_needs_input(self, capsys):
        assert run(["simplify"], capsys)[0] == 2

    def test_rs(self, capsys):
        code, out, _ = run(["rs", "--generators", "c", "y", "t", "--relator", "y^-1 c^2 y c^-2",
                            "--relator", "t^-1 c^2 t c^-8", "--modulus", "2", "--image", "c:1",
                            "--designated", "c", "--quiet"], capsys)
        assert code == 0
        d = json.loads(out)
        assert d["index"] == 2 and len(d["generators"]) == 5

    def test_rs_bad_hom(self, capsys):
        assert run(["rs", "--generators", "a", "--relator", "a^3", "--modulus", "2",
                    "--image", "a:1", "--designated", "a"], capsys)[0] == 2

    def test_verify_cover_map(self, capsys, files):
        code, out, _ = run(["verify-cover", "--map", files["mapL"], "--quiet"], capsys)
        assert code == 0 and json.loads(out)["pass"] is True

    def test_verify_cover_voltage(self, capsys, files, tmp_path):
        v = tmp_path / "v.json"
        v.write_text(json.dumps({"sheets": 2, "permutations": {"c_w": [2, 1], "t1": [2, 1]}}))
        assert run(["verify-cover", "--complex", files["L"], "--voltage", str(v)], capsys)[0] == 0
        v.write_text(json.dumps({"sheets": 2, "permutations": {"c": [2, 1]}}))
        code, out, _ = run(["verify-cover", "--complex", files["K"], "--voltage", str(v)], capsys)
        assert code == 1 and "r0" in out

    def test_search(self, capsys, files):
        code, out, _ = run(["search-common-cover", "--a", files["K"], "--b", files["bs"],
                            "--max-a", "1", "--max-b", "1", "--quiet"], capsys)
        assert code == 0
        assert json.loads(out)["found"] is False

    def test_export(self, capsys, files):
        code, out, _ = run(["export", "--input", files["tree"], "--format", "dot"], capsys)
        assert code == 0 and out.startswith("digraph") and "(0,1)" in out
        code, out, _ = run(["export", "--input", files["mapL"], "--format", "dot"], capsys)
        assert code == 0 and "->" in out
        code, out, _ = run(["export", "--input", files["K"], "--format", "json"], capsys)
        assert json.loads(out)["vertices"] == ["v"]

    def test_paper_verify(self, capsys):
        code, out, err = run(["paper-verify"], capsys)
        report = json.loads(out)
        assert code == 0 and report["pass"] is True
        assert len(report["steps"]) == 12
        assert "DEVIATION" not in err

    def test_paper_verify_literal_rule_deviates(self, capsys):
        code, out, _ = run(["paper-verify", "--k-rule", "literal", "--quiet"], capsys)
        assert code == 1
        step = next(s for s in json.loads(out)["steps"] if s["name"] == "covering onto K")
        assert step["ok"] is False

    def test_paper_verify_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"tree_radius": 1, "heights": [-4, 4], "sheets": [2, 2]}))
        code, out, _ = run(["paper-verify", "--config", str(cfg), "--quiet"], capsys)
        assert code == 0
        assert json.loads(out)["config"]["tree_radius"] == 1
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(["paper-verify", "--config", str(cfg)], capsys)[0] == 2

    def test_timings_are_opt_in(self, capsys):
        _, out, _ = run(["paper-verify", "--quiet"], capsys)
        assert "metadata" not in json.loads(out)
        _, out, _ = run(["paper-verify", "--quiet", "--timings"], capsys)
        assert "wall_seconds" in json.loads(out)["metadata"]


DETERMINISM_CASES = [
    ["build", "L"],
    ["build", "tree", "2"],
    ["build", "ball", "1", "-2", "2"],
    ["build", "map-K", "1", "-3", "3"],
    ["simplify", "--generators", "a", "b", "--relator", "a b a^-1 b^-1"],
    ["rs", "--generators", "a", "b", "--relator", "b^-1 a^4 b a^-16", "--modulus", "4", "--image", "a:1",
     "--designated", "a"],
    ["paper-verify"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: "-".join(a[:2]))
def test_outputs_are_byte_deterministic(argv, capsys):
    first = run(argv + ["--quiet"], capsys)[1]
    second = run(argv + ["--quiet"], capsys)[1]
    assert first == second and first


def test_module_entry_point_matches_in_process(capsys):
    res = subprocess.run([sys.executable, "-m", "nonleighton", "build", "K", "--quiet"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == run(["build", "K", "--quiet"], capsys)[1]


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.heights == (-8, 8) and cfg.k_rule == "corrected"
        assert RunConfig.from_dict(cfg.to_dict()) == cfg

    @pytest.mark.parametrize("bad", [
        {"tree_radius": -1},
        {"heights": [3, 3]},
        {"k_rule": "other"},
        {"sheets": [0, 1]},
        {"regenerate_certificates": "yes"},
        {"unknown": 1},
    ])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(bad)
