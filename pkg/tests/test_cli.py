import json
from pathlib import Path

import pytest

from zolab.cli import main
from zolab.density import pair_from_json
from zolab.graphs import Graph, graph_to_json, read_graph


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "k3.json"
    path.write_text(graph_to_json(Graph.complete(3)))
    return str(path)


@pytest.fixture
def c5(tmp_path):
    path = tmp_path / "c5.json"
    path.write_text(graph_to_json(Graph.cycle(5)))
    return str(path)


@pytest.fixture
def c6(tmp_path):
    path = tmp_path / "c6.json"
    path.write_text(graph_to_json(Graph.cycle(6)))
    return str(path)


class TestBasicCommands:
    def test_density(self, triangle, capsys):
        assert main(["density", triangle]) == 0
        assert capsys.readouterr().out.strip() == "1"

    def test_density_json(self, triangle, capsys):
        assert main(["--json-out", "density", triangle]) == 0
        assert json.loads(capsys.readouterr().out) == {"density": "1"}

    def test_balanced(self, triangle, capsys):
        assert main(["balanced", triangle]) == 0
        assert "strictly balanced" in capsys.readouterr().out

    def test_eval_and_diameter(self, c5, tmp_path, capsys):
        sentence = tmp_path / "d.txt"
        assert main(["diameter", "--d", "2", "--emit", str(sentence)]) == 0
        assert main(["eval", "--graph", c5, "--formula", str(sentence)]) == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_phi_renders_and_evaluates(self, triangle, tmp_path, capsys):
        sentence = tmp_path / "phi.txt"
        assert main(["phi", "--k", "3", "--ell", "1", "--emit", str(sentence)]) == 0
        assert main(["eval", "--graph", triangle, "--formula", str(sentence)]) == 0
        assert capsys.readouterr().out.strip() == "true"


class TestChainCommands:
    def test_chain_to_density_pipeline(self, tmp_path, capsys):
        graph = tmp_path / "chain.json"
        assert main(
            ["chain", "--k", "4", "--ell", "5", "--emit", str(graph)]
        ) == 0
        capsys.readouterr()
        assert main(["density", str(graph)]) == 0
        assert capsys.readouterr().out.strip() == "20/9"

    def test_chain_json_payload(self, capsys):
        assert main(["--json-out", "chain", "--k", "3", "--ell", "2"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["n"] == 5
        assert obj["alpha"] == "5/7"

    def test_sweep(self, capsys):
        assert main(["--json-out", "chain", "sweep", "--k", "4", "--max-ell", "3"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["ell0"] == 1

    def test_alpha(self, capsys):
        assert main(
            ["--json-out", "chain", "alpha", "--k", "3", "--epsilon", "1/10"]
        ) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj == {"ell": 7, "alpha": "10/17"}


class TestPairCommand:
    def test_classify_and_safety(self, tmp_path, capsys):
        from zolab.density import RootedPair, pair_to_json

        pair = RootedPair.induced(Graph.from_edges(3, [(0, 2), (1, 2)]), [0, 1])
        path = tmp_path / "pair.json"
        path.write_text(json.dumps(pair_to_json(pair)))
        assert main(
            ["--json-out", "pair", str(path), "--alpha", "1/3", "--safe", "strict"]
        ) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["classification"] == "sparse"
        assert obj["safe"] is True


class TestGameCommands:
    def test_solve(self, c5, c6, capsys):
        assert main(
            ["--json-out", "game", "solve",
             "--left", c5, "--right", c6, "--k", "3", "--n", "3"]
        ) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["winner"] == "Spoiler"
        assert obj["winnerByRounds"][0] == "Duplicator"

    def test_play_optimal_pair(self, c5, c6, capsys):
        assert main(
            ["--json-out", "game", "play", "--left", c5, "--right", c6,
             "--k", "3", "--n", "3", "--spoiler", "optimal",
             "--duplicator", "optimal", "--seed", "5"]
        ) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["winner"] == "Spoiler"

    def test_play_tree_agent(self, c5, capsys):
        assert main(
            ["--json-out", "game", "play", "--left", c5, "--right", c5,
             "--k", "3", "--n", "2", "--spoiler", "random",
             "--duplicator", "tree", "--seed", "3"]
        ) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["winner"] in ("Duplicator", "Spoiler")


class TestTreeCommands:
    def test_build_then_graph(self, triangle, tmp_path, capsys):
        tree_path = tmp_path / "tree.json"
        assert main(
            ["tree", "build", "--graph", triangle, "--pebbled", "0,1",
             "--k", "3", "--depth", "1", "--refine", "--emit", str(tree_path)]
        ) == 0
        obj = json.loads(tree_path.read_text())
        assert obj["pebbledCount"] == 2
        pair_path = tmp_path / "pair.json"
        assert main(
            ["tree", "graph", "--tree", str(tree_path), "--emit", str(pair_path)]
        ) == 0
        pair = pair_from_json(json.loads(pair_path.read_text()))
        assert pair.host.n == 3
        assert pair.host.num_edges == 3


class TestExitCodes:
    def test_missing_file(self, capsys):
        assert main(["density", "/nonexistent/graph.json"]) == 2

    def test_bad_formula(self, triangle, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("E x. (x=x |")
        assert main(["eval", "--graph", triangle, "--formula", str(bad)]) == 2

    def test_bad_chain_parameters(self):
        assert main(["chain", "--k", "2", "--ell", "1"]) == 2

    def test_budget_exceeded(self, tmp_path):
        big = tmp_path / "big.json"
        big.write_text(graph_to_json(Graph.empty(40)))
        assert main(
            ["game", "solve", "--left", str(big), "--right", str(big),
             "--k", "5", "--n", "3"]
        ) == 3


class TestExpCommand:
    def write_plan(self, tmp_path):
        plan = {
            "id": "cli-demo",
            "target": "threshold",
            "nGrid": [60],
            "trials": 8,
            "seed": 12,
            "params": {"patternName": "K3", "exponents": ["1/2", "3/2"]},
        }
        path = tmp_path / "plan.json"
        path.write_text(json.dumps(plan))
        return path

    def test_run_writes_csv_and_manifest(self, tmp_path, capsys):
        plan = self.write_plan(tmp_path)
        csv_path = tmp_path / "out.csv"
        assert main(
            ["exp", "threshold", "--plan", str(plan), "--csv", str(csv_path)]
        ) == 0
        text = csv_path.read_text()
        assert text.splitlines()[0].startswith("plan_id,n,m,alpha")
        manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
        assert manifest["seed"] == 12
        assert str(csv_path) in manifest["outputs"]

    def test_reruns_byte_identical(self, tmp_path, capsys):
        plan = self.write_plan(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["exp", "threshold", "--plan", str(plan), "--csv", str(a)]) == 0
        assert main(["exp", "threshold", "--plan", str(plan), "--csv", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_target_mismatch(self, tmp_path):
        plan = self.write_plan(tmp_path)
        assert main(["exp", "poisson", "--plan", str(plan)]) == 2

    def test_json_report(self, tmp_path, capsys):
        plan = self.write_plan(tmp_path)
        out = tmp_path / "report.json"
        assert main(
            ["exp", "threshold", "--plan", str(plan), "--json", str(out)]
        ) == 0
        payload = json.loads(out.read_text())
        assert payload["plan"] == "cli-demo"
        assert len(payload["estimates"]) == 2
