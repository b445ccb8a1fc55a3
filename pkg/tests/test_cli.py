import json

import pytest

from src.cli import EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VALIDATION, dispatch
from src.errors import InvariantViolation
from src.file_formats import parse_system, read_system, serialize_graph, serialize_system, write_text
from src.generators import complete_graph, ks_code_cover
from src.graph_core import union_graph


def _report(path):
    data = json.loads(path.read_text())
    data.pop("timings")
    return data


@pytest.fixture
def k4_star(tmp_path):
    path = tmp_path / "k4_star.txt"
    assert dispatch(["gen", "gpstars", "--sizes", "1,1,1,1", "--out", str(path)]) == EXIT_OK
    return path


def test_color_star_partition_of_k4(k4_star, tmp_path):
    out = tmp_path / "color.json"
    assert dispatch(["color", str(k4_star), "--json", str(out)]) == EXIT_OK
    report = _report(out)
    assert report["schema"] == 1
    assert report["results"]["distinct_colors"] == 4
    assert report["results"]["proper"] is True
    assert report["results"]["colors_bound"] == 7
    assert report["inputs"][0]["name"] == "k4_star.txt"


def test_color_without_renumbering(k4_star, tmp_path):
    out = tmp_path / "color.json"
    assert dispatch(["color", str(k4_star), "--no-renumber", "--trace", "--json", str(out)]) == EXIT_OK
    results = _report(out)["results"]
    assert results["renumber"] is False
    assert results["trace"]


def test_oracle_partition_of_k4(tmp_path):
    graph = tmp_path / "k4.txt"
    witness = tmp_path / "witness.txt"
    out = tmp_path / "bp.json"
    write_text(graph, serialize_graph(complete_graph(4)))
    assert dispatch(["oracle", "bp", str(graph), "--out", str(witness), "--json", str(out)]) == EXIT_OK
    assert _report(out)["results"]["value"] == 3
    assert parse_system(witness.read_text()).m == 3


def test_bounds_invert(tmp_path, capsys):
    out = tmp_path / "bounds.json"
    assert dispatch(["bounds", "invert", "--k", "6", "--json", str(out)]) == EXIT_OK
    assert _report(out)["results"]["m"] == 3
    assert "m: 3" in capsys.readouterr().out


def test_hansel_expectations_are_dyadic(tmp_path):
    system = tmp_path / "code.txt"
    out = tmp_path / "expect.json"
    write_text(system, serialize_system(ks_code_cover(3)))
    assert dispatch(["hansel", "expect", str(system), "--enumerate", "--json", str(out)]) == EXIT_OK
    results = _report(out)["results"]
    assert results["expected"] == {"numerator": 3, "exponent": 2}
    assert results["oracle_equal"] is True


def test_validate_reports_the_duplicate(tmp_path):
    system = tmp_path / "code.txt"
    out = tmp_path / "validate.json"
    write_text(system, serialize_system(ks_code_cover(4)))
    assert dispatch(["validate", "partition", str(system), "--json", str(out)]) == EXIT_VALIDATION
    results = _report(out)["results"]
    assert results["duplicate_edge"] == [1, 4]
    assert results["duplicate_bicliques"] == [1, 2]


def test_color_rejects_overlapping_system(tmp_path):
    system = tmp_path / "code.txt"
    write_text(system, serialize_system(ks_code_cover(4)))
    assert dispatch(["color", str(system)]) == EXIT_VALIDATION


def test_parse_errors_exit_with_validation_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    write_text(bad, "n 3\nb 1 | 4\n")
    assert dispatch(["color", str(bad)]) == EXIT_VALIDATION
    assert "line 2" in capsys.readouterr().err


def test_guard_exits_with_resource_code(tmp_path):
    graph = tmp_path / "k7.txt"
    write_text(graph, serialize_graph(complete_graph(7)))
    assert dispatch(["oracle", "bp", str(graph)]) == EXIT_RESOURCE


def test_limits_flag_overrides_guards(tmp_path):
    graph = tmp_path / "k4.txt"
    write_text(graph, serialize_graph(complete_graph(4)))
    assert dispatch(["oracle", "bp", str(graph), "--limits", "max_edges_partition=3"]) == EXIT_RESOURCE
    assert dispatch(["oracle", "bp", str(graph), "--limits", "nonsense=1"]) == EXIT_USAGE
    assert dispatch(["oracle", "chi", str(graph), "--time-budget", "5"]) == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["gen", "kk"],
        ["bounds", "thm3", "--k", "4"],
        ["oracle", "chi", "missing.txt"],
    ],
)
def test_usage_errors(argv):
    assert dispatch(argv) == EXIT_USAGE


def test_gen_writes_to_stdout(capsys):
    assert dispatch(["gen", "kscode", "--k", "4"]) == EXIT_OK
    assert capsys.readouterr().out == serialize_system(ks_code_cover(4))


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "random", "--n", "30", "--m", "6", "--seed", "11"],
        ["gen", "gnp", "--n", "10", "--p", "0.3", "--seed", "4"],
    ],
)
def test_generation_round_trips(argv, tmp_path):
    first, second = tmp_path / "a.txt", tmp_path / "b.txt"
    assert dispatch(argv + ["--out", str(first)]) == EXIT_OK
    assert dispatch(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize(
    "command",
    [
        ["color"],
        ["hansel", "random", "--seed", "9"],
        ["hansel", "derand"],
        ["peel", "GRAPH"],
    ],
)
def test_seeded_commands_are_deterministic(command, tmp_path):
    system = tmp_path / "system.txt"
    graph = tmp_path / "graph.txt"
    assert dispatch(["gen", "random", "--n", "16", "--m", "3", "--seed", "2", "--out", str(system)]) == EXIT_OK
    write_text(graph, serialize_graph(union_graph(read_system(system))))

    argv = [str(graph) if part == "GRAPH" else part for part in command] + [str(system)]
    payloads = []
    for run in range(2):
        out = tmp_path / f"run{run}.json"
        dispatch(argv + ["--json", str(out)])
        payloads.append(out.read_text())
    strip = [json.loads(p) for p in payloads]
    for data in strip:
        data.pop("timings")
    assert strip[0] == strip[1]
    assert json.dumps(strip[0], sort_keys=True) == json.dumps(strip[1], sort_keys=True)


def test_undecodable_file_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"n 2\nb 1 | \xff\xfe 2\n")
    out = tmp_path / "bad.json"
    assert dispatch(["color", str(bad), "--json", str(out)]) == EXIT_VALIDATION
    assert "line 2" in capsys.readouterr().err
    assert _report(out)["results"]["exit_code"] == EXIT_VALIDATION


def test_self_check_failures_exit_with_validation_code(tmp_path, monkeypatch):
    graph = tmp_path / "k4.txt"
    system = tmp_path / "code.txt"
    out = tmp_path / "peel.json"
    write_text(graph, serialize_graph(complete_graph(4)))
    write_text(system, serialize_system(ks_code_cover(4)))

    def broken(*args, **kwargs):
        raise InvariantViolation("round 0 extracted nothing")

    monkeypatch.setattr("src.cli.analyze_trace", broken)
    assert dispatch(["peel", str(graph), str(system), "--k", "2", "--json", str(out)]) == EXIT_VALIDATION
    assert "extracted nothing" in _report(out)["results"]["error"]


def test_peel_exits_with_validation_code_when_t_bound_fails(tmp_path, monkeypatch):
    graph = tmp_path / "k4.txt"
    system = tmp_path / "code.txt"
    write_text(graph, serialize_graph(complete_graph(4)))
    write_text(system, serialize_system(ks_code_cover(4)))
    monkeypatch.setattr("src.cli.analyze_trace", lambda *args, **kwargs: {"t_bound_holds": False})
    assert dispatch(["peel", str(graph), str(system), "--k", "4"]) == EXIT_VALIDATION


@pytest.mark.parametrize("which", ["invert", "thm3"])
def test_bounds_reject_fractional_k(which):
    assert dispatch(["bounds", which, "--k", "6.7"]) == EXIT_USAGE


def test_bounds_thm1_accepts_real_k(tmp_path):
    out = tmp_path / "thm1.json"
    assert dispatch(["bounds", "thm1", "--k", "6.5", "--json", str(out)]) == EXIT_OK
    assert _report(out)["results"]["k"] == 6.5
