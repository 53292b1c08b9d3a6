"""
Tests for the source-locator command line.
"""
import json
import logging

import pytest

from src.cli.formats import parse_cascade_file, parse_network_file, parse_ranking_file, write_network_file
from src.cli.main import ExitCode, build_parser, main
from src.models.network_models import Network


@pytest.fixture(autouse=True)
def _reset_package_logger():
    yield
    package_logger = logging.getLogger("src")
    for handler in list(package_logger.handlers):
        if getattr(handler, "_source_locator", False):
            package_logger.removeHandler(handler)
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture
def star_file(tmp_path, star_network):
    path = tmp_path / "star.txt"
    write_network_file(path, star_network)
    return path


@pytest.fixture
def star_cascades(tmp_path, star_file):
    out = tmp_path / "cascades.txt"
    code = main(["simulate", "--network", str(star_file), "--source", "0", "--count", "3",
                 "--seed", "5", "--out", str(out), "-q"])
    assert code == ExitCode.OK
    return out


def _locate(star_file, cascades, *extra):
    return main(["locate", "--network", str(star_file), "--cascades", str(cascades),
                 "--observed-fraction", "0.5", "--samples", "100", "--seed", "1", *extra])


def test_simulate_writes_readable_cascades(star_cascades):
    data = parse_cascade_file(star_cascades)
    assert [c.cascade_id for c in data.cascades] == ["c0", "c1", "c2"]
    assert all(c.root == 0 for c in data.cascades)


def test_locate_ranks_the_hub_first(tmp_path, star_file, star_cascades, capsys):
    out = tmp_path / "ranking.tsv"
    assert _locate(star_file, star_cascades, "--out", str(out)) == ExitCode.OK
    ranking = parse_ranking_file(out)
    assert ranking.scores[0].candidate == 0
    assert set(ranking.scores[0].start_times) == {"c0", "c1", "c2"}
    assert "rank\tcandidate" in capsys.readouterr().out


def test_locate_is_deterministic_given_the_seed(tmp_path, star_file, star_cascades):
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    _locate(star_file, star_cascades, "--out", str(first), "-q")
    _locate(star_file, star_cascades, "--out", str(second), "-q")
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")


def test_locate_top_limits_rows(tmp_path, chain_network):
    network = tmp_path / "chain.txt"
    write_network_file(network, chain_network)
    cascades = tmp_path / "observed.txt"
    cascades.write_text("# nodes 4\n# node 0 a\n# node 1 b\n# node 2 c\n# node 3 d\nx; 3:4.0\n", encoding="utf-8")
    out = tmp_path / "ranking.tsv"
    code = main(["locate", "--network", str(network), "--cascades", str(cascades), "--pre-observed",
                 "--samples", "20", "--top", "2", "--out", str(out), "-q"])
    assert code == ExitCode.OK
    ranking = parse_ranking_file(out)
    assert len(ranking) == 2
    assert ranking.n_candidates == 3


def test_pre_observed_conflicts_with_regime(star_file, star_cascades):
    assert _locate(star_file, star_cascades, "--pre-observed") == ExitCode.USAGE


def test_usage_errors(capsys):
    assert main([]) == ExitCode.USAGE
    assert main(["locate", "--network", "x"]) == ExitCode.USAGE
    assert main(["evaluate", "--preset", "smoke", "--config", "c.yaml"]) == ExitCode.USAGE
    assert main(["simulate", "--help"]) == ExitCode.OK


def test_missing_file_exit_code(tmp_path, star_cascades):
    assert _locate(tmp_path / "absent.txt", star_cascades, "-q") == ExitCode.MISSING_FILE


def test_parse_error_exit_code(tmp_path, star_cascades, capsys):
    broken = tmp_path / "broken.txt"
    broken.write_text("0 1\n", encoding="utf-8")
    assert _locate(broken, star_cascades, "-q") == ExitCode.PARSE_ERROR
    assert f"{broken}:1:1" in capsys.readouterr().err


def test_invalid_value_exit_codes(star_file, star_cascades):
    assert _locate(star_file, star_cascades, "--top", "0", "-q") == ExitCode.INVALID_VALUE
    code = main(["locate", "--network", str(star_file), "--cascades", str(star_cascades),
                 "--observed-fraction", "2.0", "-q"])
    assert code == ExitCode.INVALID_VALUE


def test_network_size_mismatch_is_invalid(tmp_path, star_cascades):
    small = tmp_path / "small.txt"
    write_network_file(small, Network.from_edges(3, [(0, 1, 1.0)]))
    assert _locate(small, star_cascades, "-q") == ExitCode.INVALID_VALUE


def test_infer_writes_a_network_and_report(tmp_path, star_file):
    cascades = tmp_path / "train.txt"
    main(["simulate", "--network", str(star_file), "--source", "0", "--count", "200",
          "--seed", "2", "--out", str(cascades), "-q"])
    out, report = tmp_path / "inferred.txt", tmp_path / "report.json"
    code = main(["infer", "--cascades", str(cascades), "--out", str(out), "--report", str(report), "-q"])
    assert code == ExitCode.OK
    inferred = parse_network_file(out)
    assert {(e.src, e.dst) for e in inferred.edges} >= {(0, leaf) for leaf in range(1, 5)}
    details = json.loads(report.read_text(encoding="utf-8"))
    assert "log_likelihood" in details
    assert "rates" not in details


def test_evaluate_from_yaml_is_reproducible(tmp_path):
    config = tmp_path / "experiment.yaml"
    config.write_text(
        "trial:\n"
        "  n_nodes: 2\n"
        "  edge_density: 1.0\n"
        "  n_train_cascades: 30\n"
        "  n_test_cascades_per_source: 2\n"
        "  observed_fraction: 0.5\n"
        "  n_samples: 20\n"
        "  k_list: [1]\n"
        "  n_trials: 1\n"
        "  min_cascade_len: 2\n",
        encoding="utf-8",
    )
    reports = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        markdown = tmp_path / f"{name}.md"
        code = main(["evaluate", "--config", str(config), "--seed", "4", "--out", str(out),
                     "--markdown", str(markdown), "-q"])
        assert code == ExitCode.OK
        reports.append(out.read_text(encoding="utf-8"))
        assert markdown.read_text(encoding="utf-8").startswith("# Source Localization Experiment")
    assert reports[0] == reports[1]
    report = json.loads(reports[0])
    assert report["config"]["master_seed"] == 4
    assert report["success_probability"] == 1.0


def test_evaluate_sweep_needs_values(tmp_path):
    assert main(["evaluate", "--preset", "smoke", "--sweep", "n_samples", "-q"]) == ExitCode.USAGE
    assert main(["evaluate", "--preset", "smoke", "--values", "1,2", "-q"]) == ExitCode.USAGE


def test_evaluate_rejects_unknown_sweep_field():
    assert main(["evaluate", "--preset", "smoke", "--sweep", "speed", "--values", "1", "-q"]) == ExitCode.INVALID_VALUE


def test_ingest_command(tmp_path):
    dump = tmp_path / "dump.txt"
    dump.write_text("7,a\n8,b\n\n7,0,8,7200\n", encoding="utf-8")
    out = tmp_path / "cascades.txt"
    assert main(["ingest", "--input", str(dump), "--out", str(out), "--time-scale", "3600", "-q"]) == ExitCode.OK
    assert parse_cascade_file(out).cascades[0].times == {0: 0.0, 1: 2.0}


def test_parser_lists_every_subcommand():
    help_text = build_parser().format_help()
    for command in ("simulate", "infer", "locate", "evaluate", "ingest"):
        assert command in help_text
