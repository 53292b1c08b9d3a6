"""
Tests for the cascade, network and ranking text formats.
"""
import pytest

from src.cli.formats import (
    format_cascade_file,
    format_network_file,
    parse_cascade_file,
    parse_network_file,
    parse_observation_file,
    parse_ranking_file,
    write_cascade_file,
    write_network_file,
    write_ranking_file,
)
from src.models.cascade_models import Cascade, PartialObservation
from src.models.input_models import ScoringObjective
from src.models.network_models import Network
from src.models.ranking_models import CandidateScore, Ranking
from src.services.simulator import simulate_cascade
from src.utils.errors import CascadeFormatError
from tests.conftest import random_network

HEADER = "# nodes 4\n# window 10.0\n# node 0 alice\n# node 1 bob\n# node 2 carol\n# node 3 dave\n"


def _write(tmp_path, text, name="input.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_reads_the_documented_record(tmp_path):
    data = parse_cascade_file(_write(tmp_path, HEADER + "c1; 0:0.0, 2:1.5\n"))
    assert data.n_nodes == 4
    assert data.window_T == 10.0
    assert data.labels[2] == "carol"
    [cascade] = data.cascades
    assert cascade.cascade_id == "c1"
    assert cascade.times == {0: 0.0, 2: 1.5}
    assert cascade.root == 0


def test_cascade_files_round_trip(tmp_path, rng):
    for instance in range(100):
        network = random_network(rng, int(rng.integers(2, 10)), 0.3)
        cascades = [
            simulate_cascade(network, int(rng.integers(network.n_nodes)), float(rng.uniform(0, 3)), 10.0,
                             seed=instance * 3 + c, cascade_id=f"c{c}")
            for c in range(3)
        ]
        path = tmp_path / f"cascades{instance}.txt"
        write_cascade_file(path, cascades, network.n_nodes)
        data = parse_cascade_file(path)
        assert [c.cascade_id for c in data.cascades] == ["c0", "c1", "c2"]
        assert [c.times for c in data.cascades] == [c.times for c in cascades]
        assert data.window_T == max(c.window_T for c in cascades)


def test_network_files_round_trip(tmp_path, rng):
    for instance in range(100):
        network = random_network(rng, int(rng.integers(1, 12)), 0.3)
        path = tmp_path / f"network{instance}.txt"
        write_network_file(path, network)
        assert parse_network_file(path) == network


def test_window_precedence(tmp_path):
    body = "# nodes 3\n# node 0 a\n# node 1 b\n# node 2 c\nx; 0:0.0, 1:2.5\n"
    path = _write(tmp_path, body)
    assert parse_cascade_file(path).window_T == 2.5
    assert parse_cascade_file(path, window_T=7.0).window_T == 7.0
    with pytest.raises(CascadeFormatError, match="exceeds window"):
        parse_cascade_file(path, window_T=1.0)


def test_undeclared_node_is_reported_at_its_column(tmp_path):
    with pytest.raises(CascadeFormatError) as info:
        parse_cascade_file(_write(tmp_path, HEADER + "c1; 0:0.0, 99:1.0\n"))
    assert info.value.line == 7
    assert info.value.column == 12
    assert "undeclared node 99" in str(info.value)


@pytest.mark.parametrize(
    "record, reason",
    [
        ("c1 0:0.0", "expected '<cascade_id>; node:time"),
        ("c 1; 0:0.0", "invalid cascade id"),
        ("c1; 0-0.0", "expected node:time"),
        ("c1; 0:abc", "decimal number"),
        ("c1; 0:nan", "finite"),
        ("c1; 0:-1.0", ">= 0"),
        ("c1; 0:0.0, 0:1.0", "appears twice"),
        ("c1; 0:0.0,, 1:1.0", "empty node:time entry"),
        ("c1;", "has no infections"),
    ],
)
def test_malformed_records(tmp_path, record, reason):
    with pytest.raises(CascadeFormatError, match=reason) as info:
        parse_cascade_file(_write(tmp_path, HEADER + record + "\n"))
    assert info.value.line == 7
    assert info.value.column >= 1


def test_duplicate_cascade_ids(tmp_path):
    with pytest.raises(CascadeFormatError, match="duplicate cascade id") as info:
        parse_cascade_file(_write(tmp_path, HEADER + "a; 0:0.0\na; 1:0.0\n"))
    assert info.value.line == 8


def test_observation_file_keeps_only_the_listed_nodes(tmp_path):
    data = parse_observation_file(_write(tmp_path, HEADER + "c1; 1:3.0, 3:4.0\n"))
    [observation] = data.observations
    assert observation.observed == {1: 3.0, 3: 4.0}
    assert observation.hidden == frozenset({0, 2})


def test_partial_observations_format_like_cascades():
    observation = PartialObservation.from_observed(3, {2: 1.5, 1: 0.5}, "o1")
    text = format_cascade_file([observation], 3)
    assert text.splitlines()[-1] == "o1; 1:0.5, 2:1.5"
    assert "# window" not in text


def test_entries_are_written_in_time_order():
    cascade = Cascade(cascade_id="c", n_nodes=3, times={2: 0.0, 0: 1.0, 1: 1.0}, window_T=2.0)
    assert format_cascade_file([cascade], 3).splitlines()[-1] == "c; 2:0.0, 0:1.0, 1:1.0"


@pytest.mark.parametrize(
    "body, reason, line",
    [
        ("0 1\n", "expected 'src dst rate'", 1),
        ("0 1 1.0\n1 1 2.0\n", "self-loop", 2),
        ("0 1 1.0\n0 1 2.0\n", "duplicate edge", 2),
        ("0 1 0.0\n", "positive", 1),
        ("# nodes 2\n0 5 1.0\n", "outside", 2),
        ("a 1 1.0\n", "integer", 1),
    ],
)
def test_malformed_network_lines(tmp_path, body, reason, line):
    with pytest.raises(CascadeFormatError, match=reason) as info:
        parse_network_file(_write(tmp_path, body))
    assert info.value.line == line


def test_network_size_defaults_to_the_largest_id(tmp_path):
    network = parse_network_file(_write(tmp_path, "# a comment\n0 4 1.5\n"))
    assert network.n_nodes == 5
    assert format_network_file(network) == "# nodes 5\n0 4 1.5\n"


def test_ranking_files_round_trip(tmp_path):
    ranking = Ranking(
        scores=[
            CandidateScore(candidate=3, sse=0.125, start_times={"c0": 1.5, "c1": -0.25}, coverage=1.0,
                           admissible_cascades=2),
            CandidateScore(candidate=0, sse=2.0, start_times={"c0": 0.1}, coverage=0.5, admissible_cascades=1),
        ],
        objective=ScoringObjective.MSE,
        n_candidates=4,
    )
    path = tmp_path / "ranking.tsv"
    write_ranking_file(path, ranking, labels={3: "dave"})
    assert parse_ranking_file(path) == ranking
    assert "\tdave\t" in path.read_text(encoding="utf-8")

    write_ranking_file(path, ranking, top=1)
    assert [s.candidate for s in parse_ranking_file(path).scores] == [3]


def test_ranking_rows_must_be_in_order(tmp_path):
    text = (
        "# objective sse\n# candidates 2\n"
        "rank\tcandidate\tlabel\tsse\tcoverage\tadmissible_cascades\tstart_times\n"
        "2\t0\t0\t1.0\t1.0\t1\tc0=0.0\n"
    )
    with pytest.raises(CascadeFormatError, match="expected rank 1"):
        parse_ranking_file(_write(tmp_path, text))


def test_missing_files_raise_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_cascade_file(tmp_path / "absent.txt")
    with pytest.raises(FileNotFoundError):
        parse_network_file(tmp_path / "absent.txt")


def test_empty_network_needs_a_size(tmp_path):
    with pytest.raises(CascadeFormatError):
        parse_network_file(_write(tmp_path, "# nothing here\n"))
    assert parse_network_file(_write(tmp_path, "# nodes 3\n", "sized.txt")) == Network.from_edges(3, [])
