"""
Text formats for cascades, networks and rankings.

CascadeFile::

    # nodes 4
    # window 10.0
    # node 0 alice
    # node 2 carol
    c1; 0:0.0, 2:1.5

NetworkFile::

    # nodes 3
    0 1 1.0
    1 2 0.5

RankingFile is tab-separated with ``# objective`` and ``# candidates`` headers followed
by a column header line.

Every reader reports problems as CascadeFormatError with the 1-based line and column.
Times and rates are written with repr, so writing then reading is lossless.
"""
import logging
import math
import re
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from ..models.cascade_models import Cascade, PartialObservation
from ..models.input_models import ScoringObjective
from ..models.network_models import Network, NodeId
from ..models.ranking_models import CandidateScore, Ranking
from ..utils.errors import CascadeFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CASCADE_ID = re.compile(r"[A-Za-z0-9_.\-]+")
RANKING_COLUMNS = ["rank", "candidate", "label", "sse", "coverage", "admissible_cascades", "start_times"]


class CascadeFileData(NamedTuple):
    labels: Dict[NodeId, str]
    cascades: List[Cascade]
    n_nodes: int
    window_T: Optional[float]


class ObservationFileData(NamedTuple):
    labels: Dict[NodeId, str]
    observations: List[PartialObservation]
    n_nodes: int


class _Record(NamedTuple):
    cascade_id: str
    times: Dict[NodeId, float]
    line: int


def _lines(path: Path) -> Iterator[Tuple[int, str]]:
    with path.open(encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            yield number, raw.rstrip("\n").rstrip("\r")


def _parse_int(text: str, what: str, path: Path, line: int, column: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CascadeFormatError(f"{what} must be an integer, got {text!r}", str(path), line, column) from None
    if value < 0:
        raise CascadeFormatError(f"{what} must be >= 0, got {value}", str(path), line, column)
    return value


def parse_real(text: str, what: str, path: Path, line: int, column: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CascadeFormatError(f"{what} must be a decimal number, got {text!r}", str(path), line, column) from None
    if not math.isfinite(value):
        raise CascadeFormatError(f"{what} must be finite, got {text!r}", str(path), line, column)
    return value


def _read_cascade_records(path: Path):
    """Headers and raw records of a CascadeFile, validated line by line."""
    labels: Dict[NodeId, str] = {}
    n_nodes: Optional[int] = None
    window: Optional[float] = None
    records: List[_Record] = []
    seen_ids = set()

    for number, text in _lines(path):
        stripped = text.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split(None, 2)
            keyword = parts[0] if parts else ""
            column = text.index("#") + 2
            if keyword == "node":
                if len(parts) < 2:
                    raise CascadeFormatError("'# node' needs an id", str(path), number, column)
                node = _parse_int(parts[1], "node id", path, number, column)
                if node in labels:
                    raise CascadeFormatError(f"duplicate node id {node}", str(path), number, column)
                labels[node] = parts[2].strip() if len(parts) > 2 else str(node)
            elif keyword == "nodes":
                if len(parts) < 2:
                    raise CascadeFormatError("'# nodes' needs a count", str(path), number, column)
                n_nodes = _parse_int(parts[1], "node count", path, number, column)
                if n_nodes < 1:
                    raise CascadeFormatError("node count must be >= 1", str(path), number, column)
            elif keyword == "window":
                if len(parts) < 2:
                    raise CascadeFormatError("'# window' needs a value", str(path), number, column)
                window = parse_real(parts[1], "window", path, number, column)
                if window <= 0:
                    raise CascadeFormatError("window must be positive", str(path), number, column)
            continue
        records.append(_parse_record(text, labels, seen_ids, path, number))

    if n_nodes is None:
        n_nodes = max(labels, default=-1) + 1
    for node in labels:
        if node >= n_nodes:
            raise CascadeFormatError(f"node id {node} outside [0, {n_nodes})", str(path), 0, 0)
    if n_nodes < 1:
        raise CascadeFormatError("no nodes declared", str(path), 0, 0)
    return labels, n_nodes, window, records


def _parse_record(text: str, labels: Dict[NodeId, str], seen_ids: set, path: Path, number: int) -> _Record:
    if ";" not in text:
        raise CascadeFormatError("expected '<cascade_id>; node:time, ...'", str(path), number, 1)
    head, body = text.split(";", 1)
    cascade_id = head.strip()
    if not CASCADE_ID.fullmatch(cascade_id):
        raise CascadeFormatError(f"invalid cascade id {cascade_id!r}", str(path), number, 1)
    if cascade_id in seen_ids:
        raise CascadeFormatError(f"duplicate cascade id {cascade_id!r}", str(path), number, 1)
    seen_ids.add(cascade_id)

    times: Dict[NodeId, float] = {}
    offset = len(head) + 1
    for entry in body.split(","):
        column = offset + len(entry) - len(entry.lstrip()) + 1
        offset += len(entry) + 1
        item = entry.strip()
        if not item:
            if body.strip():
                raise CascadeFormatError("empty node:time entry", str(path), number, column)
            continue
        if ":" not in item:
            raise CascadeFormatError(f"expected node:time, got {item!r}", str(path), number, column)
        node_text, time_text = item.split(":", 1)
        node = _parse_int(node_text.strip(), "node id", path, number, column)
        if node not in labels:
            raise CascadeFormatError(f"undeclared node {node}", str(path), number, column)
        if node in times:
            raise CascadeFormatError(f"node {node} appears twice", str(path), number, column)
        time = parse_real(time_text.strip(), "time", path, number, column + len(node_text) + 1)
        if time < 0:
            raise CascadeFormatError(f"time must be >= 0, got {time}", str(path), number, column)
        times[node] = time

    if not times:
        raise CascadeFormatError(f"cascade {cascade_id!r} has no infections", str(path), number, len(head) + 2)
    return _Record(cascade_id, times, number)


def parse_cascade_file(path: PathLike, window_T: Optional[float] = None) -> CascadeFileData:
    """
    Load full cascades from a CascadeFile.

    The window is ``window_T`` when given, else the ``# window`` header, else the
    latest infection time in the file.

    Raises:
        FileNotFoundError: If the file does not exist
        CascadeFormatError: On any malformed line or an inconsistent window
    """
    path = Path(path)
    labels, n_nodes, header_window, records = _read_cascade_records(path)
    window = window_T if window_T is not None else header_window
    if window is None:
        latest = max((t for r in records for t in r.times.values()), default=0.0)
        if latest <= 0:
            raise CascadeFormatError("cannot infer the window; add a '# window T' header", str(path), 0, 0)
        window = latest

    cascades = []
    for record in records:
        latest = max(record.times.values())
        if latest > window:
            raise CascadeFormatError(
                f"infection time {latest} exceeds window {window}", str(path), record.line, 1
            )
        cascades.append(
            Cascade(cascade_id=record.cascade_id, n_nodes=n_nodes, times=record.times, window_T=window)
        )
    logger.debug("read %d cascades over %d nodes from %s", len(cascades), n_nodes, path)
    return CascadeFileData(labels, cascades, n_nodes, window)


def parse_observation_file(path: PathLike) -> ObservationFileData:
    """Load a CascadeFile whose records already hold only the observed nodes."""
    path = Path(path)
    labels, n_nodes, _, records = _read_cascade_records(path)
    observations = [
        PartialObservation.from_observed(n_nodes, record.times, record.cascade_id) for record in records
    ]
    return ObservationFileData(labels, observations, n_nodes)


def format_cascade_file(
    cascades: Sequence[Union[Cascade, PartialObservation]],
    n_nodes: int,
    labels: Optional[Dict[NodeId, str]] = None,
    window_T: Optional[float] = None,
) -> str:
    """Canonical CascadeFile text: headers, then entries ascending by (time, node)."""
    labels = labels or {node: str(node) for node in range(n_nodes)}
    lines = [f"# nodes {n_nodes}"]
    if window_T is None:
        windows = [c.window_T for c in cascades if isinstance(c, Cascade)]
        window_T = max(windows) if windows else None
    if window_T is not None:
        lines.append(f"# window {window_T!r}")
    lines.extend(f"# node {node} {labels[node]}" for node in sorted(labels))
    for cascade in cascades:
        times = cascade.times if isinstance(cascade, Cascade) else cascade.observed
        entries = ", ".join(
            f"{node}:{time!r}" for node, time in sorted(times.items(), key=lambda item: (item[1], item[0]))
        )
        lines.append(f"{cascade.cascade_id}; {entries}")
    return "\n".join(lines) + "\n"


def write_cascade_file(path: PathLike, cascades, n_nodes: int, labels=None, window_T=None) -> None:
    Path(path).write_text(format_cascade_file(cascades, n_nodes, labels, window_T), encoding="utf-8")


def parse_network_file(path: PathLike) -> Network:
    """
    Load a NetworkFile of ``src dst rate`` lines.

    Without a ``# nodes`` header the network spans ids up to the largest one used.

    Raises:
        FileNotFoundError: If the file does not exist
        CascadeFormatError: On malformed lines or edges violating network invariants
    """
    path = Path(path)
    n_nodes: Optional[int] = None
    triples: List[Tuple[int, int, float]] = []
    seen: Dict[Tuple[int, int], int] = {}

    for number, text in _lines(path):
        stripped = text.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split()
            if parts and parts[0] == "nodes":
                column = text.index("#") + 2
                if len(parts) < 2:
                    raise CascadeFormatError("'# nodes' needs a count", str(path), number, column)
                n_nodes = _parse_int(parts[1], "node count", path, number, column)
                if n_nodes < 1:
                    raise CascadeFormatError("node count must be >= 1", str(path), number, column)
            continue

        fields = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]
        if len(fields) != 3:
            raise CascadeFormatError(
                f"expected 'src dst rate', got {len(fields)} fields", str(path), number, fields[0][1]
            )
        (src_text, src_col), (dst_text, dst_col), (rate_text, rate_col) = fields
        src = _parse_int(src_text, "src", path, number, src_col)
        dst = _parse_int(dst_text, "dst", path, number, dst_col)
        rate = parse_real(rate_text, "rate", path, number, rate_col)
        if rate <= 0:
            raise CascadeFormatError(f"rate must be positive, got {rate}", str(path), number, rate_col)
        if src == dst:
            raise CascadeFormatError(f"self-loop on node {src}", str(path), number, src_col)
        if (src, dst) in seen:
            raise CascadeFormatError(
                f"duplicate edge {src}->{dst} (first on line {seen[(src, dst)]})", str(path), number, src_col
            )
        seen[(src, dst)] = number
        if n_nodes is not None and max(src, dst) >= n_nodes:
            raise CascadeFormatError(f"edge {src}->{dst} outside [0, {n_nodes})", str(path), number, src_col)
        triples.append((src, dst, rate))

    if n_nodes is None:
        n_nodes = max((max(s, d) for s, d, _ in triples), default=-1) + 1
        if n_nodes < 1:
            raise CascadeFormatError("empty network without a '# nodes' header", str(path), 0, 0)
    try:
        return Network.from_edges(n_nodes, triples)
    except ValidationError as exc:
        raise CascadeFormatError(str(exc), str(path), 0, 0) from exc


def format_network_file(network: Network) -> str:
    lines = [f"# nodes {network.n_nodes}"]
    lines.extend(f"{e.src} {e.dst} {e.rate!r}" for e in network.edges)
    return "\n".join(lines) + "\n"


def write_network_file(path: PathLike, network: Network) -> None:
    Path(path).write_text(format_network_file(network), encoding="utf-8")


def format_ranking_file(
    ranking: Ranking, top: Optional[int] = None, labels: Optional[Dict[NodeId, str]] = None
) -> str:
    """Tab-separated ranking, best first, limited to ``top`` rows."""
    labels = labels or {}
    scores = ranking.scores if top is None else ranking.top(top)
    lines = [
        f"# objective {ranking.objective.value}",
        f"# candidates {ranking.n_candidates}",
        "\t".join(RANKING_COLUMNS),
    ]
    for rank, score in enumerate(scores, start=1):
        start_times = ",".join(f"{key}={value!r}" for key, value in score.start_times.items())
        lines.append("\t".join([
            str(rank),
            str(score.candidate),
            labels.get(score.candidate, str(score.candidate)),
            repr(score.sse),
            repr(score.coverage),
            str(score.admissible_cascades),
            start_times,
        ]))
    return "\n".join(lines) + "\n"


def write_ranking_file(path: PathLike, ranking: Ranking, top=None, labels=None) -> None:
    Path(path).write_text(format_ranking_file(ranking, top, labels), encoding="utf-8")


def parse_ranking_file(path: PathLike) -> Ranking:
    """
    Load a RankingFile written by ``write_ranking_file``; row order is kept.

    Raises:
        CascadeFormatError: On malformed rows or out-of-order ranks
    """
    path = Path(path)
    objective = ScoringObjective.SSE
    n_candidates: Optional[int] = None
    header_seen = False
    scores: List[CandidateScore] = []

    for number, text in _lines(path):
        if not text.strip():
            continue
        if text.startswith("#"):
            parts = text[1:].split()
            if len(parts) == 2 and parts[0] == "objective":
                try:
                    objective = ScoringObjective(parts[1])
                except ValueError:
                    raise CascadeFormatError(f"unknown objective {parts[1]!r}", str(path), number, 2) from None
            elif len(parts) == 2 and parts[0] == "candidates":
                n_candidates = _parse_int(parts[1], "candidate count", path, number, 2)
            continue
        fields = text.split("\t")
        if not header_seen:
            if fields != RANKING_COLUMNS:
                raise CascadeFormatError("missing ranking column header", str(path), number, 1)
            header_seen = True
            continue
        if len(fields) != len(RANKING_COLUMNS):
            raise CascadeFormatError(
                f"expected {len(RANKING_COLUMNS)} tab-separated fields, got {len(fields)}", str(path), number, 1
            )
        columns = [1]
        for field_text in fields[:-1]:
            columns.append(columns[-1] + len(field_text) + 1)
        rank = _parse_int(fields[0], "rank", path, number, columns[0])
        if rank != len(scores) + 1:
            raise CascadeFormatError(f"expected rank {len(scores) + 1}, got {rank}", str(path), number, columns[0])
        start_times: Dict[str, float] = {}
        if fields[6]:
            for item in fields[6].split(","):
                key, sep, value = item.partition("=")
                if not sep:
                    raise CascadeFormatError(f"expected id=t_s, got {item!r}", str(path), number, columns[6])
                start_times[key] = parse_real(value, "start time", path, number, columns[6])
        try:
            scores.append(CandidateScore(
                candidate=_parse_int(fields[1], "candidate", path, number, columns[1]),
                sse=parse_real(fields[3], "sse", path, number, columns[3]),
                coverage=parse_real(fields[4], "coverage", path, number, columns[4]),
                admissible_cascades=_parse_int(fields[5], "admissible_cascades", path, number, columns[5]),
                start_times=start_times,
            ))
        except ValidationError as exc:
            raise CascadeFormatError(str(exc), str(path), number, 1) from exc

    if not header_seen:
        raise CascadeFormatError("missing ranking column header", str(path), 0, 0)
    if n_candidates is None:
        n_candidates = len(scores)
    return Ranking(scores=scores, objective=objective, n_candidates=n_candidates)
