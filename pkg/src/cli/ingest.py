"""
Conversion of SNAP/NetInf-style cascade dumps into CascadeFiles.

Input layout: one ``id,label`` line per node, a blank line, then one cascade per line
as ``node,time,node,time,...``. Node ids are remapped densely in declaration order;
each cascade's times become offsets from its earliest observation, divided by
``time_scale`` (3600 turns seconds into hours).
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..models.cascade_models import Cascade
from ..models.network_models import NodeId
from ..utils.errors import CascadeFormatError
from .formats import CascadeFileData, PathLike, parse_real, write_cascade_file

logger = logging.getLogger(__name__)


def _read_nodes(lines: List[Tuple[int, str]], path: Path) -> Tuple[Dict[str, NodeId], Dict[NodeId, str], int]:
    """Node section; returns (original id -> dense id, labels, index of first cascade line)."""
    index: Dict[str, NodeId] = {}
    labels: Dict[NodeId, str] = {}
    for position, (number, text) in enumerate(lines):
        if not text.strip():
            return index, labels, position + 1
        original, sep, label = text.partition(",")
        original = original.strip()
        if not sep or not original:
            raise CascadeFormatError("expected 'id,label' in the node section", str(path), number, 1)
        if original in index:
            raise CascadeFormatError(f"duplicate node id {original!r}", str(path), number, 1)
        index[original] = len(index)
        labels[index[original]] = label.strip().replace("\t", " ") or original
    return index, labels, len(lines)


def ingest_netinf(
    path: PathLike,
    time_scale: float = 1.0,
    window_T: Optional[float] = None,
    id_prefix: str = "m",
) -> CascadeFileData:
    """
    Parse a NetInf-style file into normalized cascades.

    Args:
        path: Input file
        time_scale: Divisor applied to time offsets
        window_T: Observation window; defaults to the latest normalized time
        id_prefix: Cascade ids are ``id_prefix`` + cascade line index

    Returns:
        CascadeFileData with dense node ids

    Raises:
        FileNotFoundError: If the file does not exist
        CascadeFormatError: On malformed lines
        ValueError: On a non-positive time_scale or a window shorter than a cascade
    """
    if not time_scale > 0:
        raise ValueError(f"time_scale must be positive, got {time_scale}")
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        lines = [(number, raw.rstrip("\r\n")) for number, raw in enumerate(handle, start=1)]

    index, labels, start = _read_nodes(lines, path)
    if not index:
        raise CascadeFormatError("no nodes declared before the blank separator line", str(path), 1, 1)

    records: List[Tuple[int, Dict[NodeId, float]]] = []
    repeated = 0
    for number, text in lines[start:]:
        if not text.strip():
            continue
        fields = text.split(",")
        if len(fields) % 2:
            raise CascadeFormatError("expected node,time pairs", str(path), number, len(text))
        raw: Dict[NodeId, float] = {}
        column = 1
        for k in range(0, len(fields), 2):
            original = fields[k].strip()
            if original not in index:
                raise CascadeFormatError(f"undeclared node {original!r}", str(path), number, column)
            time_column = column + len(fields[k]) + 1
            time = parse_real(fields[k + 1].strip(), "time", path, number, time_column)
            node = index[original]
            if node in raw:
                repeated += 1
                time = min(time, raw[node])
            raw[node] = time
            column = time_column + len(fields[k + 1]) + 1
        if not raw:
            continue
        origin = min(raw.values())
        records.append((number, {node: (time - origin) / time_scale for node, time in raw.items()}))

    if repeated:
        logger.warning("%d repeated node entries kept at their earliest time", repeated)

    latest = max((max(times.values()) for _, times in records), default=0.0)
    if window_T is None:
        window_T = latest if latest > 0 else 1.0
    elif window_T < latest:
        raise ValueError(f"window_T={window_T} is shorter than the longest cascade ({latest})")

    n_nodes = len(index)
    cascades = [
        Cascade(cascade_id=f"{id_prefix}{i}", n_nodes=n_nodes, times=times, window_T=window_T)
        for i, (_, times) in enumerate(records)
    ]
    logger.info("ingested %d cascades over %d nodes from %s", len(cascades), n_nodes, path)
    return CascadeFileData(labels, cascades, n_nodes, window_T)


def ingest_to_file(
    path: PathLike, out: PathLike, time_scale: float = 1.0, window_T: Optional[float] = None
) -> CascadeFileData:
    data = ingest_netinf(path, time_scale, window_T)
    write_cascade_file(out, data.cascades, data.n_nodes, data.labels, data.window_T)
    return data
