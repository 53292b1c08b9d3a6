"""
Diffusion network models: nodes, transmission edges and the directed network.
"""
from enum import Enum
from typing import Dict, Iterable, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from scipy.sparse import csr_matrix

# Dense integer index in [0, n_nodes).
NodeId = int


class TransmissionKind(str, Enum):
    """Family of the per-edge transmission-delay density."""
    EXPONENTIAL = "exponential"


class Edge(BaseModel):
    """A directed transmission edge with its rate (1/time)."""
    model_config = ConfigDict(frozen=True)

    src: NodeId = Field(..., ge=0, description="Infecting node")
    dst: NodeId = Field(..., ge=0, description="Infected node")
    rate: float = Field(..., gt=0, allow_inf_nan=False, description="Transmission rate alpha")


class Network(BaseModel):
    """
    Directed weighted diffusion network.

    Edges are stored in canonical (src, dst) order regardless of the order they were
    supplied in, so edge index i identifies the same edge for any permutation of the
    input edge list. Edges whose rate would be zero are absent, never zero-weight.
    """
    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "n_nodes": 3,
                "edges": [
                    {"src": 0, "dst": 1, "rate": 1.0},
                    {"src": 1, "dst": 2, "rate": 0.5},
                ],
            }
        },
    )

    n_nodes: int = Field(..., ge=1, description="Number of nodes; ids are dense in [0, n_nodes)")
    edges: Tuple[Edge, ...] = Field(default_factory=tuple, description="Directed edges")

    _src: np.ndarray = PrivateAttr()
    _dst: np.ndarray = PrivateAttr()
    _rate: np.ndarray = PrivateAttr()
    _out_indptr: np.ndarray = PrivateAttr()
    _in_order: np.ndarray = PrivateAttr()
    _in_indptr: np.ndarray = PrivateAttr()
    _keys: np.ndarray = PrivateAttr()

    @field_validator("edges", mode="after")
    @classmethod
    def _canonical_order(cls, edges: Tuple[Edge, ...]) -> Tuple[Edge, ...]:
        return tuple(sorted(edges, key=lambda e: (e.src, e.dst)))

    @model_validator(mode="after")
    def _check_edges(self) -> "Network":
        previous = None
        for edge in self.edges:
            if edge.src >= self.n_nodes or edge.dst >= self.n_nodes:
                raise ValueError(
                    f"edge {edge.src}->{edge.dst} references a node outside [0, {self.n_nodes})"
                )
            if edge.src == edge.dst:
                raise ValueError(f"self-loop on node {edge.src}")
            if previous == (edge.src, edge.dst):
                raise ValueError(f"duplicate edge {edge.src}->{edge.dst}")
            previous = (edge.src, edge.dst)
        return self

    def model_post_init(self, __context) -> None:
        n_edges = len(self.edges)
        self._src = np.fromiter((e.src for e in self.edges), dtype=np.int64, count=n_edges)
        self._dst = np.fromiter((e.dst for e in self.edges), dtype=np.int64, count=n_edges)
        self._rate = np.fromiter((e.rate for e in self.edges), dtype=np.float64, count=n_edges)
        for array in (self._src, self._dst, self._rate):
            array.setflags(write=False)

        # canonical order is already grouped by src
        self._out_indptr = _indptr(self._src, self.n_nodes)
        self._in_order = np.lexsort((self._src, self._dst))
        self._in_indptr = _indptr(self._dst, self.n_nodes)
        self._keys = self._src * self.n_nodes + self._dst

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.n_nodes == other.n_nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n_nodes, self.edges))

    @classmethod
    def from_edges(cls, n_nodes: int, triples: Iterable[Tuple[int, int, float]]) -> "Network":
        """Build a network from (src, dst, rate) triples."""
        return cls(
            n_nodes=n_nodes,
            edges=tuple(Edge(src=s, dst=d, rate=r) for s, d, r in triples),
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def src(self) -> np.ndarray:
        """Source node of every edge, canonical order."""
        return self._src

    @property
    def dst(self) -> np.ndarray:
        """Destination node of every edge, canonical order."""
        return self._dst

    @property
    def rates(self) -> np.ndarray:
        """Rate of every edge, canonical order."""
        return self._rate

    def out_edges(self, node: NodeId) -> range:
        """Indices of the edges leaving ``node``."""
        return range(int(self._out_indptr[node]), int(self._out_indptr[node + 1]))

    def edge_index(self, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
        """
        Canonical indices of the edges src[k]->dst[k].

        Raises:
            KeyError: If some pair is not an edge of the network
        """
        keys = np.atleast_1d(np.asarray(src, dtype=np.int64) * self.n_nodes + np.asarray(dst, dtype=np.int64))
        index = np.searchsorted(self._keys, keys)
        found = index < self._keys.size
        found[found] = self._keys[index[found]] == keys[found]
        if not found.all():
            missing = int(np.flatnonzero(~found)[0])
            raise KeyError(f"no edge {int(np.ravel(src)[missing])}->{int(np.ravel(dst)[missing])}")
        return index

    def as_dict(self) -> Dict[Tuple[int, int], float]:
        return {(e.src, e.dst): e.rate for e in self.edges}

    def reversed_csr(self, weights: np.ndarray) -> csr_matrix:
        """Sparse adjacency dst->src (every edge reversed) keeping each edge's weight."""
        order = self._in_order
        return csr_matrix(
            (np.asarray(weights, dtype=np.float64)[order], self._src[order], self._in_indptr.copy()),
            shape=(self.n_nodes, self.n_nodes),
        )

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n_nodes))
        graph.add_weighted_edges_from(((e.src, e.dst, e.rate) for e in self.edges), weight="rate")
        return graph


def _indptr(keys: np.ndarray, n_nodes: int) -> np.ndarray:
    counts = np.bincount(keys, minlength=n_nodes) if keys.size else np.zeros(n_nodes, dtype=np.int64)
    return np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
