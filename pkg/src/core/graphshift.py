"""
Graph Shift - Edge-labeled directed graphs and conditional shift operators
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, NamedTuple

import numpy as np
from scipy.sparse import coo_array

from src.core.hilbert import OperatorMatrix, SpaceShape
from src.core.models import ShiftAudit

logger = logging.getLogger(__name__)


class Edge(NamedTuple):
    src: int
    dst: int
    label: int


@dataclass(frozen=True)
class EdgeLabeledGraph:
    """Directed graph whose edges carry integer labels"""

    n_vertices: int
    n_labels: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError(f"Graph needs at least one vertex (got {self.n_vertices})")
        if self.n_labels < 1:
            raise ValueError(f"Graph needs at least one label (got {self.n_labels})")

        edges = tuple(Edge(int(s), int(d), int(l)) for s, d, l in self.edges)
        for edge in edges:
            if not (0 <= edge.src < self.n_vertices and 0 <= edge.dst < self.n_vertices):
                raise ValueError(f"Edge {tuple(edge)} has a vertex outside 0..{self.n_vertices - 1}")
            if not 0 <= edge.label < self.n_labels:
                raise ValueError(f"Edge {tuple(edge)} has a label outside 0..{self.n_labels - 1}")

        duplicates = [e for e, count in Counter(edges).items() if count > 1]
        if duplicates:
            raise ValueError(f"Duplicate edges: {[tuple(e) for e in sorted(duplicates)]}")

        object.__setattr__(self, "edges", tuple(sorted(edges, key=lambda e: (e.label, e.src, e.dst))))

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape((self.n_vertices, self.n_labels))

    def edges_with_label(self, label: int) -> list[Edge]:
        return [e for e in self.edges if e.label == label]

    def with_edges(self, extra: Iterable[tuple[int, int, int]]) -> "EdgeLabeledGraph":
        return EdgeLabeledGraph(self.n_vertices, self.n_labels, self.edges + tuple(Edge(*e) for e in extra))

    def without_edges(self, removed: Iterable[tuple[int, int, int]]) -> "EdgeLabeledGraph":
        removed = {Edge(*e) for e in removed}
        missing = removed.difference(self.edges)
        if missing:
            raise ValueError(f"Cannot remove edges not in the graph: {[tuple(e) for e in sorted(missing)]}")
        return EdgeLabeledGraph(self.n_vertices, self.n_labels, tuple(e for e in self.edges if e not in removed))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_vertices": self.n_vertices,
            "n_labels": self.n_labels,
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EdgeLabeledGraph":
        """Build from the graph JSON schema"""
        for key in ("n_vertices", "n_labels", "edges"):
            if key not in data:
                raise ValueError(f"Graph definition is missing '{key}'")
        n_vertices, n_labels = data["n_vertices"], data["n_labels"]
        if not (_is_int(n_vertices) and _is_int(n_labels)):
            raise ValueError("'n_vertices' and 'n_labels' must be integers")
        if not isinstance(data["edges"], list):
            raise ValueError(f"'edges' must be an array of [src, dst, label] triples, got {data['edges']!r}")
        edges = []
        for i, triple in enumerate(data["edges"]):
            if not isinstance(triple, list) or len(triple) != 3 or not all(_is_int(v) for v in triple):
                raise ValueError(f"Edge #{i} must be an [src, dst, label] integer triple, got {triple!r}")
            edges.append(Edge(*triple))
        return cls(n_vertices, n_labels, tuple(edges))


def _is_int(value: Any) -> bool:
    # JSON true/false load as bool, a subclass of int
    return isinstance(value, int) and not isinstance(value, bool)


class PaperVariant(str, Enum):
    ORIGINAL = "original"
    REARRANGED = "rearranged"
    COMPLETED = "completed"


def build_shift(g: EdgeLabeledGraph) -> OperatorMatrix:
    """
    Conditional shift Σ_edges |dst><src| ⊗ |label><label| on [n_vertices, n_labels].

    Only the listed edges become entries; nothing is completed implicitly.
    """
    shape = g.shape
    rows = [shape.flat_index((e.dst, e.label)) for e in g.edges]
    cols = [shape.flat_index((e.src, e.label)) for e in g.edges]
    data = np.ones(len(g.edges), dtype=np.complex128)
    matrix = coo_array((data, (rows, cols)), shape=(shape.total, shape.total)).toarray()
    return OperatorMatrix(shape, matrix)


def audit_shift(g: EdgeLabeledGraph) -> ShiftAudit:
    """Report missing and colliding (vertex, label) pairs of the shift"""
    out_degree = Counter((e.src, e.label) for e in g.edges)
    in_degree = Counter((e.dst, e.label) for e in g.edges)

    pairs = [(v, l) for v in range(g.n_vertices) for l in range(g.n_labels)]
    audit = ShiftAudit(
        n_vertices=g.n_vertices,
        n_labels=g.n_labels,
        missing=[p for p in pairs if out_degree[p] == 0],
        colliding_out=[p for p in pairs if out_degree[p] > 1],
        colliding_in=[p for p in pairs if in_degree[p] > 1],
        column_norms={p: math.sqrt(out_degree[p]) for p in pairs},
    )
    logger.debug(
        "Shift audit: %d missing, %d out-collisions, %d in-collisions",
        len(audit.missing), len(audit.colliding_out), len(audit.colliding_in),
    )
    return audit


def complete_to_permutation(g: EdgeLabeledGraph) -> EdgeLabeledGraph:
    """
    Add edges at every missing (vertex, label) pair so the shift becomes a permutation.

    A vertex missing an outgoing edge gets a self-loop if it also misses an
    incoming edge on that label; otherwise it is paired, in sorted order, with a
    vertex that misses an incoming edge.

    Raises:
        ValueError: If the graph has out- or in-collisions
    """
    audit = audit_shift(g)
    if audit.colliding_out or audit.colliding_in:
        raise ValueError(
            f"Cannot complete a graph with collisions (out: {audit.colliding_out}, in: {audit.colliding_in})"
        )

    extra = []
    for label in range(g.n_labels):
        edges = g.edges_with_label(label)
        no_out = sorted(set(range(g.n_vertices)) - {e.src for e in edges})
        no_in = sorted(set(range(g.n_vertices)) - {e.dst for e in edges})

        loops = sorted(set(no_out) & set(no_in))
        extra.extend((v, v, label) for v in loops)
        sources = [v for v in no_out if v not in loops]
        targets = [v for v in no_in if v not in loops]
        extra.extend((src, dst, label) for src, dst in zip(sources, targets))

    logger.debug("Completion added %d edges", len(extra))
    return g.with_edges(extra)


# Edge sets transcribed from the two shift displays of the cycled-path protocol

_PAPER_LABEL0 = [(m, m + 1) for m in range(0, 8)]
_PAPER_LABEL1 = [(m, m - 1) for m in range(1, 8)] + [(8, 1), (3, 8), (9, 4), (6, 9)]
_PAPER_LABEL2 = [(1, 8), (8, 3), (4, 9), (9, 6)]
_REARRANGED_EXTRA_LABEL2 = [(5, 4), (6, 5), (3, 2), (2, 1)]


def paper_graph(variant: PaperVariant | str = PaperVariant.REARRANGED) -> EdgeLabeledGraph:
    """
    The 10-vertex cycled-path graph as listed by one of the shift displays.

    `completed` drops from label 1 the edges the rearranged display re-lists
    under label 2, then completes the result to a permutation.
    """
    variant = PaperVariant(variant)
    label2 = list(_PAPER_LABEL2)
    if variant is not PaperVariant.ORIGINAL:
        label2 += _REARRANGED_EXTRA_LABEL2

    edges = (
        [(s, d, 0) for s, d in _PAPER_LABEL0]
        + [(s, d, 1) for s, d in _PAPER_LABEL1]
        + [(s, d, 2) for s, d in label2]
    )
    graph = EdgeLabeledGraph(10, 3, tuple(Edge(*e) for e in edges))

    if variant is PaperVariant.COMPLETED:
        relisted = [(s, d, 1) for s, d in _REARRANGED_EXTRA_LABEL2]
        graph = complete_to_permutation(graph.without_edges(relisted))
    return graph


def cycle_graph(n: int) -> EdgeLabeledGraph:
    """Label 0 steps forward, label 1 steps back, modulo n"""
    if n < 2:
        raise ValueError(f"Cycle graph needs N >= 2 (got {n})")
    edges = [(i, (i + 1) % n, 0) for i in range(n)] + [(i, (i - 1) % n, 1) for i in range(n)]
    return EdgeLabeledGraph(n, 2, tuple(Edge(*e) for e in edges))


def path_graph(n: int) -> EdgeLabeledGraph:
    """
    Label 0 steps forward, label 1 steps back; each endpoint gets a self-loop
    on the label that would otherwise leave the path.
    """
    if n < 2:
        raise ValueError(f"Path graph needs N >= 2 (got {n})")
    edges = [(i, i + 1, 0) for i in range(n - 1)] + [(i, i - 1, 1) for i in range(1, n)]
    edges += [(n - 1, n - 1, 0), (0, 0, 1)]
    return EdgeLabeledGraph(n, 2, tuple(Edge(*e) for e in edges))


def cyclic_shift_graph(n: int, n_labels: int) -> EdgeLabeledGraph:
    """Label l maps i to (i + l) mod n; a permutation for every label"""
    if n < 1 or n_labels < 1:
        raise ValueError(f"Cyclic shift graph needs n >= 1 and n_labels >= 1 (got {n}, {n_labels})")
    edges = [(i, (i + l) % n, l) for l in range(n_labels) for i in range(n)]
    return EdgeLabeledGraph(n, n_labels, tuple(Edge(*e) for e in edges))
