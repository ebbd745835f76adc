"""Undirected, unweighted graphs and their normalized operators.

The graph model is deliberately small: a node count, a set of unordered
edges, and a flag saying whether every node carries a self-loop.  Graphs are
immutable after construction and degree-0 nodes are rejected outright, since
the normalized operators D^{-1/2} A D^{-1/2} are undefined there.

Random generation is seeded (NumPy ``default_rng``, i.e. the PCG64 stream)
and draws candidate pairs in lexicographic order, so a (spec, seed) pair
reproduces the same graph on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateGraphError,
    FileParseError,
    InvalidSpecError,
)

__all__ = [
    "Graph",
    "GraphSpec",
    "generate_graph",
    "parse_edge_list",
    "format_edge_list",
    "normalized_adjacency",
    "normalized_laplacian",
]

GENERATION_RETRIES = 100


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph.

    Attributes
    ----------
    n : int
        Node count; node indices are 0..n-1.
    edges : frozenset[tuple[int, int]]
        Unordered pairs stored as (min, max).  When ``self_loops`` is true
        the pairs (i, i) for every node are included.
    self_loops : bool
        True iff every node carries a self-loop.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    self_loops: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpecError(f"graph needs at least one node, got n={self.n}")
        loops = {(i, i) for i in range(self.n)}
        present_loops = {e for e in self.edges if e[0] == e[1]}
        if self.self_loops and present_loops != loops:
            raise InvalidSpecError("self_loops=True requires a loop on every node")
        if not self.self_loops and present_loops:
            raise InvalidSpecError(
                "loop pairs are controlled by the self_loops flag, not the edge set"
            )
        for i, j in self.edges:
            if not (0 <= i <= j < self.n):
                raise InvalidSpecError(f"edge ({i},{j}) out of range for n={self.n}")
        deg = self.degrees()
        if np.any(deg == 0):
            bad = int(np.argmin(deg))
            raise DegenerateGraphError(f"node {bad} has degree 0")

    @staticmethod
    def from_edges(n: int, pairs: Iterable[Sequence[int]], self_loops: bool = False) -> "Graph":
        """Canonicalize ``pairs`` (dedupe, orient as (min, max)) into a Graph.

        Loop pairs (i, i) must not appear in ``pairs``; node-wide self-loops
        are requested through the flag instead.
        """
        canon = set()
        for i, j in pairs:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidSpecError(
                    f"explicit loop pair ({i},{i}); use self_loops=True instead"
                )
            canon.add((min(i, j), max(i, j)))
        if self_loops:
            canon.update((i, i) for i in range(n))
        return Graph(n=n, edges=frozenset(canon), self_loops=self_loops)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix A (float64, exactly symmetric)."""
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = 1.0
            a[j, i] = 1.0
        return a

    def degrees(self) -> np.ndarray:
        """Per-node degrees d_i = sum_j a_ij (a self-loop counts once)."""
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            if i == j:
                deg[i] += 1
            else:
                deg[i] += 1
                deg[j] += 1
        return deg

    def plain_edges(self) -> list:
        """Sorted non-loop edges, for serialization."""
        return sorted(e for e in self.edges if e[0] != e[1])


def normalized_adjacency(g: Graph) -> np.ndarray:
    """Symmetric normalized adjacency D^{-1/2} A D^{-1/2}.

    Entries (i, j) and (j, i) are the same float product, so the result is
    symmetric to exact bit equality.
    """
    a = g.adjacency()
    dinv = 1.0 / np.sqrt(g.degrees().astype(float))
    return a * np.outer(dinv, dinv)


def normalized_laplacian(g: Graph) -> np.ndarray:
    """Normalized Laplacian I - D^{-1/2} A D^{-1/2} (positive semi-definite)."""
    return np.eye(g.n) - normalized_adjacency(g)


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for a graph: a named family plus its parameters.

    kind is one of ``cycle``, ``path``, ``complete_bipartite``,
    ``erdos_renyi``, ``sbm``, ``file``.  Unused parameters may stay None.
    """

    kind: str
    n: Optional[int] = None
    m: Optional[int] = None
    sizes: Optional[tuple] = None
    p: Optional[float] = None
    p_in: Optional[float] = None
    p_out: Optional[float] = None
    seed: int = 0
    self_loops: bool = False
    path: Optional[str] = None


def _check_prob(name: str, value) -> float:
    if value is None or not (0.0 <= float(value) <= 1.0):
        raise InvalidSpecError(f"{name} must lie in [0,1], got {value!r}")
    return float(value)


def _pairs_lex(n: int):
    return [(i, j) for i in range(n - 1) for j in range(i + 1, n)]


def _draw_edges(rng: np.random.Generator, pairs, prob_of) -> list:
    draws = rng.random(len(pairs))
    return [pq for pq, u in zip(pairs, draws) if u < prob_of(pq)]


def _retry_random(build, self_loops: bool) -> Graph:
    """Re-draw a random graph until no node has degree 0."""
    last_error = None
    for _ in range(GENERATION_RETRIES):
        try:
            return Graph.from_edges(*build(), self_loops=self_loops)
        except DegenerateGraphError as exc:
            last_error = exc
    raise DegenerateGraphError(
        f"no draw with minimum degree 1 in {GENERATION_RETRIES} retries: {last_error}"
    )


def generate_graph(spec: GraphSpec) -> Graph:
    """Build the graph described by ``spec``.

    Deterministic for a fixed (spec, seed).  Random kinds are re-drawn (up to
    100 times) until every node has degree >= 1.
    """
    kind = spec.kind
    if kind == "cycle":
        n = spec.n or 0
        if n < 3:
            raise InvalidSpecError(f"cycle needs n >= 3 (n=2 duplicates an edge), got {n}")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], spec.self_loops)
    if kind == "path":
        n = spec.n or 0
        if n < 1:
            raise InvalidSpecError(f"path needs n >= 1, got {n}")
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], spec.self_loops)
    if kind == "complete_bipartite":
        m, n = spec.m or 0, spec.n or 0
        if m < 1 or n < 1:
            raise InvalidSpecError(f"complete_bipartite needs m, n >= 1, got m={m}, n={n}")
        return Graph.from_edges(
            m + n, [(i, m + j) for i in range(m) for j in range(n)], spec.self_loops
        )
    if kind == "erdos_renyi":
        n = spec.n or 0
        if n < 1:
            raise InvalidSpecError(f"erdos_renyi needs n >= 1, got {n}")
        p = _check_prob("p", spec.p)
        rng = np.random.default_rng(spec.seed)
        pairs = _pairs_lex(n)
        return _retry_random(lambda: (n, _draw_edges(rng, pairs, lambda pq: p)), spec.self_loops)
    if kind == "sbm":
        sizes = tuple(int(s) for s in (spec.sizes or ()))
        if len(sizes) < 2:
            raise InvalidSpecError(f"sbm needs >= 2 communities, got sizes={sizes}")
        if any(s < 1 for s in sizes):
            raise InvalidSpecError(f"sbm community sizes must be >= 1, got {sizes}")
        p_in = _check_prob("p_in", spec.p_in)
        p_out = _check_prob("p_out", spec.p_out)
        total = sum(sizes)
        community = np.repeat(np.arange(len(sizes)), sizes)
        rng = np.random.default_rng(spec.seed)
        pairs = _pairs_lex(total)

        def prob_of(pq):
            return p_in if community[pq[0]] == community[pq[1]] else p_out

        return _retry_random(lambda: (total, _draw_edges(rng, pairs, prob_of)), spec.self_loops)
    if kind == "file":
        if not spec.path:
            raise InvalidSpecError("kind=file requires a path")
        try:
            with open(spec.path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise FileParseError(f"cannot read {spec.path}: {exc}") from exc
        return parse_edge_list(text, self_loops=spec.self_loops)
    raise InvalidSpecError(f"unknown graph kind {kind!r}")


def parse_edge_list(text: str, self_loops: bool = False) -> Graph:
    """Parse a whitespace-separated edge list into a Graph.

    Each non-comment line is ``u v`` (decimal node indices).  Lines starting
    with '#' and blank lines are ignored.  An optional first line ``n=<int>``
    fixes the node count; otherwise n = 1 + max index.  Duplicate pairs
    collapse.  Loop lines ``u u`` are rejected: node-wide self-loops are a
    caller-level flag, not file content.
    """
    n_declared = None
    pairs = []
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n=") and not saw_content:
            try:
                n_declared = int(line[2:])
            except ValueError as exc:
                raise FileParseError(f"line {lineno}: bad header {line!r}") from exc
            saw_content = True
            continue
        saw_content = True
        tokens = line.split()
        if len(tokens) != 2:
            raise FileParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise FileParseError(f"line {lineno}: non-integer token in {line!r}") from exc
        if u < 0 or v < 0:
            raise FileParseError(f"line {lineno}: negative node index in {line!r}")
        if u == v:
            raise FileParseError(
                f"line {lineno}: loop edge {u} {v}; self-loops are requested via a flag"
            )
        pairs.append((u, v))
    if not pairs and n_declared is None:
        raise FileParseError("edge list contains no edges and no n=<int> header")
    max_index = max(max(p) for p in pairs) if pairs else -1
    n = n_declared if n_declared is not None else max_index + 1
    if n <= max_index:
        raise FileParseError(f"header n={n} but node index {max_index} appears")
    return Graph.from_edges(n, pairs, self_loops=self_loops)


def format_edge_list(g: Graph) -> str:
    """Serialize a graph to the edge-list format accepted by parse_edge_list.

    Self-loops are not written; re-apply them via the self_loops flag when
    reloading.
    """
    lines = [f"n={g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.plain_edges())
    return "\n".join(lines) + "\n"
