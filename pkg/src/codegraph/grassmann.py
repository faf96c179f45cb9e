"""Grassmann graphs and induced graphs of non-degenerate linear codes.

Vertices are k-dimensional subspaces of F_q^n in the deterministic
enumeration order; two vertices are joined when their intersection has
dimension k - 1.  Adjacency is stored as one bitmask row per vertex so
that neighbourhood intersections during search are word-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

from .errors import ParameterError
from .fqlinalg import Subspace, check_space, enumerate_subspaces, rref_modq

KIND_FULL = "FullGrassmann"
KIND_NONDEGENERATE = "NonDegenerate"


def is_nondegenerate(x: Subspace) -> bool:
    """True when no coordinate hyperplane contains x.

    Equivalent to the canonical basis matrix having no all-zero column.
    """
    if x.k == 0:
        return x.n == 0
    return all(any(row[j] for row in x.rows) for j in range(x.n))


def is_adjacent(x: Subspace, y: Subspace) -> bool:
    """True when dim(x ∩ y) = k - 1, i.e. dim(x + y) = k + 1."""
    if (x.n, x.q, x.k) != (y.n, y.q, y.k):
        raise ValueError("adjacency needs equal ambient space and dimension")
    k = x.k
    if x.q == 2:
        return _sum_rank_bits(x.bits, y.bits, k) == k + 1
    rank = len(rref_modq(x.rows + y.rows, x.n, x.q))
    return rank == k + 1


def _sum_rank_bits(xb: tuple[int, ...], yb: tuple[int, ...], k: int) -> int:
    """Rank of the stacked rows, stopping early past k + 1.

    Rows are keyed by their lowest set bit (the pivot of canonical rows),
    so each reduction strictly raises the candidate's lowest bit.
    """
    pivots = {(b & -b).bit_length() - 1: b for b in xb}
    rank = k
    for r in yb:
        while r:
            p = (r & -r).bit_length() - 1
            b = pivots.get(p)
            if b is None:
                pivots[p] = r
                rank += 1
                if rank > k + 1:
                    return rank
                break
            r ^= b
    return rank


@dataclass(frozen=True)
class CodeGraph:
    """Immutable vertex-indexed graph with bitmask adjacency rows."""

    n: int
    k: int
    q: int
    kind: str
    vertices: tuple[Subspace, ...]
    adj: tuple[int, ...]
    edge_count: int

    @property
    def nv(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[Subspace, int]:
        return {x: i for i, x in enumerate(self.vertices)}

    @cached_property
    def index_bits(self) -> dict[tuple[int, ...], int]:
        """Packed-row lookup, only populated for q = 2."""
        if self.q != 2:
            return {}
        return {x.bits: i for i, x in enumerate(self.vertices)}

    @property
    def complete_regime(self) -> bool:
        """k = 1 or k = n - 1, where the ambient graph is complete."""
        return self.k in (1, self.n - 1)

    def vertex_id(self, x: Subspace) -> int:
        return self.index[x]

    def is_edge(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def neighbors(self, i: int) -> list[int]:
        m = self.adj[i]
        out = []
        while m:
            b = m & -m
            out.append(b.bit_length() - 1)
            m ^= b
        return out


@lru_cache(maxsize=None)
def build_graph(n: int, k: int, q: int, kind: str = KIND_FULL) -> CodeGraph:
    """Build the Grassmann graph or its non-degenerate induced subgraph."""
    check_space(n, q)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    if kind not in (KIND_FULL, KIND_NONDEGENERATE):
        raise ParameterError(f"unknown graph kind {kind!r}")
    vertices = enumerate_subspaces(n, k, q)
    if kind == KIND_NONDEGENERATE:
        vertices = tuple(x for x in vertices if is_nondegenerate(x))
    nv = len(vertices)
    adj = [0] * nv
    edges = 0
    if q == 2:
        bits = [x.bits for x in vertices]
        for i in range(nv):
            bi = bits[i]
            for j in range(i + 1, nv):
                if _sum_rank_bits(bi, bits[j], k) == k + 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                    edges += 1
    else:
        for i in range(nv):
            for j in range(i + 1, nv):
                if is_adjacent(vertices[i], vertices[j]):
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                    edges += 1
    return CodeGraph(n, k, q, kind, vertices, tuple(adj), edges)


def connected_components(g: CodeGraph) -> list[set[int]]:
    """Partition of vertex ids into maximal connected sets."""
    seen = 0
    comps = []
    for start in range(g.nv):
        if (seen >> start) & 1:
            continue
        frontier = 1 << start
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                nxt |= g.adj[b.bit_length() - 1]
                m ^= b
            frontier = nxt & ~comp
        seen |= comp
        ids = set()
        while comp:
            b = comp & -comp
            ids.add(b.bit_length() - 1)
            comp ^= b
        comps.append(ids)
    return comps


def graph_export_text(g: CodeGraph) -> str:
    """Header line then one hex-encoded adjacency row per vertex."""
    width = (g.nv + 3) // 4 if g.nv else 1
    lines = [f"{g.n} {g.k} {g.q} {g.kind} {g.nv} {g.edge_count}"]
    lines.extend(f"{row:0{width}x}" for row in g.adj)
    return "\n".join(lines)


def vertex_sidecar_text(g: CodeGraph) -> str:
    """Vertex id -> subspace text blocks, blank-line separated."""
    blocks = [f"# {i}\n{x.to_text()}" for i, x in enumerate(g.vertices)]
    return "\n\n".join(blocks)


def degenerate_union_count(n: int, k: int, q: int) -> int:
    """|∪_i G_k(C_i)| by direct filtering, for count cross-checks."""
    return sum(1 for x in enumerate_subspaces(n, k, q) if not is_nondegenerate(x))


def iter_edges(g: CodeGraph) -> Iterable[tuple[int, int]]:
    for i in range(g.nv):
        m = g.adj[i] & ~((1 << (i + 1)) - 1)
        while m:
            b = m & -m
            yield (i, b.bit_length() - 1)
            m ^= b
