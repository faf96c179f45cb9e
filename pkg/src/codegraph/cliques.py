"""Maximal clique enumeration and the star/top taxonomy.

A maximal clique of a Grassmann graph is either a star (all k-spaces
over a fixed (k-1)-space) or a top (all k-spaces inside a fixed
(k+1)-space).  In the non-degenerate code graph the intersections of
those families with the vertex set keep the names only while they stay
maximal cliques; the q = 2 criterion below predicts when that happens
without enumerating anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError
from . import fqlinalg
from .fqlinalg import Subspace, enumerate_subspaces, intersect, rref, subspace_sum
from .grassmann import KIND_NONDEGENERATE, CodeGraph, build_graph, is_nondegenerate


def star(x: Subspace, restrict: bool = False) -> set[Subspace]:
    """All (k+1)-dimensional supersets of x, optionally non-degenerate only."""
    if x.k >= x.n:
        raise ValueError("star of the full space is empty")
    out = set()
    for v in fqlinalg.full_space(x.n, x.q).nonzero_vectors():
        if not x.contains_vector(v):
            y = rref(x.rows + (v,), x.n, x.q)
            if not restrict or is_nondegenerate(y):
                out.add(y)
    return out


def top(y: Subspace, restrict: bool = False) -> set[Subspace]:
    """All (k-1)-dimensional subspaces of y, optionally non-degenerate only."""
    if y.k == 0:
        raise ValueError("top of the zero space is empty")
    out = set()
    for pattern in enumerate_subspaces(y.k, y.k - 1, y.q):
        vecs = []
        for coeffs in pattern.rows:
            acc = [0] * y.n
            for c, row in zip(coeffs, y.rows):
                if c:
                    acc = [(a + c * r) % y.q for a, r in zip(acc, row)]
            vecs.append(tuple(acc))
        sub = rref(vecs, y.n, y.q)
        if not restrict or is_nondegenerate(sub):
            out.add(sub)
    return out


def star_criterion(x: Subspace, n: int | None = None, k: int | None = None, q: int | None = None) -> bool:
    """Predict whether the non-degenerate part of the star over x is a
    maximal clique of the code graph, without enumerating cliques.

    For q >= 3 this always holds; for q = 2 it holds exactly when the
    number of coordinate hyperplanes containing x (the all-zero columns
    of its basis) is at most n - k - 1.
    """
    if n is not None and n != x.n:
        raise ParameterError("n disagrees with the subspace")
    if q is not None and q != x.q:
        raise ParameterError("q disagrees with the subspace")
    if k is None:
        k = x.k + 1
    if k != x.k + 1:
        raise ParameterError("star centers must have dimension k - 1")
    if x.q >= 3:
        return True
    zero_cols = sum(1 for j in range(x.n) if not any(row[j] for row in x.rows))
    return zero_cols <= x.n - k - 1


@dataclass(frozen=True)
class CliqueClass:
    """A maximal clique together with its taxonomy verdict."""

    vertices: frozenset[int]
    star_center: Optional[Subspace]
    top_roof: Optional[Subspace]
    maximal_in_code_graph: bool
    is_maximal_star: bool

    @property
    def verdict(self) -> str:
        if self.star_center is not None and self.top_roof is not None:
            return "star+top"  # never expected; tests assert absence
        if self.star_center is not None:
            return "star"
        if self.top_roof is not None:
            return "top"
        return "neither"

    @property
    def size(self) -> int:
        return len(self.vertices)


def maximal_clique_masks(adj: tuple[int, ...]) -> list[int]:
    """All maximal cliques as vertex bitmasks (Bron-Kerbosch with pivot)."""
    nv = len(adj)
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        # pivot = vertex of p | x with most neighbours inside p
        best, pivot = -1, -1
        m = p | x
        while m:
            b = m & -m
            u = b.bit_length() - 1
            c = (p & adj[u]).bit_count()
            if c > best:
                best, pivot = c, u
            m ^= b
        ext = p & ~adj[pivot]
        while ext:
            b = ext & -ext
            v = b.bit_length() - 1
            bk(r | b, p & adj[v], x & adj[v])
            p ^= b
            x |= b
            ext ^= b

    bk(0, (1 << nv) - 1, 0)
    return out


def _mask_ids(mask: int) -> list[int]:
    ids = []
    while mask:
        b = mask & -mask
        ids.append(b.bit_length() - 1)
        mask ^= b
    return ids


def classify_clique(g: CodeGraph, vids: frozenset[int]) -> CliqueClass:
    """Taxonomy verdict for a maximal clique of g.

    Star and top are recorded only when the clique equals the complete
    intersection of the candidate family with g's vertex set; partial
    containment stays "neither".
    """
    members = [g.vertices[v] for v in sorted(vids)]
    k = g.k

    center = members[0]
    for m in members[1:]:
        center = intersect(center, m)
        if center.k < k - 1:
            break
    star_center = None
    if center.k == k - 1:
        family = {i for i, x in enumerate(g.vertices) if x.contains(center)}
        if family == set(vids):
            star_center = center

    roof = members[0]
    for m in members[1:]:
        roof = subspace_sum(roof, m)
        if roof.k > k + 1:
            break
    top_roof = None
    if roof.k == k + 1:
        family = {i for i, x in enumerate(g.vertices) if roof.contains(x)}
        if family == set(vids):
            top_roof = roof

    if g.kind == KIND_NONDEGENERATE:
        maximal_in_code = True
    else:
        code = build_graph(g.n, g.k, g.q, KIND_NONDEGENERATE)
        cset = {code.index[x] for x in members if is_nondegenerate(x)}
        maximal_in_code = bool(cset) and _is_maximal_clique(code, cset)

    is_max_star = star_center is not None and is_nondegenerate(star_center)
    return CliqueClass(
        vertices=frozenset(vids),
        star_center=star_center,
        top_roof=top_roof,
        maximal_in_code_graph=maximal_in_code,
        is_maximal_star=is_max_star,
    )


def _is_maximal_clique(g: CodeGraph, vids: set[int]) -> bool:
    mask = 0
    for v in vids:
        mask |= 1 << v
    # pairwise adjacency
    for v in vids:
        if (g.adj[v] & mask).bit_count() != len(vids) - 1:
            return False
    # no common neighbour outside
    common = (1 << g.nv) - 1
    for v in vids:
        common &= g.adj[v]
    return common & ~mask == 0


def enumerate_maximal_cliques(g: CodeGraph) -> list[CliqueClass]:
    """Every maximal clique of g exactly once, classified and in a
    deterministic order (sorted vertex tuples)."""
    if g.nv > 2000:
        raise ParameterError(f"clique enumeration on {g.nv} vertices exceeds the desk-scale budget")
    masks = maximal_clique_masks(g.adj)
    masks.sort(key=lambda m: tuple(_mask_ids(m)))
    return [classify_clique(g, frozenset(_mask_ids(m))) for m in masks]


def clique_report_rows(cliques: list[CliqueClass]) -> list[str]:
    rows = []
    for c in cliques:
        anchor = c.star_center if c.star_center is not None else c.top_roof
        anchor_text = anchor.inline_text() if anchor is not None else "-"
        rows.append(
            f"{c.verdict} size={c.size} anchor={anchor_text} "
            f"maximal_in_code_graph={int(c.maximal_in_code_graph)} "
            f"is_maximal_star={int(c.is_maximal_star)}"
        )
    return rows
