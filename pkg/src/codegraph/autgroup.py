"""Automorphisms of Grassmann and code graphs.

An automorphism is an invertible matrix acting on subspaces, optionally
composed with the orthocomplement with respect to the standard dot
product (legal only when the ambient dimension is twice the subspace
dimension).  Code-graph automorphisms are generated by monomial
matrices, which over F_2 are exactly the coordinate permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import Callable, Iterator

from .errors import ParameterError
from .fqlinalg import (
    Subspace,
    Vector,
    bits_to_vec,
    check_space,
    full_space,
    nullspace,
    rref,
    vec_to_bits,
)
from .grassmann import CodeGraph

Matrix = tuple[Vector, ...]  # row tuples


def _mat_mul(a: Matrix, b: Matrix, q: int) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % q for col in bt) for row in a
    )


def _mat_vec(a: Matrix, v: Vector, q: int) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) % q for row in a)


def _identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_inv(a: Matrix, q: int) -> Matrix:
    """Gauss-Jordan inverse; raises on singular input."""
    n = len(a)
    work = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ParameterError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = pow(work[col][col], q - 2, q)
        work[col] = [(x * inv) % q for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                c = work[r][col]
                work[r] = [(x - c * y) % q for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def _mat_transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def _scalar_normalize(a: Matrix, q: int) -> Matrix:
    """Scale so the first nonzero entry (row-major) is 1; identifies
    scalar multiples, which act identically on subspaces."""
    if q == 2:
        return a
    lead = next(c for row in a for c in row if c)
    inv = pow(lead, q - 2, q)
    return tuple(tuple((c * inv) % q for c in row) for row in a)


@dataclass(frozen=True)
class GraphAutomorphism:
    """Invertible matrix plus an orthocomplement flag.

    Equality quotients out scalars, which is the semantically correct
    identification since scalar multiples act identically.
    """

    n: int
    q: int
    rows: Matrix
    dual: bool = False

    def __post_init__(self) -> None:
        _mat_inv(self.rows, self.q)  # raises if singular
        object.__setattr__(self, "rows", _scalar_normalize(self.rows, self.q))

    @cached_property
    def cols_bits(self) -> tuple[int, ...]:
        """Column bitmasks for the q = 2 fast path."""
        return tuple(vec_to_bits(col) for col in zip(*self.rows))

    @property
    def is_identity(self) -> bool:
        return not self.dual and self.rows == _identity(self.n)

    def to_text(self) -> str:
        lines = ["".join(str(c) for c in row) for row in self.rows]
        lines.append("1" if self.dual else "0")
        return "\n".join(lines)

    def inline_text(self) -> str:
        return ",".join("".join(str(c) for c in row) for row in self.rows) + (
            " dual=1" if self.dual else " dual=0"
        )


def automorphism_from_text(text: str, q: int = 2) -> GraphAutomorphism:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    rows = tuple(tuple(int(ch) for ch in ln) for ln in lines[:-1])
    return GraphAutomorphism(len(rows), q, rows, dual=lines[-1] == "1")


def identity_automorphism(n: int, q: int = 2) -> GraphAutomorphism:
    return GraphAutomorphism(n, q, _identity(n))


def orthocomplement(x: Subspace, form: Matrix | None = None) -> Subspace:
    """Orthogonal complement under the standard dot product (or the
    given symmetric form): all v with x_row · form · v = 0."""
    if x.k == 0:
        return full_space(x.n, x.q)
    rows = x.rows if form is None else tuple(_mat_vec(form, r, x.q) for r in x.rows)
    # v is in the complement iff (rows) v = 0 since the form is symmetric
    return nullspace(rows, x.n, x.q)


def apply(a: GraphAutomorphism, x: Subspace) -> Subspace:
    """Image subspace; matrix action first, then orthocomplement if dual."""
    if a.n != x.n or a.q != x.q:
        raise ParameterError("automorphism and subspace live in different spaces")
    if a.dual and x.n != 2 * x.k:
        raise ParameterError("dual flag needs ambient dimension twice the subspace dimension")
    if x.q == 2:
        cols = a.cols_bits
        imgs = []
        for row in x.bits:
            w = 0
            m = row
            while m:
                b = m & -m
                w ^= cols[b.bit_length() - 1]
                m ^= b
            imgs.append(bits_to_vec(w, x.n))
        image = rref(imgs, x.n, 2)
    else:
        image = rref([_mat_vec(a.rows, v, x.q) for v in x.rows], x.n, x.q)
    return orthocomplement(image) if a.dual else image


def compose(a: GraphAutomorphism, b: GraphAutomorphism) -> GraphAutomorphism:
    """The automorphism acting as a after b.

    Dual flags xor; when the inner map carries the flag, the outer
    matrix conjugates through inverse-transpose, because the complement
    of M X is the inverse-transpose of M applied to the complement of X.
    """
    if (a.n, a.q) != (b.n, b.q):
        raise ParameterError("composing automorphisms of different spaces")
    ma = _mat_transpose(_mat_inv(a.rows, a.q)) if b.dual else a.rows
    return GraphAutomorphism(a.n, a.q, _mat_mul(ma, b.rows, a.q), dual=a.dual ^ b.dual)


def inverse(a: GraphAutomorphism) -> GraphAutomorphism:
    if a.dual:
        return GraphAutomorphism(a.n, a.q, _mat_transpose(a.rows), dual=True)
    return GraphAutomorphism(a.n, a.q, _mat_inv(a.rows, a.q), dual=False)


# ---------------------------------------------------------------------------
# group enumeration


def order_gl(n: int, q: int) -> int:
    order = 1
    for i in range(n):
        order *= q**n - q**i
    return order


def order_pgl(n: int, q: int) -> int:
    return order_gl(n, q) // (q - 1)


def gl2_cols_stream(n: int) -> Iterator[tuple[int, ...]]:
    """All invertible matrices over F_2 as column-bitmask tuples, in a
    fixed depth-first order (columns chosen in increasing packed value)."""
    cols: list[int] = []
    span = {0}

    def rec() -> Iterator[tuple[int, ...]]:
        if len(cols) == n:
            yield tuple(cols)
            return
        for c in range(1, 1 << n):
            if c not in span:
                added = {s ^ c for s in span}
                span.update(added)
                cols.append(c)
                yield from rec()
                cols.pop()
                span.difference_update(added)
        return

    yield from rec()


def _cols_bits_to_rows(cols: tuple[int, ...], n: int) -> Matrix:
    return tuple(tuple((cols[j] >> i) & 1 for j in range(n)) for i in range(n))


def matrices_pgl_stream(n: int, q: int) -> Iterator[Matrix]:
    """Invertible matrices modulo scalars, streamed in a fixed order."""
    if q == 2:
        for cols in gl2_cols_stream(n):
            yield _cols_bits_to_rows(cols, n)
        return
    nonzero = [v for v in itertools.product(range(q), repeat=n) if any(v)]
    monic = [v for v in nonzero if v[next(i for i, c in enumerate(v) if c)] == 1]

    def combos(rows: list[Vector]) -> set[Vector]:
        span = set()
        for coeffs in itertools.product(range(q), repeat=len(rows)):
            acc = [0] * n
            for c, r in zip(coeffs, rows):
                if c:
                    acc = [(x + c * y) % q for x, y in zip(acc, r)]
            span.add(tuple(acc))
        return span

    def rec(rows: list[Vector]) -> Iterator[Matrix]:
        if len(rows) == n:
            yield tuple(rows)
            return
        pool = monic if not rows else nonzero
        span = combos(rows)
        for v in pool:
            if v not in span:
                yield from rec(rows + [v])

    yield from rec([])


@dataclass(frozen=True)
class GroupHandle:
    """Order plus deterministic element iteration."""

    description: str
    n: int
    q: int
    order: int
    _factory: Callable[[], Iterator[GraphAutomorphism]]

    def elements(self) -> Iterator[GraphAutomorphism]:
        return self._factory()

    def __iter__(self) -> Iterator[GraphAutomorphism]:
        return self.elements()

    def __len__(self) -> int:
        return self.order


def grassmann_aut_group(n: int, k: int, q: int) -> GroupHandle:
    """The generated automorphism group of the full Grassmann graph:
    invertible matrices modulo scalars, doubled by the orthocomplement
    exactly when n = 2k."""
    check_space(n, q)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    with_dual = n == 2 * k
    order = order_pgl(n, q) * (2 if with_dual else 1)

    def factory() -> Iterator[GraphAutomorphism]:
        for rows in matrices_pgl_stream(n, q):
            yield GraphAutomorphism(n, q, rows, dual=False)
        if with_dual:
            for rows in matrices_pgl_stream(n, q):
                yield GraphAutomorphism(n, q, rows, dual=True)

    kind = "PGL with orthocomplement" if with_dual else "PGL"
    return GroupHandle(f"{kind}({n},{q})", n, q, order, factory)


def code_graph_aut_group(n: int, k: int, q: int) -> GroupHandle:
    """Monomial matrices modulo scalars acting on the code graph."""
    check_space(n, q)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    order = factorial(n) * (q - 1) ** (n - 1)

    def factory() -> Iterator[GraphAutomorphism]:
        units = tuple(range(1, q))
        for perm in itertools.permutations(range(n)):
            # diagonal normalized so the first coordinate scale is 1
            for diag in itertools.product(units, repeat=n - 1):
                scales = (1,) + diag
                rows = tuple(
                    tuple(scales[c] if r == perm[c] else 0 for c in range(n))
                    for r in range(n)
                )
                yield GraphAutomorphism(n, q, rows, dual=False)

    return GroupHandle(f"monomial({n},{q})", n, q, order, factory)


def vertex_permutation(a: GraphAutomorphism, g: CodeGraph) -> tuple[int, ...]:
    """Action of a on g's vertex ids; raises KeyError if a does not
    stabilize the vertex set."""
    return tuple(g.index[apply(a, x)] for x in g.vertices)


# ---------------------------------------------------------------------------
# direct graph-automorphism search (independent of any group theory)


def _greedy_order(adj: tuple[int, ...]) -> list[int]:
    """Vertices ordered so each has the most already-placed neighbours;
    ties go to the smaller id."""
    nv = len(adj)
    placed: list[int] = []
    placed_mask = 0
    remaining = set(range(nv))
    while remaining:
        best = max(remaining, key=lambda v: ((adj[v] & placed_mask).bit_count(), -v))
        placed.append(best)
        placed_mask |= 1 << best
        remaining.discard(best)
    return placed


def graph_automorphisms(g: CodeGraph, collect: bool = False) -> tuple[int, list[tuple[int, ...]]]:
    """Count (and optionally collect) all adjacency-preserving vertex
    bijections by plain backtracking with forward domain pruning."""
    adj = g.adj
    nv = g.nv
    degrees = [a.bit_count() for a in adj]
    order = _greedy_order(adj)
    full = (1 << nv) - 1
    cand = [0] * nv
    for v in range(nv):
        m = 0
        for c in range(nv):
            if degrees[c] == degrees[v]:
                m |= 1 << c
        cand[v] = m
    later = [order[d + 1 :] for d in range(nv)]
    mapping = [0] * nv
    count = 0
    perms: list[tuple[int, ...]] = []

    def rec(d: int, used: int) -> None:
        nonlocal count
        if d == nv:
            count += 1
            if collect:
                perms.append(tuple(mapping))
            return
        v = order[d]
        m = cand[v] & ~used
        while m:
            b = m & -m
            c = b.bit_length() - 1
            m ^= b
            undo: list[tuple[int, int]] = []
            ok = True
            for w in later[d]:
                old = cand[w]
                new = old & (adj[c] if (adj[v] >> w) & 1 else ~adj[c])
                if new != old:
                    if not new & ~(used | b):
                        ok = False
                        # no need to undo this one, it was never written
                    cand[w] = new
                    undo.append((w, old))
                    if not ok:
                        break
            if ok:
                mapping[v] = c
                rec(d + 1, used | b)
            for w, old in undo:
                cand[w] = old
        return

    rec(0, 0)
    return count, perms
