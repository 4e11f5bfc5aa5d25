"""Unreduced Khovanov homology with coefficients in the two-element field.

Plain cube of resolutions.  Vertex bit 0 at a crossing ``X(a,b,c,d)`` is the
A-smoothing (``a~b``, ``c~d``), bit 1 the B-smoothing (``a~d``, ``b~c``).  A
generator at a vertex is a bitmask over its circles, bit set meaning ``x`` and
bit clear meaning ``1``.  Gradings::

    i = |v| - n_-
    j = (#circles - 2 #x) + |v| + n_+ - 2 n_-

so the unknot is ``{(0, 1): 1, (0, -1): 1}`` and the graded Euler
characteristic is the unnormalized Jones polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import LinkDiagram
from .invariants import CrossingCapExceeded
from .laurent import LaurentPoly1, LaurentPoly2

KHOVANOV_CAP = 13


@dataclass(frozen=True)
class BigradedDims:
    dims: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(v < 0 for v in self.dims.values()):
            raise ValueError("dimensions must be nonnegative")
        object.__setattr__(self, "dims", {k: v for k, v in self.dims.items() if v})

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedDims) and self.dims == other.dims

    def __hash__(self) -> int:
        return hash(frozenset(self.dims.items()))

    def total(self) -> int:
        return sum(self.dims.values())

    def lines(self) -> list[str]:
        return [f"({i},{j}):{d}" for (i, j), d in sorted(self.dims.items())]

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass
class ResolutionCube:
    n: int
    n_plus: int
    n_minus: int
    circles: list[list[int]]  # per vertex: label index -> circle id
    n_circles: list[int]


def _circles(n_labels: int, joins) -> tuple[list[int], int]:
    parent = list(range(n_labels))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for u, v in joins:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    ids: dict[int, int] = {}
    out = []
    for u in range(n_labels):
        r = find(u)
        if r not in ids:
            ids[r] = len(ids)
        out.append(ids[r])
    return out, len(ids)


def build_cube(d: LinkDiagram) -> tuple[ResolutionCube, list]:
    pd = d.pd
    n = len(pd)
    labels = sorted({a for q in pd for a in q})
    idx = {a: i for i, a in enumerate(labels)}
    smooth = []
    for a, b, c, e in pd:
        smooth.append(
            (
                ((idx[a], idx[b]), (idx[c], idx[e])),
                ((idx[a], idx[e]), (idx[b], idx[c])),
            )
        )
    circles = []
    counts = []
    for v in range(1 << n):
        joins = []
        for x in range(n):
            joins.extend(smooth[x][v >> x & 1])
        ci, k = _circles(len(labels), joins)
        circles.append(ci)
        counts.append(k)
    n_plus = sum(1 for s in d.signs if s > 0)
    cube = ResolutionCube(n, n_plus, n - n_plus, circles, counts)
    return cube, smooth


def _edge_map(cube: ResolutionCube, smooth, v: int, x: int):
    """Describe the edge ``v -> v | 1<<x`` as a function on generator masks."""
    w = v | (1 << x)
    cv, cw = cube.circles[v], cube.circles[w]
    (p, _), (r, _) = smooth[x][0]
    c1, c2 = cv[p], cv[r]
    image = {}
    for lab, c in enumerate(cv):
        image.setdefault(c, set()).add(cw[lab])
    moves = [(1 << c, 1 << next(iter(imgs))) for c, imgs in image.items() if c not in (c1, c2)]
    if c1 != c2:
        m = 1 << next(iter(image[c1]))
        return "merge", (1 << c1, 1 << c2, m), moves
    d1, d2 = sorted(image[c1])
    return "split", (1 << c1, 1 << d1, 1 << d2), moves


def _apply(kind, data, moves, mask: int) -> list[int]:
    base = 0
    for src, dst in moves:
        if mask & src:
            base |= dst
    if kind == "merge":
        b1, b2, m = data
        x1, x2 = mask & b1, mask & b2
        if x1 and x2:
            return []
        return [base | m] if (x1 or x2) else [base]
    b, d1, d2 = data
    if mask & b:
        return [base | d1 | d2]
    return [base | d1, base | d2]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def chain_complex(d: LinkDiagram):
    """Generators grouped by bidegree and the differential as a generator map.

    Returns ``(cube, gens, diff)`` where ``gens[(i, j)]`` lists ``(vertex, mask)``
    and ``diff(v, mask)`` yields the images (over the two-element field).
    """
    cube, smooth = build_cube(d)
    n = cube.n
    shift_j = cube.n_plus - 2 * cube.n_minus
    gens: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for v in range(1 << n):
        k = cube.n_circles[v]
        h = _popcount(v)
        for mask in range(1 << k):
            j = k - 2 * _popcount(mask) + h + shift_j
            gens.setdefault((h - cube.n_minus, j), []).append((v, mask))
    edges: dict[tuple[int, int], tuple] = {}

    def diff(v: int, mask: int) -> list[tuple[int, int]]:
        out: dict[tuple[int, int], int] = {}
        for x in range(n):
            if v >> x & 1:
                continue
            key = (v, x)
            e = edges.get(key)
            if e is None:
                e = edges[key] = _edge_map(cube, smooth, v, x)
            w = v | (1 << x)
            for m in _apply(*e, mask):
                out[(w, m)] = out.get((w, m), 0) ^ 1
        return [g for g, c in out.items() if c]

    return cube, gens, diff


def _rank_f2(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            h = row.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = row
                rank += 1
                break
            row ^= b
    return rank


def khovanov_f2(d: LinkDiagram, cap: int | None = None) -> BigradedDims:
    cap = KHOVANOV_CAP if cap is None else cap
    if d.n_crossings > cap:
        raise CrossingCapExceeded(f"{d.n_crossings} crossings exceeds the cap of {cap}")
    if not d.crossings:
        return BigradedDims(_unlink(d.n_components))
    _, gens, diff = chain_complex(d)
    index = {key: {g: k for k, g in enumerate(lst)} for key, lst in gens.items()}
    ranks: dict[tuple[int, int], int] = {}
    for (i, j), lst in gens.items():
        target = index.get((i + 1, j))
        if not target:
            ranks[(i, j)] = 0
            continue
        rows = []
        for v, mask in lst:
            row = 0
            for g in diff(v, mask):
                row |= 1 << target[g]
            rows.append(row)
        ranks[(i, j)] = _rank_f2(rows)
    dims = {}
    for (i, j), lst in gens.items():
        h = len(lst) - ranks[(i, j)] - ranks.get((i - 1, j), 0)
        if h:
            dims[(i, j)] = h
    return BigradedDims(dims)


def _unlink(c: int) -> dict:
    # (q + q^-1)^c in homological degree 0
    poly = {0: 1}
    for _ in range(c):
        nxt: dict[int, int] = {}
        for e, k in poly.items():
            nxt[e + 1] = nxt.get(e + 1, 0) + k
            nxt[e - 1] = nxt.get(e - 1, 0) + k
        poly = nxt
    return {(0, e): k for e, k in poly.items()}


def check_d_squared(d: LinkDiagram) -> bool:
    """Verify that the assembled differential squares to zero on every generator."""
    _, gens, diff = chain_complex(d)
    for lst in gens.values():
        for v, mask in lst:
            acc: dict[tuple[int, int], int] = {}
            for g in diff(*(v, mask)):
                for h in diff(*g):
                    acc[h] = acc.get(h, 0) ^ 1
            if any(acc.values()):
                return False
    return True


def poincare_poly(b: BigradedDims) -> LaurentPoly2:
    """``sum dim * q^j * t^i`` with variables ``(q, t)``."""
    return LaurentPoly2({(j, i): dim for (i, j), dim in b.dims.items()}, ("q", "t"))


def specialize_t(b: BigradedDims, value: int) -> LaurentPoly1:
    if value not in (1, -1):
        raise ValueError("t can only be specialized to +1 or -1")
    return poincare_poly(b).substitute("t", value, 0)
