"""Rational tangle arithmetic and Conway mutation of link diagrams.

Tangle expressions use the text grammar ``3``, ``-3``, ``3b`` (vertical run,
usually drawn with an overbar), ``-3b``, ``0``, ``inf``, joined by ``+h`` and
``+v`` with parentheses; operators associate to the left.

Boundary positions of a tangle region are numbered counterclockwise
0 = NE, 1 = NW, 2 = SW, 3 = SE, with position 0 at the boundary arc of smallest
label.  The symmetries of the square, in standard coordinates (x to the right,
y up, z towards the viewer):

* ``rotate_z`` -- half turn in the plane, positions ``k -> k+2``;
* ``rotate_y`` -- left-right reflection with every crossing switched, ``0<->1, 2<->3``;
* ``rotate_x`` -- top-bottom reflection with every crossing switched, ``0<->3, 1<->2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .diagram import LinkDiagram, diagram_from_pd


class TangleError(ValueError):
    pass


class NotRational(TangleError):
    pass


class NotNormalForm(TangleError):
    pass


class RegionInvalid(TangleError):
    pass


class TangleParseError(TangleError):
    pass


INF = "inf"


# --------------------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Atom:
    """``n`` horizontal half-twists, or ``n`` vertical ones when ``bar`` is set.

    ``Atom(0)`` is the 0 tangle and ``Atom(0, bar=True)`` the infinity tangle.
    """

    n: int
    bar: bool = False

    def __str__(self) -> str:
        if self.n == 0 and self.bar:
            return INF
        return f"{self.n}b" if self.bar else str(self.n)

    @property
    def crossings(self) -> int:
        return abs(self.n)

    def as_integer(self):
        """Horizontal twist count if this atom is an integer tangle (``+-1`` count both ways)."""
        if not self.bar or abs(self.n) == 1:
            return self.n
        return None

    def as_vertical(self):
        if self.bar or abs(self.n) == 1:
            return self.n
        return None


@dataclass(frozen=True)
class Sum:
    left: "TangleExpr"
    right: "TangleExpr"
    op: str  # "h" or "v"

    def __str__(self) -> str:
        return f"({self.left} +{self.op} {self.right})"

    @property
    def crossings(self) -> int:
        return self.left.crossings + self.right.crossings


TangleExpr = Atom | Sum


_TOKEN = re.compile(r"\s*(\(|\)|\+h|\+v|inf|∞|-?\d+b?)")


def parse_tangle(text: str) -> TangleExpr:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TangleParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not tokens:
        raise TangleParseError("empty tangle expression")
    expr, k = _parse_chain(tokens, 0)
    if k != len(tokens):
        raise TangleParseError(f"trailing tokens: {tokens[k:]}")
    return expr


def _parse_chain(tokens, k):
    left, k = _parse_primary(tokens, k)
    while k < len(tokens) and tokens[k] in ("+h", "+v"):
        op = tokens[k][1]
        right, k = _parse_primary(tokens, k + 1)
        left = Sum(left, right, op)
    return left, k


def _parse_primary(tokens, k):
    if k >= len(tokens):
        raise TangleParseError("expression ends early")
    tok = tokens[k]
    if tok == "(":
        expr, k = _parse_chain(tokens, k + 1)
        if k >= len(tokens) or tokens[k] != ")":
            raise TangleParseError("unbalanced parentheses")
        return expr, k + 1
    if tok in ("inf", "∞"):
        return Atom(0, True), k + 1
    if tok in ("+h", "+v", ")"):
        raise TangleParseError(f"unexpected {tok!r}")
    if tok.endswith("b"):
        return Atom(int(tok[:-1]), True), k + 1
    return Atom(int(tok)), k + 1


def format_tangle(t: TangleExpr) -> str:
    s = str(t)
    return s[1:-1] if s.startswith("(") else s


# Fractions are kept projectively as (p, q) meaning p/q, with (1, 0) = infinity.


def _frac(t: TangleExpr) -> tuple[int, int]:
    if isinstance(t, Atom):
        if t.bar:
            return (1, t.n)  # 1/n, and 1/0 is infinity
        return (t.n, 1)
    left, right = t.left, t.right
    if t.op == "h":
        for a, other in ((right, left), (left, right)):
            if isinstance(a, Atom) and a.as_integer() is not None:
                p, q = _frac(other)
                return _norm(p + a.as_integer() * q, q)
        raise NotRational("horizontal sum needs an integer summand to stay rational")
    for a, other in ((right, left), (left, right)):
        if isinstance(a, Atom) and a.as_vertical() is not None:
            p, q = _frac(other)
            return _norm(p, q + a.as_vertical() * p)
    raise NotRational("vertical sum needs a vertical summand to stay rational")


def _norm(p: int, q: int) -> tuple[int, int]:
    if p == 0 and q == 0:
        raise NotRational("sum closes off a loop")
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    from math import gcd

    g = gcd(p, q)
    return (p // g, q // g)


def tangle_fraction(t: TangleExpr | str) -> Fraction | str:
    """Conway fraction of a rational tangle; ``"inf"`` for the infinity tangle."""
    if isinstance(t, str):
        t = parse_tangle(t)
    p, q = _frac(t)
    if q == 0:
        return INF
    return Fraction(p, q)


def summands(t: TangleExpr) -> tuple[list[Atom], list[str]]:
    """Atoms and operators of a left-associated chain ``a1 op a2 op a3 ...``."""
    ops: list[str] = []
    atoms: list[Atom] = []
    node = t
    while isinstance(node, Sum):
        if not isinstance(node.right, Atom):
            raise NotNormalForm("summands must be atoms chained from the left")
        atoms.append(node.right)
        ops.append(node.op)
        node = node.left
    atoms.append(node)
    return atoms[::-1], ops[::-1]


def build_chain(atoms: Sequence[Atom], ops: Sequence[str]) -> TangleExpr:
    expr: TangleExpr = atoms[0]
    for a, op in zip(atoms[1:], ops):
        expr = Sum(expr, a, op)
    return expr


def summand_permutation_invariance_check(t: TangleExpr | str, permutation: Sequence[int]) -> bool:
    """True iff permuting the summands of ``t`` keeps its Conway fraction."""
    if isinstance(t, str):
        t = parse_tangle(t)
    atoms, ops = summands(t)
    if sorted(permutation) != list(range(len(atoms))):
        raise ValueError("not a permutation of the summand positions")
    before = tangle_fraction(t)
    try:
        after = tangle_fraction(build_chain([atoms[i] for i in permutation], ops))
    except NotRational:
        return False
    return before == after


# --------------------------------------------------------------------------- symmetries


class SquareSymmetry(Enum):
    identity = "identity"
    rotate_x = "rotate_x"
    rotate_y = "rotate_y"
    rotate_z = "rotate_z"

    @property
    def permutation(self) -> tuple[int, int, int, int]:
        return _PERMS[self]

    @property
    def reflects(self) -> bool:
        return self in (SquareSymmetry.rotate_x, SquareSymmetry.rotate_y)

    def compose(self, other: "SquareSymmetry") -> "SquareSymmetry":
        """``self`` after ``other``."""
        p = tuple(self.permutation[other.permutation[k]] for k in range(4))
        return next(s for s in SquareSymmetry if s.permutation == p)


_PERMS = {
    SquareSymmetry.identity: (0, 1, 2, 3),
    SquareSymmetry.rotate_z: (2, 3, 0, 1),
    SquareSymmetry.rotate_y: (1, 0, 3, 2),
    SquareSymmetry.rotate_x: (3, 2, 1, 0),
}


# --------------------------------------------------------------------------- regions


@dataclass(frozen=True)
class TangleRegion:
    diagram: LinkDiagram
    crossings: frozenset
    boundary: tuple  # ((arc, "in"|"out"), ...) at positions 0..3
    stubs: tuple  # (crossing, slot) inside the region for each position

    @property
    def size(self) -> int:
        return len(self.crossings)

    @property
    def pattern(self) -> tuple[str, ...]:
        return tuple(io for _, io in self.boundary)


def _incoming(d: LinkDiagram, x: int, slot: int) -> bool:
    if slot == 0:
        return True
    if slot == 2:
        return False
    return (slot == 3) == (d.crossings[x].sign > 0)


def region_from_crossings(d: LinkDiagram, crossings) -> TangleRegion:
    """Build the region for a crossing subset; raises ``RegionInvalid`` unless it is a 4-ended disk."""
    S = frozenset(crossings)
    if not S or len(S) >= d.n_crossings or any(not 0 <= x < d.n_crossings for x in S):
        raise RegionInvalid("region must be a proper nonempty subset of the crossings")
    pd = d.pd
    stubs = []
    for x in S:
        for s in range(4):
            y, _ = d.other_end(x, s)
            if y not in S:
                stubs.append((x, s))
    if len(stubs) != 4:
        raise RegionInvalid(f"region has {len(stubs)} boundary arcs, not 4")
    if not _connected(d, S):
        raise RegionInvalid("region is not connected")
    stub_set = set(stubs)
    # walk the face of the region's own embedding that carries the stubs
    start_corner = (stubs[0][0], (stubs[0][1] - 1) % 4)
    order = []
    cur = start_corner
    seen = set()
    while cur not in seen:
        seen.add(cur)
        x, k = cur
        s = (k + 1) % 4
        if (x, s) in stub_set:
            order.append((x, s))
            cur = (x, s)
        else:
            cur = d.other_end(x, s)
    if len(order) != 4:
        raise RegionInvalid("boundary arcs do not lie on a common face of the region")
    labels = [pd[x][s] for x, s in order]
    i = labels.index(min(labels))
    order = order[i:] + order[:i]
    boundary = tuple((pd[x][s], "in" if _incoming(d, x, s) else "out") for x, s in order)
    return TangleRegion(d, S, boundary, tuple(order))


def _connected(d: LinkDiagram, S) -> bool:
    S = set(S)
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for s in range(4):
            y, _ = d.other_end(x, s)
            if y in S and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == S


def find_tangle_regions(d: LinkDiagram, max_size: int = 8, include_single: bool = False) -> list[TangleRegion]:
    """All connected proper crossing subsets of size <= ``max_size`` bounded by exactly four arcs."""
    n = d.n_crossings
    if n == 0:
        return []
    nbrs = [set() for _ in range(n)]
    for x in range(n):
        for s in range(4):
            y, _ = d.other_end(x, s)
            if y != x:
                nbrs[x].add(y)
    found: set[frozenset] = set()
    frontier = {frozenset([x]) for x in range(n)}
    all_sets = set(frontier)
    for _ in range(1, min(max_size, n - 1)):
        nxt = set()
        for S in frontier:
            for x in S:
                for y in nbrs[x]:
                    if y not in S:
                        T = S | {y}
                        if T not in all_sets:
                            nxt.add(T)
        all_sets |= nxt
        frontier = nxt
    out = []
    min_size = 1 if include_single else 2
    for S in sorted(all_sets, key=lambda s: (len(s), sorted(s))):
        if len(S) < min_size or len(S) > max_size or len(S) >= n:
            continue
        try:
            out.append(region_from_crossings(d, S))
        except RegionInvalid:
            continue
    return out


def is_oriented_mutation(r: TangleRegion | Sequence[str], s: SquareSymmetry) -> bool:
    """True iff the symmetry carries the in/out boundary pattern onto itself."""
    pattern = r.pattern if isinstance(r, TangleRegion) else tuple(r)
    perm = s.permutation
    return all(pattern[perm[k]] == pattern[k] for k in range(4))


# --------------------------------------------------------------------------- mutation


def mutate(d: LinkDiagram, r: TangleRegion, s: SquareSymmetry) -> LinkDiagram:
    """Cut out the region, apply the symmetry and reglue; arcs are renumbered along the orientation.

    Crossing order is preserved.  Arc 1 is the boundary arc at position 0, so
    the region keeps its positions in the result and mutating twice with the
    same symmetry returns the original diagram up to relabelling.
    """
    if r.diagram.pd != d.pd or len(r.stubs) != 4:
        raise RegionInvalid("region does not belong to this diagram")
    pd = d.pd
    n = len(pd)
    S = r.crossings
    perm = s.permutation
    # half-edges are (crossing, slot); record the partner of each one
    partner: dict[tuple[int, int], tuple[int, int]] = {}
    for x in range(n):
        for k in range(4):
            partner[(x, k)] = d.other_end(x, k)
    outer = [partner[st] for st in r.stubs]
    for p, st in enumerate(r.stubs):
        k = perm[p]
        partner[st] = outer[k]
        partner[outer[k]] = st
    # unoriented crossings: cyclic order of half-edges, under strand = entries 0 and 2
    cyc: list[tuple] = []
    for x in range(n):
        hs = tuple((x, k) for k in range(4))
        if s.reflects and x in S:
            # mirror image (reversed cyclic order) with over and under exchanged
            hs = (hs[3], hs[2], hs[1], hs[0])
        cyc.append(hs)
    pos = {h: (x, i) for x, hs in enumerate(cyc) for i, h in enumerate(hs)}

    def across(h):
        x, i = pos[h]
        return cyc[x][(i + 2) % 4]

    # orient: outer crossings keep their directions
    incoming: dict[tuple[int, int], bool] = {}
    order_seeds = [h for h in sorted(partner) if h[0] not in S] + sorted(partner)
    for h in order_seeds:
        if h in incoming:
            continue
        h_in = h if _incoming(d, *h) else across(h)
        cur = h_in
        while cur not in incoming:
            incoming[cur] = True
            out = across(cur)
            incoming[out] = False
            cur = partner[out]
    # arc labels along the orientation, starting with the position-0 boundary arc
    first_tail = outer[0] if not incoming[outer[0]] else partner[outer[0]]
    label: dict[tuple[int, int], int] = {}
    next_label = 1
    tails = [first_tail] + [h for h in sorted(partner) if not incoming[h]]
    for t in tails:
        if t in label:
            continue
        cur = t
        while cur not in label:
            head = partner[cur]
            label[cur] = label[head] = next_label
            next_label += 1
            cur = across(head)
    quads = []
    for x, hs in enumerate(cyc):
        if not incoming[hs[0]]:
            hs = hs[2:] + hs[:2]
        quads.append(tuple(label[h] for h in hs))
    return diagram_from_pd(quads, d.name)


def mutants(d: LinkDiagram, max_size: int = 8, oriented_only: bool = True):
    """Yield ``(region, symmetry, mutant)`` over all regions and nontrivial symmetries."""
    for r in find_tangle_regions(d, max_size):
        for s in (SquareSymmetry.rotate_x, SquareSymmetry.rotate_y, SquareSymmetry.rotate_z):
            if oriented_only and not is_oriented_mutation(r, s):
                continue
            yield r, s, mutate(d, r, s)
