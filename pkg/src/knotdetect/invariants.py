"""Polynomial and classical invariants of oriented link diagrams.

Convention ledger (all tests are written against these):

* Kauffman bracket in ``A``: ``<X(a,b,c,d)> = A <a~b, c~d> + A^-1 <a~d, b~c>``,
  loop value ``-A^2 - A^-2``, the crossingless unknot is 1.
* Jones: ``V = (-A^3)^(-w) <D>`` with ``t = A^-4``.  Links with an even number of
  components have half-integer powers of ``t``; they are returned in ``s = t^(1/2)``.
* HOMFLYPT: ``a P(L+) - a^-1 P(L-) = z P(L0)`` with ``z = q - q^-1`` and
  ``P(unknot) = 1``.  Values are reported in ``(a, q)`` after multiplying by
  ``(q - q^-1)^(c-1)`` for a ``c``-component link, which makes them polynomial.
* ``sl_n``: ``a -> q^N`` then exact division by ``(q - q^-1)^(c-1)``.  With these
  choices ``sl_n(K, 2)(q) == jones(K)(t = q^-2)``.
* Signature: the positive trefoil (all crossings positive) has signature -2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diagram import LinkDiagram, PDCrossing, canonical_form, faces
from .laurent import LaurentPoly1, LaurentPoly2

BRACKET_CAP = 16
HOMFLY_CAP = 14
CLASSICAL_CAP = 16
HOMFLY_BUDGET = 5_000_000


class InvariantError(ValueError):
    pass


class CrossingCapExceeded(InvariantError):
    pass


class RecursionBudgetExceeded(InvariantError):
    pass


class MultiComponentUnsupported(InvariantError):
    pass


class DisconnectedDiagram(InvariantError):
    pass


def _check_cap(d: LinkDiagram, cap: int | None, default: int) -> None:
    cap = default if cap is None else cap
    if d.n_crossings > cap:
        raise CrossingCapExceeded(f"{d.n_crossings} crossings exceeds the cap of {cap}")


# --------------------------------------------------------------------------- bracket / Jones


def _label_index(pd) -> dict[int, int]:
    labels = sorted({a for q in pd for a in q})
    return {a: i for i, a in enumerate(labels)}


def _count_loops(n_labels: int, joins: Sequence[tuple[int, int]]) -> int:
    parent = list(range(n_labels))
    loops = n_labels
    for u, v in joins:
        while parent[u] != u:
            u = parent[u]
        while parent[v] != v:
            v = parent[v]
        if u != v:
            parent[u] = v
            loops -= 1
    return loops


def bracket_states(d: LinkDiagram) -> dict[tuple[int, int], int]:
    """Histogram ``{(#A-smoothings, #loops): count}`` over all 2^n states."""
    pd = d.pd
    n = len(pd)
    idx = _label_index(pd)
    a_pairs = []
    b_pairs = []
    for a, b, c, e in pd:
        a_pairs.append(((idx[a], idx[b]), (idx[c], idx[e])))
        b_pairs.append(((idx[a], idx[e]), (idx[b], idx[c])))
    hist: dict[tuple[int, int], int] = {}
    m = len(idx)
    for state in range(1 << n):
        joins = []
        n_a = 0
        for x in range(n):
            if state >> x & 1:
                joins.extend(b_pairs[x])
            else:
                joins.extend(a_pairs[x])
                n_a += 1
        key = (n_a, _count_loops(m, joins))
        hist[key] = hist.get(key, 0) + 1
    return hist


def kauffman_bracket(d: LinkDiagram, cap: int | None = None) -> LaurentPoly1:
    """Unnormalized-by-writhe Kauffman bracket in the variable ``A``."""
    _check_cap(d, cap, BRACKET_CAP)
    if not d.crossings:
        return LaurentPoly1.constant(1, "A")
    n = d.n_crossings
    loop = LaurentPoly1({2: -1, -2: -1}, "A")
    powers = [LaurentPoly1.constant(1, "A")]
    total = LaurentPoly1({}, "A")
    for (n_a, loops), count in sorted(bracket_states(d).items()):
        while len(powers) < loops:
            powers.append(powers[-1] * loop)
        total = total + LaurentPoly1.monomial(2 * n_a - n, count, "A") * powers[loops - 1]
    return total


def _a_to_t(p: LaurentPoly1) -> LaurentPoly1:
    exps = list(p.terms)
    if all(e % 4 == 0 for e in exps):
        return LaurentPoly1({-e // 4: c for e, c in p.terms.items()}, "t")
    if all(e % 2 == 0 for e in exps):
        return LaurentPoly1({-e // 2: c for e, c in p.terms.items()}, "s")
    raise InvariantError("bracket has odd powers of A after writhe normalization")


def jones(d: LinkDiagram, cap: int | None = None) -> LaurentPoly1:
    """Jones polynomial in ``t`` (or ``s = t^(1/2)`` for links with half-integer powers)."""
    br = kauffman_bracket(d, cap)
    w = d.writhe
    factor = LaurentPoly1.monomial(-3 * w, (-1) ** (w % 2), "A")
    return _a_to_t(factor * br)


def unnormalized_jones(d: LinkDiagram, cap: int | None = None) -> LaurentPoly1:
    """``(q + q^-1) * V`` with ``t^(1/2) = -q``; the graded Euler characteristic of Khovanov homology."""
    v = jones(d, cap)
    if v.var == "t":
        vq = v.substitute(1, 2, "q")
    else:
        vq = v.substitute(-1, 1, "q")
    return vq * LaurentPoly1({1: 1, -1: 1}, "q")


# --------------------------------------------------------------------------- HOMFLYPT

_AZ = ("a", "z")
_ONE = LaurentPoly2({(0, 0): 1}, _AZ)
_DELTA = LaurentPoly2({(1, -1): 1, (-1, -1): -1}, _AZ)  # (a - a^-1) / z


@dataclass(frozen=True)
class SkeinCoefficients:
    """``a_plus * P(L+) + a_minus * P(L-) = c_smooth * P(L0)`` as ``(a, z)`` monomials."""

    a_plus: LaurentPoly2 = LaurentPoly2({(1, 0): 1}, _AZ)
    a_minus: LaurentPoly2 = LaurentPoly2({(-1, 0): -1}, _AZ)
    c_smooth: LaurentPoly2 = LaurentPoly2({(0, 1): 1}, _AZ)


SKEIN = SkeinCoefficients()

_memo: dict[str, LaurentPoly2] = {}
_memo_lock = threading.Lock()
_MEMO_LIMIT = 500_000


def clear_homflypt_cache() -> None:
    with _memo_lock:
        _memo.clear()


def _delta_pow(k: int) -> LaurentPoly2:
    out = _ONE
    for _ in range(k):
        out = out * _DELTA
    return out


def _merge_labels(crossings: list[PDCrossing], pairs, watch) -> tuple[list[PDCrossing], int]:
    """Identify arc labels pairwise; returns the new crossings and the number of free circles among ``watch``."""
    parent: dict[int, int] = {}

    def find(u):
        while parent.get(u, u) != u:
            u = parent[u]
        return u

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    out = [PDCrossing(tuple(find(a) for a in c.arcs), c.sign) for c in crossings]
    used = {a for c in out for a in c.arcs}
    circles = len({find(a) for a in watch} - used)
    return out, circles


def _strip_kinks(crossings: list[PDCrossing]) -> tuple[list[PDCrossing], int]:
    circles = 0
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(crossings):
            arcs = c.arcs
            for k in range(4):
                if arcs[k] == arcs[(k + 1) % 4]:
                    rest = crossings[:i] + crossings[i + 1 :]
                    u, v = arcs[(k + 2) % 4], arcs[(k + 3) % 4]
                    crossings, extra = _merge_labels(rest, [(u, v)], [u])
                    circles += extra
                    changed = True
                    break
            if changed:
                break
    return crossings, circles


def _traversal(crossings: list[PDCrossing]):
    """Visits ``(crossing, went_under)`` component by component from the smallest labels."""
    head = {}
    for x, c in enumerate(crossings):
        head[c.arcs[0]] = (x, 0)
        head[c.arcs[3] if c.sign > 0 else c.arcs[1]] = (x, 3 if c.sign > 0 else 1)
    seen: set[int] = set()
    visits = []
    n_comp = 0
    for start in sorted(head):
        if start in seen:
            continue
        n_comp += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            x, s = head[cur]
            visits.append((x, s == 0))
            cur = crossings[x].arcs[(s + 2) % 4]
    return visits, n_comp


def _switch(c: PDCrossing) -> PDCrossing:
    a, b, cc, d = c.arcs
    if c.sign > 0:
        return PDCrossing((d, a, b, cc), -1)
    return PDCrossing((b, cc, d, a), 1)


def _smooth(crossings: list[PDCrossing], x: int) -> tuple[list[PDCrossing], int]:
    c = crossings[x]
    a, b, cc, d = c.arcs
    pairs = [(a, b), (d, cc)] if c.sign > 0 else [(a, d), (b, cc)]
    rest = crossings[:x] + crossings[x + 1 :]
    return _merge_labels(rest, pairs, [a, b, cc, d])


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise RecursionBudgetExceeded("HOMFLYPT skein recursion budget exhausted")


def _homfly_az(crossings: list[PDCrossing], budget: _Budget) -> LaurentPoly2:
    """Value in ``(a, z)`` of a crossing list, ignoring free circles (the caller accounts for them)."""
    crossings, circles = _strip_kinks(list(crossings))
    factor = _delta_pow(circles)
    if not crossings:
        # the whole thing collapsed to free circles; one of them is the base unknot
        return _delta_pow(circles - 1) if circles else _ONE
    key = canonical_form(crossings)
    hit = _memo.get(key)
    if hit is not None:
        return factor * hit
    budget.spend()
    visits, n_comp = _traversal(crossings)
    first_seen: set[int] = set()
    bad = None
    for x, under in visits:
        if x in first_seen:
            continue
        first_seen.add(x)
        if under:
            bad = x
            break
    if bad is None:
        val = _delta_pow(n_comp - 1)
    else:
        c = crossings[bad]
        switched = crossings[:bad] + [_switch(c)] + crossings[bad + 1 :]
        smoothed, extra = _smooth(crossings, bad)
        p_switch = _homfly_az(switched, budget)
        p_smooth = _delta_pow(extra) * _homfly_az(smoothed, budget) if smoothed else _delta_pow(extra - 1)
        if c.sign > 0:
            # P+ = a^-2 P- + a^-1 z P0
            val = LaurentPoly2({(-2, 0): 1}, _AZ) * p_switch + LaurentPoly2({(-1, 1): 1}, _AZ) * p_smooth
        else:
            # P- = a^2 P+ - a z P0
            val = LaurentPoly2({(2, 0): 1}, _AZ) * p_switch - LaurentPoly2({(1, 1): 1}, _AZ) * p_smooth
    with _memo_lock:
        if len(_memo) > _MEMO_LIMIT:
            _memo.clear()
        _memo[key] = val
    return factor * val


def homflypt_az(d: LinkDiagram, cap: int | None = None, budget: int | None = None) -> LaurentPoly2:
    """HOMFLYPT in ``(a, z)``; negative powers of ``z`` occur only for links."""
    _check_cap(d, cap, HOMFLY_CAP)
    if not d.crossings:
        return _delta_pow(d.n_components - 1)
    return _homfly_az(list(d.crossings), _Budget(HOMFLY_BUDGET if budget is None else budget))


_Z_POWERS: list[LaurentPoly1] = [LaurentPoly1.constant(1, "q")]


def _z_power(k: int) -> LaurentPoly1:
    while len(_Z_POWERS) <= k:
        _Z_POWERS.append(_Z_POWERS[-1] * LaurentPoly1({1: 1, -1: -1}, "q"))
    return _Z_POWERS[k]


def az_to_aq(p: LaurentPoly2) -> LaurentPoly2:
    """Substitute ``z = q - q^-1`` into a polynomial (nonnegative ``z`` powers) in ``(a, z)``."""
    out: dict[tuple[int, int], int] = {}
    for (i, j), c in p.terms.items():
        if j < 0:
            raise InvariantError("negative power of z; clear the denominator first")
        for e, k in _z_power(j).terms.items():
            out[(i, e)] = out.get((i, e), 0) + c * k
    return LaurentPoly2(out, ("a", "q"))


def homflypt(d: LinkDiagram, cap: int | None = None, budget: int | None = None) -> LaurentPoly2:
    """HOMFLYPT in ``(a, q)``, multiplied by ``(q - q^-1)^(c-1)`` for ``c`` components."""
    p = homflypt_az(d, cap, budget)
    clear = LaurentPoly2({(0, d.n_components - 1): 1}, _AZ)
    return az_to_aq(p * clear)


def homflypt_denominator_power(d: LinkDiagram) -> int:
    return d.n_components - 1


def sl_n(d: LinkDiagram, N: int, cap: int | None = None) -> LaurentPoly1:
    if N < 1:
        raise ValueError("N must be a positive integer")
    p = homflypt(d, cap).substitute("a", 1, N)
    denom = _z_power(d.n_components - 1)
    return p.divide_exact(denom)


# --------------------------------------------------------------------------- Alexander


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _interpolate(xs: list[int], ys: list[int]) -> list[Fraction]:
    """Coefficients (low to high) of the polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def alexander_matrix(d: LinkDiagram) -> tuple[list[list[tuple[int, int]]], int]:
    """Rows of ``(column, kind)`` entries; kind 0: ``1-t``, 1: ``t``, 2: ``-1``."""
    pd = d.pd
    parent: dict[int, int] = {}

    def find(u):
        while parent.get(u, u) != u:
            u = parent[u]
        return u

    for _, b, _, e in pd:
        rb, re_ = find(b), find(e)
        if rb != re_:
            parent[rb] = re_
    roots = sorted({find(a) for q in pd for a in q})
    col = {r: i for i, r in enumerate(roots)}
    rows = []
    for c in d.crossings:
        a, b, cc, e = c.arcs
        over = col[find(b)]
        x_in, x_out = col[find(a)], col[find(cc)]
        if c.sign > 0:
            rows.append([(over, 0), (x_in, 1), (x_out, 2)])
        else:
            rows.append([(over, 0), (x_out, 1), (x_in, 2)])
    return rows, len(roots)


def alexander(d: LinkDiagram, cap: int | None = None) -> LaurentPoly1:
    """Symmetric Alexander polynomial of a knot, normalized so ``D(1) = 1``."""
    if d.n_components != 1:
        raise MultiComponentUnsupported("Alexander polynomial is implemented for knots only")
    _check_cap(d, cap, CLASSICAL_CAP)
    n = d.n_crossings
    if n == 0:
        return LaurentPoly1.constant(1, "t")
    rows, m = alexander_matrix(d)
    size = m - 1
    xs = list(range(2, size + 3))
    ys = []
    for t in xs:
        vals = (1 - t, t, -1)
        mat = [[0] * m for _ in range(n)]
        for r, row in enumerate(rows):
            for j, kind in row:
                mat[r][j] += vals[kind]
        minor = [r[:size] for r in mat[:size]]
        ys.append(_bareiss_det(minor))
    coeffs = _interpolate(xs, ys)
    if any(c.denominator != 1 for c in coeffs):
        raise InvariantError("Alexander interpolation produced non-integers")
    terms = {k: int(c) for k, c in enumerate(coeffs) if c}
    poly = LaurentPoly1(terms, "t")
    if poly.is_zero():
        raise InvariantError("vanishing Alexander polynomial for a knot diagram")
    lo, hi = poly.min_exp(), poly.max_exp()
    if (lo + hi) % 2:
        raise InvariantError("Alexander polynomial cannot be symmetrized")
    poly = poly.shift(-(lo + hi) // 2)
    at1 = sum(poly.terms.values())
    if abs(at1) != 1:
        raise InvariantError("Alexander polynomial does not evaluate to +-1 at t = 1")
    return poly.scalar_mul(at1)


# --------------------------------------------------------------------------- Goeritz


@dataclass(frozen=True)
class GoeritzData:
    matrix: tuple[tuple[int, ...], ...]
    correction: int

    @property
    def size(self) -> int:
        return len(self.matrix)


def _face_coloring(pd) -> tuple[dict[tuple[int, int], int], list[int]]:
    fs = faces(pd)
    corner_face = {}
    for f, face in enumerate(fs):
        for corner in face:
            corner_face[corner] = f
    adj: dict[int, set[int]] = {f: set() for f in range(len(fs))}
    for x in range(len(pd)):
        for s in range(4):
            f1, f2 = corner_face[(x, (s - 1) % 4)], corner_face[(x, s)]
            adj[f1].add(f2)
            adj[f2].add(f1)
    color = [-1] * len(fs)
    color[0] = 0
    stack = [0]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if color[g] < 0:
                color[g] = 1 - color[f]
                stack.append(g)
            elif color[g] == color[f]:
                raise InvariantError("face graph is not bipartite")
    if min(color) < 0:
        raise DisconnectedDiagram("diagram is not connected")
    return corner_face, color


def goeritz(d: LinkDiagram, shade: int = 0, cap: int | None = None) -> GoeritzData:
    """Goeritz matrix of the regions of colour ``shade`` (0 or 1) and its correction term."""
    _check_cap(d, cap, CLASSICAL_CAP)
    pd = d.pd
    if not pd:
        return GoeritzData((), 0)
    from .diagram import _connected_pieces

    if _connected_pieces(pd) != 1:
        raise DisconnectedDiagram("Goeritz matrix needs a connected diagram")
    corner_face, color = _face_coloring(pd)
    white = sorted(f for f in range(len(color)) if color[f] == shade)
    index = {f: i for i, f in enumerate(white)}
    g = [[0] * len(white) for _ in white]
    mu = 0
    for x, c in enumerate(d.crossings):
        corners = (1, 3) if color[corner_face[(x, 1)]] == shade else (0, 2)
        eta = -1 if corners == (1, 3) else 1
        f1, f2 = index[corner_face[(x, corners[0])]], index[corner_face[(x, corners[1])]]
        if f1 != f2:
            g[f1][f2] -= eta
            g[f2][f1] -= eta
        # type II: each shaded corner sits between an incoming and an outgoing end
        type_two = (corners == (1, 3)) != (c.sign > 0)
        if type_two:
            mu += eta
    for i in range(len(white)):
        g[i][i] = -sum(g[i][j] for j in range(len(white)) if j != i)
    reduced = tuple(tuple(row[1:]) for row in g[1:])
    return GoeritzData(reduced, mu)


def matrix_signature(m: Sequence[Sequence[int]]) -> int:
    """Signature of a symmetric rational matrix by congruence diagonalization."""
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    sig = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes the diagonal entry 2 a_ij + a_jj = 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        sig += 1 if p > 0 else -1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / p
            if f:
                for k in active:
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[piv][i] = a[i][piv] = Fraction(0)
    return sig


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, each dividing the next; zeros last)."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        # find a nonzero pivot of minimal absolute value in the remaining block
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        if not entries:
            diag.extend([0] * (min(rows, cols) - t))
            break
        diag.append(abs(a[t][t]))
    nonzero = sorted(v for v in diag if v)
    return nonzero + [0] * (len(diag) - len(nonzero))


def signature(d: LinkDiagram, cap: int | None = None) -> int:
    data = goeritz(d, cap=cap)
    return matrix_signature(data.matrix) - data.correction


def determinant(d: LinkDiagram, cap: int | None = None) -> int:
    data = goeritz(d, cap=cap)
    return abs(_bareiss_det([list(r) for r in data.matrix]))


def dbc_homology(d: LinkDiagram, cap: int | None = None) -> list[int]:
    """Invariant factors of H_1 of the double branched cover (0 marks a free summand)."""
    data = goeritz(d, cap=cap)
    return [v for v in smith_invariants(data.matrix) if v != 1]


def dbc_string(factors: Sequence[int]) -> str:
    return ",".join(str(v) for v in factors)
