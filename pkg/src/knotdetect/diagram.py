"""Planar diagram (PD) and Dowker-Thistlethwaite (DT) encodings of link diagrams.

PD convention: each crossing lists its four incident arc labels counterclockwise,
starting at the incoming under-strand.  Slot 0 -> slot 2 is the under-strand;
the over-strand runs 3 -> 1 on a positive crossing and 1 -> 3 on a negative one.
Signs are always derived from the labelling, never read from input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence


class DiagramError(ValueError):
    pass


class MalformedPD(DiagramError):
    pass


class InconsistentArcs(DiagramError):
    pass


class NonRealizable(DiagramError):
    pass


class MalformedDT(DiagramError):
    pass


class NotPermutation(DiagramError):
    pass


class NonRealizableDT(DiagramError):
    pass


@dataclass(frozen=True)
class PDCrossing:
    arcs: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def over_in(self) -> int:
        return self.arcs[3] if self.sign > 0 else self.arcs[1]

    @property
    def over_out(self) -> int:
        return self.arcs[1] if self.sign > 0 else self.arcs[3]

    def serialize(self) -> str:
        return "X(%d,%d,%d,%d)" % self.arcs


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[PDCrossing, ...]
    n_components: int = 1
    writhe: int = 0
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if sum(c.sign for c in self.crossings) != self.writhe:
            raise ValueError("writhe must equal the sum of crossing signs")

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(c.sign for c in self.crossings)

    @property
    def pd(self) -> tuple[tuple[int, int, int, int], ...]:
        return tuple(c.arcs for c in self.crossings)

    @cached_property
    def endpoints(self) -> dict[int, list[tuple[int, int]]]:
        return _endpoints(self.pd)

    def other_end(self, x: int, slot: int) -> tuple[int, int]:
        return _other_end(self.pd, self.endpoints, x, slot)

    @cached_property
    def faces(self) -> list[list[tuple[int, int]]]:
        return faces(self.pd)

    @cached_property
    def components(self) -> list[list[int]]:
        """Arc labels of each component, in orientation order."""
        return _components(self)

    def is_alternating(self) -> bool:
        """True iff every strand alternates over/under (vacuously for 0 crossings)."""
        for comp_darts in _oriented_darts(self):
            if len(comp_darts) < 2:
                continue
            kinds = [slot % 2 == 0 for _, slot in comp_darts]
            if any(kinds[i] == kinds[i - 1] for i in range(len(kinds))):
                return False
        return True

    def serialize(self) -> str:
        return serialize_pd(self)

    def with_name(self, name: str | None) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.n_components, self.writhe, name)


# --------------------------------------------------------------------------- helpers


def _endpoints(pd: Sequence[Sequence[int]]) -> dict[int, list[tuple[int, int]]]:
    ends: dict[int, list[tuple[int, int]]] = {}
    for x, arcs in enumerate(pd):
        for s, a in enumerate(arcs):
            ends.setdefault(a, []).append((x, s))
    return ends


def _other_end(pd, ends, x: int, slot: int) -> tuple[int, int]:
    e1, e2 = ends[pd[x][slot]]
    return e2 if e1 == (x, slot) else e1


def faces(pd: Sequence[Sequence[int]]) -> list[list[tuple[int, int]]]:
    """Faces of the diagram as cycles of corners ``(crossing, k)``.

    Corner ``k`` of a crossing is the sector between slot ``k`` and slot ``k+1``
    (counterclockwise).
    """
    ends = _endpoints(pd)
    seen: set[tuple[int, int]] = set()
    out = []
    for x in range(len(pd)):
        for k in range(4):
            if (x, k) in seen:
                continue
            face = []
            cur = (x, k)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                cx, ck = cur
                cur = _other_end(pd, ends, cx, (ck + 1) % 4)
            out.append(face)
    return out


def _connected_pieces(pd: Sequence[Sequence[int]]) -> int:
    n = len(pd)
    if n == 0:
        return 0
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, locs in _endpoints(pd).items():
        (x1, _), (x2, _) = locs
        parent[find(x1)] = find(x2)
    return len({find(i) for i in range(n)})


def _trace(pd, ends, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Follow a strand entering crossing ``start[0]`` at slot ``start[1]``; returns incoming darts."""
    darts = []
    cur = start
    while True:
        darts.append(cur)
        x, s = cur
        cur = _other_end(pd, ends, x, (s + 2) % 4)
        if cur == start:
            return darts


def _orient(pd) -> tuple[list[int], list[list[tuple[int, int]]]]:
    """Derive crossing signs and oriented components (as incoming-dart cycles)."""
    ends = _endpoints(pd)
    used: set[tuple[int, int]] = set()
    signs = [0] * len(pd)
    comps = []
    for x in range(len(pd)):
        for s in range(4):
            if (x, s) in used:
                continue
            darts = _trace(pd, ends, (x, s))
            under = {ds for _, ds in darts if ds % 2 == 0}
            if under == {0}:
                chosen = darts
            elif under == {2}:
                chosen = _reverse(pd, ends, darts)
            elif not under:
                chosen = _by_label_order(pd, ends, darts)
            else:
                raise NonRealizable("under-strand orientations are inconsistent along a component")
            for d in chosen:
                used.add(d)
                used.add((d[0], (d[1] + 2) % 4))
            for dx, ds in chosen:
                if ds == 3:
                    signs[dx] = 1
                elif ds == 1:
                    signs[dx] = -1
            comps.append(chosen)
    return signs, comps


def _reverse(pd, ends, darts):
    x, s = darts[0]
    return _trace(pd, ends, (x, (s + 2) % 4))


def _by_label_order(pd, ends, darts):
    # components passing only over: follow increasing labels from the minimum
    labels = [pd[x][s] for x, s in darts]
    if len(labels) < 2:
        return darts
    i = labels.index(min(labels))
    if labels[(i - 1) % len(labels)] < labels[(i + 1) % len(labels)]:
        return _reverse(pd, ends, darts)
    return darts


def _oriented_darts(d: LinkDiagram) -> list[list[tuple[int, int]]]:
    pd = d.pd
    return _orient(pd)[1] if pd else []


def _components(d: LinkDiagram) -> list[list[int]]:
    pd = d.pd
    if not pd:
        return [[]]
    out = []
    for comp in _oriented_darts(d):
        out.append([pd[x][s] for x, s in comp])
    return out


def diagram_from_pd(pd: Iterable[Sequence[int]], name: str | None = None) -> LinkDiagram:
    """Validate a list of quadruples and build a signed, oriented diagram."""
    pd = [tuple(int(a) for a in q) for q in pd]
    for q in pd:
        if len(q) != 4:
            raise MalformedPD("each crossing needs four arc labels")
        if any(a <= 0 for a in q):
            raise MalformedPD("arc labels must be positive integers")
    if not pd:
        return LinkDiagram((), 1, 0, name)
    counts: dict[int, int] = {}
    for q in pd:
        for a in q:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, c in counts.items() if c != 2)
    if bad:
        raise InconsistentArcs(f"arc labels not appearing exactly twice: {bad}")
    n = len(pd)
    pieces = _connected_pieces(pd)
    if len(faces(pd)) != n + 2 * pieces:
        raise NonRealizable("the crossing data does not embed in the plane")
    signs, comps = _orient(pd)
    crossings = tuple(PDCrossing(q, s) for q, s in zip(pd, signs))
    return LinkDiagram(crossings, len(comps), sum(signs), name)


_PD_ATOM = re.compile(r"X\((\d+),(\d+),(\d+),(\d+)\)")


def parse_pd(text: str, name: str | None = None) -> LinkDiagram:
    compact = re.sub(r"\s+", "", text)
    if not compact:
        return LinkDiagram((), 1, 0, name)
    quads = []
    for atom in compact.split(";"):
        m = _PD_ATOM.fullmatch(atom)
        if not m:
            raise MalformedPD(f"bad PD atom: {atom!r}")
        quads.append(tuple(int(g) for g in m.groups()))
    return diagram_from_pd(quads, name)


def serialize_pd(d: LinkDiagram) -> str:
    return ";".join(c.serialize() for c in d.crossings)


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; signs and writhe are negated."""
    out = []
    for c in d.crossings:
        a, b, cc, dd = c.arcs
        if c.sign > 0:
            out.append(PDCrossing((dd, a, b, cc), -1))
        else:
            out.append(PDCrossing((b, cc, dd, a), 1))
    return LinkDiagram(tuple(out), d.n_components, -d.writhe, d.name)


def _heads(crossings) -> dict[int, tuple[int, int]]:
    head: dict[int, tuple[int, int]] = {}
    for x, c in enumerate(crossings):
        head[c.arcs[0]] = (x, 0)
        head[c.arcs[3] if c.sign > 0 else c.arcs[1]] = (x, 3 if c.sign > 0 else 1)
    return head


def canonical_form(d: LinkDiagram | Sequence[PDCrossing]) -> str:
    """Relabelling-invariant text form of an oriented diagram.

    Arcs are renumbered by walking the components from every possible starting
    arc; the lexicographically smallest result wins.  Split diagrams get a
    deterministic but not fully canonical form.
    """
    crossings = d.crossings if isinstance(d, LinkDiagram) else tuple(d)
    if not crossings:
        return ""
    pd = [c.arcs for c in crossings]
    head = _heads(crossings)
    best = None
    for start in sorted(head):
        label: dict[int, int] = {}
        order: list[int] = []
        seen_x: set[int] = set()
        nxt = start
        while nxt is not None:
            cur = nxt
            while cur not in label:
                label[cur] = len(label) + 1
                x, s = head[cur]
                if x not in seen_x:
                    seen_x.add(x)
                    order.append(x)
                cur = pd[x][(s + 2) % 4]
            nxt = next((b for x in order for b in pd[x] if b not in label), None)
            if nxt is None and len(label) < len(head):
                nxt = min(b for b in head if b not in label)
        rel = sorted(
            "%d,%d,%d,%d,%d" % (label[c.arcs[0]], label[c.arcs[1]], label[c.arcs[2]], label[c.arcs[3]], c.sign)
            for c in crossings
        )
        key = ";".join(rel)
        if best is None or key < best:
            best = key
    return best


def relabel_sequential(d: LinkDiagram, start_arc: int | None = None) -> LinkDiagram:
    """Renumber arcs 1..2n by walking components along their orientation."""
    if not d.crossings:
        return d
    comps = d.components
    if start_arc is not None:
        comps = sorted(comps, key=lambda c: 0 if start_arc in c else 1)
        first = comps[0]
        i = first.index(start_arc)
        comps[0] = first[i:] + first[:i]
    mapping: dict[int, int] = {}
    for comp in comps:
        for a in comp:
            mapping[a] = len(mapping) + 1
    crossings = tuple(PDCrossing(tuple(mapping[a] for a in c.arcs), c.sign) for c in d.crossings)
    return LinkDiagram(crossings, d.n_components, d.writhe, d.name)


# --------------------------------------------------------------------------- DT codes


@dataclass(frozen=True)
class DTCode:
    evens: tuple[int, ...]

    def __post_init__(self):
        vals = sorted(abs(e) for e in self.evens)
        if any(e == 0 or e % 2 for e in self.evens):
            raise MalformedDT("DT entries must be nonzero even integers")
        if vals != list(range(2, 2 * len(self.evens) + 1, 2)):
            raise NotPermutation("absolute values must be a permutation of 2, 4, ..., 2n")

    def __len__(self) -> int:
        return len(self.evens)

    def __str__(self) -> str:
        return " ".join(str(e) for e in self.evens)


def parse_dt(text: str) -> DTCode:
    tokens = text.replace(",", " ").replace("[", " ").replace("]", " ").split()
    vals = []
    for tok in tokens:
        try:
            vals.append(int(tok))
        except ValueError:
            raise MalformedDT(f"not an integer: {tok!r}") from None
    return DTCode(tuple(vals))


def _dt_pairs(code: DTCode) -> list[tuple[int, int]]:
    return [(2 * i + 1, abs(e)) for i, e in enumerate(code.evens)]


def dt_to_pd(code: DTCode, name: str | None = None) -> LinkDiagram:
    """Realize a DT code as a planar diagram.

    Each crossing has two possible cyclic orders of its half-edges; all choices
    are searched (the first crossing is fixed, which pins the chirality) and the
    first one passing the Euler-characteristic face count is kept.  A positive
    entry means the even visit passes under, so ``4 6 2`` is the positive trefoil.
    """
    n = len(code)
    if n == 0:
        return LinkDiagram((), 1, 0, name)
    two_n = 2 * n

    def arc_in(v):
        return two_n if v == 1 else v - 1

    over_even = [e < 0 for e in code.evens]
    pairs = _dt_pairs(code)
    for bits in product((0, 1), repeat=n - 1):
        bits = (0,) + bits
        pd = []
        for (p, q), choice, oe in zip(pairs, bits, over_even):
            o_in, o_out = arc_in(p), p
            e_in, e_out = arc_in(q), q
            cyc = [o_in, e_in, o_out, e_out] if choice == 0 else [o_in, e_out, o_out, e_in]
            if oe:
                pd.append(tuple(cyc))
            else:
                k = cyc.index(e_in)
                pd.append(tuple(cyc[k:] + cyc[:k]))
        if len(faces(pd)) == n + 2:
            return diagram_from_pd(pd, name)
    raise NonRealizableDT(f"DT code {code} has no planar realization")


def _passages(d: LinkDiagram) -> tuple[list[int], list[tuple[int, bool]]]:
    """Arcs of a knot in orientation order and, after each arc, the crossing it enters (with over flag)."""
    comp = d.components[0]
    head = _heads(d.crossings)
    return comp, [(head[a][0], head[a][1] % 2 == 1) for a in comp]


def pd_to_dt(d: LinkDiagram, start_arc: int | None = None, reverse: bool = False) -> DTCode:
    """DT code of a knot diagram read from ``start_arc`` along (or against) the orientation."""
    if d.n_components != 1:
        raise DiagramError("DT codes are only defined for knots")
    if not d.crossings:
        return DTCode(())
    comp, passages = _passages(d)
    m = len(comp)
    i = comp.index(start_arc) if start_arc is not None else 0
    if reverse:
        seq = [passages[(i - 1 - k) % m] for k in range(m)]
    else:
        seq = [passages[(i + k) % m] for k in range(m)]
    visits: dict[int, list[tuple[int, bool]]] = {}
    for k, (x, over) in enumerate(seq, start=1):
        visits.setdefault(x, []).append((k, over))
    evens = {}
    for x, ((k1, o1), (k2, o2)) in visits.items():
        if (k1 + k2) % 2 == 0:
            raise DiagramError("diagram violates DT parity")
        (odd, _), (even, even_over) = sorted([(k1, o1), (k2, o2)], key=lambda t: t[0] % 2 == 0)
        evens[odd] = -even if even_over else even
    return DTCode(tuple(evens[o] for o in range(1, m, 2)))


def dt_variants(d: LinkDiagram) -> set[tuple[int, ...]]:
    """All DT codes of ``d`` over starting arcs, directions and global sign flips."""
    out = set()
    for a in d.components[0]:
        for rev in (False, True):
            try:
                code = pd_to_dt(d, a, rev)
            except DiagramError:
                continue
            out.add(code.evens)
            out.add(tuple(-e for e in code.evens))
    return out


def standard_dt(d: LinkDiagram) -> DTCode:
    """The smallest DT code of ``d`` over starting arcs and directions.

    Codes are compared by their absolute values first, then by sign pattern
    with positive entries first.  No global sign flip is applied, so the code
    describes ``d`` itself and not its mirror image.
    """
    if d.n_components != 1:
        raise DiagramError("DT codes are only defined for knots")
    if not d.crossings:
        return DTCode(())
    best = None
    for a in d.components[0]:
        for rev in (False, True):
            try:
                code = pd_to_dt(d, a, rev).evens
            except DiagramError:
                continue
            key = (tuple(abs(e) for e in code), tuple(e < 0 for e in code))
            if best is None or key < best[0]:
                best = (key, code)
    if best is None:
        raise DiagramError("diagram violates DT parity")
    return DTCode(best[1])


def unknot() -> LinkDiagram:
    return LinkDiagram((), 1, 0, "0_1")


def reverse(d: LinkDiagram) -> LinkDiagram:
    """Reverse the orientation of every component (signs are unchanged)."""
    out = tuple(PDCrossing((c.arcs[2], c.arcs[3], c.arcs[0], c.arcs[1]), c.sign) for c in d.crossings)
    return LinkDiagram(out, d.n_components, d.writhe, d.name)
