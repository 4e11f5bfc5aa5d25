import itertools

import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from knotdetect.diagram import DiagramError, diagram_from_pd, dt_to_pd, mirror, parse_dt, parse_pd, unknot
from knotdetect.invariants import (
    CrossingCapExceeded,
    MultiComponentUnsupported,
    alexander,
    dbc_homology,
    determinant,
    goeritz,
    homflypt,
    homflypt_az,
    homflypt_denominator_power,
    jones,
    kauffman_bracket,
    matrix_signature,
    signature,
    sl_n,
    smith_invariants,
)
from knotdetect.laurent import LaurentPoly1, LaurentPoly2

import oracles

TREFOIL = dt_to_pd(parse_dt("4 6 2"))
FIG8 = dt_to_pd(parse_dt("4 6 8 2"))
KINK = parse_pd("X(1,1,2,2)")
HOPF = parse_pd("X(4,1,3,2);X(2,3,1,4)")
UNLINK2 = parse_pd("X(1,3,2,4);X(2,3,1,4)")  # the Hopf link with one crossing switched
NAMES = [r.name for r in oracles.corpus()]
A, t, q = sp.symbols("A t q")


def brute_bracket(pd):
    """Independent state sum: sympy arithmetic, explicit loop count per state."""
    total = 0
    for state in itertools.product((0, 1), repeat=len(pd)):
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                x = parent[x]
            return x

        for (a, b, c, d), s in zip(pd, state):
            pairs = ((a, b), (c, d)) if s == 0 else ((a, d), (b, c))
            for u, w in pairs:
                parent[find(u)] = find(w)
        loops = len({find(x) for x in parent})
        n_a = state.count(0)
        total += A ** (n_a - (len(pd) - n_a)) * (-(A**2) - A**-2) ** (loops - 1)
    return sp.expand(total)


# ---------------------------------------------------------------- bracket and Jones


def test_bracket_examples():
    assert kauffman_bracket(unknot()) == LaurentPoly1.constant(1, "A")
    assert kauffman_bracket(KINK) == LaurentPoly1({3: -1}, "A")
    assert jones(KINK) == LaurentPoly1.constant(1, "t")


def test_trefoil_bracket_against_brute_force():
    raw = kauffman_bracket(TREFOIL)
    assert oracles.poly1_to_sym(raw) == brute_bracket(TREFOIL.pd)
    # three terms, -A^5 - A^-3 + A^-7
    assert raw == LaurentPoly1({5: -1, -3: -1, -7: 1}, "A")
    assert len(jones(TREFOIL)) == 3


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "6_3", "7_4", "8_19"])
def test_bracket_against_brute_force(name):
    d = oracles.diagram(name)
    assert oracles.poly1_to_sym(kauffman_bracket(d)) == brute_bracket(d.pd)


def test_jones_unknot_and_figure_eight():
    assert jones(unknot()) == LaurentPoly1.constant(1, "t")
    assert abs(jones(FIG8).evaluate(-1)) == 5


@pytest.mark.parametrize("name", NAMES)
def test_jones_matches_knotinfo(name):
    assert sp.expand(oracles.poly1_to_sym(jones(oracles.diagram(name))) - oracles.ref_jones(name)) == 0


def test_jones_of_hopf_link_uses_half_powers():
    assert jones(HOPF).var == "s"
    assert jones(HOPF) == LaurentPoly1({-5: -1, -1: -1}, "s")


def test_crossing_cap():
    with pytest.raises(CrossingCapExceeded):
        jones(TREFOIL, cap=2)


# ---------------------------------------------------------------- HOMFLYPT and sl_N


def test_homflypt_unknot_and_unlink():
    assert homflypt(unknot()) == LaurentPoly2({(0, 0): 1})
    # (a - a^-1)/(q - q^-1), stored after clearing one factor of (q - q^-1)
    assert homflypt_denominator_power(UNLINK2) == 1
    assert homflypt(UNLINK2) == LaurentPoly2({(1, 0): 1, (-1, 0): -1})
    assert homflypt_az(UNLINK2) == LaurentPoly2({(1, -1): 1, (-1, -1): -1}, ("a", "z"))


def test_homflypt_to_jones_for_trefoil():
    lhs = homflypt(TREFOIL).substitute("a", 1, 2)
    assert lhs == jones(TREFOIL).substitute(1, -2, "q")


@pytest.mark.parametrize("name", NAMES + ["11n34", "11n42"])
def test_homflypt_matches_knotinfo(name):
    h = oracles.homflypt_az(name)
    mine = sum(c * oracles.a**i * oracles.z**j for (i, j), c in h.terms.items())
    assert sp.expand(mine - oracles.ref_homfly_az(name)) == 0


def test_sl_n_examples():
    assert sl_n(unknot(), 3) == LaurentPoly1.constant(1, "q")
    assert sl_n(FIG8, 2) == jones(FIG8).substitute(1, -2, "q")
    # the trefoil value has three terms: q^-4 + q^-8 - q^-12
    assert sl_n(TREFOIL, 3) == LaurentPoly1({-4: 1, -8: 1, -12: -1}, "q")


def test_sl3_matches_knotinfo_homflypt():
    for name in NAMES[:60]:
        ref = oracles.ref_homfly_az(name).subs({oracles.a: q**3, oracles.z: q - 1 / q})
        assert sp.expand(oracles.poly1_to_sym(sl_n(oracles.diagram(name), 3)) - ref) == 0


def test_sl_n_for_links_divides_exactly():
    assert sl_n(HOPF, 2) == jones(HOPF).substitute(-1, -1, "q")


def _switch(c):
    a, b, x, d = c
    return (d, a, b, x) if _sign(c) > 0 else (b, x, d, a)


_SIGNS = {}


def _sign(c):
    return _SIGNS[c]


def _smooth(pd, k):
    """Oriented smoothing of crossing ``k`` by merging arc labels."""
    a, b, c, d = pd[k]
    pairs = ((a, b), (d, c)) if _sign(pd[k]) > 0 else ((a, d), (b, c))
    ren = {}
    for u, w in pairs:
        ren[w] = u
    rest = [tuple(ren.get(x, x) for x in quad) for i, quad in enumerate(pd) if i != k]
    return rest


@given(st.sampled_from(NAMES[:80]), st.data())
def test_skein_identity_pointwise(name, data):
    d = oracles.diagram(name)
    k = data.draw(st.integers(0, d.n_crossings - 1))
    _SIGNS.clear()
    _SIGNS.update({tuple(c.arcs): c.sign for c in d.crossings})
    quad = tuple(d.crossings[k].arcs)
    switched = list(d.pd)
    switched[k] = _switch(quad)
    try:
        smoothed = diagram_from_pd(_smooth(list(d.pd), k))
    except DiagramError:
        assume(False)
    other = diagram_from_pd(switched)
    pos, neg = (d, other) if d.signs[k] > 0 else (other, d)
    a = LaurentPoly2({(1, 0): 1}, ("a", "z"))
    ai = LaurentPoly2({(-1, 0): 1}, ("a", "z"))
    z = LaurentPoly2({(0, 1): 1}, ("a", "z"))
    assert (a * homflypt_az(pos) - ai * homflypt_az(neg) - z * homflypt_az(smoothed)).is_zero()


@given(st.sampled_from(NAMES))
def test_specialization_ladder(name):
    d = oracles.diagram(name)
    h = homflypt(d)
    for n in (2, 3):
        assert h.substitute("a", 1, n) == sl_n(d, n)
    assert sl_n(d, 2) == jones(d).substitute(1, -2, "q")


# ---------------------------------------------------------------- Alexander


def test_alexander_examples():
    assert alexander(unknot()) == LaurentPoly1.constant(1, "t")
    assert alexander(TREFOIL) == LaurentPoly1({1: 1, 0: -1, -1: 1}, "t")
    with pytest.raises(MultiComponentUnsupported):
        alexander(HOPF)


@pytest.mark.parametrize("name", NAMES)
def test_alexander_matches_knotinfo(name):
    p = alexander(oracles.diagram(name))
    assert p.evaluate(1) == 1
    mine = sp.expand(oracles.poly1_to_sym(p) * t ** (-p.min_exp()))
    assert sp.expand(mine - oracles.ref_alexander(name)) == 0 or sp.expand(mine + oracles.ref_alexander(name)) == 0


# ---------------------------------------------------------------- Goeritz and classical invariants


def test_goeritz_examples():
    g = goeritz(unknot())
    assert g.matrix == () or len(g.matrix) == 0
    assert g.correction == 0
    assert determinant(TREFOIL) == 3 and determinant(FIG8) == 5
    for d in (TREFOIL, FIG8):
        m = goeritz(d).matrix
        assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


def test_classical_examples():
    assert (signature(unknot()), determinant(unknot()), dbc_homology(unknot())) == (0, 1, [])
    assert determinant(TREFOIL) == 3 and dbc_homology(TREFOIL) == [3]
    # anchor: the positive trefoil has signature -2
    assert TREFOIL.writhe == 3 and signature(TREFOIL) == -2


@pytest.mark.parametrize("name", NAMES)
def test_signature_and_determinant_match_knotinfo(name):
    d = oracles.diagram(name)
    ref = oracles.reference()[name]
    assert signature(d) == int(ref["signature"])
    assert determinant(d) == int(ref["determinant"])
    assert signature(mirror(d)) == -signature(d)


@pytest.mark.parametrize("name", NAMES)
def test_determinant_is_alexander_at_minus_one(name):
    d = oracles.diagram(name)
    assert determinant(d) == abs(alexander(d).evaluate(-1))


def test_both_shadings_agree():
    for name in NAMES[::7]:
        d = oracles.diagram(name)
        values = set()
        for shade in (0, 1):
            g = goeritz(d, shade=shade)
            values.add(matrix_signature(g.matrix) - g.correction)
        assert values == {signature(d)}


def test_smith_and_signature_helpers():
    assert smith_invariants([[2, 4], [6, 8]]) == [2, 4]
    assert smith_invariants([[0, 0], [0, 3]]) == [3, 0]
    assert matrix_signature([[0, 1], [1, 0]]) == 0
    assert matrix_signature([[2, 1], [1, 2]]) == 2
    assert matrix_signature([[-1, 0], [0, -5]]) == -2


@given(st.sampled_from(NAMES))
def test_mirror_properties(name):
    d = oracles.diagram(name)
    assert jones(mirror(d)) == jones(d).substitute(1, -1)
    assert signature(mirror(d)) == -signature(d)


@given(st.sampled_from(NAMES))
def test_classical_relations(name):
    d = oracles.diagram(name)
    v = jones(d)
    assert v.evaluate(1) == 1
    det = determinant(d)
    prod = 1
    for f in dbc_homology(d):
        prod *= f
    assert det == abs(v.evaluate(-1)) == prod
