import pytest
from hypothesis import given, strategies as st

from knotdetect.diagram import dt_to_pd, mirror, parse_dt, parse_pd, unknot
from knotdetect.invariants import CrossingCapExceeded, unnormalized_jones
from knotdetect.khovanov import (
    BigradedDims,
    build_cube,
    check_d_squared,
    khovanov_f2,
    poincare_poly,
    specialize_t,
)
from knotdetect.laurent import LaurentPoly1

import oracles

TREFOIL = dt_to_pd(parse_dt("4 6 2"))
NAMES = [r.name for r in oracles.corpus()]
UNKNOT_Q = LaurentPoly1({1: 1, -1: 1}, "q")


def test_unknot():
    b = khovanov_f2(unknot())
    assert b.dims == {(0, 1): 1, (0, -1): 1}
    assert poincare_poly(b).canonical_string() == "1*q^-1*t^0+1*q^1*t^0"
    assert specialize_t(b, -1) == UNKNOT_Q
    assert specialize_t(b, 1) == UNKNOT_Q


def test_trefoil_euler_characteristic():
    b = khovanov_f2(TREFOIL)
    assert specialize_t(b, -1) == unnormalized_jones(TREFOIL)
    assert b.dims == {(0, 1): 1, (0, 3): 1, (2, 5): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}


def test_kinked_trefoil_gives_the_same_homology():
    # a 4-crossing trefoil diagram with a nugatory crossing
    kinked = dt_to_pd(parse_dt("4 8 6 2"))
    assert kinked.n_crossings == 4
    assert khovanov_f2(kinked) == khovanov_f2(TREFOIL)


def test_kink_alone_is_the_unknot():
    for pd in ("X(1,1,2,2)", "X(1,2,2,1)"):
        assert khovanov_f2(parse_pd(pd)) == khovanov_f2(unknot())


def test_hopf_link():
    hopf = parse_pd("X(4,1,3,2);X(2,3,1,4)")
    b = khovanov_f2(hopf)
    assert b.total() == 4
    assert specialize_t(b, -1) == unnormalized_jones(hopf)


def test_kinoshita_terasaka_and_conway_knots_agree():
    assert oracles.khovanov("11n34") == oracles.khovanov("11n42")


def test_total_dimension_bounds_jones_coefficients():
    for name in NAMES[:40]:
        b = oracles.khovanov(name)
        j = unnormalized_jones(oracles.diagram(name))
        assert b.total() >= sum(abs(c) for c in j.terms.values())


def test_mirror_reflects_gradings():
    b = khovanov_f2(TREFOIL)
    m = khovanov_f2(mirror(TREFOIL))
    assert m.dims == {(-i, -j): d for (i, j), d in b.dims.items()}


def test_cube_edges_change_circle_count_by_one():
    cube, _ = build_cube(oracles.diagram("6_2"))
    for v in range(1 << cube.n):
        for x in range(cube.n):
            if not v >> x & 1:
                assert abs(cube.n_circles[v] - cube.n_circles[v | 1 << x]) == 1


def test_cap_and_validation():
    with pytest.raises(CrossingCapExceeded):
        khovanov_f2(TREFOIL, cap=2)
    with pytest.raises(ValueError):
        BigradedDims({(0, 0): -1})
    with pytest.raises(ValueError):
        specialize_t(khovanov_f2(TREFOIL), 2)
    assert khovanov_f2(TREFOIL).lines() == ["(0,1):1", "(0,3):1", "(2,5):1", "(2,7):1", "(3,7):1", "(3,9):1"]


@pytest.mark.parametrize("name", NAMES + ["11n34", "11n42"])
def test_matches_knotinfo_over_f2(name):
    assert oracles.khovanov(name).dims == oracles.ref_khovanov_f2(name)


@given(st.sampled_from([n for n in NAMES if int(n.split("_")[0]) <= 7]))
def test_d_squared_is_zero(name):
    assert check_d_squared(oracles.diagram(name))
