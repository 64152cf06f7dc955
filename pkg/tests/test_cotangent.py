import pytest
from hypothesis import given, strategies as st

from conftest import CENTRES, centre, ring
from derived_rees.cotangent import (DELTA, cotangent_complex, cotangent_homology, normal_cone,
                                    transitivity_triangle)
from derived_rees.dg import DGError, base_extend, discrete, koszul, semifree
from derived_rees.homology import NONZERO, homology_at, is_connective

X = ring("x")
x = X.var("x")
A = ring("x", "y")


def test_no_relative_generators():
    L = cotangent_complex(discrete(A))
    assert L.gens == () or not L.gens
    assert cotangent_homology(L, 0).is_zero()


def test_polynomial_algebra():
    L = cotangent_complex(discrete(X), [])
    assert [(g.name, g.degree) for g in L.gens] == [(DELTA + "x", 0)]
    H0 = cotangent_homology(L, 0)
    assert H0.generator_count == 1 and not H0.relations


def test_koszul_over_its_base():
    L = cotangent_complex(koszul(X, [x ** 2]))
    assert [(g.name, g.degree) for g in L.gens] == [(DELTA + "eps1", 1)]
    assert not L.differential
    assert cotangent_homology(L, 0).is_zero()
    H1 = cotangent_homology(L, 1)
    assert H1.generator_count == 1


def test_linearization_over_q():
    # Koszul(Q[x]; x^2) relative to Q: d(delta eps) = 2x delta x
    L = cotangent_complex(koszul(X, [x ** 2]), [])
    (term,) = L.differential[DELTA + "eps1"].items()
    assert term[0] == DELTA + "x"
    assert str(term[1]) == "2*x"


def test_plane_origin_conormal():
    A2, f = centre("x,y")
    L = cotangent_complex(koszul(A2, f))
    assert cotangent_homology(L, 0).is_zero()
    H1 = cotangent_homology(L, 1)
    assert H1.generator_count == 2
    assert H1.annihilator().generators == tuple(sorted(f, key=str))


@pytest.mark.parametrize("key", list(CENTRES))
def test_surjections_are_one_connective(key):
    A2, f = centre(key)
    L = cotangent_complex(koszul(A2, f))
    assert cotangent_homology(L, 0).is_zero()
    assert cotangent_homology(L, -1).is_zero()
    assert cotangent_homology(L, 1).generator_count == len(f)


def test_sign_rule_locked_by_d_squared():
    B = semifree(ring("x", "y", "z"), [("e1", 1, 0), ("e2", 1, 0), ("s", 2, 0)],
                 {"e1": "x", "e2": "y", "s": "y*e1 - x*e2"})
    L = cotangent_complex(B, [])
    L.check_d_squared()
    ds = L.differential[DELTA + "s"]
    assert set(ds) == {DELTA + n for n in ("e1", "e2", "x", "y")}


@given(st.lists(st.sampled_from(["x", "y", "x*y", "x^2", "y^3"]), min_size=1, max_size=3))
def test_d_squared_random_koszul(fs):
    from derived_rees.poly import parse_polynomial

    f = [parse_polynomial(s, A) for s in fs]
    L = cotangent_complex(koszul(A, f), [])
    L.check_d_squared()


def test_base_change_of_cotangent():
    A2, f = centre("x,y")
    Az = A2.extend([("z", 0)])
    fz = [p.__class__(Az, {e + (0,): c for e, c in p.terms.items()}) for p in f]
    L1 = cotangent_complex(base_extend(koszul(A2, f), [("z", 0)]), list(Az.names))
    L2 = cotangent_complex(koszul(Az, fz), list(Az.names))
    assert L1.canonical() == L2.canonical()


def test_transitivity_exact():
    C = koszul(X, [x ** 2])
    tri = transitivity_triangle(C, ["x"], [])
    assert [g.degree for g in tri.first.gens] == [0]
    assert [g.degree for g in tri.third.gens] == [1]
    assert tri.exact_in_range(-1, 3).holds


def test_transitivity_degenerate_cases():
    C = koszul(X, [x ** 2])
    tri = transitivity_triangle(C, [], ["x"])
    assert not tri.first.gens
    tri2 = transitivity_triangle(C, ["x", "eps1"], [])
    assert not tri2.third.gens
    assert tri2.exact_in_range(-1, 2).holds


def test_transitivity_rejects_non_subalgebra():
    B = semifree(A, [("e1", 1, 0), ("e2", 1, 0), ("s", 2, 0)], {"e1": "x", "e2": "y", "s": "y*e1 - x*e2"})
    with pytest.raises(DGError):
        transitivity_triangle(B, ["s"], ["x", "y"])


def test_normal_cone_of_regular_pair():
    A2, f = centre("x,y")
    N = normal_cone(koszul(A2, f))
    assert "nu_eps1" in N.base.index and "nu_eps2" in N.base.index
    assert N.base.weights[N.base.index["nu_eps1"]] == 1
    H0 = homology_at(N, 0)
    assert H0.generator_count == 1
    assert homology_at(N, 1).is_zero()


def test_normal_cone_of_identity():
    N = normal_cone(discrete(A))
    assert N.base.names == A.names and not N.gens


def test_normal_cone_of_polynomial_algebra():
    N = normal_cone(discrete(X), [])
    (g,) = N.gens
    assert (g.name, g.degree, g.weight) == ("nu_x", -1, 1)
    assert is_connective(N, -2).verdicts[-1] == NONZERO
