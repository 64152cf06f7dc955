import pytest

from conftest import CENTRES, centre, ring, to_sympy
from derived_rees.dg import base_extend
from derived_rees.groebner import buchberger
from derived_rees.homology import NONZERO, UNBOUNDED, ZERO, homology_at, is_connective, piece_dimension, quasi_iso_in_range
from derived_rees.poly import make_ring, parse_polynomial
from derived_rees.rees import (ReesError, classical_rees, compare_classical, fiber_at_zero,
                               fiber_comparison, generic_fiber, module_complex, normal_cone_of,
                               pi0_ideal, rees_ext_koszul, rees_ext_sym, sym_algebra,
                               weight_one_generation_check, weight_zero_check)

Q = make_ring([])
X = ring("x")
x = X.var("x")


def test_koszul_rees_shape():
    R = rees_ext_koszul(X, [x])
    P = R.presentation
    assert P.base.names == ("x", "t_inv", "v1")
    assert list(P.base.weights) == [0, -1, 1]
    assert [(g.name, g.degree, g.weight) for g in P.gens] == [("eps1", 1, 0)]
    assert str(P.d_gen("eps1")) in ("t_inv*v1 - x", "-x + t_inv*v1")


def test_koszul_rees_two_elements():
    A, f = centre("x,y")
    P = rees_ext_koszul(A, f).presentation
    assert [g.name for g in P.gens] == ["eps1", "eps2"]
    assert "v2" in P.base.index


def test_empty_centre():
    R = rees_ext_koszul(X, [])
    assert R.presentation.base.names == ("x", "t_inv") and not R.presentation.gens
    assert is_connective(R.presentation, -2).connective


def test_inhomogeneous_centre_rejected():
    W = ring("x", "w", weights=[0, 1])
    with pytest.raises(ReesError):
        rees_ext_koszul(W, [W.var("w")])


def test_reserved_names():
    V = ring("v1")
    with pytest.raises(ReesError):
        rees_ext_koszul(V, [V.var("v1")])


def test_sym_rees_on_degree_zero_generator():
    R = rees_ext_sym(Q, module_complex(Q, [("e", 0)]))
    eta = {g.name: g for g in R.presentation.gens}["eta_e"]
    assert (eta.degree, eta.weight) == (-1, 1)
    rep = is_connective(R.presentation, -2)
    assert rep.verdicts[-1] == NONZERO
    # H_{-1} is killed by t_inv inside the aux window
    H = homology_at(R.presentation, -1)
    ann = H.annihilator()
    assert ann.contains(R.presentation.base.var("t_inv"))


def test_sym_rees_of_zero_module():
    R = rees_ext_sym(X, module_complex(X, []))
    assert not R.presentation.gens and R.presentation.base.names == ("x", "t_inv")


def test_sym_rees_with_differential():
    M = module_complex(X, [("e1", 1), ("e0", 0)], {"e1": {"e0": "x"}})
    R = rees_ext_sym(X, M)
    gens = {g.name: g for g in R.presentation.gens}
    assert (gens["eta_e1"].degree, gens["eta_e1"].weight) == (0, 1)
    assert "x" in str(R.presentation.d_gen("e1"))
    R.presentation.check_d_squared()


def test_invalid_module_complex():
    with pytest.raises(ReesError):
        module_complex(X, [("a", 2), ("b", 1), ("c", 0)], {"a": {"b": "1"}, "b": {"c": "1"}})
    with pytest.raises(ReesError):
        module_complex(X, [("a", 1), ("b", 1)], {"a": {"b": "x"}})


def test_sym_algebra_aux():
    S = sym_algebra(module_complex(Q, [("e", 0)]))
    assert [g.aux for g in S.gens] == [1]


@pytest.mark.parametrize("key", list(CENTRES))
def test_classical_rees_against_sympy(key):
    import sympy

    A, f = centre(key)
    gb = classical_rees(A, f)
    # oracle: eliminate T from (v_i - f_i T) with sympy, then compare after t_inv -> 0 ... the
    # classical extended Rees ring contains those relations; check mutual membership
    names = list(A.names)
    vs = [f"v{i + 1}" for i in range(len(f))]
    T = sympy.Symbol("T")
    syms = sympy.symbols(names + vs)
    gens = [sympy.Symbol(v) - to_sympy(fi) * T for v, fi in zip(vs, f)]
    G = sympy.groebner(gens, T, *syms, order="lex")
    oracle = [g for g in G.exprs if not g.has(T)]
    ring_ = gb.ring
    for g in oracle:
        p = parse_polynomial(str(g).replace("**", "^"), ring_)
        assert gb.contains(p)


def test_classical_rees_examples():
    gb = classical_rees(X, [x])
    R = gb.ring
    assert gb == buchberger([R.var("t_inv") * R.var("v1") - R.var("x")])
    A, f = centre("x^2,x*y")
    gb = classical_rees(A, f)
    R = gb.ring
    assert gb.contains(R.var("y") * R.var("v1") - R.var("x") * R.var("v2"))
    assert not pi0_ideal(rees_ext_koszul(A, f)).contains(embed_(R.var("y") * R.var("v1") - R.var("x") * R.var("v2"),
                                                                pi0_ideal(rees_ext_koszul(A, f)).ring))


def embed_(p, r):
    from derived_rees.poly import embed

    return embed(p, r)


@pytest.mark.parametrize("key,iso", [("x", True), ("x,y", True), ("x^2", True), ("x^2,x*y", False),
                                     ("x,y,z", True)])
def test_compare_classical(key, iso):
    A, f = centre(key)
    res = compare_classical(rees_ext_koszul(A, f))
    assert res["surjective"]
    assert res["isomorphic"] == iso
    if not iso:
        assert res["kernel_generators"] == ["y*v1 - x*v2"]


@pytest.mark.parametrize("key", list(CENTRES))
def test_connective(key):
    A, f = centre(key)
    rep = is_connective(rees_ext_koszul(A, f).presentation, -2, 8)
    assert rep.verdicts == {-2: ZERO, -1: ZERO}


def test_fiber_at_zero_adds_tau():
    A, f = centre("x,y")
    F = fiber_at_zero(rees_ext_koszul(A, f))
    tau = {g.name: g for g in F.gens}["tau"]
    assert (tau.degree, tau.weight) == (1, -1)


def test_fiber_at_zero_is_normal_bundle():
    A, f = centre("x,y")
    F = fiber_at_zero(rees_ext_koszul(A, f))
    H0 = homology_at(F, 0)
    for w in range(0, 5):
        assert piece_dimension(H0, w, 10) == w + 1


def test_fiber_of_empty_centre():
    F = fiber_at_zero(rees_ext_koszul(X, []))
    H0 = homology_at(F, 0)
    # A[t_inv]/(t_inv) = A = Q[x], infinite in weight 0
    assert [tuple(str(p) for p in r) for r in H0.relations] == [("t_inv",)]
    assert piece_dimension(H0, 0, 6) == UNBOUNDED


def test_normal_cone_of_regular_pair():
    A, f = centre("x,y")
    N = normal_cone_of(rees_ext_koszul(A, f))
    assert {"nu_eps1", "nu_eps2"} <= set(N.base.names)


@pytest.mark.parametrize("key", list(CENTRES))
def test_deformation_fibers(key):
    A, f = centre(key)
    R = rees_ext_koszul(A, f)
    _, _, down, up = fiber_comparison(R)
    assert quasi_iso_in_range(down, (-2, 3), 8).holds
    G = generic_fiber(R)
    assert quasi_iso_in_range(G.inclusion, (-2, 3), 8, retraction=G.retraction).holds


def test_sym_fibers():
    R = rees_ext_sym(Q, module_complex(Q, [("e", 0)]))
    _, _, down, up = fiber_comparison(R)
    assert up is None
    assert quasi_iso_in_range(down, (-2, 3), 8).holds
    G = generic_fiber(R)
    assert quasi_iso_in_range(G.inclusion, (-2, 3), 8, retraction=G.retraction).holds


def test_generic_fiber_of_empty_centre():
    G = generic_fiber(rees_ext_koszul(X, []))
    assert quasi_iso_in_range(G.inclusion, (-1, 2), 6, retraction=G.retraction).holds


@pytest.mark.parametrize("key", list(CENTRES))
def test_weight_zero(key):
    A, f = centre(key)
    v = weight_zero_check(rees_ext_koszul(A, f))
    assert v.status == "pass"
    assert v.bounds["cutoffs"] == [4, 5]


def test_weight_zero_detail():
    v = weight_zero_check(rees_ext_koszul(X, [x]))
    assert v.detail["R_weight0_relations"] == []
    assert v.detail["fiber_weight0_relations"] == ["x"]
    A, f = centre("x^2,x*y")
    v = weight_zero_check(rees_ext_koszul(A, f))
    assert sorted(v.detail["fiber_weight0_relations"]) == ["x*y", "x^2"]


def test_weight_zero_sym_is_inconclusive():
    v = weight_zero_check(rees_ext_sym(Q, module_complex(Q, [("e", 0)])))
    assert v.status == "inconclusive"


@pytest.mark.parametrize("key", list(CENTRES))
def test_weight_one(key):
    A, f = centre(key)
    assert weight_one_generation_check(rees_ext_koszul(A, f), 4, 8).status == "pass"
    assert weight_one_generation_check(classical_rees(A, f), 4, 8).status == "pass"


def test_weight_one_counterexample():
    W = make_ring([("v", 1), ("g", 2)])
    v = weight_one_generation_check(buchberger([], W), 4, 6)
    assert v.status == "fail" and v.witness == "g"
    ok = weight_one_generation_check(buchberger([W.var("g") - W.var("v") ** 2]), 4, 6)
    assert ok.status == "pass"


def test_base_change():
    A, f = centre("x,y")
    Az = A.extend([("z", 0)])
    fz = [parse_polynomial(str(p), Az) for p in f]
    R = rees_ext_koszul(A, f).presentation
    Rz = rees_ext_koszul(Az, fz).presentation
    assert base_extend(R, [("z", 0)]).canonical() == Rz.canonical()
