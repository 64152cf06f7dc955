from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import ring
from derived_rees.graded import (FMap, FModule, GradedAlgebraPresentation, GradedModule,
                                 GradingError, day_tensor, free_f_module, graded_localize,
                                 inclusion_free_into_laurent, laurent_f_module, lemma_loc_check,
                                 monoid_algebra, regrade_pushforward,
                                 split_plus_zero, twist)
from derived_rees.poly import make_ring

Q = make_ring([])
UNIT = GradedModule.of({0: 1})
ZERO = GradedModule.of({})

finite_modules = st.dictionaries(st.integers(-3, 3), st.integers(0, 3), max_size=4).map(GradedModule.of)
tailed_modules = st.builds(lambda d, s, k: GradedModule.of({w: v for w, v in d.items() if w < s}, upper=(s, k)),
                           st.dictionaries(st.integers(-3, 3), st.integers(0, 2), max_size=3),
                           st.integers(-2, 2), st.integers(1, 2))


def dims(M, lo=-12, hi=12):
    return M.window(lo, hi)


def test_day_tensor_examples():
    assert day_tensor(UNIT, UNIT) == UNIT
    N = GradedModule.of({0: 1, 1: 1})
    assert day_tensor(N, GradedModule.of({1: 1})) == GradedModule.of({1: 1, 2: 1})
    assert day_tensor(N, ZERO).is_zero()


def test_day_tensor_base_mismatch():
    with pytest.raises(GradingError):
        day_tensor(UNIT, GradedModule.of({0: 1}, base="QQ[x]"))


def test_day_tensor_two_tails_rejected():
    T = GradedModule.of({}, upper=(0, 1))
    with pytest.raises(GradingError):
        day_tensor(T, T)


@given(finite_modules)
def test_unit(M):
    assert day_tensor(M, UNIT) == M
    assert day_tensor(UNIT, M) == M


@given(finite_modules, finite_modules, finite_modules)
def test_associative(a, b, c):
    assert day_tensor(day_tensor(a, b), c) == day_tensor(a, day_tensor(b, c))


@given(finite_modules, finite_modules)
def test_commutative(a, b):
    assert day_tensor(a, b) == day_tensor(b, a)


@given(finite_modules, tailed_modules)
def test_tail_tensor_matches_truncation(a, t):
    # compare with a finite truncation of the tail far beyond the window
    trunc = GradedModule.of({w: t.dim(w) for w in range(-6, 40)})
    full = day_tensor(a, t)
    approx = day_tensor(a, trunc)
    assert dims(full, -10, 20) == dims(approx, -10, 20)


def test_regrade_examples():
    K = GradedModule.of({-1: 1, 2: 1})
    assert regrade_pushforward(0, K) == GradedModule.of({0: 2})
    assert regrade_pushforward(1, K) == K
    assert regrade_pushforward(2, GradedModule.of({1: 1})) == GradedModule.of({2: 1})


def test_regrade_infinite_fiber():
    with pytest.raises(GradingError):
        regrade_pushforward(0, GradedModule.of({}, upper=(0, 1)))


@given(finite_modules, st.integers(-3, 3), st.integers(-3, 3))
def test_regrade_composes(K, l1, l2):
    assert regrade_pushforward(l1, regrade_pushforward(l2, K)) == regrade_pushforward(l1 * l2, K)


@given(tailed_modules)
def test_regrade_negation_of_tail(K):
    back = regrade_pushforward(-1, regrade_pushforward(-1, K))
    assert dims(back) == dims(K)


def test_twist_examples():
    assert twist(UNIT, 1) == GradedModule.of({-1: 1})
    M = GradedModule.of({0: 2, 3: 1})
    assert twist(M, 0) == M


@given(finite_modules, st.integers(-4, 4))
def test_twist_inverse(M, d):
    assert twist(twist(M, d), -d) == M
    for w in range(-5, 5):
        assert twist(M, d).dim(w) == M.dim(w + d)


def test_monoid_algebras():
    Z = monoid_algebra(Q, "Z")
    assert Z.generators == [("t", 1), ("t_inv", -1)]
    assert [str(r) for r in Z.relations] == ["t*t_inv - 1"]
    N = monoid_algebra(Q, "N")
    assert N.generators == [("t", 1)] and not N.relations
    Nx = monoid_algebra(ring("x"), "N")
    assert Nx.ring.names == ("x", "t") and Nx.base_vars == ("x",)
    with pytest.raises(GradingError):
        monoid_algebra(Q, "Q")


def test_inhomogeneous_relation_rejected():
    R = make_ring([("x", 0), ("v", 1)])
    with pytest.raises(GradingError):
        GradedAlgebraPresentation(R, ("x",), (R.var("x") - R.var("v"),))


def test_split_examples():
    s = split_plus_zero(monoid_algebra(Q, "N"))
    assert s.dims[0] == (1, 0, 1) and all(s.dims[w] == (1, 1, 0) for w in range(1, 5))
    assert not s.zero.ring.names
    s = split_plus_zero(GradedAlgebraPresentation(Q, ()))
    assert s.plus.is_zero() and s.dims[0] == (1, 0, 1)
    R = make_ring([("x", 0), ("v", 1)])
    s = split_plus_zero(GradedAlgebraPresentation(R, ("x",)), w_max=3, degree_bound=6)
    assert s.zero.ring.names == ("x",)
    # weight w within total degree 6: v^w x^k for k <= 6 - w
    assert s.dims == {0: (7, 0, 7), 1: (6, 6, 0), 2: (5, 5, 0), 3: (4, 4, 0)}
    assert s.additive()


def test_split_rejects_negative_weights():
    with pytest.raises(GradingError):
        split_plus_zero(monoid_algebra(Q, "Z"))


@given(st.sampled_from(["x*v - v*y", "v^2 - x*w", "w - v^2", "x^2 - y^2"]))
def test_split_additivity_with_relations(rel):
    from derived_rees.poly import parse_polynomial

    R = make_ring([("x", 0), ("y", 0), ("v", 1), ("w", 2)])
    B = GradedAlgebraPresentation(R, ("x", "y"), (parse_polynomial(rel, R),))
    assert split_plus_zero(B, w_max=3, degree_bound=4).additive()


def test_localize_free():
    L = graded_localize(free_f_module(), window=(-3, 3))
    assert L.stable and set(L.dims.values()) == {1}


def test_localize_zero():
    assert set(graded_localize(FModule({0: 2}, {}, 5), window=(-2, 2)).dims.values()) == {0}


def test_localize_needs_weight_one():
    with pytest.raises(GradingError):
        graded_localize(FModule({}, {}, 0, 1, [[Fraction(1)]], f_weight=2))


def test_localize_nilpotent_tail():
    # f acts nilpotently on the tail: the localization vanishes
    M = FModule({}, {}, 0, 2, [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]])
    assert set(graded_localize(M).dims.values()) == {0}


def test_localization_of_inclusion():
    phi = inclusion_free_into_laurent()
    assert lemma_loc_check(phi, window=(-5, 5))
    assert graded_localize(laurent_f_module()).dims == graded_localize(free_f_module()).dims


def test_localization_check_needs_iso_in_nonnegative_weights():
    S = free_f_module()
    zero_map = FMap(S, laurent_f_module(), {}, [[Fraction(0)]])
    with pytest.raises(GradingError):
        lemma_loc_check(zero_map)


def _mat(rows):
    return [[Fraction(int(c)) for c in r] for r in rows]


square = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n),
                        st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)))


@given(square, st.dictionaries(st.integers(-4, -1), st.integers(0, 2), max_size=3),
       st.dictionaries(st.integers(-4, -1), st.integers(0, 2), max_size=3))
def test_localization_of_iso_in_nonnegative_weights(mats, low_m, low_n):
    T, P = (sympy.Matrix(m) for m in mats)
    if P.det() == 0:
        P = P + sympy.eye(P.rows) * (abs(P.det()) + 7) if (P + 7 * sympy.eye(P.rows)).det() else sympy.eye(P.rows)
    if P.det() == 0:
        P = sympy.eye(P.rows)
    TN = P * T * P.inv()
    n = T.rows
    M = FModule(dict(low_m), {}, 0, n, _mat(T.tolist()))
    N = FModule(dict(low_n), {}, 0, n, [[Fraction(int(c.p), int(c.q)) for c in row] for row in TN.tolist()])
    phi = FMap(M, N, {w: [[Fraction(0)] * low_m.get(w, 0) for _ in range(low_n.get(w, 0))] for w in range(-4, 0)},
               _mat(P.tolist()))
    assert lemma_loc_check(phi)
    Lm, Ln = graded_localize(M), graded_localize(N)
    assert Lm.dims == Ln.dims
