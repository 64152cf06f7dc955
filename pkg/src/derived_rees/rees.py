"""Extended Rees algebras for Koszul quotients and symmetric algebras.

Koszul centre ``B = A/(f_1..f_n)``::

    R = A[t_inv, v_1..v_n]<eps_1..eps_n>,  d eps_i = t_inv*v_i - f_i

Symmetric algebra ``B = Sym_A(M)`` for a finite complex ``M`` of free modules:
``R`` is the free algebra over ``A[t_inv]`` on the cofiber of ``t_inv`` acting
on ``M[t_inv][-1]``.  Each generator ``e`` of ``M`` (degree ``k``, matrix
entries ``d e_j = sum_i a_ij e_i``) contributes ``e`` itself (degree ``k``,
weight 0) and ``eta_e`` (degree ``k-1``, weight 1) with::

    d e_j   = sum_i a_ij e_i + t_inv*eta_e_j
    d eta_j = -sum_i a_ij eta_i

Both carry aux grading 1 (polynomial degree in ``M``), which ``d``
preserves.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .cotangent import NU, normal_cone
from .dg import (DGMorphism, DGPresentation, Generator, dg_morphism,
                 extend_presentation, koszul, semifree)
from .groebner import GroebnerBasis, buchberger, eliminate
from .poly import (INHOMOGENEOUS, Polynomial, WeightedRing, embed,
                   parse_polynomial, weight_of)

T_INV = "t_inv"
T = "t"
TAU = "tau"
SIGMA = "sigma"


class ReesError(ValueError):
    pass


# -- module complexes ----------------------------------------------------------------

@dataclass(eq=False)
class ModuleComplex:
    """Finite complex of free ``A``-modules: named generators and ``d e_j = sum a_ij e_i``."""

    ring: WeightedRing
    gens: tuple  # (name, degree, weight)
    d: dict      # name -> {name: Polynomial}

    def __post_init__(self):
        names = [g[0] for g in self.gens]
        if len(set(names)) != len(names):
            raise ReesError("duplicate module generator")
        info = {g[0]: g for g in self.gens}
        for src, row in self.d.items():
            if src not in info:
                raise ReesError(f"differential on unknown generator {src!r}")
            for tgt, a in row.items():
                if tgt not in info:
                    raise ReesError(f"unknown generator {tgt!r} in d({src})")
                if info[tgt][1] != info[src][1] - 1:
                    raise ReesError(f"d({src}) must land in degree {info[src][1] - 1}")
                w = weight_of(a)
                if w is not None and w + info[tgt][2] != info[src][2]:
                    raise ReesError(f"d({src}) is not weight-homogeneous")
        for src in names:
            sq = {}
            for mid, a in self.d.get(src, {}).items():
                for tgt, b in self.d.get(mid, {}).items():
                    sq[tgt] = sq.get(tgt, self.ring.zero()) + a * b
            if any(sq.values()):
                raise ReesError(f"d^2 != 0 on module generator {src!r}")

    def entry(self, src, tgt) -> Polynomial:
        return self.d.get(src, {}).get(tgt, self.ring.zero())

    @property
    def names(self):
        return [g[0] for g in self.gens]


def module_complex(A: WeightedRing, gens, d=None) -> ModuleComplex:
    """``gens``: ``(name, degree)`` or ``(name, degree, weight)``; entries may be text."""
    gs = tuple((g[0], g[1], g[2] if len(g) > 2 else 0) for g in gens)
    dd = {}
    for src, row in (d or {}).items():
        dd[src] = {}
        for tgt, a in row.items():
            p = parse_polynomial(a, A) if isinstance(a, str) else (a if isinstance(a, Polynomial) else A.const(a))
            if p:
                dd[src][tgt] = p
    return ModuleComplex(A, gs, dd)


def sym_algebra(M: ModuleComplex) -> DGPresentation:
    """``Sym_A(M)`` with generators of aux grading 1."""
    gens = [Generator(n, k, w, 1) for n, k, w in M.gens]
    alg_diff = {}
    pres = semifree(M.ring, gens, {})
    for n in M.names:
        el = pres.alg.zero()
        for tgt, a in M.d.get(n, {}).items():
            el = el + pres.alg.scalar(a) * pres.gen(tgt)
        if el:
            alg_diff[n] = el
    return semifree(M.ring, gens, alg_diff, name="Sym")


# -- Rees data ---------------------------------------------------------------------------

@dataclass(eq=False)
class ReesData:
    presentation: DGPresentation
    kind: str
    A: WeightedRing
    source: DGPresentation
    centre: tuple = ()
    module: ModuleComplex | None = None
    v_names: tuple = ()
    eps_names: tuple = ()

    @property
    def coefficient_vars(self):
        return tuple(self.A.names) + (T_INV,)

    def to_dict(self):
        d = {"kind": self.kind, "presentation": self.presentation.to_dict()}
        if self.kind == "koszul":
            d["centre"] = [str(f) for f in self.centre]
        return d


def _check_fresh(A: WeightedRing, names):
    clash = set(names) & set(A.names)
    if clash:
        raise ReesError(f"names reserved for the Rees construction already used in A: {sorted(clash)}")


def rees_ext_koszul(A: WeightedRing, f) -> ReesData:
    f = [embed(fi, A) for fi in f]
    for fi in f:
        w = weight_of(fi)
        if w == INHOMOGENEOUS or (w not in (None, 0)):
            raise ReesError(f"centre element {fi} must be homogeneous of weight 0")
    n = len(f)
    v = tuple(f"v{i + 1}" for i in range(n))
    eps = tuple(f"eps{i + 1}" for i in range(n))
    _check_fresh(A, (T_INV, T, TAU, SIGMA) + v + eps)
    base = A.extend([(T_INV, -1)] + [(vi, 1) for vi in v])
    ti = base.var(T_INV)
    diff = {e: ti * base.var(vi) - embed(fi, base) for e, vi, fi in zip(eps, v, f)}
    pres = semifree(base, [(e, 1, 0) for e in eps], diff, name="Rees")
    src = koszul(A, f, eps, name="B")
    return ReesData(pres, "koszul", A, src, tuple(f), None, v, eps)


ETA = "eta_"


def rees_ext_sym(A: WeightedRing, M: ModuleComplex) -> ReesData:
    if M.ring != A:
        raise ReesError("module complex over a different ring")
    names = M.names
    _check_fresh(A, (T_INV, T, TAU, SIGMA) + tuple(names) + tuple(ETA + n for n in names))
    base = A.extend([(T_INV, -1)])
    gens = []
    for n, k, w in M.gens:
        gens.append(Generator(n, k, w, 1))
        gens.append(Generator(ETA + n, k - 1, w + 1, 1))
    pres0 = semifree(base, gens, {})
    alg = pres0.alg
    ti = alg.scalar(base.var(T_INV))
    diff = {}
    for n in names:
        dw = ti * alg.gen(ETA + n)
        de = alg.zero()
        for tgt, a in M.d.get(n, {}).items():
            ae = alg.scalar(embed(a, base))
            dw = dw + ae * alg.gen(tgt)
            de = de - ae * alg.gen(ETA + tgt)
        diff[n] = dw
        if de:
            diff[ETA + n] = de
    pres = semifree(base, gens, diff, name="Rees")
    return ReesData(pres, "sym", A, sym_algebra(M), (), M)


def fiber_at_zero(R: ReesData) -> DGPresentation:
    """``R ⊗ Koszul(t_inv)``: adjoin ``tau`` of degree 1 with ``d tau = t_inv``.

    ``tau`` has weight -1, the weight of ``t_inv``, since ``d`` preserves weight.
    """
    P = R.presentation
    return extend_presentation(P, new_gens=[Generator(TAU, 1, -1)],
                               differential={TAU: P.base.var(T_INV)}, name="R/(t_inv)")


def normal_cone_of(R: ReesData) -> DGPresentation:
    return normal_cone(R.source, list(R.A.names))


def fiber_comparison(R: ReesData):
    """``(fiber, normal cone, map fiber -> normal cone, map normal cone -> fiber or None)``."""
    F = fiber_at_zero(R)
    N = normal_cone_of(R)
    if R.kind == "koszul":
        base_assign = {T_INV: 0}
        for vi, e in zip(R.v_names, R.eps_names):
            base_assign[vi] = N.base.var(NU + e)
        gen_assign = {e: -N.gen(e) for e in R.eps_names}
        gen_assign[TAU] = 0
        down = dg_morphism(F, N, base_assign, gen_assign)
        up_base = {NU + e: F.base.var(vi) for vi, e in zip(R.v_names, R.eps_names)}
        up_gens = {e: -F.gen(e) + F.alg.scalar(F.base.var(vi)) * F.gen(TAU)
                   for vi, e in zip(R.v_names, R.eps_names)}
        up = dg_morphism(N, F, up_base, up_gens)
        return F, N, down, up
    gen_assign = {TAU: 0}
    for n in R.module.names:
        gen_assign[n] = N.gen(n)
        nu = NU + n
        gen_assign[ETA + n] = N.gen(nu) if nu in N.alg.index else N.alg.scalar(N.base.var(nu))
    down = dg_morphism(F, N, {T_INV: 0}, gen_assign)
    return F, N, down, None


def laurent_presentation(A: WeightedRing) -> DGPresentation:
    """``A[t, t^-1]`` as ``Koszul(A[t_inv, t]; t*t_inv - 1)``."""
    _check_fresh(A, (T_INV, T, SIGMA))
    base = A.extend([(T_INV, -1), (T, 1)])
    return semifree(base, [(SIGMA, 1, 0)], {SIGMA: base.var(T) * base.var(T_INV) - 1}, name="A[t,t^-1]")


@dataclass(eq=False)
class GenericFiber:
    presentation: DGPresentation
    laurent: DGPresentation
    inclusion: DGMorphism   # laurent -> generic fiber
    retraction: DGMorphism  # generic fiber -> laurent


def generic_fiber(R: ReesData) -> GenericFiber:
    """Invert ``t_inv``: adjoin ``t`` (weight 1) and ``sigma`` with ``d sigma = t*t_inv - 1``."""
    P = R.presentation
    G = extend_presentation(P, new_base_vars=[(T, 1)], new_gens=[Generator(SIGMA, 1, 0)],
                            differential={SIGMA: "t*t_inv - 1"}, name="R[t]")
    L = laurent_presentation(R.A)
    inc = dg_morphism(L, G)
    tb = L.base.var(T)
    if R.kind == "koszul":
        base_assign = {vi: tb * embed(fi, L.base) for vi, fi in zip(R.v_names, R.centre)}
        gen_assign = {e: L.alg.scalar(embed(fi, L.base)) * L.gen(SIGMA)
                      for e, fi in zip(R.eps_names, R.centre)}
    else:
        base_assign = {}
        gen_assign = {g.name: 0 for g in P.gens}
    ret = dg_morphism(G, L, base_assign, gen_assign)
    return GenericFiber(G, L, inc, ret)


# -- classical oracle and π₀ checks ---------------------------------------------------

def classical_rees(A: WeightedRing, f) -> GroebnerBasis:
    """Kernel of ``A[t_inv, v] -> A[t, t_inv]``, ``v_i -> t f_i``, by elimination."""
    n = len(f)
    v = [f"v{i + 1}" for i in range(n)]
    _check_fresh(A, (T_INV, T) + tuple(v))
    big = A.extend([(T_INV, -1)] + [(vi, 1) for vi in v] + [(T, 1)])
    t = big.var(T)
    gens = [big.var(vi) - t * embed(fi, big) for vi, fi in zip(v, f)] + [t * big.var(T_INV) - 1]
    keep = list(A.names) + [T_INV] + v
    return eliminate(gens, keep, big)


def pi0_ideal(R: ReesData) -> GroebnerBasis:
    """Ideal of ``H_0(R)`` in the base ring (images of degree-1 generators)."""
    P = R.presentation
    gens = []
    for g in P.gens:
        if g.degree == 1:
            dg = P.d_gen(g.name)
            if dg:
                gens.append(dg.base_part())
    if any(g.degree == 0 for g in P.gens):
        raise ReesError("π₀ ideal needs a presentation without degree-0 generators")
    return buchberger(gens, P.base)


def compare_classical(R: ReesData) -> dict:
    """Does ``H_0(R)`` map isomorphically onto the classical Rees algebra?"""
    if R.kind != "koszul":
        raise ReesError("classical comparison is defined for Koszul centres")
    naive = pi0_ideal(R)
    classical = classical_rees(R.A, R.centre)
    cl = buchberger([embed(g, naive.ring) for g in classical.generators], naive.ring)
    surjective = all(cl.contains(g) for g in naive.generators)
    missing = [g for g in cl.generators if not naive.contains(g)]
    return {"surjective": surjective, "isomorphic": surjective and not missing,
            "kernel_generators": [str(naive.reduce(g)) for g in missing]}


@dataclass
class Verdict:
    name: str
    status: str  # pass / fail / inconclusive / info
    witness: str | None = None
    bounds: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        d = {"name": self.name, "status": self.status, "bounds": self.bounds}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        return d


def _weight_zero_monomials(names_w, cutoff):
    """Exponent dicts ``t_inv^k v^alpha`` with ``|alpha| = k`` and ``k <= cutoff``."""
    vs = [n for n, w in names_w if w == 1]
    out = []
    for k in range(cutoff + 1):
        for combo in combinations_with_replacement(vs, k):
            e = {T_INV: k}
            for n in combo:
                e[n] = e.get(n, 0) + 1
            out.append(e)
    return out


def _weight_zero_block(ideal_gens, ring: WeightedRing, A_names, cutoff):
    """``(A ∩ I, all weight-0 monomials reduce into A)`` up to the t_inv cutoff."""
    a_part = eliminate(ideal_gens, A_names, ring)
    drop = [n for n in ring.names if n not in A_names]
    from .groebner import _reordered_ring

    big, _ = _reordered_ring(ring, drop)
    gb = buchberger([embed(g, big) for g in ideal_gens], big)
    ok = True
    witness = None
    for e in _weight_zero_monomials(zip(ring.names, ring.weights), cutoff):
        m = big.monomial(tuple(e.get(n, 0) for n in big.names))
        nf = gb.reduce(m)
        if nf.variables() - set(A_names):
            ok = False
            witness = format_exp(e)
            break
    return a_part, ok, witness


def format_exp(e: dict) -> str:
    return "*".join(n if k == 1 else f"{n}^{k}" for n, k in e.items() if k) or "1"


def weight_zero_check(R: ReesData, cutoff: int = 4) -> Verdict:
    """Weight-0 part of ``H_0(R)`` is ``A`` and that of the fiber at zero is ``π₀ B``.

    Stable means both statements hold at ``cutoff`` and ``cutoff + 1``.
    """
    bounds = {"cutoffs": [cutoff, cutoff + 1]}
    if R.kind != "koszul":
        return Verdict("weight_zero", "inconclusive", "weight-0 block check implemented for Koszul centres only",
                       bounds)
    I = list(pi0_ideal(R).generators)
    ring = R.presentation.base
    A_names = list(R.A.names)
    fiber_gens = I + [ring.var(T_INV)]
    expected_fiber = buchberger(list(R.centre), R.A) if R.centre else buchberger([], R.A)
    results = []
    for K in (cutoff, cutoff + 1):
        a_part, surj, w1 = _weight_zero_block(I, ring, A_names, K) if A_names else (None, True, None)
        fa_part, fsurj, w2 = _weight_zero_block(fiber_gens, ring, A_names, K) if A_names else (None, True, None)
        r_ok = (a_part is None or a_part.is_zero_ideal()) and surj
        f_ok = (fa_part is None or fa_part == expected_fiber) and fsurj
        results.append((r_ok, f_ok, w1 or w2,
                        [] if a_part is None else a_part.serialized(),
                        [] if fa_part is None else fa_part.serialized()))
    detail = {"R_weight0_relations": results[-1][3], "fiber_weight0_relations": results[-1][4]}
    if results[0][:2] != results[1][:2]:
        return Verdict("weight_zero", "inconclusive", "unstable between cutoffs", bounds, detail)
    if results[0][0] and results[0][1]:
        return Verdict("weight_zero", "pass", None, bounds, detail)
    return Verdict("weight_zero", "fail", results[0][2] or "weight-0 relations differ", bounds, detail)


# -- weight-one generation ------------------------------------------------------------

def _factorizable(exps, weights, coeff_mask):
    """Can the monomial be split into a coefficient part and weight-one blocks?"""
    items = []
    coeffs = []
    for k, w, c in zip(exps, weights, coeff_mask):
        if not k:
            continue
        if c:
            coeffs.extend([w] * k)
        else:
            items.extend([w] * k)
    items.sort(reverse=True)
    coeff_counts = {}
    for w in coeffs:
        coeff_counts[w] = coeff_counts.get(w, 0) + 1
    return _partition(tuple(items), tuple(sorted(coeff_counts.items())))


def _partition(items, coeffs, memo=None):
    if memo is None:
        memo = {}
    if not items:
        return True
    key = (items, coeffs)
    if key in memo:
        return memo[key]
    first, rest = items[0], items[1:]
    result = False
    n = len(rest)
    # choose a sub-multiset of the remaining non-coefficient items (by index mask)
    for mask in range(1 << n):
        chosen = [rest[i] for i in range(n) if mask >> i & 1]
        total = first + sum(chosen)
        need = total - 1
        remaining = tuple(rest[i] for i in range(n) if not mask >> i & 1)
        for new_coeffs in _spend(coeffs, need):
            if _partition(remaining, new_coeffs, memo):
                result = True
                break
        if result:
            break
    memo[key] = result
    return result


def _spend(coeffs, need):
    """Ways of removing coefficient factors whose weights sum to ``-need``."""
    if need == 0:
        yield coeffs
        return
    for i, (w, c) in enumerate(coeffs):
        if c and w < 0 and -w <= need:
            nc = list(coeffs)
            nc[i] = (w, c - 1)
            yield from _spend(tuple(nc), need + w)


def _span_contains(rows, target):
    """Is ``target`` (dict monomial->coeff) in the span of ``rows``?  Gaussian elimination."""
    pivots = {}
    for r in rows:
        r = dict(r)
        for p, pr in pivots.items():
            if p in r:
                c = r[p]
                for k, v in pr.items():
                    r[k] = r.get(k, 0) - c * v
                    if not r[k]:
                        del r[k]
        if r:
            p = max(r)
            c = r[p]
            r = {k: v / c for k, v in r.items()}
            for q, qr in pivots.items():
                if p in qr:
                    cq = qr[p]
                    for k, v in r.items():
                        qr[k] = qr.get(k, 0) - cq * v
                        if not qr[k]:
                            del qr[k]
            pivots[p] = r
    t = dict(target)
    for p, pr in pivots.items():
        if p in t:
            c = t[p]
            for k, v in pr.items():
                t[k] = t.get(k, 0) - c * v
                if not t[k]:
                    del t[k]
    return not t


def weight_one_generation_check(target, w_max: int = 4, bound: int = 8, coefficient_vars=None) -> Verdict:
    """π₀-level check that weights ``2..w_max`` are spanned by products of weight-one elements.

    ``target`` is a :class:`ReesData` or a Gröbner basis (the ideal of a
    discrete graded algebra); coefficient variables default to ``A`` plus
    ``t_inv``.
    """
    if isinstance(target, ReesData):
        if target.kind != "koszul":
            gb = None
            ring = target.presentation.base
        else:
            gb = pi0_ideal(target)
            ring = gb.ring
        coeff = set(coefficient_vars or target.coefficient_vars)
    else:
        gb = target
        ring = gb.ring
        coeff = set(coefficient_vars if coefficient_vars is not None
                    else [n for n, w in zip(ring.names, ring.weights) if w <= 0])
    bounds = {"w_max": w_max, "bound": bound}
    mask = [n in coeff for n in ring.names]
    if any(w > 0 for n, w in zip(ring.names, ring.weights) if n in coeff):
        raise ReesError("coefficient variables must have weight <= 0")
    gens_ok = all(c or w == 1 for c, w in zip(mask, ring.weights))
    if isinstance(target, ReesData) and target.kind == "sym":
        # generators: base t_inv and A (coefficients) plus the eta (weight 1) and
        # module generators (weight 0); the free algebra is generated by them.
        ok = all(g.weight in (0, 1) for g in target.presentation.gens)
        return Verdict("weight_one_generation", "pass" if ok else "fail", None, bounds,
                       {"method": "generators of the free algebra have weight 0 or 1"})
    if gens_ok:
        return Verdict("weight_one_generation", "pass", None, bounds,
                       {"method": "every non-coefficient variable has weight 1"})
    from .homology import _monomials_upto

    for w in range(2, w_max + 1):
        mons = [e for e in _monomials_upto(ring, bound) if ring.exp_weight(e) == w]
        good, bad = [], []
        for e in mons:
            (good if _factorizable(e, ring.weights, mask) else bad).append(e)
        nf = {}
        for e in mons:
            p = ring.monomial(e)
            nf[e] = gb.reduce(p).terms if gb is not None else p.terms
        rows = [nf[e] for e in good]
        for e in bad:
            if not _span_contains(rows, nf[e]):
                return Verdict("weight_one_generation", "fail",
                               str(ring.monomial(e)), bounds, {"weight": w})
    return Verdict("weight_one_generation", "pass", None, bounds, {"method": "monomial scan"})
