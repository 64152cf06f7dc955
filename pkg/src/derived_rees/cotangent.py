"""Cotangent complexes of semifree presentations.

For ``B`` semifree over ``A`` the cotangent complex is the free ``B``-module
on symbols ``delta_z``, one per relative generator ``z`` (higher generators
and base variables of ``B`` not coming from ``A``), with
``d(delta_z) = D(d z)`` where ``D`` is the universal derivation.

Sign table for ``D`` on a canonical monomial ``z_1 ... z_k`` (generators in
declaration order, repeated even generators listed once per power)::

    D(z_1 ... z_k) = sum_j (-1)^{|z_j| (|z_{j+1}| + ... + |z_k|)} (z_1 .. ^z_j .. z_k) delta_{z_j}

i.e. ``delta`` is moved to the right end.  On the module,
``d(m delta_z) = d(m) delta_z + (-1)^{|m|} m d(delta_z)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainMap, LinearComplex
from .dg import (DGError, DGElement, DGPresentation, Generator, enumerate_monomials,
                 extend_presentation, is_finite_type, semifree)
from .homology import FPModule, homology, quasi_iso_of_chain_map
from .complexes import mapping_cone

DELTA = "delta_"


def _partial(p, name):
    ring = p.ring
    i = ring.index[name]
    out = {}
    for e, c in p.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return type(p)(ring, out)


@dataclass(eq=False)
class DGModule:
    """Semifree dg-module over a presentation, on named generators."""

    alg: DGPresentation
    gens: tuple
    differential: dict  # name -> {name: DGElement}

    @property
    def index(self):
        return {g.name: i for i, g in enumerate(self.gens)}

    def zero(self) -> dict:
        return {}

    def d(self, x: dict) -> dict:
        out: dict = {}
        for name, coeff in x.items():
            _add(out, name, self.alg.d(coeff))
            for e, c in coeff.terms.items():
                m = self.alg.alg.mono(e, c)
                sign = -1 if self.alg.alg.mono_degree(e) % 2 else 1
                for k, ck in self.differential.get(name, {}).items():
                    _add(out, k, (m * ck) * sign)
        return {k: v for k, v in out.items() if v}

    def d_gen(self, name) -> dict:
        return self.differential.get(name, {})

    def check_d_squared(self):
        for g in self.gens:
            r = self.d(self.d_gen(g.name))
            if r:
                raise DGError(f"linearized differential does not square to zero on {g.name}: {r}")

    def flatten_range(self, lo, hi, bound=8) -> LinearComplex:
        alg = self.alg.alg
        window = None if is_finite_type(alg) and not any(g.aux for g in self.gens) else bound
        keys, labels, weights = {}, {}, {}
        for k in range(lo, hi + 1):
            ks = []
            for g in self.gens:
                for e in enumerate_monomials(alg, k - g.degree, window, g.aux):
                    ks.append((e, g.name))
            keys[k] = ks
            labels[k] = [f"{alg.format_mono(e) or '1'}*{n}" for e, n in ks]
            gw = {g.name: g.weight for g in self.gens}
            weights[k] = [alg.mono_weight(e) + gw[n] for e, n in ks]
        diff = {}
        zero = self.alg.base.zero()
        for k in range(lo + 1, hi + 1):
            index = {key: i for i, key in enumerate(keys[k - 1])}
            cols = []
            for e, n in keys[k]:
                col = [zero] * len(keys[k - 1])
                img = self.d({n: alg.mono(e)})
                for n2, coeff in img.items():
                    for e2, c in coeff.terms.items():
                        col[index[(e2, n2)]] = c
                cols.append(tuple(col))
            diff[k] = cols
        return LinearComplex(self.alg.base, lo, hi, labels, weights, diff, {}, window=window, keys=keys)


def _add(acc: dict, name, el: DGElement):
    if not el:
        return
    if name in acc:
        acc[name] = acc[name] + el
    else:
        acc[name] = el


@dataclass(eq=False)
class CotangentPresentation(DGModule):
    relative: tuple = ()
    base_vars: tuple = ()

    def D(self, x: DGElement) -> dict:
        return derivation(self.alg, self.relative, x)

    def to_dict(self):
        return {
            "generators": [{"name": g.name, "degree": g.degree, "weight": g.weight} for g in self.gens],
            "differential": {n: {k: str(v) for k, v in sorted(t.items())}
                             for n, t in sorted(self.differential.items())},
        }

    def canonical(self):
        return {g.name: (g.degree, g.weight,
                         sorted((k, str(v)) for k, v in self.differential.get(g.name, {}).items()))
                for g in self.gens}


def derivation(B: DGPresentation, relative, x: DGElement) -> dict:
    """Universal derivation ``D x`` as ``{delta name: coefficient}``."""
    alg = B.alg
    rel = set(relative)
    base_rel = [n for n in B.base.names if n in rel]
    out: dict = {}
    for e, c in x.terms.items():
        m = alg.mono(e)
        for n in base_rel:
            dp = _partial(c, n)
            if dp:
                _add(out, DELTA + n, alg.scalar(dp) * m)
        tail = 0
        for i in range(len(e) - 1, -1, -1):
            k = e[i]
            if not k:
                continue
            g = alg.gens[i]
            if g.name in rel:
                rest = list(e)
                rest[i] -= 1
                sign = -1 if (g.degree * tail) % 2 else 1
                coeff = alg.mono(tuple(rest), c) * (k * sign)
                _add(out, DELTA + g.name, coeff)
            tail += k * g.degree
    return {k: v for k, v in out.items() if v}


def relative_generators(B: DGPresentation, A_vars=None) -> list[Generator]:
    """Relative generators over ``A``: base variables outside ``A_vars`` then higher generators."""
    A_vars = set(B.base.names if A_vars is None else A_vars)
    unknown = A_vars - set(B.base.names)
    if unknown:
        raise DGError(f"A-variables not in the base: {sorted(unknown)}")
    out = [Generator(n, 0, w) for n, w in zip(B.base.names, B.base.weights) if n not in A_vars]
    return out + list(B.gens)


def cotangent_complex(B: DGPresentation, A_vars=None) -> CotangentPresentation:
    rel = relative_generators(B, A_vars)
    names = tuple(g.name for g in rel)
    gens = tuple(Generator(DELTA + g.name, g.degree, g.weight, g.aux) for g in rel)
    diff = {}
    for g in B.gens:
        dz = B.d_gen(g.name)
        if dz:
            Dz = derivation(B, names, dz)
            if Dz:
                diff[DELTA + g.name] = Dz
    L = CotangentPresentation(B, gens, diff, names, tuple(n for n in B.base.names if n not in names))
    L.check_d_squared()
    return L


def cotangent_homology(L: CotangentPresentation, n: int, bound=8) -> FPModule:
    return homology(L.flatten_range(n - 1, n + 1, bound), n)


# -- transitivity ------------------------------------------------------------------

@dataclass(eq=False)
class TransitivityTriangle:
    first: DGModule      # L_{B/A} ⊗_B C
    middle: CotangentPresentation  # L_{C/A}
    third: DGModule      # L_{C/B}

    def chain_maps(self, lo, hi, bound=8):
        F = self.first.flatten_range(lo, hi, bound)
        M = self.middle.flatten_range(lo, hi, bound)
        T = self.third.flatten_range(lo, hi, bound)
        return F, M, T, _inclusion(F, M, lo, hi), _inclusion(M, T, lo, hi)

    def exact_in_range(self, a, b, bound=8):
        """Cone of the inclusion maps quasi-isomorphically onto the third term."""
        F, M, T, inc, _ = self.chain_maps(a - 3, b + 3, bound)
        cone = mapping_cone(inc)
        maps = {}
        for k in range(cone.lo, cone.hi + 1):
            index = {key: i for i, key in enumerate(T.keys.get(k, []))}
            zero, one = T.ring.zero(), T.ring.one()
            # basis of cone_k: F_{k-1} then M_k
            nF = F.rank(k - 1)
            cols = [tuple(zero for _ in index) for _ in range(nF)]
            for key in M.keys[k]:
                col = [zero] * len(index)
                if key in index:
                    col[index[key]] = one
                cols.append(tuple(col))
            maps[k] = cols
        T_sub = LinearComplex(T.ring, cone.lo, cone.hi, {k: T.labels[k] for k in range(cone.lo, cone.hi + 1)},
                              {k: T.weights[k] for k in range(cone.lo, cone.hi + 1)},
                              {k: T.diff[k] for k in range(cone.lo + 1, cone.hi + 1)}, {}, T.window, T.keys)
        return quasi_iso_of_chain_map(ChainMap(cone, T_sub, maps), a, b)


def _inclusion(S: LinearComplex, T: LinearComplex, lo, hi) -> ChainMap:
    """Basis-key inclusion/projection between flattened modules."""
    maps = {}
    zero, one = T.ring.zero(), T.ring.one()
    for k in range(lo, hi + 1):
        index = {key: i for i, key in enumerate(T.keys[k])}
        cols = []
        for key in S.keys[k]:
            col = [zero] * len(index)
            if key in index:
                col[index[key]] = one
            cols.append(tuple(col))
        maps[k] = cols
    return ChainMap(S, T, maps)


def transitivity_triangle(C: DGPresentation, B_names, A_vars=None) -> TransitivityTriangle:
    """Triangle for ``A -> B -> C`` where ``B`` is spanned by ``B_names`` inside ``C``.

    ``B_names`` lists the base variables and generators of ``C`` that belong
    to ``B``; it must contain ``A_vars`` and be closed under ``d``.
    """
    A_vars = list(C.base.names if A_vars is None else A_vars)
    B_names = set(B_names) | set(A_vars)
    L_CA = cotangent_complex(C, A_vars)
    rel_BA = [n for n in L_CA.relative if n in B_names]
    rel_CB = [n for n in L_CA.relative if n not in B_names]
    for n in rel_BA:
        if n in C.alg.index:
            dz = C.d_gen(n)
            for e in dz.terms:
                for i, k in enumerate(e):
                    if k and C.gens[i].name not in B_names:
                        raise DGError(f"d({n}) leaves B")
    gen_of = {g.name: g for g in L_CA.gens}
    first_gens = tuple(gen_of[DELTA + n] for n in rel_BA)
    first_diff = {DELTA + n: L_CA.differential[DELTA + n] for n in rel_BA
                  if DELTA + n in L_CA.differential}
    for n, t in first_diff.items():
        if any(k[len(DELTA):] not in rel_BA for k in t):
            raise DGError("B is not closed under the differential")
    third_gens = tuple(gen_of[DELTA + n] for n in rel_CB)
    third_diff = {}
    for n in rel_CB:
        t = L_CA.differential.get(DELTA + n, {})
        t = {k: v for k, v in t.items() if k[len(DELTA):] in rel_CB}
        if t:
            third_diff[DELTA + n] = t
    first = DGModule(C, first_gens, first_diff)
    third = DGModule(C, third_gens, third_diff)
    first.check_d_squared()
    third.check_d_squared()
    return TransitivityTriangle(first, L_CA, third)


# -- normal cone -------------------------------------------------------------------

NU = "nu_"


def normal_cone(B: DGPresentation, A_vars=None) -> DGPresentation:
    """Free algebra over ``B`` on ``L_{B/A}[-1]``: ``nu_z`` of degree ``|z|-1``, weight ``w(z)+1``.

    ``d nu_z = -sum (-1)^{|b|} b nu_y`` for ``d delta_z = sum b delta_y``.  A
    degree-0 ``nu_z`` with zero differential coming from an aux-0 generator
    becomes a base variable.
    """
    L = cotangent_complex(B, A_vars)
    # aux of nu_z is aux(z) + shift with one shift for all z, so d stays homogeneous
    shift = 0 if L.gens and all(g.aux > 0 for g in L.gens) else 1
    new_base, new_gens, diff = [], [], {}
    for g in L.gens:
        z = g.name[len(DELTA):]
        nu = NU + z
        if g.degree - 1 == 0 and g.aux == 0 and not L.differential.get(g.name):
            new_base.append((nu, g.weight + 1))
        else:
            new_gens.append(Generator(nu, g.degree - 1, g.weight + 1, g.aux + shift))
    out = extend_presentation(B, new_base_vars=new_base, new_gens=new_gens)
    alg = out.alg
    from .dg import transport

    for g in L.gens:
        z = g.name[len(DELTA):]
        nu = NU + z
        if nu not in alg.index:
            continue
        acc = alg.zero()
        for k, b in L.differential.get(g.name, {}).items():
            bt = transport(b, alg)
            target_nu = NU + k[len(DELTA):]
            nu_el = alg.gen(target_nu) if target_nu in alg.index else alg.scalar(alg.base.var(target_nu))
            for e, c in bt.terms.items():
                sign = -1 if alg.mono_degree(e) % 2 else 1
                acc = acc - alg.mono(e, c) * nu_el * sign
        if acc:
            diff[nu] = acc
    base_diff = {g.name: out.d_gen(g.name) for g in out.gens if out.d_gen(g.name)}
    base_diff.update(diff)
    return semifree(out.base, out.gens, base_diff, name=f"N({B.name})")
