"""Gröbner bases for ideals and submodules of free modules.

Module elements are handled internally as sparse vectors
``{(position, exponent): coefficient}`` ordered position-over-term, position 0
highest.  An ideal is the rank-one case.  All bases returned are reduced,
monic and sorted by decreasing leading term, so output is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import add, sub
from typing import Iterable, Sequence

from .poly import MonomialOrder, Polynomial, RingError, WeightedRing, embed, make_ring


# -- sparse vector helpers -----------------------------------------------------

def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _pot_key(ring: WeightedRing):
    mk = ring.key

    def key(t):
        return (-t[0], mk(t[1]))

    return key


def _lead(vec, key):
    t = max(vec, key=key)
    return t, vec[t]


def _axpy(acc: dict, coeff, shift, vec):
    """acc += coeff * x^shift * vec, in place."""
    for (p, e), c in vec.items():
        k = (p, tuple(map(add, e, shift)))
        s = acc.get(k, 0) + coeff * c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


class _Basis:
    """Working list of monic vectors with cached leading terms."""

    def __init__(self, key):
        self.key = key
        self.vecs: list[dict] = []
        self.leads: list[tuple] = []

    def append(self, vec):
        t, c = _lead(vec, self.key)
        if c != 1:
            inv = 1 / c
            vec = {k: v * inv for k, v in vec.items()}
        self.vecs.append(vec)
        self.leads.append(t)

    def find_reducer(self, t, skip=None):
        p, e = t
        for i, (lp, le) in enumerate(self.leads):
            if i != skip and lp == p and _divides(le, e):
                return i
        return None


def _reduce(vec: dict, basis: _Basis, full=True, skip=None) -> dict:
    f = dict(vec)
    rem: dict = {}
    key = basis.key
    while f:
        t = max(f, key=key)
        c = f[t]
        i = basis.find_reducer(t, skip)
        if i is None:
            if not full:
                rem.update(f)
                return rem
            rem[t] = c
            del f[t]
            continue
        shift = tuple(map(sub, t[1], basis.leads[i][1]))
        _axpy(f, -c, shift, basis.vecs[i])
    return rem


def _spoly(f, tf, g, tg):
    m = _lcm(tf[1], tg[1])
    out: dict = {}
    _axpy(out, Fraction(1), tuple(map(sub, m, tf[1])), f)
    _axpy(out, Fraction(-1), tuple(map(sub, m, tg[1])), g)
    return out


def _groebner(vectors: Iterable[dict], ring: WeightedRing, ideal_case: bool) -> list[dict]:
    """Reduced Gröbner basis of the submodule generated by ``vectors``."""
    key = _pot_key(ring)
    basis = _Basis(key)
    for v in vectors:
        v = _reduce(v, basis) if basis.vecs else dict(v)
        if v:
            basis.append(v)

    pending: dict[tuple[int, int], int] = {}

    def add_pairs(j):
        pj, ej = basis.leads[j]
        for i in range(j):
            pi, ei = basis.leads[i]
            if pi != pj:
                continue
            if ideal_case and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
                continue
            pending[(i, j)] = sum(_lcm(ei, ej))

    for j in range(len(basis.vecs)):
        add_pairs(j)

    while pending:
        # normal strategy: smallest lcm degree, then pair index
        (i, j) = min(pending, key=lambda ij: (pending[ij], ij))
        del pending[(i, j)]
        ti, tj = basis.leads[i], basis.leads[j]
        m = _lcm(ti[1], tj[1])
        if _chain_skip(i, j, m, ti[0], basis, pending):
            continue
        s = _spoly(basis.vecs[i], ti, basis.vecs[j], tj)
        r = _reduce(s, basis)
        if r:
            basis.append(r)
            add_pairs(len(basis.vecs) - 1)

    return _interreduce(basis.vecs, key)


def _chain_skip(i, j, m, pos, basis, pending):
    for k, (pk, ek) in enumerate(basis.leads):
        if k in (i, j) or pk != pos or not _divides(ek, m):
            continue
        a = (min(i, k), max(i, k))
        b = (min(j, k), max(j, k))
        if a not in pending and b not in pending:
            return True
    return False


def _interreduce(vecs: list[dict], key) -> list[dict]:
    leads = [_lead(v, key)[0] for v in vecs]
    keep = []
    for i, t in enumerate(leads):
        dominated = False
        for j, u in enumerate(leads):
            if j == i or u[0] != t[0] or not _divides(u[1], t[1]):
                continue
            if u != t or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(vecs[i])
    work = _Basis(key)
    for v in keep:
        work.append(v)
    out = []
    for i, v in enumerate(work.vecs):
        r = _reduce(v, work, skip=i)
        t, c = _lead(r, key)
        out.append({k: x / c for k, x in r.items()})
    out.sort(key=lambda v: key(_lead(v, key)[0]), reverse=True)
    return out


# -- conversions -------------------------------------------------------------

def _poly_to_vec(p: Polynomial, pos=0) -> dict:
    return {(pos, e): c for e, c in p.terms.items()}


def _vec_to_poly(vec: dict, ring: WeightedRing) -> Polynomial:
    return Polynomial(ring, {e: c for (_, e), c in vec.items()})


def elem_to_vec(elem: Sequence[Polynomial], offset=0) -> dict:
    out = {}
    for i, p in enumerate(elem):
        for e, c in p.terms.items():
            out[(i + offset, e)] = c
    return out


def vec_to_elem(vec: dict, ring: WeightedRing, rank: int, offset=0) -> tuple[Polynomial, ...]:
    parts: list[dict] = [{} for _ in range(rank)]
    for (p, e), c in vec.items():
        parts[p - offset][e] = c
    return tuple(Polynomial(ring, t) for t in parts)


# -- public API ----------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis of an ideal in ``ring``."""

    ring: WeightedRing
    generators: tuple[Polynomial, ...]
    reduced: bool = True

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def leading_exponents(self):
        return [g.leading_term()[0] for g in self.generators]

    def serialized(self) -> list[str]:
        return [str(g) for g in self.generators]

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.ring, self.generators))


def _common_ring(polys):
    rings = {p.ring for p in polys}
    if len(rings) > 1:
        raise RingError("generators live in different rings")
    return rings.pop() if rings else None


def buchberger(gens: Sequence[Polynomial], ring: WeightedRing | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    r = _common_ring(gens)
    if ring is None:
        if r is None:
            raise RingError("empty generator list needs an explicit ring")
        ring = r
    elif r is not None and r != ring:
        raise RingError("generators are not in the given ring")
    vecs = [_poly_to_vec(g) for g in gens if not g.is_zero()]
    out = _groebner(vecs, ring, ideal_case=True)
    return GroebnerBasis(ring, tuple(_vec_to_poly(v, ring) for v in out))


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if p.ring != gb.ring:
        raise RingError("polynomial is not in the basis ring")
    basis = _Basis(_pot_key(gb.ring))
    for g in gb.generators:
        basis.append(_poly_to_vec(g))
    return _vec_to_poly(_reduce(_poly_to_vec(p), basis), gb.ring)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    key = _pot_key(f.ring)
    vf, vg = _poly_to_vec(f), _poly_to_vec(g)
    tf, cf = _lead(vf, key)
    tg, cg = _lead(vg, key)
    vf = {k: v / cf for k, v in vf.items()}
    vg = {k: v / cg for k, v in vg.items()}
    return _vec_to_poly(_spoly(vf, tf, vg, tg), f.ring)


def satisfies_buchberger_criterion(gb: GroebnerBasis) -> bool:
    gs = gb.generators
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if not normal_form(s_polynomial(gs[i], gs[j]), gb).is_zero():
                return False
    return True


@dataclass(frozen=True)
class Submodule:
    """Reduced Gröbner basis of a submodule of the free module ``ring^rank``."""

    ring: WeightedRing
    rank: int
    vectors: tuple[dict, ...]

    @classmethod
    def generated_by(cls, ring, rank, elems: Iterable[Sequence[Polynomial]]):
        vecs = [elem_to_vec(e) for e in elems]
        vecs = [v for v in vecs if v]
        return cls(ring, rank, tuple(_groebner(vecs, ring, ideal_case=(rank == 1))))

    def _basis(self):
        b = _Basis(_pot_key(self.ring))
        for v in self.vectors:
            b.append(v)
        return b

    def reduce(self, elem: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
        return vec_to_elem(_reduce(elem_to_vec(elem), self._basis()), self.ring, self.rank)

    def contains(self, elem: Sequence[Polynomial]) -> bool:
        return not _reduce(elem_to_vec(elem), self._basis())

    def contains_all(self, elems) -> bool:
        b = self._basis()
        return all(not _reduce(elem_to_vec(e), b) for e in elems)

    def is_everything(self) -> bool:
        one = self.ring.one()
        zero = self.ring.zero()
        units = [tuple(one if k == i else zero for k in range(self.rank)) for i in range(self.rank)]
        return self.contains_all(units)

    def elements(self) -> list[tuple[Polynomial, ...]]:
        return [vec_to_elem(v, self.ring, self.rank) for v in self.vectors]

    def leading_terms(self):
        key = _pot_key(self.ring)
        return [_lead(v, key)[0] for v in self.vectors]


def syzygies(elems: Sequence[Sequence[Polynomial]], ring: WeightedRing | None = None,
             rank: int | None = None) -> list[tuple[Polynomial, ...]]:
    """Generators of ``{c : sum_i c_i * elems_i = 0}``.

    Computed by a position-over-term Gröbner basis of the augmented vectors
    ``(elem_i, e_i)``; basis elements vanishing on the first block are the
    syzygies.
    """
    elems = [tuple(e) for e in elems]
    if ring is None:
        ring = _common_ring([p for e in elems for p in e])
        if ring is None:
            raise RingError("cannot infer ring")
    if rank is None:
        ranks = {len(e) for e in elems}
        if len(ranks) > 1:
            raise RingError("elements have different ranks")
        rank = ranks.pop() if ranks else 0
    for e in elems:
        if len(e) != rank:
            raise RingError("element rank mismatch")
        for p in e:
            if p.ring != ring:
                raise RingError("ring mismatch in syzygy input")
    m = len(elems)
    if m == 0:
        return []
    one = Fraction(1)
    zero_exp = ring.zero_exp()
    vecs = []
    for j, e in enumerate(elems):
        v = elem_to_vec(e)
        v[(rank + j, zero_exp)] = one
        vecs.append(v)
    gb = _groebner(vecs, ring, ideal_case=False)
    out = []
    for v in gb:
        if all(p >= rank for (p, _) in v):
            out.append(vec_to_elem(v, ring, m, offset=rank))
    return out


def _reordered_ring(ring: WeightedRing, first: Sequence[str], kind="degrevlex"):
    rest = [n for n in ring.names if n not in first]
    names = list(first) + rest
    w = dict(zip(ring.names, ring.weights))
    order = MonomialOrder(kind, (len(first), len(rest))) if first and rest else MonomialOrder(kind)
    return make_ring([(n, w[n]) for n in names], order), rest


def eliminate(gens: Sequence[Polynomial], keep_vars: Sequence[str],
              ring: WeightedRing | None = None) -> GroebnerBasis:
    """Gröbner basis of the ideal intersected with the subring on ``keep_vars``."""
    if ring is None:
        ring = _common_ring(gens)
    for n in keep_vars:
        if n not in ring.index:
            raise RingError(f"unknown variable {n!r}")
    keep = [n for n in ring.names if n in set(keep_vars)]
    drop = [n for n in ring.names if n not in set(keep_vars)]
    sub = make_ring([(n, w) for n, w in zip(ring.names, ring.weights) if n in keep],
                    MonomialOrder(ring.order.kind))
    if not drop:
        return buchberger([embed(g, sub) for g in gens], sub)
    big, _ = _reordered_ring(ring, drop)
    gb = buchberger([embed(g, big) for g in gens], big)
    kept = [g for g in gb.generators if not (g.variables() & set(drop))]
    return buchberger([embed(g, sub) for g in kept], sub)


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial:
    """``p / q``; raises if ``q`` does not divide ``p``."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    key = p.ring.key
    eq, cq = q.leading_term()
    f = dict(p.terms)
    quot: dict = {}
    while f:
        e = max(f, key=key)
        c = f[e]
        if not _divides(eq, e):
            raise ArithmeticError(f"{q} does not divide {p}")
        s = tuple(map(sub, e, eq))
        k = c / cq
        quot[s] = k
        for qe, qc in q.terms.items():
            t = tuple(map(add, qe, s))
            v = f.get(t, 0) - k * qc
            if v:
                f[t] = v
            else:
                f.pop(t, None)
    return Polynomial(p.ring, quot)


_AUX = "_aux_t"


def _with_aux(ring, name=_AUX):
    if name in ring.index:
        raise RingError(f"auxiliary variable {name!r} clashes with the ring")
    return make_ring([(name, 0)] + list(zip(ring.names, ring.weights)),
                     MonomialOrder("degrevlex", (1, ring.nvars)) if ring.nvars else "degrevlex")


def intersect(I: Sequence[Polynomial], J: Sequence[Polynomial], ring: WeightedRing) -> GroebnerBasis:
    """``I ∩ J`` via ``t*I + (1-t)*J`` and elimination of ``t``."""
    big = _with_aux(ring)
    t = big.var(_AUX)
    gens = [t * embed(f, big) for f in I] + [(1 - t) * embed(g, big) for g in J]
    return eliminate(gens, ring.names, big)


def ideal_quotient(I: Sequence[Polynomial], h: Polynomial, ring: WeightedRing | None = None) -> GroebnerBasis:
    """``I : h``."""
    ring = ring or h.ring
    if h.ring != ring or any(f.ring != ring for f in I):
        raise RingError("ring mismatch in ideal quotient")
    if h.is_zero():
        return buchberger([ring.one()], ring)
    inter = intersect(list(I), [h], ring)
    return buchberger([divide_exact(g, h) for g in inter.generators], ring)


def saturate(ideal_gens: Sequence[Polynomial], h: Polynomial) -> GroebnerBasis:
    """``I : h^∞`` by iterating ideal quotients until two successive agree."""
    ring = h.ring
    if any(f.ring != ring for f in ideal_gens):
        raise RingError("ring mismatch in saturation")
    current = buchberger(list(ideal_gens), ring)
    while True:
        nxt = ideal_quotient(list(current.generators), h, ring)
        if nxt == current:
            return current
        current = nxt


def saturate_rabinowitsch(ideal_gens: Sequence[Polynomial], h: Polynomial) -> GroebnerBasis:
    """``I : h^∞`` as ``(I + (1 - z*h)) ∩ R``; independent of :func:`saturate`."""
    ring = h.ring
    big = _with_aux(ring, "_aux_z")
    z = big.var("_aux_z")
    gens = [embed(f, big) for f in ideal_gens] + [1 - z * embed(h, big)]
    return eliminate(gens, ring.names, big)


def in_radical(g: Polynomial, ideal_gens: Sequence[Polynomial]) -> bool:
    """Radical membership: ``1 ∈ I + (1 - z*g)``."""
    ring = g.ring
    big = _with_aux(ring, "_aux_z")
    z = big.var("_aux_z")
    gb = buchberger([embed(f, big) for f in ideal_gens] + [1 - z * embed(g, big)], big)
    return gb.is_unit_ideal()


def same_ideal(I: Sequence[Polynomial], J: Sequence[Polynomial], ring: WeightedRing) -> bool:
    return buchberger(list(I), ring) == buchberger(list(J), ring)
