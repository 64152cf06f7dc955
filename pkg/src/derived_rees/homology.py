"""Homology of flattened complexes as finitely presented modules.

Everything here is exact over the polynomial base.  A verdict of ``zero`` on
a presentation that needed an aux window (see :mod:`derived_rees.dg`) means
zero on that window, a direct summand of the full homology; the window is
always reported.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ChainMap, LinearComplex, mapping_cone, vector_weight
from .dg import (DGError, DGMorphism, DGPresentation, EnumerationLimitError, chain_map,
                 flatten_range)
from .groebner import Submodule, buchberger, intersect, syzygies
from .poly import INHOMOGENEOUS, WeightedRing

ZERO = "zero"
NONZERO = "nonzero"
INCONCLUSIVE = "inconclusive"


def _unit(ring, n, i):
    return tuple(ring.one() if k == i else ring.zero() for k in range(n))


@dataclass
class FPModule:
    """Cokernel of ``P^m -> P^r``: ``r`` generators and relation vectors."""

    ring: WeightedRing
    generator_count: int
    relations: list
    generator_weights: list | None = None
    representatives: list | None = None  # ambient vectors of the generators, if any

    def _sub(self):
        return Submodule.generated_by(self.ring, self.generator_count, self.relations)

    def is_zero(self) -> bool:
        if self.generator_count == 0:
            return True
        return self._sub().is_everything()

    def minimize(self) -> "FPModule":
        """Drop generators expressible through others via relations with a constant entry."""
        rels = [list(r) for r in self.relations if any(r)]
        keep = list(range(self.generator_count))
        weights = list(self.generator_weights) if self.generator_weights else None
        reps = list(self.representatives) if self.representatives else None
        while True:
            pivot = None
            for ri, r in enumerate(rels):
                for j, p in enumerate(r):
                    if p and p.is_constant():
                        pivot = (ri, j)
                        break
                if pivot:
                    break
            if pivot is None:
                break
            ri, j = pivot
            r = rels.pop(ri)
            c = r[j].constant_term()
            new = []
            for s in rels:
                if s[j]:
                    f = s[j] * (1 / c)
                    s = [a - f * b for a, b in zip(s, r)]
                del s[j]
                if any(s):
                    new.append(s)
            rels = new
            del keep[j]
            if weights is not None:
                del weights[j]
            if reps is not None:
                del reps[j]
        out = FPModule(self.ring, len(keep), [tuple(r) for r in rels], weights, reps)
        if out.generator_count and out.relations:
            gb = out._sub()
            out.relations = gb.elements()
        return out

    def annihilator(self):
        """Gröbner basis of ``Ann(M) = ∩_j (R : e_j)``."""
        ring = self.ring
        r = self.generator_count
        if r == 0:
            return buchberger([ring.one()], ring)
        ann = None
        for j in range(r):
            elems = [_unit(ring, r, j)] + [tuple(v) for v in self.relations]
            syz = syzygies(elems, ring, r)
            ideal = [s[0] for s in syz if s[0]]
            gb = buchberger(ideal, ring) if ideal else buchberger([], ring)
            ann = gb if ann is None else intersect(list(ann.generators), list(gb.generators), ring)
        return ann

    def to_dict(self) -> dict:
        return {
            "generators": self.generator_count,
            "relations": [[str(p) for p in r] for r in self.relations],
            "generator_weights": self.generator_weights,
        }


# -- cycles and boundaries -----------------------------------------------------

def cycles(C: LinearComplex, n: int) -> list:
    """Generators of ``Z_n = {a : d_n a ∈ R_{n-1}}``."""
    ring = C.ring
    r = C.rank(n)
    if r == 0:
        return []
    if C.rank(n - 1) == 0:
        return [_unit(ring, r, i) for i in range(r)]
    cols = C.d(n)
    rels = C.rels(n - 1)
    if not rels and all(not any(col) for col in cols):
        return [_unit(ring, r, i) for i in range(r)]
    syz = syzygies([tuple(c) for c in cols] + [tuple(x) for x in rels], ring, C.rank(n - 1))
    out = []
    for s in syz:
        z = tuple(s[:r])
        if any(z):
            out.append(z)
    return out


def boundaries(C: LinearComplex, n: int) -> list:
    """Generators of ``B_n + R_n``."""
    out = [tuple(c) for c in C.d(n + 1) if any(c)] if C.rank(n + 1) else []
    return out + [tuple(x) for x in C.rels(n)]


def homology_is_zero(C: LinearComplex, n: int) -> bool:
    Z = cycles(C, n)
    if not Z:
        return True
    B = boundaries(C, n)
    if not B:
        return False
    return Submodule.generated_by(C.ring, C.rank(n), B).contains_all(Z)


def nonboundary_cycles(C: LinearComplex, n: int) -> list:
    Z = cycles(C, n)
    if not Z:
        return []
    sub = Submodule.generated_by(C.ring, C.rank(n), boundaries(C, n))
    return [z for z in Z if not sub.contains(z)]


def homology(C: LinearComplex, n: int) -> FPModule:
    """``H_n`` presented on cycle generators, minimized."""
    ring = C.ring
    Z = cycles(C, n)
    if not Z:
        return FPModule(ring, 0, [], [], [])
    B = boundaries(C, n)
    k = len(Z)
    if B:
        syz = syzygies(list(Z) + B, ring, C.rank(n))
        rels = [tuple(s[:k]) for s in syz if any(s[:k])]
    else:
        rels = []
    weights = [vector_weight(z, C.weights[n]) for z in Z]
    weights = [None if w == INHOMOGENEOUS else w for w in weights]
    return FPModule(ring, k, rels, weights, list(Z)).minimize()


def homology_at(B: DGPresentation, n: int, bound: int | None = 8) -> FPModule:
    return homology(flatten_range(B, n - 1, n + 1, bound), n)


# -- connectivity ----------------------------------------------------------------

@dataclass
class ConnectivityReport:
    verdicts: dict
    bounds: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def connective(self):
        vals = set(self.verdicts.values())
        if NONZERO in vals:
            return False
        if INCONCLUSIVE in vals:
            return None
        return True

    def to_dict(self):
        return {"verdicts": {str(k): v for k, v in sorted(self.verdicts.items())},
                "witnesses": {str(k): v for k, v in sorted(self.witnesses.items())},
                "bounds": self.bounds}


def degree_verdict(B: DGPresentation, n: int, bound: int | None = 8):
    """``(verdict, witness, window)`` for ``H_n(B)``."""
    try:
        C = flatten_range(B, n - 1, n + 1, bound)
    except EnumerationLimitError as exc:
        return INCONCLUSIVE, str(exc), None
    bad = nonboundary_cycles(C, n)
    if bad:
        labels = C.labels[n]
        z = bad[0]
        text = " + ".join(lab if p == 1 else f"({p})*{lab}" for p, lab in zip(z, labels) if p)
        return NONZERO, text, C.window
    return ZERO, None, C.window


def is_connective(B: DGPresentation, n_min: int = -2, bound: int | None = 8) -> ConnectivityReport:
    if n_min >= 0:
        raise ValueError("n_min must be negative")
    verdicts, witnesses = {}, {}
    window = None
    for n in range(n_min, 0):
        v, w, win = degree_verdict(B, n, bound)
        verdicts[n] = v
        if w:
            witnesses[n] = w
        if win is not None:
            window = win
    return ConnectivityReport(verdicts, {"degrees": [n_min, -1], "bound": bound, "aux_window": window},
                              witnesses)


# -- graded pieces -----------------------------------------------------------------

UNBOUNDED = "unbounded within window"


def _monomials_upto(ring: WeightedRing, max_deg: int):
    n = ring.nvars
    cur = [0] * n

    def rec(i, left):
        if i == n:
            yield tuple(cur)
            return
        for k in range(left + 1):
            cur[i] = k
            yield from rec(i + 1, left - k)
        cur[i] = 0

    yield from rec(0, max_deg)


def piece_dimension(m: FPModule, w: int, degree_bound: int):
    """Dimension of the weight-``w`` part of ``m`` spanned by monomials of degree ≤ bound.

    Counts standard monomials of the relation module; reports
    ``UNBOUNDED`` when standard monomials of weight ``w`` persist one degree
    beyond the bound.
    """
    if m.generator_count == 0:
        return 0
    gw = m.generator_weights or [0] * m.generator_count
    if any(x is None for x in gw):
        raise ValueError("generator weights unknown")
    ring = m.ring
    leads = Submodule.generated_by(ring, m.generator_count, m.relations).leading_terms() if m.relations else []
    by_pos: dict = {}
    for p, e in leads:
        by_pos.setdefault(p, []).append(e)
    count = 0
    beyond = False
    for e in _monomials_upto(ring, degree_bound + 1):
        we = ring.exp_weight(e)
        deg = sum(e)
        for j in range(m.generator_count):
            if we + gw[j] != w:
                continue
            if any(all(a <= b for a, b in zip(le, e)) for le in by_pos.get(j, [])):
                continue
            if deg <= degree_bound:
                count += 1
            else:
                beyond = True
    if beyond:
        return UNBOUNDED
    return count


# -- quasi-isomorphisms -------------------------------------------------------------

@dataclass
class QuasiIsoResult:
    holds: bool | None
    witness_degree: int | None = None
    failure: str | None = None
    cone_degree: int | None = None
    bounds: dict = field(default_factory=dict)
    reason: str | None = None

    @property
    def status(self):
        return {True: "pass", False: "fail", None: INCONCLUSIVE}[self.holds]

    def to_dict(self):
        d = {"holds": self.holds, "bounds": self.bounds}
        if self.holds is False:
            d.update(witness_degree=self.witness_degree, failure=self.failure, cone_degree=self.cone_degree)
        if self.reason:
            d["reason"] = self.reason
        return d


def _classify(phi: ChainMap, cone: LinearComplex, k: int):
    """Which half of the long exact sequence a nonzero ``H_k(cone)`` breaks."""
    S = phi.source
    bad = nonboundary_cycles(cone, k)
    if not bad:
        return None
    rs = S.rank(k - 1)
    s_bound = Submodule.generated_by(S.ring, rs, boundaries(S, k - 1)) if rs else None
    for z in bad:
        s = z[:rs]
        if any(s) and (s_bound is None or not s_bound.contains(s)):
            return k - 1, "not injective"
    return k, "not surjective"


def quasi_iso_of_chain_map(phi: ChainMap, a: int, b: int) -> QuasiIsoResult:
    """Test ``H_n(phi)`` iso for ``a <= n <= b``; ``phi`` must cover degrees ``a-2..b+2``."""
    cone = mapping_cone(phi)
    bounds = {"range": [a, b], "aux_window": cone.window}
    for k in range(a, b + 2):
        res = _classify(phi, cone, k)
        if res is None:
            continue
        deg, kind = res
        if a <= deg <= b:
            return QuasiIsoResult(False, deg, kind, k, bounds)
    return QuasiIsoResult(True, bounds=bounds)


def quasi_iso_in_range(phi: DGMorphism, n_range=(-2, 3), bound: int | None = 8,
                       retraction: DGMorphism | None = None) -> QuasiIsoResult:
    """Range-limited quasi-isomorphism test through mapping-cone acyclicity.

    Base maps must hit every target variable.  A map whose base map is an
    inclusion can be tested through a ``retraction`` (a left inverse): then
    ``phi`` is a quasi-isomorphism in range iff the retraction is.
    """
    a, b = n_range
    if retraction is not None:
        comp = retraction.compose(phi)
        if not comp.is_identity():
            raise DGError("retraction is not a left inverse of the map")
        res = quasi_iso_in_range(retraction, n_range, bound)
        res.bounds["via"] = "retraction"
        return res
    try:
        cm = chain_map(phi, a - 2, b + 2, bound)
        res = quasi_iso_of_chain_map(cm, a, b)
    except EnumerationLimitError as exc:
        return QuasiIsoResult(None, bounds={"range": [a, b], "bound": bound}, reason=str(exc))
    res.bounds["bound"] = bound
    return res

