"""Bounded slices of chain complexes of finitely presented modules over a polynomial ring.

Degree ``k`` holds a free module ``P^{r_k}`` modulo optional relations
``R_k``.  The differential ``d_k: C_k -> C_{k-1}`` is stored as a list of
columns, one per basis element of ``C_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .poly import WeightedRing


@dataclass
class LinearComplex:
    ring: WeightedRing
    lo: int
    hi: int
    labels: dict
    weights: dict
    diff: dict
    relations: dict = field(default_factory=dict)
    window: int | None = None
    keys: dict | None = None

    def rank(self, k: int) -> int:
        return len(self.labels.get(k, []))

    def rels(self, k: int) -> list:
        return list(self.relations.get(k, []))

    def d(self, k: int) -> list:
        """Columns of ``d_k``; zero when either side is outside the slice."""
        if k in self.diff:
            return self.diff[k]
        if self.rank(k) == 0 or self.rank(k - 1) == 0:
            return [tuple(self.ring.zero() for _ in range(self.rank(k - 1))) for _ in range(self.rank(k))]
        raise KeyError(f"differential d_{k} is outside the computed slice [{self.lo}, {self.hi}]")

    def has_d(self, k: int) -> bool:
        return k in self.diff or self.rank(k) == 0 or self.rank(k - 1) == 0

    def apply_d(self, k: int, vec) -> tuple:
        cols = self.d(k)
        out = [self.ring.zero()] * self.rank(k - 1)
        for c, col in zip(vec, cols):
            if c:
                for i, p in enumerate(col):
                    if p:
                        out[i] = out[i] + c * p
        return tuple(out)

    def check_square_zero(self) -> bool:
        for k in range(self.lo + 2, self.hi + 1):
            if k in self.diff and k - 1 in self.diff:
                for col in self.diff[k]:
                    if any(self.apply_d(k - 1, col)):
                        return False
        return True

    @property
    def truncated(self) -> bool:
        return self.window is not None


@dataclass
class ChainMap:
    source: LinearComplex
    target: LinearComplex
    maps: dict  # degree -> columns (images of source basis vectors)

    def apply(self, k: int, vec) -> tuple:
        out = [self.target.ring.zero()] * self.target.rank(k)
        for c, col in zip(vec, self.maps.get(k, [])):
            if c:
                for i, p in enumerate(col):
                    if p:
                        out[i] = out[i] + c * p
        return tuple(out)


def _zeros(ring, n):
    return tuple(ring.zero() for _ in range(n))


def mapping_cone(phi: ChainMap) -> LinearComplex:
    """``cone_k = S_{k-1} ⊕ T_k`` with ``d(s, t) = (-d s, phi(s) + d t)``."""
    S, T = phi.source, phi.target
    if S.ring != T.ring:
        raise ValueError("chain map between complexes over different rings")
    ring = S.ring
    lo = max(S.lo + 1, T.lo)
    hi = min(S.hi + 1, T.hi)
    labels, weights, rels, diff = {}, {}, {}, {}
    for k in range(lo, hi + 1):
        labels[k] = [("s", lab) for lab in S.labels.get(k - 1, [])] + [("t", lab) for lab in T.labels.get(k, [])]
        weights[k] = list(S.weights.get(k - 1, [])) + list(T.weights.get(k, []))
        rs, rt = S.rank(k - 1), T.rank(k)
        rels[k] = ([tuple(r) + _zeros(ring, rt) for r in S.rels(k - 1)]
                   + [_zeros(ring, rs) + tuple(r) for r in T.rels(k)])
    for k in range(lo + 1, hi + 1):
        if not (S.has_d(k - 1) and T.has_d(k)):
            continue
        cols = []
        rs_prev = S.rank(k - 2)
        for j in range(S.rank(k - 1)):
            e = tuple(ring.one() if i == j else ring.zero() for i in range(S.rank(k - 1)))
            ds = S.apply_d(k - 1, e) if S.rank(k - 2) else ()
            top = tuple(-p for p in ds) if ds else _zeros(ring, rs_prev)
            bottom = phi.apply(k - 1, e)
            cols.append(top + bottom)
        for col in T.d(k):
            cols.append(_zeros(ring, rs_prev) + tuple(col))
        diff[k] = cols
    window = S.window if S.window is not None else T.window
    return LinearComplex(ring, lo, hi, labels, weights, diff, rels, window=window)


def compose(psi: ChainMap, phi: ChainMap) -> ChainMap:
    """``psi ∘ phi`` degreewise."""
    maps = {}
    for k, cols in phi.maps.items():
        if k in psi.maps:
            maps[k] = [psi.apply(k, col) for col in cols]
    return ChainMap(phi.source, psi.target, maps)


def vector_weight(vec, basis_weights):
    """Weight of a homogeneous vector, ``None`` for zero."""
    from .poly import INHOMOGENEOUS, weight_of

    ws = set()
    for p, bw in zip(vec, basis_weights):
        if p:
            w = weight_of(p)
            if w == INHOMOGENEOUS:
                return INHOMOGENEOUS
            ws.add(w + bw)
    if not ws:
        return None
    return ws.pop() if len(ws) == 1 else INHOMOGENEOUS
