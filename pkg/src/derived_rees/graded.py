"""Discrete ℕ- and ℤ-graded modules and algebras over ℚ.

Graded vector spaces are stored by piece dimension.  Infinite support is
allowed through constant tails: ``upper = (start, dim)`` means every weight
``>= start`` not listed explicitly has dimension ``dim``; ``lower = (end, dim)``
covers weights ``<= end``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .groebner import buchberger
from .homology import _monomials_upto
from .poly import INHOMOGENEOUS, RingMap, WeightedRing, embed, make_ring, weight_of


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedModule:
    pieces: tuple  # sorted ((weight, dim), ...) with dim > 0
    upper: tuple | None = None
    lower: tuple | None = None
    base: str = "QQ"

    @classmethod
    def of(cls, dims: Mapping[int, int] | None = None, upper=None, lower=None, base="QQ"):
        dims = dict(dims or {})
        if any(d < 0 for d in dims.values()):
            raise GradingError("negative dimension")
        if upper is not None and upper[1] == 0:
            upper = None
        if lower is not None and lower[1] == 0:
            lower = None
        if upper is not None:
            s, d = upper
            if any(w >= s and k != d for w, k in dims.items()):
                raise GradingError("explicit piece inside the upper tail")
            dims = {w: k for w, k in dims.items() if w < s}
        if lower is not None:
            e, d = lower
            if any(w <= e and k != d for w, k in dims.items()):
                raise GradingError("explicit piece inside the lower tail")
            dims = {w: k for w, k in dims.items() if w > e}
        return cls(tuple(sorted((w, k) for w, k in dims.items() if k)), upper, lower, base)

    def dim(self, w: int) -> int:
        if self.upper is not None and w >= self.upper[0]:
            return self.upper[1]
        if self.lower is not None and w <= self.lower[0]:
            return self.lower[1]
        return dict(self.pieces).get(w, 0)

    @property
    def finite(self) -> bool:
        return self.upper is None and self.lower is None

    def support(self):
        if not self.finite:
            raise GradingError("infinite support")
        return [w for w, _ in self.pieces]

    def window(self, lo: int, hi: int) -> dict:
        return {w: self.dim(w) for w in range(lo, hi + 1)}

    def is_zero(self) -> bool:
        return self.finite and not self.pieces

    def to_dict(self):
        d = {"pieces": {str(w): k for w, k in self.pieces}}
        if self.upper:
            d["upper"] = list(self.upper)
        if self.lower:
            d["lower"] = list(self.lower)
        return d


def vector_space(w: int = 0, dim: int = 1) -> GradedModule:
    return GradedModule.of({w: dim})


def _same_base(M, N):
    if M.base != N.base:
        raise GradingError(f"base mismatch: {M.base} vs {N.base}")


def direct_sum(M: GradedModule, N: GradedModule) -> GradedModule:
    _same_base(M, N)
    if not (M.finite and N.finite):
        raise GradingError("direct sum implemented for finite support")
    d = dict(M.pieces)
    for w, k in N.pieces:
        d[w] = d.get(w, 0) + k
    return GradedModule.of(d, base=M.base)


def day_tensor(N: GradedModule, N2: GradedModule) -> GradedModule:
    """``(N ⊗ N')_a = ⊕_{b+c=a} N_b ⊗ N'_c``; at most one factor may have tails."""
    _same_base(N, N2)
    if not N.finite and not N2.finite:
        raise GradingError("Day tensor of two infinitely supported modules is not finite piecewise")
    if not N.finite:
        N, N2 = N2, N
    out: dict = {}
    for b, k in N.pieces:
        for c, l in N2.pieces:
            out[b + c] = out.get(b + c, 0) + k * l
    if N2.finite:
        return GradedModule.of(out, base=N.base)
    if not N.pieces:
        return GradedModule.of({}, base=N.base)
    total = sum(k for _, k in N.pieces)
    ws = [b for b, _ in N.pieces]
    upper = lower = None
    explicit: dict = {}
    lo_b, hi_b = min(ws), max(ws)
    if N2.upper is not None:
        upper = (N2.upper[0] + hi_b, N2.upper[1] * total)
    if N2.lower is not None:
        lower = (N2.lower[0] + lo_b, N2.lower[1] * total)
    # weights between the tails: sum over b of N2.dim(a - b)
    inner = [w for w, _ in N2.pieces]
    start = N2.lower[0] + lo_b + 1 if lower else min(inner + [N2.upper[0]]) + lo_b
    stop = upper[0] - 1 if upper else max(inner + [N2.lower[0]]) + hi_b
    for a in range(start, stop + 1):
        s = sum(k * N2.dim(a - b) for b, k in N.pieces)
        if s:
            explicit[a] = s
    return GradedModule.of(explicit, upper, lower, N.base)


def twist(M: GradedModule, d: int) -> GradedModule:
    """``M(d)_n = M_{n+d}``."""
    return GradedModule.of({w - d: k for w, k in M.pieces},
                           None if M.upper is None else (M.upper[0] - d, M.upper[1]),
                           None if M.lower is None else (M.lower[0] - d, M.lower[1]), M.base)


def regrade_pushforward(l: int, K: GradedModule) -> GradedModule:
    """Pushforward along ``a -> l*a`` (``l = 0`` collapses ℤ to a point)."""
    if l == 0:
        if not K.finite:
            raise GradingError("infinite fiber: collapsing an infinitely supported module")
        return GradedModule.of({0: sum(k for _, k in K.pieces)} if K.pieces else {}, base=K.base)
    out = {}
    for w, k in K.pieces:
        out[l * w] = out.get(l * w, 0) + k
    if K.finite:
        return GradedModule.of(out, base=K.base)
    if abs(l) != 1:
        raise GradingError("tails are not constant after regrading by |l| > 1")
    up, low = K.upper, K.lower
    if l == -1:
        up, low = (None if K.lower is None else (-K.lower[0], K.lower[1]),
                   None if K.upper is None else (-K.upper[0], K.upper[1]))
    return GradedModule.of(out, up, low, K.base)


def compose_regrade(l1: int, l2: int) -> int:
    return l1 * l2


# -- graded algebras ------------------------------------------------------------------------

@dataclass(eq=False)
class GradedAlgebraPresentation:
    """``A[generators]/(relations)`` with weighted generators."""

    ring: WeightedRing
    base_vars: tuple
    relations: tuple = ()

    def __post_init__(self):

        for r in self.relations:
            if weight_of(r) == INHOMOGENEOUS:
                raise GradingError(f"relation {r} is not weight-homogeneous")

    @property
    def generators(self):
        return [(n, w) for n, w in zip(self.ring.names, self.ring.weights) if n not in self.base_vars]

    def gb(self):
        return buchberger(list(self.relations), self.ring)

    def piece_dim(self, w: int, degree_bound: int) -> int:
        """Standard monomials of weight ``w`` and total degree ``<= degree_bound``."""
        leads = self.gb().leading_exponents()
        count = 0
        for e in _monomials_upto(self.ring, degree_bound):
            if self.ring.exp_weight(e) != w:
                continue
            if any(all(a <= b for a, b in zip(le, e)) for le in leads):
                continue
            count += 1
        return count

    def to_dict(self):
        return {"ring": [[n, w] for n, w in zip(self.ring.names, self.ring.weights)],
                "base": list(self.base_vars), "relations": [str(r) for r in self.relations]}


def polynomial_algebra(A: WeightedRing, gens) -> GradedAlgebraPresentation:
    ring = A.extend(list(gens))
    return GradedAlgebraPresentation(ring, tuple(A.names))


def monoid_algebra(R: WeightedRing, M: str) -> GradedAlgebraPresentation:
    """``R[ℕ] = R[t]`` or ``R[ℤ] = R[t, t_inv]/(t*t_inv - 1)``."""
    M = M.upper().replace("ℕ", "N").replace("ℤ", "Z")
    if M == "N":
        ring = R.extend([("t", 1)])
        return GradedAlgebraPresentation(ring, tuple(R.names))
    if M == "Z":
        ring = R.extend([("t", 1), ("t_inv", -1)])
        return GradedAlgebraPresentation(ring, tuple(R.names),
                                         (ring.var("t") * ring.var("t_inv") - 1,))
    raise GradingError(f"unsupported monoid {M!r}")


@dataclass
class PlusZeroSplit:
    plus: GradedModule
    zero: GradedAlgebraPresentation
    dims: dict  # weight -> (dim B_w, dim (B_+)_w, dim (B_0)_w)
    degree_bound: int

    def additive(self) -> bool:
        return all(b == p + z for b, p, z in self.dims.values())


def split_plus_zero(B: GradedAlgebraPresentation, w_max: int = 4, degree_bound: int = 8) -> PlusZeroSplit:
    """``B_+ -> B -> B_0`` for an ℕ-graded presentation, piecewise within bounds."""
    if any(w < 0 for w in B.ring.weights):
        raise GradingError("negative-weight generator present")
    zero_names = [n for n, w in zip(B.ring.names, B.ring.weights) if w == 0]
    zring = make_ring([(n, 0) for n in zero_names], B.ring.order.kind)
    kill = {n: 0 for n, w in zip(B.ring.names, B.ring.weights) if w > 0}

    proj = RingMap.from_dict(B.ring, B.ring, kill)
    zrels = []
    for r in B.relations:
        p = proj(r)
        if p:
            zrels.append(embed(p, zring))
    Z = GradedAlgebraPresentation(zring, tuple(n for n in B.base_vars if n in zring.index), tuple(zrels))
    dims = {}
    plus = {}
    for w in range(0, w_max + 1):
        b = B.piece_dim(w, degree_bound)
        z = Z.piece_dim(0, degree_bound) if w == 0 else 0
        # B_+ is spanned by monomials with a positive-weight variable, so it has no weight-0 part
        p = b if w > 0 else 0
        dims[w] = (b, p, z)
        if p:
            plus[w] = p
    return PlusZeroSplit(GradedModule.of(plus), Z, dims, degree_bound)



# -- graded localization ---------------------------------------------------------------------

def _rank(rows) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _matmul(a, b):
    if not a or not b:
        return [[Fraction(0)] * (len(b[0]) if b else 0) for _ in a]
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _power(T, n):
    out = _identity(len(T))
    for _ in range(n):
        out = _matmul(T, out)
    return out


@dataclass
class FModule:
    """Graded module over ``ℚ[f]`` with ``f`` of weight ``f_weight``.

    Explicit pieces ``dims[w]`` with action matrices ``action[w]`` (``dims[w+1] x
    dims[w]``) below ``tail_start``; from ``tail_start`` on every piece is
    ``ℚ^tail_dim`` and ``f`` acts by the endomorphism ``tail``.
    """

    dims: dict
    action: dict
    tail_start: int
    tail_dim: int = 0
    tail: list = field(default_factory=list)
    f_weight: int = 1

    def dim(self, w):
        return self.tail_dim if w >= self.tail_start else self.dims.get(w, 0)


@dataclass
class FMap:
    source: FModule
    target: FModule
    maps: dict   # weight -> matrix (target dim x source dim) below the common tail
    tail: list   # on the tails

    def start(self):
        return max(self.source.tail_start, self.target.tail_start)

    def matrix(self, w):
        if w >= self.start():
            return self.tail
        return self.maps.get(w, [[Fraction(0)] * self.source.dim(w) for _ in range(self.target.dim(w))])


@dataclass
class LocalizedModule:
    dims: dict
    cutoff: int
    stable: bool


def graded_localize(M: FModule, window=(-3, 3), cutoff: int | None = None) -> LocalizedModule:
    """``(M_f)_w = colim_k M_{w+k}`` along ``x f``: the rank of ``tail^N`` once two successive ranks agree."""
    if M.f_weight != 1:
        raise GradingError("localization element must have weight 1")
    d = M.tail_dim
    if d == 0:
        return LocalizedModule({w: 0 for w in range(window[0], window[1] + 1)}, 0, True)
    N = cutoff if cutoff is not None else d
    r1 = _rank(_power(M.tail, N))
    r2 = _rank(_power(M.tail, N + 1))
    return LocalizedModule({w: r2 for w in range(window[0], window[1] + 1)}, N + 1, r1 == r2)


def _invertible(mat, n) -> bool:
    return len(mat) == n and (n == 0 or (len(mat[0]) == n and _rank(mat) == n))


def is_iso_nonnegative(phi: FMap) -> bool:
    for w in range(0, phi.start() + 1):
        if phi.source.dim(w) != phi.target.dim(w):
            return False
        if not _invertible(phi.matrix(w), phi.source.dim(w)):
            return False
    return True


def localized_map_is_iso(phi: FMap, window=(-3, 3)) -> dict:
    """Per weight: is ``phi_f`` an isomorphism on ``(M_f)_w``?"""
    S, T = phi.source, phi.target
    N = max(S.tail_dim, T.tail_dim, 1)
    PS = _power(S.tail, N) if S.tail_dim else []
    PT = _power(T.tail, N) if T.tail_dim else []
    rs = _rank(PS) if PS else 0
    rt = _rank(PT) if PT else 0
    # phi restricted to im(T_S^N) lands in im(T_T^N); iso iff injective there and ranks match
    img = _matmul(phi.tail, PS) if PS and phi.tail else []
    ri = _rank(img) if img else 0
    ok = rs == rt == ri
    return {w: ok for w in range(window[0], window[1] + 1)}


def lemma_loc_check(phi: FMap, window=(-3, 3)) -> bool:
    """If ``phi`` is an isomorphism in weights ``>= 0`` then ``phi_f`` is one in every weight."""
    if not is_iso_nonnegative(phi):
        raise GradingError("hypothesis fails: not an isomorphism in weights >= 0")
    return all(localized_map_is_iso(phi, window).values())


def free_f_module() -> FModule:
    """``ℚ[f]``: ℚ in each weight ``>= 0``, ``f`` acting by 1."""
    return FModule({}, {}, 0, 1, [[Fraction(1)]])


def laurent_f_module(explicit_from: int = -6) -> FModule:
    """``ℚ[f, f^-1]`` with explicit pieces from ``explicit_from``."""
    dims = {w: 1 for w in range(explicit_from, 0)}
    action = {w: [[Fraction(1)]] for w in range(explicit_from, 0)}
    return FModule(dims, action, 0, 1, [[Fraction(1)]])


def inclusion_free_into_laurent(explicit_from: int = -6) -> FMap:
    S, T = free_f_module(), laurent_f_module(explicit_from)
    maps = {w: [[]] for w in range(explicit_from, 0)}
    return FMap(S, T, maps, [[Fraction(1)]])
