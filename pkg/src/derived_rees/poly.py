"""Weight-graded sparse multivariate polynomials over the rationals.

Polynomials are immutable maps from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients.  Every variable carries an integer
weight; the ring also fixes a monomial order used for leading terms and for
the canonical text form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from operator import add
from typing import Iterable, Sequence

INHOMOGENEOUS = "inhomogeneous"

ORDER_KINDS = ("degrevlex", "deglex", "lex")


class RingError(ValueError):
    """Raised for malformed rings or mixing elements of different rings."""


def _degrevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _deglex_key(e):
    return (sum(e), e)


def _lex_key(e):
    return e


_KEYS = {"degrevlex": _degrevlex_key, "deglex": _deglex_key, "lex": _lex_key}


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order, optionally a block (elimination) order.

    ``blocks`` lists block lengths; monomials are compared block by block,
    each block under ``kind``.  A single block is the plain order.
    """

    kind: str = "degrevlex"
    blocks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise RingError(f"unknown monomial order {self.kind!r}")

    def key_function(self, nvars: int):
        base = _KEYS[self.kind]
        blocks = self.blocks
        if not blocks or len(blocks) == 1:
            return base
        if sum(blocks) != nvars:
            raise RingError(f"block sizes {blocks} do not cover {nvars} variables")
        cuts = []
        start = 0
        for b in blocks:
            cuts.append((start, start + b))
            start += b

        def key(e):
            return tuple(base(e[a:b]) for a, b in cuts)

        return key

    def __str__(self):
        if self.blocks and len(self.blocks) > 1:
            return f"{self.kind}{list(self.blocks)}"
        return self.kind


DEGREVLEX = MonomialOrder("degrevlex")


@dataclass(frozen=True, eq=False)
class WeightedRing:
    """Polynomial ring Q[x_1..x_n] with integer weights and a monomial order."""

    names: tuple[str, ...]
    weights: tuple[int, ...]
    order: MonomialOrder = DEGREVLEX

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            seen, dup = set(), None
            for n in self.names:
                if n in seen:
                    dup = n
                    break
                seen.add(n)
            raise RingError(f"duplicate variable name {dup!r}")
        if len(self.names) != len(self.weights):
            raise RingError("names and weights differ in length")

    # Rings compare structurally so that independently built copies interoperate.
    def __eq__(self, other):
        return (
            isinstance(other, WeightedRing)
            and self.names == other.names
            and self.weights == other.weights
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.weights, self.order))

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def key(self):
        return self.order.key_function(self.nvars)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def zero_exp(self):
        return (0,) * self.nvars

    def var(self, name: str) -> "Polynomial":
        try:
            i = self.index[name]
        except KeyError:
            raise RingError(f"unknown variable {name!r}") from None
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.zero_exp(): Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self.zero_exp(): c} if c else {})

    def monomial(self, exp, coeff=1) -> "Polynomial":
        c = Fraction(coeff)
        return Polynomial(self, {tuple(exp): c} if c else {})

    def exp_weight(self, e) -> int:
        return sum(a * w for a, w in zip(e, self.weights))

    def with_order(self, order: MonomialOrder) -> "WeightedRing":
        return WeightedRing(self.names, self.weights, order)

    def extend(self, variables: Sequence[tuple[str, int]], front=False) -> "WeightedRing":
        """Ring with extra variables appended (or prepended), plain order."""
        names = [n for n, _ in variables]
        weights = [w for _, w in variables]
        if front:
            return WeightedRing(tuple(names) + self.names, tuple(weights) + self.weights,
                                MonomialOrder(self.order.kind))
        return WeightedRing(self.names + tuple(names), self.weights + tuple(weights),
                            MonomialOrder(self.order.kind))

    def __repr__(self):
        vs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"WeightedRing({vs}; {self.order})"


def make_ring(variables: Iterable[tuple[str, int]], order: MonomialOrder | str = "degrevlex"):
    """Build a :class:`WeightedRing` from ``(name, weight)`` pairs."""
    variables = list(variables)
    if isinstance(order, str):
        order = MonomialOrder(order)
    return WeightedRing(tuple(n for n, _ in variables), tuple(int(w) for _, w in variables), order)


def _check_same(a: "Polynomial", b: "Polynomial"):
    if a.ring != b.ring:
        raise RingError(f"ring mismatch: {a.ring!r} vs {b.ring!r}")


class Polynomial:
    """Immutable sparse polynomial in a :class:`WeightedRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: WeightedRing, terms: dict | None = None):
        self.ring = ring
        self.terms = {e: (c if type(c) is Fraction else Fraction(c)) for e, c in (terms or {}).items() if c}
        self._hash = None

    # -- construction helpers ------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_same(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        _check_same(self, other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return Polynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        z = self.ring.zero_exp()
        return all(e == z for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.zero_exp(), Fraction(0))

    def sorted_terms(self):
        """Terms in decreasing monomial order."""
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda ec: key(ec[0]), reverse=True)

    def leading_term(self):
        key = self.ring.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> set[str]:
        names = self.ring.names
        return {names[i] for e in self.terms for i, a in enumerate(e) if a}

    def weight(self):
        return weight_of(self)

    def __str__(self):
        return serialize(self)

    def __repr__(self):
        return f"Polynomial({serialize(self)!r})"


# -- weights -----------------------------------------------------------------

def weight_of(p: Polynomial):
    """Common weight of all terms, ``INHOMOGENEOUS``, or ``None`` for zero."""
    ws = {p.ring.exp_weight(e) for e in p.terms}
    if not ws:
        return None
    if len(ws) > 1:
        return INHOMOGENEOUS
    return ws.pop()


# -- ring maps -----------------------------------------------------------------

@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism given by one image per source variable."""

    source: WeightedRing
    target: WeightedRing
    images: tuple[Polynomial, ...]
    weight_preserving: bool = field(default=False)

    def __post_init__(self):
        if len(self.images) != self.source.nvars:
            raise RingError("need one image per source variable")
        for img in self.images:
            if img.ring != self.target:
                raise RingError("image not in target ring")
        if self.weight_preserving:
            for name, w, img in zip(self.source.names, self.source.weights, self.images):
                wi = weight_of(img)
                if wi is not None and wi != w:
                    raise RingError(f"image of {name} has weight {wi}, expected {w}")

    @classmethod
    def from_dict(cls, source, target, assignment: dict, weight_preserving=False):
        """Unlisted source variables go to the same-named target variable."""
        imgs = []
        for n in source.names:
            if n in assignment:
                v = assignment[n]
                imgs.append(v if isinstance(v, Polynomial) else target.const(v))
            else:
                imgs.append(target.var(n))
        return cls(source, target, tuple(imgs), weight_preserving)

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, tuple(ring.gens()), True)

    def __call__(self, p: Polynomial) -> Polynomial:
        return poly_eval_map(self, p)

    def compose(self, first: "RingMap") -> "RingMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise RingError("maps are not composable")
        return RingMap(first.source, self.target, tuple(self(i) for i in first.images))


def poly_eval_map(m: RingMap, p: Polynomial) -> Polynomial:
    """Substitute the images of ``m`` into ``p``."""
    if p.ring != m.source:
        raise RingError(f"ring mismatch: {p.ring!r} is not the map source")
    tgt = m.target
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = m.images[i] ** k
        return powers[key]

    acc: dict = {}
    for e, c in p.terms.items():
        term = tgt.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
                if not term.terms:
                    break
        for te, tc in term.terms.items():
            s = acc.get(te, 0) + tc
            if s:
                acc[te] = s
            else:
                acc.pop(te, None)
    return Polynomial(tgt, acc)


def embed(p: Polynomial, target: WeightedRing) -> Polynomial:
    """Move ``p`` into a ring containing all of its variables by name."""
    if p.ring == target:
        return p
    idx = [target.index.get(n) for n in p.ring.names]
    out = {}
    for e, c in p.terms.items():
        ne = [0] * target.nvars
        for i, a in enumerate(e):
            if a:
                j = idx[i]
                if j is None:
                    raise RingError(f"variable {p.ring.names[i]!r} missing from target ring")
                ne[j] = a
        out[tuple(ne)] = c
    return Polynomial(target, out)


# -- text form ---------------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names, e) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_terms(items, names) -> str:
    """Shared formatter for (exponent, coefficient) lists already in order."""
    if not items:
        return "0"
    out = []
    for k, (e, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(names, e)
        if mono:
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        else:
            body = _fmt_coeff(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def serialize(p: Polynomial) -> str:
    """Canonical text: terms in decreasing order, coefficients as num/den."""
    return format_terms(p.sorted_terms(), p.ring.names)


def parse_polynomial(text: str, ring: WeightedRing) -> Polynomial:
    """Parse ``text`` (e.g. ``"3/2*x^2*y - v"``) as an element of ``ring``."""
    from .expr import evaluate, parse_expression

    env = {n: ring.var(n) for n in ring.names}
    return evaluate(parse_expression(text), env, ring.const)
