"""Semifree graded-commutative dg-algebras over a weighted polynomial base.

A presentation is a polynomial base ring ``P`` (all of homological degree 0,
zero differential) together with finitely many free generators carrying a
homological degree, a weight and an auxiliary ``aux`` grading.  Odd
generators are exterior, even ones polynomial.  Elements are sparse maps from
generator-exponent tuples to coefficients in ``P``; monomials are always
stored with generators in declaration order.

Sign conventions: the differential has degree -1, ``d(ab) = d(a) b +
(-1)^|a| a d(b)``, and ``ab = (-1)^{|a||b|} ba``.

The ``aux`` grading must be preserved by ``d``.  It is what makes a
presentation with even generators of degree 0 (or of both signs) finite in
each slice: flattening then keeps only monomials with total ``aux`` at most
the enumeration bound, a direct summand of the full complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .expr import evaluate, parse_expression
from .poly import (INHOMOGENEOUS, Polynomial, RingError, RingMap, WeightedRing,
                   embed, format_monomial, make_ring, weight_of)

SIGN_CONVENTION = "d(ab) = d(a)b + (-1)^|a| a d(b); ab = (-1)^{|a||b|} ba; d of degree -1"

MAX_RANK = 4000


class DGError(ValueError):
    pass


class DifferentialSquareError(DGError):
    def __init__(self, generator, residual):
        super().__init__(f"d^2 != 0 on generator {generator!r}: residual {residual}")
        self.generator = generator
        self.residual = residual


class InhomogeneousError(DGError):
    pass


class EnumerationLimitError(DGError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: int
    aux: int = 0

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True, eq=False)
class GCAlgebra:
    """Free graded-commutative algebra over ``base`` on ``gens`` (no differential)."""

    base: WeightedRing
    gens: tuple[Generator, ...]

    def __post_init__(self):
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise DGError("duplicate generator name")
        clash = set(names) & set(self.base.names)
        if clash:
            raise DGError(f"generator names clash with base variables: {sorted(clash)}")

    def __eq__(self, other):
        return isinstance(other, GCAlgebra) and self.base == other.base and self.gens == other.gens

    def __hash__(self):
        return hash((self.base, self.gens))

    @cached_property
    def index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.gens)}

    @cached_property
    def odd_mask(self) -> tuple[bool, ...]:
        return tuple(g.odd for g in self.gens)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def unit_exp(self):
        return (0,) * len(self.gens)

    def one(self) -> "DGElement":
        return DGElement(self, {self.unit_exp(): self.base.one()})

    def zero(self) -> "DGElement":
        return DGElement(self, {})

    def gen(self, name) -> "DGElement":
        i = self.index[name]
        e = [0] * len(self.gens)
        e[i] = 1
        return DGElement(self, {tuple(e): self.base.one()})

    def scalar(self, p) -> "DGElement":
        if not isinstance(p, Polynomial):
            p = self.base.const(p)
        return DGElement(self, {self.unit_exp(): p} if p else {})

    def mono(self, exp, coeff=None) -> "DGElement":
        c = self.base.one() if coeff is None else coeff
        return DGElement(self, {tuple(exp): c} if c else {})

    def mono_degree(self, e) -> int:
        return sum(a * g.degree for a, g in zip(e, self.gens))

    def mono_weight(self, e) -> int:
        return sum(a * g.weight for a, g in zip(e, self.gens))

    def mono_aux(self, e) -> int:
        return sum(a * g.aux for a, g in zip(e, self.gens))

    def mono_mul(self, a, b):
        """Product of two canonical monomials: ``(sign, exp)`` or ``(0, None)``."""
        odd = self.odd_mask
        sign = 1
        later_odd = 0  # odd generators of ``a`` with index greater than current
        # count pairs (i in a, j in b) with i > j, both odd
        n = len(a)
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + (1 if odd[i] and a[i] else 0)
        for j in range(n):
            if odd[j] and b[j]:
                if a[j]:
                    return 0, None
                later_odd += suffix[j + 1]
        if later_odd & 1:
            sign = -1
        return sign, tuple(x + y for x, y in zip(a, b))

    def env(self) -> dict:
        env = {n: self.scalar(self.base.var(n)) for n in self.base.names}
        env.update({g.name: self.gen(g.name) for g in self.gens})
        return env

    def parse(self, text: str) -> "DGElement":
        return evaluate(parse_expression(text), self.env(), self.scalar)

    def format_mono(self, e) -> str:
        return format_monomial([g.name for g in self.gens], e)


class DGElement:
    """Element of a :class:`GCAlgebra`: ``{generator exponents: base coefficient}``."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: GCAlgebra, terms: Mapping | None = None):
        self.alg = alg
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    def _coerce(self, other):
        if isinstance(other, DGElement):
            if other.alg != self.alg:
                raise DGError("elements of different algebras")
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t[e] + c if e in t else c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return DGElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return DGElement(self.alg, {e: -c for e, c in self.terms.items()})

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
            return DGElement(self.alg, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        alg = self.alg
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                sign, e = alg.mono_mul(e1, e2)
                if not sign:
                    continue
                v = c1 * c2
                if sign < 0:
                    v = -v
                s = t[e] + v if e in t else v
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return DGElement(alg, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.alg.scalar(other) * self
        return NotImplemented

    def __pow__(self, n: int):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self.alg.scalar(other)
        if not isinstance(other, DGElement):
            return NotImplemented
        return self.alg == other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.alg.mono_degree(e) for e in self.terms}

    def weights(self) -> set:
        out = set()
        for e, c in self.terms.items():
            w = weight_of(c)
            if w == INHOMOGENEOUS:
                out.add(INHOMOGENEOUS)
            else:
                out.add(w + self.alg.mono_weight(e))
        return out

    def auxes(self) -> set[int]:
        return {self.alg.mono_aux(e) for e in self.terms}

    def base_part(self) -> Polynomial:
        return self.terms.get(self.alg.unit_exp(), self.alg.base.zero())

    def sorted_items(self):
        alg = self.alg
        return sorted(self.terms.items(), key=lambda ec: (alg.mono_degree(ec[0]), ec[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_items():
            m = self.alg.format_mono(e)
            cs = str(c)
            if not m:
                parts.append(f"({cs})" if len(c.terms) > 1 and len(self.terms) > 1 else cs)
            elif cs == "1":
                parts.append(m)
            elif cs == "-1":
                parts.append(f"-{m}")
            else:
                parts.append(f"({cs})*{m}" if len(c.terms) > 1 else f"{cs}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# -- presentations -------------------------------------------------------------

@dataclass(eq=False)
class DGPresentation:
    """Semifree dg-algebra: :class:`GCAlgebra` plus differential on generators."""

    alg: GCAlgebra
    differential: dict[str, DGElement]
    name: str = ""
    _dcache: dict = field(default_factory=dict, repr=False)

    @property
    def base(self) -> WeightedRing:
        return self.alg.base

    @property
    def gens(self):
        return self.alg.gens

    def gen(self, name):
        return self.alg.gen(name)

    def d_gen(self, name) -> DGElement:
        return self.differential.get(name) or self.alg.zero()

    def d_mono(self, e) -> DGElement:
        if e in self._dcache:
            return self._dcache[e]
        alg = self.alg
        out = alg.zero()
        prefix_deg = 0
        n = len(e)
        for i in range(n):
            k = e[i]
            if not k:
                continue
            g = alg.gens[i]
            dg = self.d_gen(g.name)
            if dg:
                pre = [0] * n
                pre[:i] = e[:i]
                post = [0] * n
                post[i + 1:] = e[i + 1:]
                if g.odd:
                    middle = dg
                else:
                    rest = [0] * n
                    rest[i] = k - 1
                    middle = alg.mono(rest) * dg * k
                term = alg.mono(pre) * middle * alg.mono(post)
                out = out - term if prefix_deg % 2 else out + term
            prefix_deg += k * g.degree
        self._dcache[e] = out
        return out

    def d(self, x: DGElement) -> DGElement:
        out: dict = {}
        for e, c in x.terms.items():
            for e2, c2 in self.d_mono(e).terms.items():
                v = c * c2
                s = out[e2] + v if e2 in out else v
                if s:
                    out[e2] = s
                else:
                    out.pop(e2, None)
        return DGElement(self.alg, out)

    def check_d_squared(self):
        for g in self.gens:
            r = self.d(self.d_gen(g.name))
            if r:
                raise DifferentialSquareError(g.name, r)

    def check_homogeneous(self):
        for g in self.gens:
            dg = self.d_gen(g.name)
            if not dg:
                continue
            if dg.degrees() != {g.degree - 1}:
                raise InhomogeneousError(f"d({g.name}) is not of degree {g.degree - 1}: {dg}")
            if dg.weights() != {g.weight}:
                raise InhomogeneousError(f"d({g.name}) is not of weight {g.weight}: {dg}")
            if dg.auxes() != {g.aux}:
                raise InhomogeneousError(f"d({g.name}) does not preserve the aux grading")

    def parse(self, text) -> DGElement:
        return self.alg.parse(text)

    @property
    def is_discrete(self) -> bool:
        return not self.gens

    def generator_table(self) -> list[dict]:
        return [{"name": g.name, "degree": g.degree, "weight": g.weight, "aux": g.aux,
                 "d": str(self.d_gen(g.name))} for g in self.gens]

    def to_dict(self) -> dict:
        return {
            "base": [{"name": n, "weight": w} for n, w in zip(self.base.names, self.base.weights)],
            "generators": self.generator_table(),
            "sign_convention": SIGN_CONVENTION,
        }

    def canonical(self) -> dict:
        """Serialization invariant under reordering of base variables."""
        ring = make_ring(sorted(zip(self.base.names, self.base.weights)))
        alg = GCAlgebra(ring, self.gens)
        diffs = {}
        for g in self.gens:
            dg = self.d_gen(g.name)
            terms = []
            for e, c in dg.terms.items():
                terms.append((alg.format_mono(e), str(embed(c, ring))))
            diffs[g.name] = sorted(terms)
        return {
            "base": list(zip(ring.names, ring.weights)),
            "generators": [(g.name, g.degree, g.weight, g.aux) for g in self.gens],
            "differential": diffs,
        }

    def __str__(self):
        base = ", ".join(f"{n}:{w}" for n, w in zip(self.base.names, self.base.weights))
        gens = "; ".join(f"{g.name}[{g.degree},{g.weight}] d={self.d_gen(g.name)}" for g in self.gens)
        return f"DG<{base} | {gens}>"


def _coerce_element(alg: GCAlgebra, value) -> DGElement:
    if isinstance(value, DGElement):
        if value.alg != alg:
            return transport(value, alg)
        return value
    if isinstance(value, str):
        return alg.parse(value)
    if isinstance(value, Polynomial):
        return alg.scalar(embed(value, alg.base))
    return alg.scalar(value)


def transport(x: DGElement, alg: GCAlgebra) -> DGElement:
    """Re-express ``x`` in a larger algebra containing its generators by name."""
    src = x.alg
    pos = []
    for g in src.gens:
        if g.name not in alg.index:
            raise DGError(f"generator {g.name!r} missing from target algebra")
        pos.append(alg.index[g.name])
    out = alg.zero()
    for e, c in x.terms.items():
        ne = [0] * alg.ngens
        ordered = []
        for i, k in enumerate(e):
            if k:
                ordered.append((pos[i], k))
        # rebuild the product in source order to pick up reordering signs
        term = alg.scalar(embed(c, alg.base))
        for p, k in ordered:
            m = [0] * alg.ngens
            m[p] = k
            term = term * alg.mono(m)
        out = out + term
        del ne
    return out


def semifree(base: WeightedRing, higher_gens: Sequence, differential: Mapping | None = None,
             name: str = "") -> DGPresentation:
    """Validated semifree presentation.

    ``higher_gens`` holds ``(name, degree, weight)`` or ``(name, degree, weight,
    aux)`` tuples; ``differential`` maps generator names to elements or text.
    """
    gens = []
    for g in higher_gens:
        if isinstance(g, Generator):
            gens.append(g)
        else:
            gens.append(Generator(*g))
    for g in gens:
        if g.degree == 0 and g.aux <= 0:
            raise DGError(f"degree-0 generator {g.name!r} must be a base variable "
                          "or carry a positive aux grading")
        if g.aux < 0:
            raise DGError("aux grading must be nonnegative")
    alg = GCAlgebra(base, tuple(gens))
    diff = {}
    for k, v in (differential or {}).items():
        if k not in alg.index:
            raise DGError(f"differential given for unknown generator {k!r}")
        el = _coerce_element(alg, v)
        if el:
            diff[k] = el
    pres = DGPresentation(alg, diff, name)
    pres.check_d_squared()
    pres.check_homogeneous()
    return pres


def discrete(base: WeightedRing) -> DGPresentation:
    return semifree(base, [], {})


def koszul(A: WeightedRing, f: Sequence[Polynomial], names: Sequence[str] | None = None,
           name: str = "") -> DGPresentation:
    """Koszul presentation ``A<e_1..e_n>``, ``d e_i = f_i``."""
    names = list(names) if names else [f"eps{i + 1}" for i in range(len(f))]
    gens = []
    diff = {}
    for nm, fi in zip(names, f):
        fi = embed(fi, A) if fi.ring != A else fi
        w = weight_of(fi)
        if w == INHOMOGENEOUS:
            raise InhomogeneousError(f"Koszul element {fi} is not weight-homogeneous")
        gens.append(Generator(nm, 1, w or 0))
        diff[nm] = fi
    return semifree(A, gens, diff, name or "koszul")


def _fresh(name, taken):
    if name not in taken:
        return name
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def union_ring(r1: WeightedRing, r2: WeightedRing) -> WeightedRing:
    w1 = dict(zip(r1.names, r1.weights))
    extra = []
    for n, w in zip(r2.names, r2.weights):
        if n in w1:
            if w1[n] != w:
                raise RingError(f"variable {n!r} has weights {w1[n]} and {w}")
        else:
            extra.append((n, w))
    if not extra:
        return r1
    return make_ring(list(zip(r1.names, r1.weights)) + extra, r1.order.kind)


def dg_tensor(B: DGPresentation, C: DGPresentation, over: WeightedRing | None = None) -> DGPresentation:
    """Pushout of two semifree algebras over a shared base.

    Generators of ``C`` whose names clash with ``B`` get a ``_k`` suffix.
    """
    if over is not None:
        for n in over.names:
            if n not in B.base.index or n not in C.base.index:
                raise DGError(f"{n!r} is not shared by both bases")
    base = union_ring(B.base, C.base)
    taken = set(base.names) | {g.name for g in B.gens}
    renamed = {}
    new_gens = list(B.gens)
    for g in C.gens:
        nn = _fresh(g.name, taken)
        taken.add(nn)
        renamed[g.name] = nn
        new_gens.append(Generator(nn, g.degree, g.weight, g.aux))
    alg = GCAlgebra(base, tuple(new_gens))
    diff = {}
    for g in B.gens:
        if B.d_gen(g.name):
            diff[g.name] = transport(B.d_gen(g.name), alg)
    c_alg_renamed = GCAlgebra(C.base, tuple(Generator(renamed[g.name], g.degree, g.weight, g.aux)
                                            for g in C.gens))
    for g in C.gens:
        dg = C.d_gen(g.name)
        if dg:
            diff[renamed[g.name]] = transport(DGElement(c_alg_renamed, dg.terms), alg)
    return semifree(base, new_gens, diff, name=f"({B.name})⊗({C.name})")


def extend_presentation(B: DGPresentation, new_base_vars=(), new_gens=(), differential=None,
                        name="") -> DGPresentation:
    """Adjoin base variables and generators to ``B``."""
    base = B.base.extend(list(new_base_vars)) if new_base_vars else B.base
    gens = list(B.gens) + [g if isinstance(g, Generator) else Generator(*g) for g in new_gens]
    alg = GCAlgebra(base, tuple(gens))
    diff = {g.name: transport(B.d_gen(g.name), alg) for g in B.gens if B.d_gen(g.name)}
    for k, v in (differential or {}).items():
        diff[k] = _coerce_element(alg, v)
    return semifree(base, gens, diff, name or B.name)


def base_extend(B: DGPresentation, new_vars) -> DGPresentation:
    """Extension of scalars along ``P -> P[new_vars]``."""
    return extend_presentation(B, new_base_vars=new_vars, name=B.name)


# -- morphisms -----------------------------------------------------------------

@dataclass(eq=False)
class DGMorphism:
    """Map of presentations: a base ring map plus one image per generator."""

    source: DGPresentation
    target: DGPresentation
    base_map: RingMap
    images: dict[str, DGElement]

    def __post_init__(self):
        if self.base_map.source != self.source.base or self.base_map.target != self.target.base:
            raise DGError("base map does not match the presentations")
        for g in self.source.gens:
            img = self.images.get(g.name)
            if img is None:
                raise DGError(f"no image for generator {g.name!r}")
            if img.alg != self.target.alg:
                raise DGError("image not in target algebra")
            if img and (img.degrees() != {g.degree} or img.weights() != {g.weight}):
                raise DGError(f"image of {g.name!r} changes degree or weight: {img}")
            if img and img.auxes() != {g.aux}:
                raise DGError(f"image of {g.name!r} does not preserve the aux grading")
        for n, w, img in zip(self.source.base.names, self.source.base.weights, self.base_map.images):
            wi = weight_of(img)
            if wi is not None and wi != w:
                raise DGError(f"base map sends {n} (weight {w}) to weight {wi}")
        for g in self.source.gens:
            lhs = self.apply(self.source.d_gen(g.name))
            rhs = self.target.d(self.images[g.name])
            if lhs != rhs:
                raise DGError(f"map does not commute with d on {g.name!r}: {lhs} vs {rhs}")

    def apply_mono(self, e) -> DGElement:
        tgt = self.target.alg
        out = tgt.one()
        for i, k in enumerate(e):
            if k:
                img = self.images[self.source.gens[i].name]
                for _ in range(k):
                    out = out * img
        return out

    def apply(self, x: DGElement) -> DGElement:
        tgt = self.target.alg
        out = tgt.zero()
        for e, c in x.terms.items():
            out = out + tgt.scalar(self.base_map(c)) * self.apply_mono(e)
        return out

    def compose(self, first: "DGMorphism") -> "DGMorphism":
        """``self ∘ first``."""
        return DGMorphism(first.source, self.target, self.base_map.compose(first.base_map),
                          {g.name: self.apply(first.images[g.name]) for g in first.source.gens})

    def is_identity(self) -> bool:
        if self.source.alg != self.target.alg:
            return False
        if any(img != v for img, v in zip(self.base_map.images, self.source.base.gens())):
            return False
        return all(self.images[g.name] == self.target.gen(g.name) for g in self.source.gens)


def dg_morphism(source: DGPresentation, target: DGPresentation, base_assign=None,
                gen_assign=None) -> DGMorphism:
    """Build a morphism; unlisted variables and generators go to their namesakes."""
    base_assign = dict(base_assign or {})
    gen_assign = dict(gen_assign or {})
    imgs = []
    for n in source.base.names:
        if n in base_assign:
            v = base_assign[n]
            if isinstance(v, str):
                from .poly import parse_polynomial
                v = parse_polynomial(v, target.base)
            elif not isinstance(v, Polynomial):
                v = target.base.const(v)
            imgs.append(v)
        else:
            imgs.append(target.base.var(n))
    bm = RingMap(source.base, target.base, tuple(imgs))
    images = {}
    for g in source.gens:
        if g.name in gen_assign:
            images[g.name] = _coerce_element(target.alg, gen_assign[g.name])
        else:
            images[g.name] = target.gen(g.name)
    return DGMorphism(source, target, bm, images)


def identity_morphism(B: DGPresentation) -> DGMorphism:
    return dg_morphism(B, B)


# -- flattening ----------------------------------------------------------------

def _exponent_caps(gens: Sequence[Generator], n: int, aux_max):
    """Per-generator exponent caps making degree-n monomials finite."""
    caps = []
    evens0 = [g for g in gens if not g.odd and g.aux == 0]
    pos = any(g.degree > 0 for g in evens0)
    neg = any(g.degree < 0 for g in evens0)
    if pos and neg:
        raise EnumerationLimitError("even generators of both signs without aux grading: "
                                    "infinitely many monomials per degree")
    uses_aux = any(g.aux > 0 for g in gens)
    if uses_aux and aux_max is None:
        raise EnumerationLimitError("presentation needs an enumeration bound on the aux grading")

    def aux_cap(g):
        return aux_max // g.aux if g.aux > 0 else None

    lo = hi = 0
    for g in gens:
        if g.odd:
            k = 1 if g.aux == 0 or aux_max is None or g.aux <= aux_max else 0
        elif g.aux > 0:
            k = aux_cap(g)
        else:
            continue
        if g.degree < 0:
            lo += g.degree * k
        else:
            hi += g.degree * k
    for g in gens:
        if g.odd:
            caps.append(1 if g.aux == 0 or g.aux <= (aux_max or 0) else 0)
        elif g.aux > 0:
            caps.append(aux_cap(g))
        elif g.degree > 0:
            caps.append(max(0, (n - lo) // g.degree))
        else:
            caps.append(max(0, (hi - n) // (-g.degree)))
    return caps


def enumerate_monomials(alg: GCAlgebra, n: int, aux_max=None, aux_offset: int = 0):
    """Canonical monomials of degree ``n`` with total aux at most ``aux_max - aux_offset``."""
    gens = alg.gens
    budget = None if aux_max is None else aux_max - aux_offset
    if budget is not None and budget < 0:
        return []
    caps = _exponent_caps(gens, n, budget)
    out = []
    m = len(gens)
    cur = [0] * m

    def rec(i, deg, aux):
        if i == m:
            if deg == n:
                out.append(tuple(cur))
                if len(out) > MAX_RANK:
                    raise EnumerationLimitError(f"more than {MAX_RANK} monomials in degree {n}")
            return
        g = gens[i]
        for k in range(caps[i] + 1):
            a = aux + k * g.aux
            if budget is not None and a > budget:
                break
            cur[i] = k
            rec(i + 1, deg + k * g.degree, a)
        cur[i] = 0

    rec(0, 0, 0)
    out.sort(reverse=True)
    return out


def is_finite_type(alg: GCAlgebra) -> bool:
    """True when every degree slice is finite without an aux bound."""
    return not any(g.aux > 0 for g in alg.gens)


def flatten_range(B: DGPresentation, lo: int, hi: int, bound: int | None = 8):
    """Linear complex of free base-modules for degrees ``lo..hi``."""
    from .complexes import LinearComplex

    alg = B.alg
    aux_max = None if is_finite_type(alg) else bound
    bases = {k: enumerate_monomials(alg, k, aux_max) for k in range(lo, hi + 1)}
    weights = {k: [alg.mono_weight(e) for e in bases[k]] for k in bases}
    labels = {k: [alg.format_mono(e) or "1" for e in bases[k]] for k in bases}
    diff = {}
    zero = B.base.zero()
    for k in range(lo + 1, hi + 1):
        index = {e: i for i, e in enumerate(bases[k - 1])}
        cols = []
        for e in bases[k]:
            col = [zero] * len(bases[k - 1])
            for e2, c in B.d_mono(e).terms.items():
                if e2 not in index:
                    raise EnumerationLimitError(f"differential leaves the enumerated slice at {e2}")
                col[index[e2]] = c
            cols.append(tuple(col))
        diff[k] = cols
    return LinearComplex(B.base, lo, hi, labels, weights, diff, {},
                         window=None if aux_max is None else aux_max, keys=bases)


def flatten(B: DGPresentation, n: int, bound: int | None = 8):
    """Slice at degrees ``n+1, n, n-1`` with the two differentials between them."""
    return flatten_range(B, n - 1, n + 1, bound)


def _section(base_map: RingMap):
    """Section of a base map hitting every target variable, and its kernel."""
    src, tgt = base_map.source, base_map.target
    chosen = {}
    for i, img in enumerate(base_map.images):
        if len(img.terms) == 1:
            (e, c), = img.terms.items()
            if c == 1 and sum(e) == 1:
                j = e.index(1)
                chosen.setdefault(j, i)
    if len(chosen) != tgt.nvars:
        raise DGError("base map does not hit every target variable; supply a retraction")
    sec = RingMap(tgt, src, tuple(src.var(src.names[chosen[j]]) for j in range(tgt.nvars)))
    kernel = []
    for i, img in enumerate(base_map.images):
        r = src.var(src.names[i]) - sec(img)
        if r:
            kernel.append(r)
    return sec, kernel


def chain_map(phi: DGMorphism, lo: int, hi: int, bound: int | None = 8):
    """Flatten ``phi`` to a chain map of complexes over the source base ring.

    The target's free modules become quotients ``(P_S/J)^r`` where ``J`` is the
    kernel of the (surjective) base map.
    """
    from .complexes import ChainMap, LinearComplex

    S = flatten_range(phi.source, lo, hi, bound)
    T0 = flatten_range(phi.target, lo, hi, bound)
    sec, J = _section(phi.base_map)
    P = phi.source.base
    T_diff = {k: [tuple(sec(p) for p in col) for col in cols] for k, cols in T0.diff.items()}
    zero = P.zero()
    T_rel = {}
    for k in range(lo, hi + 1):
        r = len(T0.keys[k])
        rels = []
        for j in range(r):
            for g in J:
                v = [zero] * r
                v[j] = g
                rels.append(tuple(v))
        T_rel[k] = rels
    T = LinearComplex(P, lo, hi, T0.labels, T0.weights, T_diff, T_rel, window=T0.window, keys=T0.keys)
    maps = {}
    for k in range(lo, hi + 1):
        index = {e: i for i, e in enumerate(T0.keys[k])}
        cols = []
        for e in S.keys[k]:
            img = phi.apply_mono(e)
            col = [zero] * len(T0.keys[k])
            for e2, c in img.terms.items():
                if e2 not in index:
                    raise EnumerationLimitError("morphism leaves the enumerated slice")
                col[index[e2]] = sec(c)
            cols.append(tuple(col))
        maps[k] = cols
    return ChainMap(S, T, maps)


def cone(phi, lo: int | None = None, hi: int | None = None, bound: int | None = 8):
    """Mapping cone of a morphism (flattened on ``lo-1..hi``) or of a ChainMap."""
    from .complexes import ChainMap, mapping_cone

    if isinstance(phi, ChainMap):
        return mapping_cone(phi)
    return mapping_cone(chain_map(phi, lo - 1, hi, bound))
