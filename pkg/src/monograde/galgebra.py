"""The truncated graded-commutative coordinate algebra.

Elements are finite sums  coefficient * generator-word  with `BasePoly`
coefficients, kept in a normal form: generator words sorted into canonical
order with the commutation sign picked up per transposition, squares of
odd generators annihilated, and words longer than the truncation order
dropped (with an audit flag recording that a drop happened).

The commutation sign between homogeneous pieces of degrees i and j is
(-1)**parity(i*j), using the grading monoid's product; this is not in
general the product of the two parities, and elements of even degree may
genuinely anticommute with odd ones in multi-component gradings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .basecoeff import BasePoly
from .grading import GradingSpec


class AlgebraError(ValueError):
    """Inconsistent algebra data (mixed specs, bad generator references)."""


class NotInvertible(AlgebraError):
    """The element's body is not a unit, so no inverse exists."""


@dataclass(frozen=True)
class Generator:
    """One coordinate generator: a nonzero degree plus an index within it."""

    degree: object
    index: int
    name: str | None = None


class GeneratorSpec:
    """Shape of a coordinate algebra: base variables, generators, truncation.

    Generators are stored in canonical order (by degree under the grading's
    total order, then by index), which fixes the normal form of every word.
    """

    def __init__(self, grading: GradingSpec, nvars: int, degrees,
                 truncation: int = 6, names=None):
        if not grading.has_mul:
            raise AlgebraError("grading %r has no product; commutation signs "
                               "would be undefined" % grading.kind)
        if nvars < 0:
            raise AlgebraError("nvars must be >= 0")
        if truncation < 1:
            raise AlgebraError("truncation order must be >= 1")
        self.grading = grading
        self.nvars = nvars
        self.truncation = truncation
        degrees = [grading.check_element(d) for d in degrees]
        names = list(names) if names is not None else [None] * len(degrees)
        if len(names) != len(degrees):
            raise AlgebraError("need one name entry per generator")
        zero = grading.zero()
        counter: dict = {}
        gens = []
        for d, nm in zip(degrees, names):
            if d == zero:
                raise AlgebraError("generators must have nonzero degree")
            if nm is not None and (nm == "th" or re.fullmatch(r"x\d+", nm)):
                raise AlgebraError("generator name %r is reserved syntax" % nm)
            if grading.parity(grading.mul(d, d)) != grading.parity(d):
                raise AlgebraError("degree %s squares to the opposite parity; "
                                   "no consistent exponent range exists"
                                   % grading.format_element(d))
            counter[d] = counter.get(d, 0) + 1
            gens.append(Generator(d, counter[d], nm))
        gens.sort(key=lambda g: (grading.sort_key(g.degree), g.index))
        self.generators = tuple(gens)
        self.parities = tuple(grading.parity(g.degree) for g in gens)
        self.swap_bits = tuple(
            tuple(grading.parity(grading.mul(g.degree, h.degree)) for h in gens)
            for g in gens)
        self._by_label = {(g.degree, g.index): pos for pos, g in enumerate(gens)}
        self._by_name = {g.name: pos for pos, g in enumerate(gens) if g.name}
        if len(self._by_name) != sum(1 for g in gens if g.name):
            raise AlgebraError("generator names must be unique")
        self._word_cache: dict = {}

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def position_of(self, degree, index: int) -> int:
        degree = self.grading.check_element(degree)
        pos = self._by_label.get((degree, index))
        if pos is None:
            raise AlgebraError("no generator of degree %s with index %d"
                               % (self.grading.format_element(degree), index))
        return pos

    def position_of_name(self, name: str):
        return self._by_name.get(name)

    def word_degree(self, beta):
        total = self.grading.zero()
        for g, e in enumerate(beta):
            for _ in range(e):
                total = self.grading.add(total, self.generators[g].degree)
        return total

    def word_key(self, beta):
        """Sort key for canonical term order: word length, then occurrences."""
        occ = []
        for g, e in enumerate(beta):
            occ.extend([g] * e)
        return (len(occ), tuple(occ))

    def words_up_to(self, max_len: int):
        """All admissible exponent vectors of word length <= max_len."""
        max_len = min(max_len, self.truncation)
        cached = self._word_cache.get(max_len)
        if cached is not None:
            return cached
        words = []

        def walk(pos, remaining, prefix):
            if pos == self.ngens:
                words.append(tuple(prefix))
                return
            cap = min(remaining, 1 if self.parities[pos] else remaining)
            for e in range(cap + 1):
                prefix.append(e)
                walk(pos + 1, remaining - e, prefix)
                prefix.pop()

        walk(0, max_len, [])
        words.sort(key=self.word_key)
        self._word_cache[max_len] = tuple(words)
        return self._word_cache[max_len]

    def _key(self):
        return (self.grading, self.nvars, self.truncation,
                tuple((g.degree, g.index) for g in self.generators))

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, GeneratorSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "GeneratorSpec(%r, nvars=%d, degrees=%r, truncation=%d)" % (
            self.grading, self.nvars,
            [g.degree for g in self.generators], self.truncation)


def _sorted_word(spec: GeneratorSpec, word):
    """Insertion-sort a raw occurrence word, tracking the commutation sign.

    Returns (sign_bit, exponent_vector) or None when an odd generator would
    be squared.
    """
    arr = list(word)
    sign = 0
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            sign ^= spec.swap_bits[arr[j - 1]][arr[j]]
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            j -= 1
    beta = [0] * spec.ngens
    for g in arr:
        beta[g] += 1
        if beta[g] > 1 and spec.parities[g]:
            return None
    return sign, tuple(beta)


def _word_product(spec: GeneratorSpec, beta, gamma):
    """Sign bit and exponent vector of word(beta) * word(gamma), or None
    when an odd generator gets repeated."""
    sign = 0
    out = []
    swap = spec.swap_bits
    parities = spec.parities
    for g, (bg, cg) in enumerate(zip(beta, gamma)):
        e = bg + cg
        if e > 1 and parities[g]:
            return None
        out.append(e)
        if cg:
            # each occurrence of g from the right factor crosses every
            # occurrence of a strictly later generator in the left factor
            for h in range(g + 1, spec.ngens):
                if beta[h]:
                    sign ^= (swap[h][g] * beta[h] * cg) & 1
    return sign, tuple(out)


class GradedElement:
    """A normal-form element of the truncated coordinate algebra."""

    __slots__ = ("spec", "terms", "truncated")

    def __init__(self, spec: GeneratorSpec, terms=None, truncated: bool = False):
        object.__setattr__(self, "spec", spec)
        clean = {}
        if terms:
            for beta, poly in (terms.items() if isinstance(terms, dict) else terms):
                beta = tuple(beta)
                if len(beta) != spec.ngens:
                    raise AlgebraError("exponent vector has wrong length")
                if not isinstance(poly, BasePoly):
                    poly = BasePoly.const(spec.nvars, poly)
                if poly.nvars != spec.nvars:
                    raise AlgebraError("coefficient has %d variables, expected %d"
                                       % (poly.nvars, spec.nvars))
                for g, e in enumerate(beta):
                    if e < 0 or (e > 1 and spec.parities[g]):
                        raise AlgebraError("bad exponent %d for generator %d" % (e, g))
                if poly.is_zero():
                    continue
                if sum(beta) > spec.truncation:
                    truncated = True
                    continue
                prev = clean.get(beta)
                total = poly if prev is None else prev + poly
                if total.is_zero():
                    clean.pop(beta, None)
                else:
                    clean[beta] = total
        ordered = dict(sorted(clean.items(), key=lambda kv: spec.word_key(kv[0])))
        object.__setattr__(self, "terms", ordered)
        object.__setattr__(self, "truncated", bool(truncated))

    def __setattr__(self, name, value):
        raise AttributeError("GradedElement is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, spec: GeneratorSpec) -> "GradedElement":
        return cls(spec)

    @classmethod
    def one(cls, spec: GeneratorSpec) -> "GradedElement":
        return cls.scalar(spec, 1)

    @classmethod
    def scalar(cls, spec: GeneratorSpec, value) -> "GradedElement":
        if not isinstance(value, BasePoly):
            value = BasePoly.const(spec.nvars, value)
        return cls(spec, {(0,) * spec.ngens: value})

    @classmethod
    def variable(cls, spec: GeneratorSpec, mu: int) -> "GradedElement":
        return cls.scalar(spec, BasePoly.var(spec.nvars, mu))

    @classmethod
    def gen(cls, spec: GeneratorSpec, pos: int) -> "GradedElement":
        if not 0 <= pos < spec.ngens:
            raise AlgebraError("generator position %d out of range" % pos)
        beta = tuple(1 if g == pos else 0 for g in range(spec.ngens))
        return cls(spec, {beta: BasePoly.const(spec.nvars, 1)})

    @classmethod
    def from_raw_terms(cls, spec: GeneratorSpec, raw_terms) -> "GradedElement":
        """Normalize a sum of (coefficient, occurrence word) pairs where the
        words may list generator positions in any order."""
        acc = []
        for poly, word in raw_terms:
            sw = _sorted_word(spec, word)
            if sw is None:
                continue
            sign, beta = sw
            if not isinstance(poly, BasePoly):
                poly = BasePoly.const(spec.nvars, poly)
            acc.append((beta, -poly if sign else poly))
        return cls(spec, acc)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GradedElement):
            if other.spec != self.spec:
                raise AlgebraError("elements live over different generator specs")
            return other
        if isinstance(other, (int, Fraction, BasePoly)):
            return GradedElement.scalar(self.spec, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        items = list(self.terms.items()) + list(other.terms.items())
        return GradedElement(self.spec, items,
                             truncated=self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.spec, {b: -p for b, p in self.terms.items()},
                             truncated=self.truncated)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        spec = self.spec
        N = spec.truncation
        truncated = self.truncated or other.truncated
        acc: dict = {}
        for b1, p1 in self.terms.items():
            w1 = sum(b1)
            for b2, p2 in other.terms.items():
                sw = _word_product(spec, b1, b2)
                if sw is None:
                    continue
                if w1 + sum(b2) > N:
                    truncated = True
                    continue
                sign, beta = sw
                prod = p1 * p2
                if sign:
                    prod = -prod
                prev = acc.get(beta)
                total = prod if prev is None else prev + prod
                if total.is_zero():
                    acc.pop(beta, None)
                else:
                    acc[beta] = total
        return GradedElement(spec, acc, truncated=truncated)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a natural number")
        result = GradedElement.one(self.spec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self._scale(Fraction(1) / Fraction(scalar))

    def _scale(self, c: Fraction):
        return GradedElement(self.spec, {b: p * c for b, p in self.terms.items()},
                             truncated=self.truncated)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, BasePoly)):
            other = GradedElement.scalar(self.spec, other)
        return (isinstance(other, GradedElement) and self.spec == other.spec
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.spec, tuple(self.terms.items())))

    def __repr__(self):
        from .expr import render_element
        return "GradedElement(%r)" % render_element(self)

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure maps ------------------------------------------------------

    def body(self) -> BasePoly:
        """Coefficient of the empty word: the projection killing every
        generator.  A ring homomorphism onto the base polynomials."""
        empty = (0,) * self.spec.ngens
        return self.terms.get(empty, BasePoly.zero(self.spec.nvars))

    def eval_at(self, point) -> Fraction:
        """Scalar value at a base point: evaluate the body, kill the rest."""
        return self.body().eval(point)

    def invert(self) -> "GradedElement":
        """Multiplicative inverse, when the body is a nonzero constant.

        Uses the terminating geometric series: with f = c + f' and f' of
        word length >= 1, each power of f' climbs one filtration step, so
        the series stops at the truncation order.
        """
        b = self.body()
        if not b.is_constant() or b.is_zero():
            raise NotInvertible("body %r is not a nonzero constant" % (b,))
        c = b.constant_value()
        cinv = Fraction(1) / c
        u = (self - GradedElement.scalar(self.spec, c))._scale(cinv)
        out = GradedElement.one(self.spec)
        power = GradedElement.one(self.spec)
        for k in range(1, self.spec.truncation + 1):
            power = power * u
            if power.is_zero():
                break
            out = out + (-power if k % 2 else power)
        return out._scale(cinv)

    # -- grading -----------------------------------------------------------

    def homogeneous_part(self, i) -> "GradedElement":
        i = self.spec.grading.check_element(i)
        picked = {b: p for b, p in self.terms.items()
                  if self.spec.word_degree(b) == i}
        return GradedElement(self.spec, picked, truncated=self.truncated)

    def degrees(self):
        return {self.spec.word_degree(b) for b in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """The common degree of all terms; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise AlgebraError("element is not homogeneous")
        return next(iter(ds))

    # -- jets at a base point -------------------------------------------------

    def taylor_truncate(self, point, k: int) -> "GradedElement":
        """The polynomial jet of joint order k at the point: total degree in
        the shifted variables (x - p) and the generators together is <= k,
        and the remainder sits in the (k+1)-st power of the point's ideal."""
        if k < 0:
            raise ValueError("jet order must be >= 0")
        point = [Fraction(c) for c in point]
        neg = [-c for c in point]
        acc = {}
        for beta, poly in self.terms.items():
            w = sum(beta)
            if w > k:
                continue
            shifted = poly.taylor_shift(point)
            kept = {e: c for e, c in shifted.terms.items() if sum(e) <= k - w}
            if not kept:
                continue
            acc[beta] = BasePoly(self.spec.nvars, kept).taylor_shift(neg)
        return GradedElement(self.spec, acc, truncated=self.truncated)

    def adic_order(self, point):
        """Smallest joint order of any term at the point (word length plus
        vanishing order of the coefficient); None for the zero element."""
        point = [Fraction(c) for c in point]
        best = None
        for beta, poly in self.terms.items():
            o = sum(beta) + poly.taylor_shift(point).min_degree()
            if best is None or o < best:
                best = o
        return best
