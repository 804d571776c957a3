"""Shared builders and independent oracles for the test suite.

The oracles here deliberately recompute results along different routes from
the library code (inversion-count signs instead of transposition sorting,
raw-word concatenation instead of exponent merging, explicit Taylor sums
instead of direct substitution), so agreement is evidence rather than
tautology.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from monograde import (BasePoly, DomainSpec, Derivation, GeneratorSpec,
                       GradedElement, IntPower, NatPower)
from monograde.grading import KGroupElement


def nat1_spec(nvars=1, degrees=(1, 1), truncation=6, names=None):
    return GeneratorSpec(NatPower(1), nvars, list(degrees),
                         truncation=truncation, names=names)


def int1_spec(nvars=1, degrees=(1, -1), truncation=6, names=None):
    return GeneratorSpec(IntPower(1), nvars, list(degrees),
                         truncation=truncation, names=names)


def qk_model(truncation=6):
    """The four-coordinate bigraded model: one base variable x and odd
    generators theta (0,1), psi (1,0) plus the even phi (1,1), carrying
    Q: x->theta, psi->phi; K: theta->psi; d: x->psi, theta->phi."""
    spec = GeneratorSpec(NatPower(2), 1, [(0, 1), (1, 0), (1, 1)],
                         truncation=truncation, names=["theta", "psi", "phi"])
    dom = DomainSpec(spec)
    zero = GradedElement.zero(spec)
    theta = GradedElement.gen(spec, spec.position_of((0, 1), 1))
    psi = GradedElement.gen(spec, spec.position_of((1, 0), 1))
    phi = GradedElement.gen(spec, spec.position_of((1, 1), 1))
    Q = Derivation(dom, KGroupElement((0, 1), (0, 0)), [theta], [zero, phi, zero])
    K = Derivation(dom, KGroupElement((1, 0), (0, 1)), [zero], [psi, zero, zero])
    d = Derivation(dom, KGroupElement((1, 0), (0, 0)), [psi], [phi, zero, zero])
    return spec, dom, (theta, psi, phi), (Q, K, d)


# -- independent oracles -----------------------------------------------------

def rich_int_spec(truncation=5):
    """Integer grading with two odd generators of degree +1 and two of -1,
    so that nonempty words of degree zero exist (products like th(1)th(-1))."""
    return GeneratorSpec(IntPower(1), 1, [1, 1, -1, -1], truncation=truncation)


def random_degree0_image(rng, spec, mu):
    """x_mu plus a nilpotent degree-zero tail."""
    from monograde.sampling import random_poly
    zero = spec.grading.zero()
    pool = [w for w in spec.words_up_to(3)
            if sum(w) > 0 and spec.word_degree(w) == zero]
    img = GradedElement.variable(spec, mu)
    for _ in range(rng.randint(0, 2)):
        w = pool[rng.randrange(len(pool))]
        img = img + GradedElement(spec, {w: random_poly(rng, spec.nvars,
                                                        max_degree=1)})
    return img


def random_gen_image(rng, spec, degree):
    """A nonzero homogeneous element of the given degree."""
    from monograde.sampling import random_poly
    pool = [w for w in spec.words_up_to(3) if spec.word_degree(w) == degree
            and sum(w) > 0]
    items = [(pool[rng.randrange(len(pool))],
              random_poly(rng, spec.nvars, max_degree=1))
             for _ in range(rng.randint(1, 2))]
    e = GradedElement(spec, items)
    return e if not e.is_zero() else GradedElement(spec, {pool[0]: 1})


def random_endomorphism(rng, spec):
    """A random self-map of the unbounded domain over spec."""
    from monograde import Morphism
    dom = DomainSpec(spec)
    base = [random_degree0_image(rng, spec, mu + 1) for mu in range(spec.nvars)]
    gens = [random_gen_image(rng, spec, g.degree) for g in spec.generators]
    return Morphism(dom, dom, base, gens)


def invert_rational_matrix(m):
    """Exact inverse via Gauss-Jordan; None for a singular matrix."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def random_invertible_matrix(rng, n):
    while True:
        m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)]
             for _ in range(n)]
        inv = invert_rational_matrix(m)
        if inv is not None:
            return m, inv


def inversion_sign(spec: GeneratorSpec, word) -> int:
    """Sign of sorting a raw occurrence word, via inversion pairs rather
    than explicit adjacent transpositions.  None when an odd generator
    repeats (the word is zero)."""
    seen = {}
    for g in word:
        seen[g] = seen.get(g, 0) + 1
        if seen[g] > 1 and spec.parities[g]:
            return None
    bit = 0
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i] > word[j]:
                bit ^= spec.swap_bits[word[i]][word[j]]
    return bit


def occurrences(beta):
    out = []
    for g, e in enumerate(beta):
        out.extend([g] * e)
    return out


def mul_oracle(a: GradedElement, b: GradedElement) -> GradedElement:
    """Product by concatenating raw occurrence words and renormalizing."""
    raw = []
    for b1, p1 in a.terms.items():
        for b2, p2 in b.terms.items():
            raw.append((p1 * p2, occurrences(b1) + occurrences(b2)))
    return GradedElement.from_raw_terms(a.spec, raw)


def taylor_sum_oracle(g: BasePoly, images, spec: GeneratorSpec) -> GradedElement:
    """Literal nested-loop Taylor sum: partial derivatives composed with the
    image bodies, times powers of the nilpotent shifts, over factorials."""
    n = g.nvars
    bodies = [y.body() for y in images]
    shifts = [y - GradedElement.scalar(spec, bodies[mu])
              for mu, y in enumerate(images)]
    caps = [g.degree_in(mu + 1) for mu in range(n)]
    out = GradedElement.zero(spec)
    idx = [0] * n

    def walk(mu):
        nonlocal out
        if mu == n:
            deriv = g
            for nu in range(n):
                for _ in range(idx[nu]):
                    deriv = deriv.partial(nu + 1)
            if deriv.is_zero():
                return
            coeff = deriv.compose(bodies)
            term = GradedElement.scalar(spec, coeff)
            for nu in range(n):
                term = term * shifts[nu] ** idx[nu]
            scale = Fraction(1)
            for nu in range(n):
                scale /= factorial(idx[nu])
            out = out + term._scale(scale)
            return
        for k in range(caps[mu] + 1):
            idx[mu] = k
            walk(mu + 1)
        idx[mu] = 0

    walk(0)
    return out
