"""Seeded random generators for polynomials, elements, and sample points.

Every randomized check in the library routes its draws through an explicit
`random.Random` instance, so a (session, seed) pair fully determines each
report byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .basecoeff import BasePoly
from .galgebra import GeneratorSpec, GradedElement


def random_rational(rng: Random, span: int = 4, max_den: int = 3) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, max_den)
    return Fraction(num, den)


def random_poly(rng: Random, nvars: int, max_terms: int = 3,
                max_degree: int = 2, span: int = 4) -> BasePoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_degree) for _ in range(nvars))
        if sum(exps) > max_degree:
            exps = tuple(0 for _ in exps)
        coeff = random_rational(rng, span)
        if coeff:
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
    return BasePoly(nvars, terms)


def random_word(rng: Random, spec: GeneratorSpec, max_len: int = 3):
    words = spec.words_up_to(max_len)
    return words[rng.randrange(len(words))]


def random_element(rng: Random, spec: GeneratorSpec, max_terms: int = 3,
                   max_word: int = 3, max_degree: int = 2) -> GradedElement:
    items = []
    for _ in range(rng.randint(1, max_terms)):
        items.append((random_word(rng, spec, max_word),
                      random_poly(rng, spec.nvars, max_degree=max_degree)))
    return GradedElement(spec, items)


def random_homogeneous(rng: Random, spec: GeneratorSpec, max_terms: int = 2,
                       max_word: int = 3, max_degree: int = 2) -> GradedElement:
    """A random element all of whose words share one grading degree."""
    pick = random_word(rng, spec, max_word)
    target = spec.word_degree(pick)
    pool = [w for w in spec.words_up_to(max_word) if spec.word_degree(w) == target]
    items = []
    for _ in range(rng.randint(1, max_terms)):
        items.append((pool[rng.randrange(len(pool))],
                      random_poly(rng, spec.nvars, max_degree=max_degree)))
    return GradedElement(spec, items)


def random_point_in(rng: Random, box, density: int = 8):
    """A rational point inside an axis-aligned box; None bounds are open."""
    point = []
    for lo, hi in box:
        if lo is None and hi is None:
            point.append(Fraction(rng.randint(-density, density), rng.randint(1, 3)))
        elif lo is None:
            point.append(Fraction(hi) - Fraction(rng.randint(0, 3 * density), density))
        elif hi is None:
            point.append(Fraction(lo) + Fraction(rng.randint(0, 3 * density), density))
        else:
            t = Fraction(rng.randint(0, density), density)
            point.append(Fraction(lo) + (Fraction(hi) - Fraction(lo)) * t)
    return point


def grid_points(box, per_axis: int = 3):
    """A small deterministic rational grid inside a box."""
    axes = []
    for lo, hi in box:
        if lo is None and hi is None:
            axes.append([Fraction(-1), Fraction(0), Fraction(1)][:per_axis])
        elif lo is None:
            hi = Fraction(hi)
            axes.append([hi - 2, hi - 1, hi][:per_axis])
        elif hi is None:
            lo = Fraction(lo)
            axes.append([lo, lo + 1, lo + 2][:per_axis])
        else:
            lo, hi = Fraction(lo), Fraction(hi)
            mid = (lo + hi) / 2
            pts = [lo, mid, hi]
            axes.append(sorted(set(pts))[:per_axis])
    points = [[]]
    for axis in axes:
        points = [p + [c] for p in points for c in axis]
    return points
