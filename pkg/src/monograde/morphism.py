"""Graded coordinate domains and the morphisms between them.

A morphism is given entirely by coordinate images: one degree-0 element per
target base coordinate and one homogeneous element per target generator.
Pulling back an arbitrary element substitutes those images, extending base
coefficients through `continuation`.  Underlying point maps, homomorphism
property runs, atlas cocycle checking, and the split-model constructor from
graded vector-bundle data all live here.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .basecoeff import BasePoly
from .galgebra import AlgebraError, GeneratorSpec, GradedElement
from .reporting import CheckReport
from .sampling import grid_points, random_point_in

DEFAULT_RANGE_SAMPLES = 12


class MorphismError(ValueError):
    """Invalid morphism or atlas data: degree violations, spec mismatches,
    or sampled range-condition failures."""


class RangeViolation(MorphismError):
    """A sampled base point left the box it was required to land in."""


# ---------------------------------------------------------------------------
# boxes and domains
# ---------------------------------------------------------------------------

def _check_box(box, nvars: int):
    if box is None:
        return tuple((None, None) for _ in range(nvars))
    box = tuple((None if lo is None else Fraction(lo),
                 None if hi is None else Fraction(hi)) for lo, hi in box)
    if len(box) != nvars:
        raise MorphismError("box has %d intervals, expected %d" % (len(box), nvars))
    for lo, hi in box:
        if lo is not None and hi is not None and lo > hi:
            raise MorphismError("empty interval [%s, %s]" % (lo, hi))
    return box


def box_contains(box, point) -> bool:
    for (lo, hi), c in zip(box, point):
        if lo is not None and c < lo:
            return False
        if hi is not None and c > hi:
            return False
    return True


def intersect_boxes(a, b):
    """Componentwise intersection; None if some interval comes out empty."""
    out = []
    for (lo1, hi1), (lo2, hi2) in zip(a, b):
        lo = lo1 if lo2 is None else (lo2 if lo1 is None else max(lo1, lo2))
        hi = hi1 if hi2 is None else (hi2 if hi1 is None else min(hi1, hi2))
        if lo is not None and hi is not None and lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def box_within(inner, outer) -> bool:
    for (li, hi_), (lo, ho) in zip(inner, outer):
        if lo is not None and (li is None or li < lo):
            return False
        if ho is not None and (hi_ is None or hi_ > ho):
            return False
    return True


class DomainSpec:
    """A coordinate patch: a generator spec plus an axis-aligned rational box
    (or unbounded axes) for the base coordinates."""

    def __init__(self, genspec: GeneratorSpec, box=None):
        self.genspec = genspec
        self.box = _check_box(box, genspec.nvars)

    @property
    def n(self) -> int:
        return self.genspec.nvars

    def sample_points(self, count: int, seed: int = 0):
        pts = grid_points(self.box)
        rng = Random(seed)
        pts += [random_point_in(rng, self.box) for _ in range(count)]
        return pts

    def __eq__(self, other):
        return (isinstance(other, DomainSpec) and self.genspec == other.genspec
                and self.box == other.box)

    def __hash__(self):
        return hash((self.genspec, self.box))

    def __repr__(self):
        return "DomainSpec(n=%d, ngens=%d, box=%r)" % (
            self.n, self.genspec.ngens, self.box)


# ---------------------------------------------------------------------------
# analytic continuation of base coefficients
# ---------------------------------------------------------------------------

def continuation(g: BasePoly, images, spec: GeneratorSpec | None = None) -> GradedElement:
    """Extend the base polynomial g to graded arguments.

    Each image must be a degree-0 element; the result is g evaluated on
    them, which for polynomial g coincides with the Taylor expansion around
    the images' bodies (the nilpotent shifts terminate on their own).  With
    generator-free images this is plain polynomial composition.
    """
    images = list(images)
    if len(images) != g.nvars:
        raise MorphismError("need %d images, got %d" % (g.nvars, len(images)))
    if spec is None:
        if not images:
            raise MorphismError("cannot infer the target algebra of a constant")
        spec = images[0].spec
    zero_deg = spec.grading.zero()
    for mu, y in enumerate(images):
        if y.spec != spec:
            raise MorphismError("images live over different generator specs")
        if not y.is_homogeneous() or (not y.is_zero() and y.degree() != zero_deg):
            raise MorphismError("image of x%d is not of degree zero" % (mu + 1))
    out = GradedElement.zero(spec)
    powers: dict = {}
    for exps, coeff in g.terms.items():
        term = GradedElement.scalar(spec, coeff)
        for mu, e in enumerate(exps):
            if not e:
                continue
            key = (mu, e)
            if key not in powers:
                powers[key] = images[mu] ** e
            term = term * powers[key]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------

class Morphism:
    """A morphism of graded domains, stored as its coordinate images.

    Degree constraints are enforced at construction; the requirement that
    the underlying point map send the source box into the target box is
    checked on a deterministic grid plus seeded random sample points, and
    a violation is a hard error.
    """

    def __init__(self, source: DomainSpec, target: DomainSpec, base_images,
                 gen_images, samples: int = DEFAULT_RANGE_SAMPLES, seed: int = 0):
        self.source = source
        self.target = target
        base_images = tuple(base_images)
        gen_images = tuple(gen_images)
        src = source.genspec
        tgt = target.genspec
        if len(base_images) != tgt.nvars:
            raise MorphismError("need %d base images, got %d"
                                % (tgt.nvars, len(base_images)))
        if len(gen_images) != tgt.ngens:
            raise MorphismError("need %d generator images, got %d"
                                % (tgt.ngens, len(gen_images)))
        if src.grading != tgt.grading:
            raise MorphismError("source and target use different gradings")
        zero_deg = src.grading.zero()
        for mu, y in enumerate(base_images):
            if y.spec != src:
                raise MorphismError("base image %d is not over the source" % (mu + 1))
            if not y.is_homogeneous() or (not y.is_zero() and y.degree() != zero_deg):
                raise MorphismError("image of x%d must be homogeneous of degree zero"
                                    % (mu + 1))
        for pos, eta in enumerate(gen_images):
            if eta.spec != src:
                raise MorphismError("generator image %d is not over the source" % pos)
            want = tgt.generators[pos].degree
            # degrees of source and target live in the same grading monoid
            want = src.grading.check_element(want)
            if not eta.is_homogeneous() or (not eta.is_zero() and eta.degree() != want):
                raise MorphismError(
                    "image of generator %d must be homogeneous of degree %s"
                    % (pos, src.grading.format_element(want)))
        self.base_images = base_images
        self.gen_images = gen_images
        self._check_range(samples, seed)

    def _check_range(self, samples: int, seed: int):
        bodies = [y.body() for y in self.base_images]
        for p in self.source.sample_points(samples, seed):
            q = [b.eval(p) for b in bodies]
            if not box_contains(self.target.box, q):
                raise RangeViolation(
                    "range condition fails: point %s maps to %s outside the target box"
                    % ([str(c) for c in p], [str(c) for c in q]))

    @classmethod
    def identity(cls, domain: DomainSpec) -> "Morphism":
        spec = domain.genspec
        return cls(domain, domain,
                   [GradedElement.variable(spec, mu + 1) for mu in range(spec.nvars)],
                   [GradedElement.gen(spec, pos) for pos in range(spec.ngens)])

    def restrict(self, box) -> "Morphism":
        return Morphism(DomainSpec(self.source.genspec, box), self.target,
                        self.base_images, self.gen_images)

    def pullback(self, f: GradedElement) -> GradedElement:
        """Substitute coordinate images for coordinates throughout f."""
        if f.spec != self.target.genspec:
            raise MorphismError("element does not live over the morphism's target")
        src = self.source.genspec
        out = GradedElement.zero(src)
        for beta, poly in f.terms.items():
            term = continuation(poly, self.base_images, src)
            for pos, e in enumerate(beta):
                if e:
                    term = term * self.gen_images[pos] ** e
            out = out + term
        return out

    def underlying_map(self):
        """The point map between the base boxes: the bodies of the base images."""
        return [y.body() for y in self.base_images]

    def same_images(self, other: "Morphism") -> bool:
        return (self.base_images == other.base_images
                and self.gen_images == other.gen_images)

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.source == other.source
                and self.target == other.target and self.same_images(other))

    def __repr__(self):
        return "Morphism(%r -> %r)" % (self.source, self.target)


def compose(first: Morphism, second: Morphism,
            samples: int = DEFAULT_RANGE_SAMPLES, seed: int = 0) -> Morphism:
    """The composite domain map running first, then second; its pullback is
    the pullback of second followed by the pullback of first."""
    if first.target.genspec != second.source.genspec:
        raise MorphismError("cannot compose: middle generator specs differ")
    bodies = [y.body() for y in first.base_images]
    for p in first.source.sample_points(samples, seed):
        q = [b.eval(p) for b in bodies]
        if not box_contains(second.source.box, q):
            raise RangeViolation(
                "cannot compose: point %s leaves the second source box at %s"
                % ([str(c) for c in p], [str(c) for c in q]))
    return Morphism(first.source, second.target,
                    [first.pullback(y) for y in second.base_images],
                    [first.pullback(eta) for eta in second.gen_images],
                    samples=samples, seed=seed)


def underlying_map(m: Morphism):
    return m.underlying_map()


def check_homomorphism(m: Morphism, samples: int = 100, seed: int = 0) -> CheckReport:
    """Property run: the pullback is a unital degree-preserving ring map."""
    from .expr import render_element
    from .sampling import random_element, random_homogeneous

    rng = Random(seed)
    tgt = m.target.genspec
    rep = CheckReport("homomorphism check")
    one_t = GradedElement.one(tgt)
    one_s = GradedElement.one(m.source.genspec)
    if m.pullback(one_t) == one_s:
        rep.ok("unit")
    else:
        rep.fail("unit", render_element(m.pullback(one_t)), render_element(one_s))
    failed = set()
    for k in range(samples):
        f = random_element(rng, tgt)
        g = random_element(rng, tgt)
        h = random_homogeneous(rng, tgt)
        if "add" not in failed and m.pullback(f + g) != m.pullback(f) + m.pullback(g):
            rep.fail("additivity sample %d" % k,
                     render_element(m.pullback(f + g)),
                     render_element(m.pullback(f) + m.pullback(g)))
            failed.add("add")
        if "mul" not in failed and m.pullback(f * g) != m.pullback(f) * m.pullback(g):
            rep.fail("multiplicativity sample %d" % k,
                     render_element(m.pullback(f * g)),
                     render_element(m.pullback(f) * m.pullback(g)))
            failed.add("mul")
        if "deg" not in failed:
            ph = m.pullback(h)
            if not ph.is_zero() and (not ph.is_homogeneous() or ph.degree() != h.degree()):
                rep.fail("degree sample %d" % k, render_element(h), render_element(ph))
                failed.add("deg")
    for name, label in (("add", "additivity"), ("mul", "multiplicativity"),
                        ("deg", "degree preservation")):
        if name not in failed:
            rep.ok("%s (%d samples)" % (label, samples))
    return rep


# ---------------------------------------------------------------------------
# atlases
# ---------------------------------------------------------------------------

class Atlas:
    """Charts plus transition morphisms on declared overlaps.

    A transition for the ordered pair (a, b) is a morphism whose source is
    chart a restricted to the overlap box and whose target is chart b; the
    reverse pair must also be declared.
    """

    def __init__(self, charts, transitions, names=None):
        self.charts = list(charts)
        self.names = list(names) if names is not None else [
            "chart%d" % i for i in range(len(self.charts))]
        if len(self.names) != len(self.charts):
            raise MorphismError("need one name per chart")
        self.transitions = dict(transitions)
        for (a, b), t in self.transitions.items():
            if not (0 <= a < len(self.charts) and 0 <= b < len(self.charts)):
                raise MorphismError("transition (%d,%d) references a missing chart" % (a, b))
            if t.source.genspec != self.charts[a].genspec:
                raise MorphismError("transition (%d,%d) source spec mismatch" % (a, b))
            if not box_within(t.source.box, self.charts[a].box):
                raise MorphismError("overlap of (%d,%d) leaves chart %d" % (a, b, a))
            if t.target != self.charts[b]:
                raise MorphismError("transition (%d,%d) must land in chart %d" % (a, b, b))
            if a != b and (b, a) not in self.transitions:
                raise MorphismError("missing reverse transition (%d,%d)" % (b, a))


def _identity_images(domain: DomainSpec):
    spec = domain.genspec
    return ([GradedElement.variable(spec, mu + 1) for mu in range(spec.nvars)],
            [GradedElement.gen(spec, pos) for pos in range(spec.ngens)])


def check_cocycle(atlas: Atlas, samples: int = DEFAULT_RANGE_SAMPLES,
                  seed: int = 0) -> CheckReport:
    """Consistency of the transition system: declared self-transitions are
    identities, reverse transitions invert each other on the overlaps, and
    composites around chart triples match the direct transitions."""
    rep = CheckReport("atlas cocycle check")
    nm = atlas.names

    def images_match(m: Morphism, base, gens) -> bool:
        return list(m.base_images) == list(base) and list(m.gen_images) == list(gens)

    for (a, b), t in sorted(atlas.transitions.items()):
        if a == b:
            base, gens = _identity_images(t.source)
            if images_match(t, base, gens):
                rep.ok("self (%s,%s) is the identity" % (nm[a], nm[b]))
            else:
                rep.fail("self (%s,%s)" % (nm[a], nm[b]), "declared transition",
                         "identity")
    for (a, b) in sorted(atlas.transitions):
        if a >= b:
            continue
        t_ab = atlas.transitions[(a, b)]
        t_ba = atlas.transitions[(b, a)]
        for first, second, x, y in ((t_ab, t_ba, a, b), (t_ba, t_ab, b, a)):
            try:
                round_trip = compose(first, second, samples=samples, seed=seed)
            except MorphismError as exc:
                rep.fail("pair (%s,%s)" % (nm[x], nm[y]), str(exc), "composable")
                continue
            base, gens = _identity_images(first.source)
            if images_match(round_trip, base, gens):
                rep.ok("pair (%s,%s) inverts" % (nm[x], nm[y]))
            else:
                from .expr import render_element
                rep.fail("pair (%s,%s)" % (nm[x], nm[y]),
                         "; ".join(render_element(e) for e in round_trip.base_images
                                   + round_trip.gen_images),
                         "identity images")
    for (a, b) in sorted(atlas.transitions):
        for c in range(len(atlas.charts)):
            if len({a, b, c}) != 3:
                continue
            if (b, c) not in atlas.transitions or (a, c) not in atlas.transitions:
                continue
            t_ab = atlas.transitions[(a, b)]
            t_bc = atlas.transitions[(b, c)]
            t_ac = atlas.transitions[(a, c)]
            common = intersect_boxes(t_ab.source.box, t_ac.source.box)
            if common is None:
                continue
            locator = "triple (%s,%s,%s)" % (nm[a], nm[b], nm[c])
            try:
                comp = compose(t_ab.restrict(common), t_bc, samples=samples, seed=seed)
            except MorphismError as exc:
                rep.fail(locator, str(exc), "composable")
                continue
            if comp.same_images(t_ac):
                rep.ok(locator)
            else:
                from .expr import render_element
                rep.fail(locator,
                         "; ".join(render_element(e) for e in comp.base_images
                                   + comp.gen_images),
                         "; ".join(render_element(e) for e in t_ac.base_images
                                   + t_ac.gen_images))
    return rep


def split_model(genspec: GeneratorSpec, chart_boxes, transitions, names=None,
                samples: int = DEFAULT_RANGE_SAMPLES, seed: int = 0) -> Atlas:
    """Build the atlas of the graded manifold attached to a graded vector
    bundle: base maps act on coordinates, and generators transform linearly
    degree by degree through the given matrices.

    `transitions` maps ordered chart pairs (a, b) to a triple
    (overlap_box_in_chart_a, base_images, matrices) where base_images is one
    polynomial per base coordinate and matrices[k][i][j] gives the
    coefficient of the j-th degree-k generator in the image of the i-th.
    """
    charts = [DomainSpec(genspec, box) for box in chart_boxes]
    degrees = sorted({g.degree for g in genspec.generators},
                     key=genspec.grading.sort_key)
    by_degree = {d: [pos for pos, g in enumerate(genspec.generators)
                     if g.degree == d] for d in degrees}
    built = {}
    for (a, b), (overlap, base_images, matrices) in transitions.items():
        source = DomainSpec(genspec, overlap)
        base = []
        for poly in base_images:
            if not isinstance(poly, BasePoly):
                poly = BasePoly.const(genspec.nvars, poly)
            base.append(GradedElement.scalar(genspec, poly))
        gen_images = [None] * genspec.ngens
        for d in degrees:
            positions = by_degree[d]
            m_k = len(positions)
            key = d
            if key not in matrices:
                raise MorphismError("no matrix for degree %s in transition (%d,%d)"
                                    % (genspec.grading.format_element(d), a, b))
            mat = matrices[key]
            if len(mat) != m_k or any(len(row) != m_k for row in mat):
                raise MorphismError("matrix for degree %s must be %dx%d"
                                    % (genspec.grading.format_element(d), m_k, m_k))
            for i, row in enumerate(mat):
                items = []
                for j, entry in enumerate(row):
                    if not isinstance(entry, BasePoly):
                        entry = BasePoly.const(genspec.nvars, entry)
                    if entry.is_zero():
                        continue
                    beta = tuple(1 if p == positions[j] else 0
                                 for p in range(genspec.ngens))
                    items.append((beta, entry))
                gen_images[positions[i]] = GradedElement(genspec, items)
        try:
            built[(a, b)] = Morphism(source, charts[b], base, gen_images,
                                     samples=samples, seed=seed)
        except AlgebraError as exc:
            raise MorphismError(str(exc)) from exc
    return Atlas(charts, built, names=names)
