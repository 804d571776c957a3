"""Graded derivations and the descent-equation machinery.

A derivation is determined by its values on the coordinates and extended to
everything else by linearity, the graded Leibniz rule over generator words,
and the chain rule on base coefficients.  Its degree lives in the group
completion of the grading monoid, and the Leibniz sign between a derivation
of degree u and an argument of degree i is (-1)**parity(u*i) with the
product taken in the completed semi-ring.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .galgebra import GradedElement
from .grading import (KGroupElement, k_add, k_element, k_embed, k_eq,
                      k_mul, k_parity)
from .morphism import DomainSpec
from .reporting import CheckReport


class CalculusError(ValueError):
    """Inconsistent derivation data or mismatched domains."""


class NotQClosed(CalculusError):
    """The seed of a descent sequence must be annihilated by Q."""


class Derivation:
    """A vector field on a graded domain, given by coordinate values.

    Every nonzero value must be homogeneous with degree equal to the
    derivation degree plus the coordinate degree (an equation in the group
    completion); this is validated at construction.
    """

    def __init__(self, domain: DomainSpec, degree: KGroupElement,
                 base_values, gen_values):
        spec = domain.genspec
        grading = spec.grading
        degree = KGroupElement(grading.check_element(degree.pos),
                               grading.check_element(degree.neg))
        base_values = tuple(base_values)
        gen_values = tuple(gen_values)
        if len(base_values) != spec.nvars:
            raise CalculusError("need %d base values, got %d"
                                % (spec.nvars, len(base_values)))
        if len(gen_values) != spec.ngens:
            raise CalculusError("need %d generator values, got %d"
                                % (spec.ngens, len(gen_values)))
        zero_k = k_embed(grading, grading.zero())
        for mu, v in enumerate(base_values):
            self._check_value(spec, grading, v, degree, zero_k,
                              "value on x%d" % (mu + 1))
        for pos, v in enumerate(gen_values):
            want = k_embed(grading, spec.generators[pos].degree)
            self._check_value(spec, grading, v, degree, want,
                              "value on generator %d" % pos)
        self.domain = domain
        self.degree = degree
        self.base_values = base_values
        self.gen_values = gen_values
        self.parity = k_parity(grading, degree)
        # Leibniz sign bit against each generator degree
        self._sign_bits = tuple(
            (grading.parity(grading.mul(degree.pos, g.degree))
             + grading.parity(grading.mul(degree.neg, g.degree))) % 2
            for g in spec.generators)
        self._word_cache: dict = {}

    @staticmethod
    def _check_value(spec, grading, v, degree, coord_deg, what):
        if not isinstance(v, GradedElement) or v.spec != spec:
            raise CalculusError("%s does not live over the domain" % what)
        if v.is_zero():
            return
        if not v.is_homogeneous():
            raise CalculusError("%s is not homogeneous" % what)
        want = k_add(grading, degree, coord_deg)
        if not k_eq(grading, k_embed(grading, v.degree()), want):
            raise CalculusError("%s has degree %s, expected derivation degree "
                                "plus coordinate degree" %
                                (what, grading.format_element(v.degree())))

    @classmethod
    def zero(cls, domain: DomainSpec, degree=None) -> "Derivation":
        spec = domain.genspec
        z = GradedElement.zero(spec)
        if degree is None:
            degree = k_embed(spec.grading, spec.grading.zero())
        return cls(domain, degree, [z] * spec.nvars, [z] * spec.ngens)

    def is_zero(self) -> bool:
        return (all(v.is_zero() for v in self.base_values)
                and all(v.is_zero() for v in self.gen_values))

    def restrict(self, box) -> "Derivation":
        """Shrink the base box; the symbolic data is untouched."""
        return Derivation(DomainSpec(self.domain.genspec, box), self.degree,
                          self.base_values, self.gen_values)

    def _gen_element(self, pos: int) -> GradedElement:
        return GradedElement.gen(self.domain.genspec, pos)

    def _word_element(self, occ) -> GradedElement:
        spec = self.domain.genspec
        beta = [0] * spec.ngens
        for g in occ:
            beta[g] += 1
        return GradedElement(spec, {tuple(beta): 1})

    def _word_derivative(self, occ) -> GradedElement:
        """Leibniz extension over an ascending occurrence word."""
        spec = self.domain.genspec
        occ = tuple(occ)
        if occ in self._word_cache:
            return self._word_cache[occ]
        if not occ:
            out = GradedElement.zero(spec)
        else:
            g, rest = occ[0], occ[1:]
            out = self.gen_values[g] * self._word_element(rest)
            tail = self._gen_element(g) * self._word_derivative(rest)
            out = out - tail if self._sign_bits[g] else out + tail
        self._word_cache[occ] = out
        return out

    def __call__(self, f: GradedElement) -> GradedElement:
        return self.apply(f)

    def apply(self, f: GradedElement) -> GradedElement:
        spec = self.domain.genspec
        if f.spec != spec:
            raise CalculusError("element does not live over the derivation's domain")
        out = GradedElement.zero(spec)
        for beta, poly in f.terms.items():
            occ = []
            for g, e in enumerate(beta):
                occ.extend([g] * e)
            word = self._word_element(occ)
            # chain rule on the coefficient; base coordinates have degree 0,
            # so no sign appears in front of the second Leibniz summand
            for mu in range(spec.nvars):
                dv = self.base_values[mu]
                if dv.is_zero():
                    continue
                dp = poly.partial(mu + 1)
                if dp.is_zero():
                    continue
                out = out + GradedElement.scalar(spec, dp) * dv * word
            wd = self._word_derivative(occ)
            if not wd.is_zero():
                out = out + GradedElement.scalar(spec, poly) * wd
        return out

    def __eq__(self, other):
        if not isinstance(other, Derivation) or self.domain != other.domain:
            return False
        grading = self.domain.genspec.grading
        return (k_eq(grading, self.degree, other.degree)
                and self.base_values == other.base_values
                and self.gen_values == other.gen_values)

    def __repr__(self):
        return "Derivation(degree=%s-%s)" % (self.degree.pos, self.degree.neg)


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """The graded commutator, again a derivation: its coordinate values are
    the commutator applied to the coordinates."""
    if d1.domain != d2.domain:
        raise CalculusError("derivations live on different domains")
    grading = d1.domain.genspec.grading
    sign = k_parity(grading, k_mul(grading, d1.degree, d2.degree))

    def commute(value1, value2):
        cross = d2.apply(value1)
        out = d1.apply(value2)
        return out + cross if sign else out - cross

    base = [commute(d1.base_values[mu], d2.base_values[mu])
            for mu in range(d1.domain.genspec.nvars)]
    gens = [commute(d1.gen_values[pos], d2.gen_values[pos])
            for pos in range(d1.domain.genspec.ngens)]
    return Derivation(d1.domain, k_add(grading, d1.degree, d2.degree), base, gens)


def check_lie_axioms(d1: Derivation, d2: Derivation, d3: Derivation,
                     samples: int = 50, seed: int = 0) -> CheckReport:
    """Graded antisymmetry and the graded Jacobi identity, tested as
    operator equalities on random elements."""
    from .expr import render_element
    from .sampling import random_element

    rep = CheckReport("graded Lie axiom check")
    grading = d1.domain.genspec.grading
    rng = Random(seed)
    elems = [random_element(rng, d1.domain.genspec) for _ in range(samples)]

    for label, a, b in (("(1,2)", d1, d2), ("(1,3)", d1, d3), ("(2,3)", d2, d3)):
        ab = bracket(a, b)
        ba = bracket(b, a)
        sign = k_parity(grading, k_mul(grading, a.degree, b.degree))
        bad = None
        for f in elems:
            lhs = ab.apply(f)
            rhs = ba.apply(f)
            rhs = rhs if sign else -rhs
            if lhs != rhs:
                bad = (f, lhs, rhs)
                break
        if bad is None:
            rep.ok("antisymmetry %s (%d samples)" % (label, samples))
        else:
            rep.fail("antisymmetry %s at %s" % (label, render_element(bad[0])),
                     render_element(bad[1]), render_element(bad[2]))

    lhs_op = bracket(d1, bracket(d2, d3))
    rhs1_op = bracket(bracket(d1, d2), d3)
    rhs2_op = bracket(d2, bracket(d1, d3))
    sign12 = k_parity(grading, k_mul(grading, d1.degree, d2.degree))
    bad = None
    for f in elems:
        lhs = lhs_op.apply(f)
        tail = rhs2_op.apply(f)
        rhs = rhs1_op.apply(f) + (-tail if sign12 else tail)
        if lhs != rhs:
            bad = (f, lhs, rhs)
            break
    if bad is None:
        rep.ok("jacobi (%d samples)" % samples)
    else:
        rep.fail("jacobi at %s" % render_element(bad[0]),
                 render_element(bad[1]), render_element(bad[2]))
    return rep


# ---------------------------------------------------------------------------
# QK structures and descent sequences
# ---------------------------------------------------------------------------

def _exponents_up_to(nvars: int, total: int):
    """Exponent tuples of total degree <= total, in graded order."""
    out = [()]
    for _ in range(nvars):
        out = [e + (k,) for e in out for k in range(total + 1)]
    return sorted((e for e in out if sum(e) <= total), key=lambda e: (sum(e), e))


def _expected_k_degree(grading, pos, neg) -> KGroupElement:
    return k_element(grading, pos, neg)


def _require_degree(grading, deriv: Derivation, pos, neg, what: str):
    want = _expected_k_degree(grading, pos, neg)
    if not k_eq(grading, deriv.degree, want):
        raise CalculusError("%s must have degree %s-%s" % (what, pos, neg))


def qk_verify(Q: Derivation, K: Derivation, d: Derivation, max_word: int = 4,
              samples: int = 20, seed: int = 0) -> CheckReport:
    """Check the structure relations of the three fields as operator
    identities on every normal-form monomial of bounded word length, plus
    random base-coefficient multiples; also compare the literal
    anticommutators against the graded brackets."""
    from .expr import render_element
    from .sampling import random_poly, random_word

    from .grading import IntPower, NatPower

    domain = Q.domain
    spec = domain.genspec
    grading = spec.grading
    if not isinstance(grading, (NatPower, IntPower)) or grading.ncomp != 2:
        raise CalculusError("QK structures need a two-component power grading")
    if K.domain != domain or d.domain != domain:
        raise CalculusError("the three fields live on different domains")
    _require_degree(grading, Q, (0, 1), (0, 0), "Q")
    _require_degree(grading, K, (1, 0), (0, 1), "K")
    _require_degree(grading, d, (1, 0), (0, 0), "d")

    rep = CheckReport("qk structure check")
    rng = Random(seed)
    from .basecoeff import BasePoly
    base_monomials = _exponents_up_to(spec.nvars, 2)
    probes = []
    for w in spec.words_up_to(max_word):
        for exps in base_monomials:
            mono = BasePoly(spec.nvars, {exps: 1})
            probes.append(("monomial", GradedElement(spec, {w: mono})))
    for _ in range(samples):
        w = random_word(rng, spec, max_word)
        poly = random_poly(rng, spec.nvars)
        probes.append(("sample", GradedElement(spec, {w: poly})))

    relations = (
        ("Q^2 = 0", lambda f: Q(Q(f)), lambda f: GradedElement.zero(spec)),
        ("QK+KQ = d", lambda f: Q(K(f)) + K(Q(f)), lambda f: d(f)),
        ("Kd+dK = 0", lambda f: K(d(f)) + d(K(f)), lambda f: GradedElement.zero(spec)),
    )
    for label, lhs_fn, rhs_fn in relations:
        bad = None
        for kind, f in probes:
            lhs = lhs_fn(f)
            rhs = rhs_fn(f)
            if lhs != rhs:
                bad = (kind, f, lhs, rhs)
                break
        if bad is None:
            rep.ok("%s on %d probes (word length <= %d)"
                   % (label, len(probes), max_word))
        else:
            rep.fail("%s at %s %s" % (label, bad[0], render_element(bad[1])),
                     render_element(bad[2]), render_element(bad[3]))

    # graded-bracket forms, for comparison with the literal anticommutators
    br_qk = bracket(Q, K)
    if br_qk == d:
        rep.note("NOTE bracket [Q,K] equals d as a derivation")
    else:
        rep.note("NOTE bracket [Q,K] differs from d as a derivation")
    if bracket(K, d).is_zero():
        rep.note("NOTE bracket [K,d] is the zero derivation")
    else:
        rep.note("NOTE bracket [K,d] is not the zero derivation")
    return rep


class DescentSequence:
    """A finite tower of homogeneous observables O(0), O(1), ..."""

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise CalculusError("a descent sequence needs at least one entry")
        for p, e in enumerate(entries):
            if not isinstance(e, GradedElement):
                raise CalculusError("entry %d is not an algebra element" % p)
            if not e.is_homogeneous():
                raise CalculusError("entry %d is not homogeneous" % p)
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, p):
        return self.entries[p]

    def __eq__(self, other):
        return isinstance(other, DescentSequence) and self.entries == other.entries

    def __repr__(self):
        return "DescentSequence(%d entries)" % len(self.entries)


def k_sequence(Q: Derivation, K: Derivation, d: Derivation | None,
               O0: GradedElement, pmax: int | None = None) -> DescentSequence:
    """The canonical tower O(p) = K^p O(0) / p! seeded by a Q-closed O(0).

    With pmax omitted, entries are generated until the first zero entry,
    which is included.
    """
    if not O0.is_homogeneous():
        raise CalculusError("the seed must be homogeneous")
    if not Q(O0).is_zero():
        raise NotQClosed("the seed is not annihilated by Q")
    entries = [O0]
    p = 1
    hard_cap = 64
    while True:
        if pmax is not None and p > pmax:
            break
        nxt = K(entries[-1]) / Fraction(p)
        entries.append(nxt)
        if pmax is None and nxt.is_zero():
            break
        if pmax is None and p >= hard_cap:
            raise CalculusError("sequence did not terminate; supply pmax")
        p += 1
    return DescentSequence(entries)


def check_descent(Q: Derivation, d: Derivation, seq: DescentSequence) -> CheckReport:
    """The descent equations: Q kills the seed, and Q of each entry equals
    d of the previous one.  Exact equality throughout."""
    from .expr import render_element

    rep = CheckReport("descent equation check")
    q0 = Q(seq[0])
    if q0.is_zero():
        rep.ok("p=0 seed is Q-closed")
    else:
        rep.fail("p=0", render_element(q0), "0")
    for p in range(1, len(seq)):
        lhs = Q(seq[p])
        rhs = d(seq[p - 1])
        if lhs == rhs:
            rep.ok("p=%d" % p)
        else:
            rep.fail("p=%d" % p, render_element(lhs), render_element(rhs))
    return rep


def check_exact(Q: Derivation, d: Derivation, o_seq: DescentSequence,
                p_seq: DescentSequence) -> CheckReport:
    """Verify that the given witnesses exhibit the tower as exact:
    O(0) = Q P(0) and O(p) = Q P(p) + d P(p-1) for p >= 1.

    The witness tower may be one entry shorter, in which case its missing
    last entry is taken to be zero.
    """
    from .expr import render_element

    if len(p_seq) not in (len(o_seq), len(o_seq) - 1):
        raise CalculusError("witness tower has %d entries, expected %d or %d"
                            % (len(p_seq), len(o_seq), len(o_seq) - 1))
    spec = o_seq[0].spec
    witnesses = list(p_seq.entries)
    if len(witnesses) == len(o_seq) - 1:
        witnesses.append(GradedElement.zero(spec))
    rep = CheckReport("exactness check")
    lhs = o_seq[0]
    rhs = Q(witnesses[0])
    if lhs == rhs:
        rep.ok("p=0")
    else:
        rep.fail("p=0", render_element(lhs), render_element(rhs))
    for p in range(1, len(o_seq)):
        rhs = Q(witnesses[p]) + d(witnesses[p - 1])
        if o_seq[p] == rhs:
            rep.ok("p=%d" % p)
        else:
            rep.fail("p=%d" % p, render_element(o_seq[p]), render_element(rhs))
    return rep
