"""Exact multivariate polynomials with rational coefficients.

These stand in for the smooth functions on the base of a graded domain:
being polynomial keeps every derivative, every Taylor expansion, and every
substitution a finite exact computation, so the algebraic identities of the
graded layer can be asserted with `==` instead of tolerances.
"""

from __future__ import annotations

from fractions import Fraction


class BasePoly:
    """A polynomial in x1..xn over Q, stored as exponent-tuple -> coefficient.

    Values are immutable; no zero coefficient is ever stored and term keys
    are kept in a fixed sorted order, so structural equality is semantic
    equality.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        object.__setattr__(self, "nvars", nvars)
        clean = {}
        if terms:
            for exps, coeff in (terms.items() if isinstance(terms, dict) else terms):
                exps = tuple(exps)
                if len(exps) != nvars or any(e < 0 or not isinstance(e, int) for e in exps):
                    raise ValueError("bad exponent tuple %r" % (exps,))
                coeff = Fraction(coeff)
                if coeff:
                    c = clean.get(exps)
                    c = coeff if c is None else c + coeff
                    if c:
                        clean[exps] = c
                    else:
                        clean.pop(exps, None)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("BasePoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "BasePoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "BasePoly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def var(cls, nvars: int, mu: int) -> "BasePoly":
        """The coordinate x_mu, with mu between 1 and nvars."""
        if not 1 <= mu <= nvars:
            raise ValueError("variable index %d out of range 1..%d" % (mu, nvars))
        exps = tuple(1 if k == mu - 1 else 0 for k in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    # -- ring structure -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BasePoly):
            if other.nvars != self.nvars:
                raise ValueError("mixing polynomials in %d and %d variables"
                                 % (self.nvars, other.nvars))
            return other
        if isinstance(other, (int, Fraction)):
            return BasePoly.const(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for exps, coeff in other.terms.items():
            c = acc.get(exps, Fraction(0)) + coeff
            if c:
                acc[exps] = c
            else:
                acc.pop(exps, None)
        return BasePoly(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return BasePoly(self.nvars, {e: -c for e, c in self.terms.items()})

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
        acc = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                c = acc.get(exps, Fraction(0)) + c1 * c2
                if c:
                    acc[exps] = c
                else:
                    acc.pop(exps, None)
        return BasePoly(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a natural number")
        result = BasePoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return (isinstance(other, BasePoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        from .expr import render_poly
        return "BasePoly(%r)" % render_poly(self)

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self):
        """Largest term degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def min_degree(self):
        """Smallest term degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def degree_in(self, mu: int) -> int:
        if not 1 <= mu <= self.nvars:
            raise ValueError("variable index out of range")
        return max((e[mu - 1] for e in self.terms), default=0)

    # -- calculus ----------------------------------------------------------

    def partial(self, mu: int) -> "BasePoly":
        """Formal partial derivative with respect to x_mu (1-based)."""
        if not 1 <= mu <= self.nvars:
            raise ValueError("variable index %d out of range 1..%d" % (mu, self.nvars))
        k = mu - 1
        acc = {}
        for exps, coeff in self.terms.items():
            if exps[k] == 0:
                continue
            lowered = exps[:k] + (exps[k] - 1,) + exps[k + 1:]
            acc[lowered] = acc.get(lowered, Fraction(0)) + coeff * exps[k]
        return BasePoly(self.nvars, acc)

    def eval(self, point) -> Fraction:
        point = [Fraction(c) for c in point]
        if len(point) != self.nvars:
            raise ValueError("point has %d coordinates, expected %d"
                             % (len(point), self.nvars))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            v = coeff
            for c, e in zip(point, exps):
                if e:
                    v *= c ** e
            total += v
        return total

    def compose(self, replacements) -> "BasePoly":
        """Substitute a polynomial for every variable.

        All replacement polynomials must share a variable count, which
        becomes the variable count of the result.
        """
        replacements = list(replacements)
        if len(replacements) != self.nvars:
            raise ValueError("need %d replacement polynomials" % self.nvars)
        if self.nvars == 0:
            return BasePoly(0, dict(self.terms))
        m = replacements[0].nvars
        if any(r.nvars != m for r in replacements):
            raise ValueError("replacements disagree on variable count")
        out = BasePoly.zero(m)
        for exps, coeff in self.terms.items():
            term = BasePoly.const(m, coeff)
            for r, e in zip(replacements, exps):
                if e:
                    term = term * r ** e
            out = out + term
        return out

    def taylor_shift(self, center) -> "BasePoly":
        """Rewrite in powers of (x - c): returns h with h(X) = self(X + c),
        so the coefficients of h are the Taylor coefficients at the center."""
        center = [Fraction(c) for c in center]
        if len(center) != self.nvars:
            raise ValueError("center has %d coordinates, expected %d"
                             % (len(center), self.nvars))
        shifted = [BasePoly.var(self.nvars, mu + 1) + BasePoly.const(self.nvars, c)
                   for mu, c in enumerate(center)]
        return self.compose(shifted)
