"""Grading monoids: commutative monoids with a parity map, a total order,
and an optional product compatible with addition.

Degrees of algebra elements live in one of these monoids; degrees of
operators (morphism-like maps, derivations) live in its group completion,
represented by formal differences (`KGroupElement`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian


class GradingError(ValueError):
    """Invalid grading data, or an operation unsupported by the monoid kind."""


# ---------------------------------------------------------------------------
# monoid kinds
# ---------------------------------------------------------------------------

class GradingSpec:
    """A commutative monoid of grading degrees.

    Concrete kinds provide addition, a parity function (a homomorphism to
    Z_2), a total order on elements, and optionally a commutative product
    distributing over addition.  The product is what the commutation sign
    of the algebra layer is computed from, so kinds without one cannot be
    used to grade an algebra.
    """

    kind: str = "abstract"
    is_finite: bool = False
    has_mul: bool = False

    def zero(self):
        raise NotImplementedError

    def add(self, i, j):
        raise NotImplementedError

    def mul(self, i, j):
        raise GradingError("monoid kind %r has no product" % self.kind)

    def parity(self, i) -> int:
        raise NotImplementedError

    def sort_key(self, i):
        """Key realizing the total order used for canonical generator order."""
        raise NotImplementedError

    def check_element(self, i):
        """Validate and normalize an element; raises GradingError if invalid."""
        raise NotImplementedError

    def elements(self):
        """All elements (finite kinds only)."""
        raise GradingError("monoid kind %r is not finite" % self.kind)

    def is_cancellative(self) -> bool:
        raise NotImplementedError

    def cancellation_witness(self):
        """A triple (x, y, z) with x+y = x+z but y != z, or None."""
        return None

    def has_nontrivial_parity(self) -> bool:
        if self.is_finite:
            return any(self.parity(e) for e in self.elements())
        return True

    def format_element(self, i) -> str:
        if isinstance(i, tuple):
            return "(" + ",".join(str(c) for c in i) + ")"
        return str(i)

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, GradingSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "%s%r" % (type(self).__name__, self._key()[1:])


class _PowerSpec(GradingSpec):
    """Shared machinery for component-wise kinds; elements are ints when the
    number of components is 1, otherwise tuples of ints."""

    def __init__(self, ncomp: int):
        if ncomp < 1:
            raise GradingError("need at least one component")
        self.ncomp = ncomp

    def _tup(self, i):
        return (i,) if self.ncomp == 1 else i

    def _out(self, t):
        return t[0] if self.ncomp == 1 else t

    def zero(self):
        return self._out((0,) * self.ncomp)

    def add(self, i, j):
        a, b = self._tup(i), self._tup(j)
        return self._out(tuple(x + y for x, y in zip(a, b)))

    has_mul = True

    def mul(self, i, j):
        a, b = self._tup(i), self._tup(j)
        return self._out(tuple(x * y for x, y in zip(a, b)))

    def parity(self, i) -> int:
        return sum(self._tup(i)) % 2

    def sort_key(self, i):
        return self._tup(i)

    def _check_components(self, i, ok, what):
        t = (i,) if isinstance(i, int) else i
        if not (isinstance(t, tuple) and len(t) == self.ncomp
                and all(isinstance(c, int) and ok(c) for c in t)):
            raise GradingError("%r is not %s" % (i, what))
        return self._out(t)

    def is_cancellative(self) -> bool:
        return True


class NatPower(_PowerSpec):
    """Tuples of natural numbers under componentwise addition."""

    def __init__(self, k: int):
        super().__init__(k)
        self.kind = "nat_power"

    def check_element(self, i):
        return self._check_components(i, lambda c: c >= 0,
                                      "a %d-tuple of naturals" % self.ncomp)

    def _key(self):
        return ("nat_power", self.ncomp)


class IntPower(_PowerSpec):
    """Tuples of integers under componentwise addition."""

    def __init__(self, k: int):
        super().__init__(k)
        self.kind = "int_power"

    def parity(self, i) -> int:
        return sum(self._tup(i)) % 2  # c and -c have equal parity

    def check_element(self, i):
        return self._check_components(i, lambda c: True,
                                      "a %d-tuple of integers" % self.ncomp)

    def _key(self):
        return ("int_power", self.ncomp)


class CyclicProduct(_PowerSpec):
    """Product of cyclic groups Z_q1 x ... x Z_qk, componentwise mod-q ops.

    A nontrivial parity exists iff some factor has even order; the first
    such factor carries it as the mod-2 residue of that component.  The
    residue is a homomorphism precisely because the order is even, and it
    is validated exhaustively at construction.
    """

    def __init__(self, orders):
        orders = tuple(orders)
        if not orders or any(not isinstance(q, int) or q < 1 for q in orders):
            raise GradingError("orders must be positive integers")
        super().__init__(len(orders))
        self.kind = "cyclic_product"
        self.orders = orders
        even = [a for a, q in enumerate(orders) if q % 2 == 0]
        self._parity_axis = even[0] if even else None
        self.is_finite = True
        _validate_parity_hom(self)

    def add(self, i, j):
        a, b = self._tup(i), self._tup(j)
        return self._out(tuple((x + y) % q for x, y, q in zip(a, b, self.orders)))

    def mul(self, i, j):
        a, b = self._tup(i), self._tup(j)
        return self._out(tuple((x * y) % q for x, y, q in zip(a, b, self.orders)))

    def parity(self, i) -> int:
        if self._parity_axis is None:
            return 0
        return self._tup(i)[self._parity_axis] % 2

    def check_element(self, i):
        t = (i,) if isinstance(i, int) else i
        if not (isinstance(t, tuple) and len(t) == self.ncomp
                and all(isinstance(c, int) for c in t)):
            raise GradingError("%r is not a %d-tuple" % (i, self.ncomp))
        return self._out(tuple(c % q for c, q in zip(t, self.orders)))

    def elements(self):
        for t in _cartesian(*(range(q) for q in self.orders)):
            yield self._out(t)

    def _key(self):
        return ("cyclic_product", self.orders)


class Z2Power(CyclicProduct):
    """(Z_2)^n with the total mod-2 weight as parity."""

    def __init__(self, n: int):
        super().__init__((2,) * n)
        self.kind = "z2_power"

    def parity(self, i) -> int:
        return sum(self._tup(i)) % 2

    def _key(self):
        return ("z2_power", self.ncomp)


class FiniteTable(GradingSpec):
    """A finite commutative monoid given by its addition table.

    Elements are the indices 0..size-1 with 0 the identity.  The declared
    parity bits and the optional product table are validated exhaustively
    at construction (homomorphism law; commutativity and distributivity).
    """

    is_finite = True

    def __init__(self, table, parity, mul_table=None, names=None):
        table = tuple(tuple(row) for row in table)
        n = len(table)
        if n < 1 or any(len(row) != n for row in table):
            raise GradingError("addition table must be square")
        rng = range(n)
        for row in table:
            if any(not isinstance(v, int) or v not in rng for v in row):
                raise GradingError("table entries must be element indices")
        for j in rng:
            if table[0][j] != j or table[j][0] != j:
                raise GradingError("0 must be the identity")
        for i in rng:
            for j in rng:
                if table[i][j] != table[j][i]:
                    raise GradingError("table is not commutative at (%d,%d)" % (i, j))
        for a in rng:
            for b in rng:
                for c in rng:
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise GradingError(
                            "table is not associative at (%d,%d,%d)" % (a, b, c))
        parity = tuple(int(b) for b in parity)
        if len(parity) != n or any(b not in (0, 1) for b in parity):
            raise GradingError("parity must be a bit per element")
        self.kind = "finite_table"
        self.size = n
        self.table = table
        self.parity_bits = parity
        self.names = tuple(names) if names is not None else tuple(str(i) for i in rng)
        if len(self.names) != n:
            raise GradingError("need one name per element")
        _validate_parity_hom(self)
        self.mul_table = None
        if mul_table is not None:
            mul_table = tuple(tuple(row) for row in mul_table)
            if len(mul_table) != n or any(len(row) != n for row in mul_table):
                raise GradingError("product table must match size")
            for i in rng:
                for j in rng:
                    if mul_table[i][j] not in rng:
                        raise GradingError("product entries must be element indices")
                    if mul_table[i][j] != mul_table[j][i]:
                        raise GradingError("product is not commutative")
            for a in rng:
                for b in rng:
                    for c in rng:
                        if mul_table[a][table[b][c]] != table[mul_table[a][b]][mul_table[a][c]]:
                            raise GradingError(
                                "product does not distribute at (%d,%d,%d)" % (a, b, c))
            self.mul_table = mul_table
            self.has_mul = True

    def zero(self):
        return 0

    def add(self, i, j):
        return self.table[i][j]

    def mul(self, i, j):
        if self.mul_table is None:
            raise GradingError("this table has no declared product")
        return self.mul_table[i][j]

    def parity(self, i) -> int:
        return self.parity_bits[i]

    def sort_key(self, i):
        return i

    def check_element(self, i):
        if not isinstance(i, int) or not 0 <= i < self.size:
            raise GradingError("%r is out of range for a table of size %d" % (i, self.size))
        return i

    def elements(self):
        return range(self.size)

    def is_cancellative(self) -> bool:
        return self.cancellation_witness() is None

    def cancellation_witness(self):
        for x in range(self.size):
            row = self.table[x]
            for y in range(self.size):
                for z in range(y + 1, self.size):
                    if row[y] == row[z]:
                        return (x, y, z)
        return None

    def format_element(self, i) -> str:
        return self.names[i]

    def _key(self):
        return ("finite_table", self.table, self.parity_bits, self.mul_table)


def _validate_parity_hom(spec: GradingSpec, size_cap: int = 4096):
    if spec.parity(spec.zero()) != 0:
        raise GradingError("parity of the identity must be 0")
    elems = list(spec.elements())
    if len(elems) > size_cap:  # mod-2 residue parities are homomorphisms by construction
        return
    for i in elems:
        for j in elems:
            if spec.parity(spec.add(i, j)) != (spec.parity(i) + spec.parity(j)) % 2:
                raise GradingError(
                    "parity is not additive at %s, %s"
                    % (spec.format_element(i), spec.format_element(j)))


# ---------------------------------------------------------------------------
# element-level helpers
# ---------------------------------------------------------------------------

def parity_of(spec: GradingSpec, i) -> int:
    return spec.parity(spec.check_element(i))


def check_cancellative(spec: GradingSpec) -> bool:
    return spec.is_cancellative()


def check_parity_cardinality(spec: GradingSpec) -> bool:
    """Whether the even and odd parts have the same number of elements."""
    if not spec.is_finite:
        raise GradingError("cardinality comparison needs a finite monoid")
    even = sum(1 for e in spec.elements() if spec.parity(e) == 0)
    odd = sum(1 for e in spec.elements() if spec.parity(e) == 1)
    return even == odd


def element_order(spec: GradingSpec, i):
    """Least m >= 1 with m*i = 0, or None if no multiple returns to 0."""
    if not spec.is_finite:
        raise GradingError("element order needs a finite monoid")
    i = spec.check_element(i)
    acc = i
    bound = sum(1 for _ in spec.elements())
    for m in range(1, bound + 1):
        if acc == spec.zero():
            return m
        acc = spec.add(acc, i)
    return None


# ---------------------------------------------------------------------------
# group completion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KGroupElement:
    """A formal difference pos - neg of two monoid elements."""

    pos: object
    neg: object


def k_element(spec: GradingSpec, pos, neg=None) -> KGroupElement:
    return KGroupElement(spec.check_element(pos),
                         spec.zero() if neg is None else spec.check_element(neg))


def k_embed(spec: GradingSpec, i) -> KGroupElement:
    return k_element(spec, i)


def k_add(spec: GradingSpec, a: KGroupElement, b: KGroupElement) -> KGroupElement:
    return KGroupElement(spec.add(a.pos, b.pos), spec.add(a.neg, b.neg))


def k_mul(spec: GradingSpec, a: KGroupElement, b: KGroupElement) -> KGroupElement:
    # (p1 - n1)(p2 - n2) = (p1 p2 + n1 n2) - (p1 n2 + n1 p2)
    pos = spec.add(spec.mul(a.pos, b.pos), spec.mul(a.neg, b.neg))
    neg = spec.add(spec.mul(a.pos, b.neg), spec.mul(a.neg, b.pos))
    return KGroupElement(pos, neg)


def k_eq(spec: GradingSpec, a: KGroupElement, b: KGroupElement) -> bool:
    """Equality of the represented difference classes.

    For cancellative monoids the empty witness decides; otherwise every
    element of the (finite) monoid is tried as a witness.
    """
    lhs = spec.add(a.pos, b.neg)
    rhs = spec.add(a.neg, b.pos)
    if lhs == rhs:
        return True
    if spec.is_cancellative():
        return False
    if not spec.is_finite:
        raise GradingError("cannot decide equality without a finite witness search")
    return any(spec.add(lhs, c) == spec.add(rhs, c) for c in spec.elements())


def k_parity(spec: GradingSpec, e: KGroupElement) -> int:
    return (spec.parity(e.pos) + spec.parity(e.neg)) % 2


def k_normalize(spec: GradingSpec, e: KGroupElement) -> KGroupElement:
    """Canonical representative with the componentwise minimum removed."""
    if not isinstance(spec, NatPower):
        raise GradingError("normalization is defined for nat_power gradings only")
    p, n = spec._tup(e.pos), spec._tup(e.neg)
    m = tuple(min(x, y) for x, y in zip(p, n))
    return KGroupElement(spec._out(tuple(x - c for x, c in zip(p, m))),
                         spec._out(tuple(y - c for y, c in zip(n, m))))


def format_k(spec: GradingSpec, e: KGroupElement) -> str:
    if e.neg == spec.zero():
        return spec.format_element(e.pos)
    return "%s-%s" % (spec.format_element(e.pos), spec.format_element(e.neg))


# ---------------------------------------------------------------------------
# exhaustive small-monoid search
# ---------------------------------------------------------------------------

def all_cancellative_tables(n: int):
    """All commutative cancellative monoid tables on {0..n-1} with identity 0.

    Backtracking over the upper triangle of the Cayley table.  Cancellativity
    makes every row a permutation, which together with incremental
    associativity checking prunes the search to a small tree.
    """
    table = [[None] * n for _ in range(n)]
    for j in range(n):
        table[0][j] = table[j][0] = j
    row_used = [set(range(n)) if i == 0 else {i} for i in range(n)]
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]

    def assoc_ok(i, j):
        # triples where the fresh cell is one of the two inner products
        for c in range(n):
            for x, y, z in ((i, j, c), (j, i, c), (c, i, j), (c, j, i)):
                xy = table[x][y]
                yz = table[y][z]
                if xy is None or yz is None:
                    continue
                lhs = table[xy][z]
                rhs = table[x][yz]
                if lhs is not None and rhs is not None and lhs != rhs:
                    return False
        # triples completed through the fresh cell as an outer product; the
        # mirrored outer-right case reduces to this one by commutativity
        for a, b in ((i, j), (j, i)):
            v = table[a][b]
            for x in range(n):
                rx = table[x]
                for y in range(n):
                    if rx[y] != a:
                        continue
                    yb = table[y][b]
                    if yb is not None and table[x][yb] is not None \
                            and table[x][yb] != v:
                        return False
        return True

    def fill(idx):
        if idx == len(cells):
            yield tuple(tuple(row) for row in table)
            return
        i, j = cells[idx]
        for v in range(n):
            if v in row_used[i] or (i != j and v in row_used[j]):
                continue
            table[i][j] = table[j][i] = v
            row_used[i].add(v)
            if i != j:
                row_used[j].add(v)
            if assoc_ok(i, j):
                yield from fill(idx + 1)
            table[i][j] = table[j][i] = None
            row_used[i].discard(v)
            if i != j:
                row_used[j].discard(v)

    yield from fill(0)


def parity_functions_of_table(table):
    """All nontrivial parity assignments for an addition table, by brute force."""
    n = len(table)
    found = []
    for bits in _cartesian((0, 1), repeat=n - 1):
        p = (0,) + bits
        if all(p[table[i][j]] == (p[i] + p[j]) % 2
               for i in range(n) for j in range(i, n)):
            if any(p):
                found.append(p)
    return found


# The non-cancellative order-3 monoid used throughout the tests: 0 is the
# identity, a+a = b, a+b = a, b+b = b; parity 0,1,0 on (0, a, b).
EXAMPLE_TABLE3 = ((0, 1, 2), (1, 2, 1), (2, 1, 2))
EXAMPLE_TABLE3_PARITY = (0, 1, 0)
EXAMPLE_TABLE3_NAMES = ("0", "a", "b")
