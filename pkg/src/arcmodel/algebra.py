"""Exact base fields and Artinian local test rings.

A test ring is presented as k[e1..es]/I for a monomial ideal I that
contains every monomial of large enough total degree, so the maximal
ideal m = (e1..es) is nilpotent.  Elements are stored as coordinate
tuples over the finite monomial basis (graded-lex, 1 first), and all
arithmetic is exact: Fraction coordinates over Q, ints mod p over F_p.
"""

from fractions import Fraction

from .errors import NotAUnit, NotEnumerable, ParseError, StructuralError

_MAX_NILPOTENCY_SEARCH = 64


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The base field k: the rationals or a prime field F_p.

    Scalars are plain values (Fraction for Q, int in [0, p) for F_p);
    the Field object supplies the operations.
    """

    def __init__(self, p=None):
        if p is None:
            self.kind = "Q"
            self.p = None
        else:
            if not _is_prime(p):
                raise StructuralError(f"modulus {p} is not prime")
            if p >= 1 << 31:
                raise StructuralError("prime modulus must be < 2^31")
            self.kind = "Fp"
            self.p = p
        self.key = (self.kind, self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.descriptor()

    def descriptor(self):
        return "Q" if self.kind == "Q" else f"F{self.p}"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def of_int(self, n):
        return Fraction(n) if self.kind == "Q" else n % self.p

    def add(self, a, b):
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a):
        if not a:
            raise NotAUnit("division by zero scalar")
        return 1 / a if self.kind == "Q" else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @property
    def finite(self):
        return self.kind == "Fp"

    def elements(self):
        if not self.finite:
            raise NotEnumerable("cannot enumerate an infinite field")
        return [i for i in range(self.p)]

    def random_scalar(self, rng):
        if self.finite:
            return rng.randrange(self.p)
        num = rng.randrange(-4, 5)
        den = (1, 1, 2, 3)[rng.randrange(4)]
        return Fraction(num, den)

    def random_nonzero(self, rng):
        while True:
            c = self.random_scalar(rng)
            if c:
                return c

    def format_scalar(self, c):
        if self.kind == "Q":
            return str(c)  # Fraction prints "3" or "-3/2"
        return str(c)

    def parse_scalar(self, text):
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {text!r}") from exc
        if self.kind == "Q":
            return value
        if value.denominator != 1 and value.denominator % self.p == 0:
            raise ParseError(f"scalar {text!r} has no meaning mod {self.p}")
        return self.mul(value.numerator % self.p, self.inv(value.denominator % self.p))


QQ = Field()


def _monomial_divides(a, b):
    """True when monomial a divides monomial b (componentwise <=)."""
    return all(x <= y for x, y in zip(a, b))


def _monomials_of_degree(nvars, deg):
    """All exponent tuples of the given total degree, lexicographically."""
    if nvars == 0:
        return [()] if deg == 0 else []
    if nvars == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, deg - first):
            out.append((first,) + rest)
    return out


def _grlex_key(e):
    return (sum(e), tuple(-x for x in e))


def _minimalize(monomials):
    """Drop monomials divisible by another one in the set."""
    mins = []
    for m in sorted(set(monomials), key=_grlex_key):
        if not any(_monomial_divides(g, m) for g in mins):
            mins.append(m)
    return tuple(mins)


class TestRing:
    """An Artinian local k-algebra A = k[e1..es]/I, I a monomial ideal.

    The basis is the list of monomials outside I in graded-lex order
    (so the basis starts with 1 and is graded); `a` is the nilpotency
    order, the least power of m that vanishes.
    """

    def __init__(self, field, gens, relations):
        self.field = field
        self.gens = tuple(gens)
        if len(set(self.gens)) != len(self.gens):
            raise StructuralError("duplicate generator names")
        self.relations = _minimalize(tuple(tuple(r) for r in relations))
        for r in self.relations:
            if len(r) != len(self.gens):
                raise StructuralError("relation arity does not match generators")
            if sum(r) == 0:
                raise StructuralError("the unit monomial cannot vanish")
        self.basis = self._compute_basis()
        self.dim = len(self.basis)
        self.a = max(sum(m) for m in self.basis) + 1
        self._index = {m: i for i, m in enumerate(self.basis)}
        self._degrees = tuple(sum(m) for m in self.basis)
        self._build_tables()
        self.key = (self.field.key, self.gens, self.relations)
        self._zero_coords = (self.field.zero,) * self.dim

    def _compute_basis(self):
        if not self.gens:
            return [()]
        basis = []
        deg = 0
        while deg <= _MAX_NILPOTENCY_SEARCH:
            level = [
                m
                for m in _monomials_of_degree(len(self.gens), deg)
                if not any(_monomial_divides(r, m) for r in self.relations)
            ]
            if deg > 0 and not level:
                return sorted(basis, key=_grlex_key)
            basis.extend(level)
            deg += 1
        raise StructuralError(
            "the maximal ideal is not nilpotent (relations leave monomials "
            f"of every degree up to {_MAX_NILPOTENCY_SEARCH})"
        )

    def _build_tables(self):
        idx = {m: i for i, m in enumerate(self.basis)}
        table = []
        for mi in self.basis:
            row = []
            for mj in self.basis:
                prod = tuple(x + y for x, y in zip(mi, mj))
                row.append(idx.get(prod, -1))
            table.append(tuple(row))
        self._mt = tuple(table)

    # -- structural ---------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, TestRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.descriptor()

    def same_ring(self, other):
        if self.key != other.key:
            raise StructuralError(f"ring mismatch: {self} vs {other}")

    def descriptor(self):
        if not self.gens:
            return self.field.descriptor()
        k = sum(self.relations[0])
        full_power = len(self.relations) == len(
            _monomials_of_degree(len(self.gens), k)
        ) and all(sum(r) == k for r in self.relations)
        if full_power:
            if len(self.gens) == 1:
                rel = f"{self.gens[0]}^{k}"
            else:
                rel = "(" + ",".join(self.gens) + f")^{k}"
        else:
            rel = "(" + ",".join(self._format_monomial(r) for r in self.relations) + ")"
        return f"{self.field.descriptor()}[{','.join(self.gens)}]/{rel}"

    def _format_monomial(self, e):
        parts = []
        for name, exp in zip(self.gens, e):
            if exp == 1:
                parts.append(name)
            elif exp > 1:
                parts.append(f"{name}^{exp}")
        return "*".join(parts) if parts else "1"

    # -- coordinate-level arithmetic (hot paths) ----------------------

    def _add(self, x, y):
        add = self.field.add
        return tuple(add(a, b) for a, b in zip(x, y))

    def _sub(self, x, y):
        sub = self.field.sub
        return tuple(sub(a, b) for a, b in zip(x, y))

    def _neg(self, x):
        neg = self.field.neg
        return tuple(neg(a) for a in x)

    def _mul(self, x, y):
        out = list(self._zero_coords)
        mt = self._mt
        fmul = self.field.mul
        fadd = self.field.add
        for i, a in enumerate(x):
            if not a:
                continue
            row = mt[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                k = row[j]
                if k >= 0:
                    out[k] = fadd(out[k], fmul(a, b))
        return tuple(out)

    def _scalar_mul(self, c, x):
        if not c:
            return self._zero_coords
        fmul = self.field.mul
        return tuple(fmul(c, a) for a in x)

    def _is_zero(self, x):
        return not any(x)

    def _m_level(self, x):
        """Largest j with x in m^j (clipped to the nilpotency order a)."""
        level = self.a
        for i, c in enumerate(x):
            if c and self._degrees[i] < level:
                level = self._degrees[i]
        return level

    def _invert(self, x):
        """Invert via the finite geometric series on the nilpotent part."""
        c = x[0]
        if not c:
            raise NotAUnit(f"residue is zero: {self.elem(x)}")
        cinv = self.field.inv(c)
        scaled = self._scalar_mul(cinv, x)  # 1 + n with n nilpotent
        n = self._sub(scaled, self.one().coords)
        acc = self.one().coords
        power = self.one().coords
        for _ in range(1, self.a):
            power = self._neg(self._mul(power, n))
            acc = self._add(acc, power)
        return self._scalar_mul(cinv, acc)

    # -- element constructors -----------------------------------------

    def elem(self, coords):
        return RingElem(self, tuple(coords))

    def zero(self):
        return RingElem(self, self._zero_coords)

    def one(self):
        coords = list(self._zero_coords)
        coords[0] = self.field.one
        return RingElem(self, tuple(coords))

    def of_scalar(self, c):
        coords = list(self._zero_coords)
        coords[0] = c
        return RingElem(self, tuple(coords))

    def of_int(self, n):
        return self.of_scalar(self.field.of_int(n))

    def gen(self, i):
        name_exp = tuple(1 if j == i else 0 for j in range(len(self.gens)))
        k = self._index.get(name_exp, -1)
        coords = list(self._zero_coords)
        if k >= 0:
            coords[k] = self.field.one
        return RingElem(self, tuple(coords))

    def gen_by_name(self, name):
        return self.gen(self.gens.index(name))

    def random_element(self, rng):
        return self.elem(tuple(self.field.random_scalar(rng) for _ in self.basis))

    def random_m_element(self, rng, sparsity=2, min_level=1):
        """Random element of m^min_level; each coordinate is zero with
        probability sparsity/(sparsity+1)."""
        coords = list(self._zero_coords)
        for i in range(1, self.dim):
            if self._degrees[i] < min_level:
                continue
            if rng.randrange(sparsity + 1) == 0:
                coords[i] = self.field.random_scalar(rng)
        return self.elem(tuple(coords))

    def format_elem(self, coords):
        parts = []
        for i, c in enumerate(coords):
            if not c:
                continue
            mono = self._format_monomial(self.basis[i]) if i else ""
            parts.append((c, mono))
        if not parts:
            return "0"
        out = []
        for pos, (c, mono) in enumerate(parts):
            neg = self.field.kind == "Q" and c < 0
            mag = -c if neg else c
            if mono and mag == self.field.one:
                body = mono
            elif mono:
                body = f"{self.field.format_scalar(mag)}*{mono}"
            else:
                body = self.field.format_scalar(mag)
            if pos == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)


class RingElem:
    """An element of a TestRing in its monomial basis. Immutable."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = coords

    def __add__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring._add(self.coords, other.coords))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring._sub(self.coords, other.coords))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RingElem(self.ring, self.ring._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, self.ring._neg(self.coords))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, RingElem):
            self.ring.same_ring(other.ring)
            return other
        if isinstance(other, int):
            return self.ring.of_int(other)
        if isinstance(other, Fraction) and self.ring.field.kind == "Q":
            return self.ring.of_scalar(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.of_int(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring.key == other.ring.key and self.coords == other.coords

    def __hash__(self):
        return hash((self.ring.key, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return self.ring.format_elem(self.coords)

    def inv(self):
        return RingElem(self.ring, self.ring._invert(self.coords))

    def is_unit(self):
        return bool(self.coords[0])

    def is_one(self):
        return self == self.ring.one()

    def one_like(self):
        return self.ring.one()

    def residue(self):
        """Image in k: the coefficient of the basis monomial 1."""
        return self.coords[0]

    def m_level(self):
        return self.ring._m_level(self.coords)

    def in_m_power(self, j):
        return self.ring._m_level(self.coords) >= j

    def canonical_key(self):
        """Total order key for deterministic sorting of elements."""
        return tuple(
            (c.numerator, c.denominator) if isinstance(c, Fraction) else (c, 1)
            for c in self.coords
        )


def ring_mul(x, y):
    """Product in A, reduced to the monomial basis."""
    return x * y


def ring_invert(x):
    """Inverse of a unit of A (nonzero residue)."""
    return x.inv()


def quotient_ring(ring, j):
    """The quotient A/m^j together with the coordinate projection.

    Returns (ring A/m^j, project) where project maps elements of A to
    elements of the quotient by dropping basis monomials of degree >= j.
    """
    if not 1 <= j <= ring.a:
        raise StructuralError(f"quotient level {j} out of range 1..{ring.a}")
    extra = _monomials_of_degree(len(ring.gens), j)
    quotient = TestRing(ring.field, ring.gens, ring.relations + tuple(extra))
    keep = quotient.dim  # graded basis: surviving monomials are a prefix

    def project(x):
        ring.same_ring(x.ring)
        return quotient.elem(x.coords[:keep])

    return quotient, project


def enumerate_maximal_ideal(ring):
    """Yield every element of m exactly once (finite base field only).

    Elements are ordered with the earliest non-unit basis monomial
    varying fastest, scalars in their natural order.
    """
    if not ring.field.finite:
        raise NotEnumerable("maximal-ideal enumeration needs a finite base field")
    scalars = ring.field.elements()
    npos = ring.dim - 1
    total = len(scalars) ** npos
    for idx in range(total):
        coords = [ring.field.zero]
        rest = idx
        for _ in range(npos):
            coords.append(scalars[rest % len(scalars)])
            rest //= len(scalars)
        yield ring.elem(tuple(coords))


def trivial_ring(field):
    """A = k itself (no nilpotent generators, a = 1)."""
    return TestRing(field, (), ())
