"""Exact t-adic arithmetic: polynomials, truncated series, matrices.

TruncatedSeries is an element of A[[t]] known modulo t^N for an
explicit N; every operation tracks precision (min rule for products,
N - deg g for division by a distinguished monic g).  Poly is a plain
polynomial whose coefficients may be ring elements or any other exact
coefficient type with arithmetic operators (the model generator uses
polynomials with symbolic multivariate coefficients).
"""

from .algebra import RingElem
from .errors import (
    NotAUnit,
    NotMonic,
    PrecisionExhausted,
    StructuralError,
)


class Poly:
    """Dense polynomial; trailing zero coefficients are stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def from_scalars(cls, ring, scalars):
        return cls([ring.of_scalar(c) for c in scalars])

    @classmethod
    def t_power(cls, one, k):
        zero = one - one
        return cls([zero] * k + [one])

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, i, zero):
        return self.coeffs[i] if i < len(self.coeffs) else zero

    def is_monic(self, d=None):
        if not self.coeffs:
            return False
        if d is not None and self.degree() != d:
            return False
        lead = self.coeffs[-1]
        return hasattr(lead, "is_one") and lead.is_one()

    def one_like(self):
        if not self.coeffs:
            raise StructuralError("cannot derive a unit from the zero polynomial")
        return Poly([self.coeffs[0].one_like()])

    def _zero_coeff(self, other=None):
        for source in (self.coeffs, other.coeffs if other is not None else ()):
            if source:
                return source[0] - source[0]
        return None

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        zero = self._zero_coeff(other)
        if zero is None:
            return Poly(())
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            [self.coeff(i, zero) + other.coeff(i, zero) for i in range(n)]
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly(())
        zero = self.coeffs[0] - self.coeffs[0]
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("exponent must be a nonnegative integer")
        result = Poly([self.one_like().coeffs[0]]) if self.coeffs else None
        if result is None:
            if n == 0:
                raise StructuralError("0^0 of the zero polynomial is undefined")
            return Poly(())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by t^k."""
        if not self.coeffs:
            return self
        zero = self.coeffs[0] - self.coeffs[0]
        return Poly([zero] * k + list(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod_monic(self, g):
        """Exact division with remainder by a monic polynomial."""
        if not isinstance(g, Poly) or not g.is_monic():
            raise NotMonic("divisor must be a monic polynomial")
        d = g.degree()
        if self.is_zero():
            return Poly(()), Poly(())
        zero = self.coeffs[0] - self.coeffs[0]
        rem = list(self.coeffs)
        n = len(rem)
        if n - 1 < d:
            return Poly(()), Poly(rem)
        quot = [zero] * (n - d)
        for i in range(n - d - 1, -1, -1):
            c = rem[i + d]
            if not c:
                continue
            quot[i] = c
            rem[i + d] = zero
            for j in range(d):
                if g.coeffs[j]:
                    rem[i + j] = rem[i + j] - c * g.coeffs[j]
        return Poly(quot), Poly(rem[:d])

    def eval_at(self, value, embed):
        """Horner evaluation; embed lifts coefficients to the target."""
        if not self.coeffs:
            raise StructuralError("evaluating the zero polynomial needs a context")
        acc = embed(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + embed(c)
        return acc

    def __repr__(self):
        return format_terms(
            [(str(c), i) for i, c in enumerate(self.coeffs) if c], None
        )


def poly_divmod_monic(f, g):
    """f = g*h + r with deg r < deg g; f may be a Poly or a series."""
    if isinstance(f, TruncatedSeries):
        return f.divmod_monic(g)
    return f.divmod_monic(g)


def format_terms(terms, precision):
    """Render [(coeff_string, power)] plus an optional O(t^N) tail."""
    parts = []
    for s, i in terms:
        if " " in s or "+" in s[1:] or "- " in s:
            s = f"({s})"
        if i == 0:
            parts.append(s)
        elif s == "1":
            parts.append("t" if i == 1 else f"t^{i}")
        else:
            parts.append(f"{s}*t" if i == 1 else f"{s}*t^{i}")
    body = " + ".join(parts) if parts else "0"
    if precision is not None:
        body += f" + O(t^{precision})"
    return body


class TruncatedSeries:
    """Element of A[[t]] modulo t^precision, coefficients in a TestRing.

    Internally coefficients are raw coordinate tuples over the ring's
    monomial basis; the public accessors hand out RingElem values.
    """

    __slots__ = ("ring", "_c", "precision")

    def __init__(self, ring, raw_coeffs, precision):
        if len(raw_coeffs) != precision:
            raise StructuralError("coefficient count must equal the precision")
        self.ring = ring
        self._c = tuple(raw_coeffs)
        self.precision = precision

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_elems(cls, ring, elems, precision):
        raw = [e.coords for e in elems]
        if len(raw) > precision:
            raw = raw[:precision]
        raw += [ring._zero_coords] * (precision - len(raw))
        return cls(ring, raw, precision)

    @classmethod
    def from_scalars(cls, ring, scalars, precision):
        raw = []
        for c in scalars[:precision]:
            coords = list(ring._zero_coords)
            coords[0] = c
            raw.append(tuple(coords))
        raw += [ring._zero_coords] * (precision - len(raw))
        return cls(ring, raw, precision)

    @classmethod
    def zero(cls, ring, precision):
        return cls(ring, (ring._zero_coords,) * precision, precision)

    @classmethod
    def const(cls, elem, precision):
        ring = elem.ring
        raw = [elem.coords] + [ring._zero_coords] * (precision - 1)
        return cls(ring, raw, precision)

    @classmethod
    def t_power(cls, ring, k, precision):
        raw = [ring._zero_coords] * precision
        if k < precision:
            raw[k] = ring.one().coords
        return cls(ring, raw, precision)

    @classmethod
    def from_poly(cls, poly, ring, precision):
        """Embed an exact polynomial (zero tail) at the given precision."""
        raw = []
        for c in poly.coeffs[:precision]:
            if not isinstance(c, RingElem):
                raise StructuralError("series coefficients must be ring elements")
            ring.same_ring(c.ring)
            raw.append(c.coords)
        raw += [ring._zero_coords] * (precision - len(raw))
        return cls(ring, raw, precision)

    # -- accessors ------------------------------------------------------

    @property
    def coeffs(self):
        return tuple(RingElem(self.ring, c) for c in self._c)

    def __getitem__(self, i):
        return RingElem(self.ring, self._c[i])

    def is_zero(self):
        return all(not any(c) for c in self._c)

    def t_order(self):
        for i, c in enumerate(self._c):
            if any(c):
                return i
        return None

    def m_level(self):
        level = self.ring.a
        for c in self._c:
            lv = self.ring._m_level(c)
            if lv < level:
                level = lv
        return level

    def residue_scalars(self):
        return [c[0] for c in self._c]

    def residue_order(self):
        for i, c in enumerate(self._c):
            if c[0]:
                return i
        return None

    def reduction_mod_m(self):
        """The k[[t]]-series obtained by killing the maximal ideal."""
        k_ring = _trivial_of(self.ring)
        raw = [(c[0],) for c in self._c]
        return TruncatedSeries(k_ring, raw, self.precision)

    def truncate(self, n):
        if n > self.precision:
            raise PrecisionExhausted(
                f"cannot extend precision {self.precision} to {n}"
            )
        return TruncatedSeries(self.ring, self._c[:n], n)

    def agrees_with(self, other, n):
        self.ring.same_ring(other.ring)
        if n > self.precision or n > other.precision:
            raise PrecisionExhausted("comparison precision exceeds operands")
        return self._c[:n] == other._c[:n]

    def poly_part(self):
        """The known coefficients as an exact Poly (caller asserts the
        underlying data really is polynomial)."""
        return Poly([RingElem(self.ring, c) for c in self._c])

    def canonical_key(self):
        return tuple(
            RingElem(self.ring, c).canonical_key() for c in self._c
        )

    # -- arithmetic -------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, TruncatedSeries):
            raise StructuralError("series arithmetic needs series operands")
        self.ring.same_ring(other.ring)
        return min(self.precision, other.precision)

    def __add__(self, other):
        n = self._common(other)
        add = self.ring._add
        return TruncatedSeries(
            self.ring, [add(a, b) for a, b in zip(self._c[:n], other._c[:n])], n
        )

    def __sub__(self, other):
        n = self._common(other)
        sub = self.ring._sub
        return TruncatedSeries(
            self.ring, [sub(a, b) for a, b in zip(self._c[:n], other._c[:n])], n
        )

    def __neg__(self):
        neg = self.ring._neg
        return TruncatedSeries(self.ring, [neg(a) for a in self._c], self.precision)

    def __mul__(self, other):
        if isinstance(other, RingElem):
            return self.scale(other)
        n = self._common(other)
        ring = self.ring
        mul = ring._mul
        add = ring._add
        zero = ring._zero_coords
        a = self._c
        b = other._c
        out = [zero] * n
        for i in range(n):
            ai = a[i]
            if not any(ai):
                continue
            for j in range(n - i):
                bj = b[j]
                if any(bj):
                    out[i + j] = add(out[i + j], mul(ai, bj))
        return TruncatedSeries(ring, out, n)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("exponent must be a nonnegative integer")
        result = TruncatedSeries.const(self.ring.one(), self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, elem):
        self.ring.same_ring(elem.ring)
        mul = self.ring._mul
        e = elem.coords
        return TruncatedSeries(
            self.ring, [mul(e, c) for c in self._c], self.precision
        )

    def mul_poly(self, poly):
        """Multiply by an exact polynomial; precision is preserved."""
        ring = self.ring
        n = self.precision
        zero = ring._zero_coords
        out = [zero] * n
        add = ring._add
        mul = ring._mul
        for i, pc in enumerate(poly.coeffs):
            if i >= n:
                break
            if not pc:
                continue
            ring.same_ring(pc.ring)
            praw = pc.coords
            for j in range(n - i):
                cj = self._c[j]
                if any(cj):
                    out[i + j] = add(out[i + j], mul(praw, cj))
        return TruncatedSeries(ring, out, n)

    def shift_down(self, d):
        """Divide by t^d, dropping the low coefficients."""
        if d > self.precision:
            raise PrecisionExhausted("shift exceeds precision")
        return TruncatedSeries(self.ring, self._c[d:], self.precision - d)

    def shift_up(self, d):
        """Multiply by t^d (the top d known coefficients fall away)."""
        raw = (self.ring._zero_coords,) * d + self._c
        return TruncatedSeries(self.ring, raw[: self.precision], self.precision)

    def invert(self):
        """Series inverse; the constant term must be a unit of A."""
        ring = self.ring
        n = self.precision
        if n == 0:
            return self
        c0 = self._c[0]
        if not c0[0]:
            raise NotAUnit("series constant term is not a unit")
        c0_inv = ring._invert(c0)
        mul = ring._mul
        sub = ring._sub
        zero = ring._zero_coords
        out = [zero] * n
        out[0] = c0_inv
        for i in range(1, n):
            acc = zero
            for j in range(1, i + 1):
                fj = self._c[j]
                if any(fj) and any(out[i - j]):
                    acc = ring._add(acc, mul(fj, out[i - j]))
            out[i] = ring._neg(mul(c0_inv, acc)) if any(acc) else zero
        return TruncatedSeries(ring, out, n)

    def divmod_monic(self, g):
        """Division by a distinguished monic polynomial g (g == t^d mod m).

        Returns (quotient series at precision N - deg g, remainder Poly
        of degree < deg g).  Unknown coefficients beyond the stated
        precision are treated as zero, which is exact whenever the
        underlying data is polynomial; for genuinely truncated input the
        top a*d quotient coefficients are only trustworthy modulo
        deepening powers of m (the working-precision margin absorbs
        this).
        """
        ring = self.ring
        if not isinstance(g, Poly) or not g.is_monic():
            raise NotMonic("series division needs a monic polynomial divisor")
        d = g.degree()
        for c in g.coeffs[:-1]:
            ring.same_ring(c.ring)
            if c.m_level() < 1:
                raise NotMonic(
                    "series division needs a distinguished divisor "
                    "(non-leading coefficients in the maximal ideal)"
                )
        n = self.precision
        if n < d:
            raise PrecisionExhausted(
                f"precision {n} cannot accommodate a degree-{d} remainder"
            )
        zero = ring._zero_coords
        add = ring._add
        mul = ring._mul
        neg = ring._neg
        b = [c.coords for c in g.coeffs[:-1]]  # g - t^d, all in m
        cur = list(self._c)
        h_total = [zero] * (n - d)
        r_total = [zero] * d
        for _ in range(ring.a + 1):
            if all(not any(c) for c in cur):
                break
            h_round = cur[d:]
            for i, c in enumerate(h_round):
                if any(c):
                    h_total[i] = add(h_total[i], c)
            for i in range(d):
                if any(cur[i]):
                    r_total[i] = add(r_total[i], cur[i])
            nxt = [zero] * n
            for i, bc in enumerate(b):
                if not any(bc):
                    continue
                for j, hc in enumerate(h_round):
                    if i + j < n and any(hc):
                        nxt[i + j] = add(nxt[i + j], neg(mul(bc, hc)))
            cur = nxt
        else:
            raise StructuralError("series division failed to terminate")
        quotient = TruncatedSeries(ring, h_total, n - d)
        remainder = Poly([RingElem(ring, c) for c in r_total])
        return quotient, remainder

    def one_like(self):
        return TruncatedSeries.const(self.ring.one(), self.precision)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring.key == other.ring.key
            and self.precision == other.precision
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.ring.key, self.precision, self._c))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self._c):
            if any(c):
                terms.append((self.ring.format_elem(c), i))
        return format_terms(terms, self.precision)


_TRIVIAL_CACHE = {}


def _trivial_of(ring):
    from .algebra import TestRing

    key = ring.field.key
    if key not in _TRIVIAL_CACHE:
        _TRIVIAL_CACHE[key] = TestRing(ring.field, (), ())
    return _TRIVIAL_CACHE[key]


def series_invert(f):
    return f.invert()


def compose_scalar_poly(scalars, phi):
    """Evaluate a k-coefficient polynomial at a series with nilpotent
    constant term (arc reparametrization)."""
    ring = phi.ring
    n = phi.precision
    if not scalars:
        return TruncatedSeries.zero(ring, n)
    acc = TruncatedSeries.const(ring.of_scalar(scalars[-1]), n)
    for c in reversed(scalars[:-1]):
        acc = acc * phi + TruncatedSeries.const(ring.of_scalar(c), n)
    return acc


# -- matrices -----------------------------------------------------------


class PolyMatrix:
    """Rectangular matrix over one exact scalar type (series, Poly, or
    MultiPoly); determinant and adjugate by cofactor expansion."""

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise StructuralError("matrix rows must be nonempty and rectangular")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0])

    def det_and_adjugate(self, one=None):
        return det_and_adjugate(self.rows, one=one)


def _det(rows, idxs, cols):
    if len(cols) == 1:
        return rows[idxs[0]][cols[0]]
    first = idxs[0]
    rest = idxs[1:]
    total = None
    for pos, col in enumerate(cols):
        entry = rows[first][col]
        sub_cols = cols[:pos] + cols[pos + 1 :]
        minor = _det(rows, rest, sub_cols)
        term = entry * minor
        if pos % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def det_and_adjugate(rows, one=None):
    """(det M, adj M) with M * adj = adj * M = det * identity.

    For a 1x1 matrix the adjugate is the scalar one (supply `one` when
    the single entry cannot produce it, e.g. a zero polynomial).
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise StructuralError("determinant needs a square matrix")
    if n > 8:
        raise StructuralError("determinant is capped at 8x8")
    if n == 1:
        entry = rows[0][0]
        if one is None:
            one = entry.one_like()
        return entry, [[one]]
    all_idx = tuple(range(n))
    det = _det(rows, all_idx, all_idx)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ridx = tuple(r for r in all_idx if r != i)
            cidx = tuple(c for c in all_idx if c != j)
            minor = _det(rows, ridx, cidx)
            if (i + j) % 2 == 1:
                minor = -minor
            adj[j][i] = minor  # transposed cofactor
    return det, adj


def mat_vec(rows, vec):
    out = []
    for row in rows:
        acc = None
        for entry, v in zip(row, vec):
            term = entry * v
            acc = term if acc is None else acc + term
        out.append(acc)
    return out
