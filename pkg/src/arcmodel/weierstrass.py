"""Weierstrass preparation and division over A[[t]] for test rings A.

A series f whose reduction mod m has t-order d factors uniquely as
f = q*u with q monic of degree d, q == t^d mod m, and u invertible.
The factorization is computed by successive correction along the
nilpotency filtration: after round j the defect f - q*u lies in
m^(j+1), so at most a-1 rounds are needed and every step is exact.
"""

from dataclasses import dataclass

from .errors import PrecisionExhausted, ResidueZero, StructuralError
from .series import Poly, TruncatedSeries


@dataclass(frozen=True)
class WeierstrassFactorization:
    q: Poly
    u: TruncatedSeries
    d: int


def weierstrass_prepare(f):
    """The unique factorization f = q*u described above.

    The returned unit u carries precision N - a*d, the range on which
    it is a function of f's known coefficients alone.
    """
    ring = f.ring
    n = f.precision
    d = f.residue_order()
    if d is None:
        raise ResidueZero(
            "series is zero modulo the maximal ideal; no distinguished factor"
        )
    if d > 0 and d >= n - ring.a * (d + 1):
        raise PrecisionExhausted(
            f"order {d} needs precision > {d + ring.a * (d + 1)}, have {n}"
        )
    if d == 0:
        return WeierstrassFactorization(Poly([ring.one()]), f, 0)

    res = f.residue_scalars()
    u = TruncatedSeries.from_scalars(ring, res[d:], n - d)
    q = Poly.t_power(ring.one(), d)
    f_cut = f.truncate(n - d)
    for _ in range(ring.a - 1):
        defect = f_cut - u.mul_poly(q)
        if defect.is_zero():
            break
        c = defect * u.invert()
        delta_q = Poly(c.coeffs[:d])
        q = q + delta_q
        bump = TruncatedSeries.const(ring.one(), c.precision - d) + c.shift_down(d)
        u = u * bump
    final = f_cut.truncate(u.precision) - u.mul_poly(q).truncate(u.precision)
    if not final.is_zero():
        raise StructuralError("preparation failed to converge; this is a bug")
    return WeierstrassFactorization(q, u.truncate(n - ring.a * d), d)


def weierstrass_divide(f, g):
    """Unique (h, r) with f = g*h + r and deg r < d, d the residue
    order of g.  Implemented through preparation of g followed by
    division by the distinguished factor."""
    prep = weierstrass_prepare(g)
    h0, rem = f.divmod_monic(prep.q)
    h = h0 * prep.u.invert()
    return h, rem
