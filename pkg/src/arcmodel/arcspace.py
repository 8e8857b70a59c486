"""Input data model: complete-intersection presentations and base arcs.

The presentation fixes variables x1..xn, y1..yl and l defining
polynomials; the base arc is a k-coefficient arc on the variety along
which the l x l Jacobian block in the y-variables is generically
invertible.  The defect d is the t-order of that Jacobian determinant
along the arc; it controls every precision bound downstream.
"""

import os
import random
from dataclasses import dataclass

from .algebra import RingElem, TestRing, trivial_ring
from .errors import (
    ArcInDegeneracyLocus,
    ArcNotOnVariety,
    ObstructedLift,
    PrecisionExhausted,
    StructuralError,
)
from .multipoly import MultiPoly, jacobian_block
from .series import Poly, TruncatedSeries, compose_scalar_poly, det_and_adjugate

ENV_EXTRA_PRECISION = "ARCMODEL_EXTRA_PRECISION"


def extra_precision():
    raw = os.environ.get(ENV_EXTRA_PRECISION, "")
    try:
        return int(raw) if raw else 0
    except ValueError:
        return 0


def work_margin(a, d, extra=None):
    """Precision head-room consumed by one full pipeline run."""
    if extra is None:
        extra = extra_precision()
    return a * (d + 1) + 4 + extra


def work_precision(n_user, a, d, extra=None):
    return n_user + work_margin(a, d, extra)


def required_arc_precision(a, d):
    """Arc coefficients needed before rings of nilpotency a are safe."""
    return 2 * (d + 1) * (a + 1)


def xvar(i):
    return f"x{i + 1}"


def yvar(j):
    return f"y{j + 1}"


class VarietyPresentation:
    """l polynomials in x1..xn, y1..yl cutting out a complete
    intersection of codimension l."""

    def __init__(self, field, n, l, ps):
        ps = tuple(ps)
        if len(ps) != l:
            raise StructuralError(
                f"complete intersection needs exactly {l} polynomials, got {len(ps)}"
            )
        self.field = field
        self.n = n
        self.l = l
        self.variables = tuple(xvar(i) for i in range(n)) + tuple(
            yvar(j) for j in range(l)
        )
        for p in ps:
            if p.field != field or p.variables != self.variables:
                raise StructuralError(
                    "defining polynomials must share the presentation's ring"
                )
        self.ps = ps
        self.key = (field.key, n, l, ps)
        self._jac = None

    @classmethod
    def from_polys(cls, field, n, l, build):
        """Convenience: build(variables_dict) -> list of MultiPoly."""
        variables = tuple(xvar(i) for i in range(n)) + tuple(yvar(j) for j in range(l))
        vs = {name: MultiPoly.var(field, variables, name) for name in variables}
        return cls(field, n, l, build(vs))

    @property
    def xvars(self):
        return self.variables[: self.n]

    @property
    def yvars(self):
        return self.variables[self.n :]

    def jacobian(self):
        if self._jac is None:
            self._jac = jacobian_block(list(self.ps), list(self.yvars))
        return self._jac

    def __eq__(self, other):
        return isinstance(other, VarietyPresentation) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class BaseArc:
    """The arc itself: one exact coefficient list per variable, plus the
    precision to which the data is asserted."""

    def __init__(self, field, x, y, precision):
        self.field = field
        self.x = tuple(tuple(c) for c in x)
        self.y = tuple(tuple(c) for c in y)
        if precision < 1:
            raise StructuralError("arc precision must be positive")
        for comp in self.x + self.y:
            if len(comp) > precision:
                raise StructuralError(
                    "arc component carries more coefficients than its precision"
                )
        self.precision = precision
        self.key = (field.key, self.x, self.y, precision)

    def component(self, name):
        if name.startswith("x"):
            return self.x[int(name[1:]) - 1]
        return self.y[int(name[1:]) - 1]

    def embed(self, ring, n):
        """All components as series over the test ring at precision n."""
        if n > self.precision:
            raise PrecisionExhausted(
                f"arc is only known to precision {self.precision}, need {n}"
            )
        xs = [TruncatedSeries.from_scalars(ring, list(c), n) for c in self.x]
        ys = [TruncatedSeries.from_scalars(ring, list(c), n) for c in self.y]
        return xs, ys

    def assignment(self, pres, ring, n):
        xs, ys = self.embed(ring, n)
        return dict(zip(pres.variables, xs + ys))

    def __eq__(self, other):
        return isinstance(other, BaseArc) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True)
class ValidationReport:
    checked_precision: int
    det_order: int

    def render(self):
        lines = [
            f"arc precision: {self.checked_precision}",
            f"defining equations vanish along the arc to t^{self.checked_precision}: PASS",
            f"jacobian determinant t-order along the arc: {self.det_order}",
        ]
        return "\n".join(lines)


def _series_embed(ring, n):
    def embed(c):
        return TruncatedSeries.const(ring.of_scalar(c), n)

    return embed


def validate(pres, arc, n=None):
    """Check the two arc hypotheses; report the determinant's t-order."""
    if pres.field != arc.field:
        raise StructuralError("presentation and arc use different base fields")
    if len(arc.x) != pres.n or len(arc.y) != pres.l:
        raise StructuralError("arc component count does not match the presentation")
    n = arc.precision if n is None else min(n, arc.precision)
    k_ring = trivial_ring(pres.field)
    assignment = arc.assignment(pres, k_ring, n)
    embed = _series_embed(k_ring, n)
    for i, p in enumerate(pres.ps):
        value = p.evaluate(assignment, embed)
        if not value.is_zero():
            raise ArcNotOnVariety(
                f"p{i + 1} does not vanish along the arc "
                f"(first nonzero at t^{value.t_order()})"
            )
    rows = [
        [entry.evaluate(assignment, embed) for entry in row]
        for row in pres.jacobian()
    ]
    det, _ = det_and_adjugate(rows, one=TruncatedSeries.const(k_ring.one(), n))
    order = det.t_order()
    if order is None:
        raise ArcInDegeneracyLocus(
            f"jacobian determinant vanishes along the arc to t^{n}"
        )
    return ValidationReport(checked_precision=n, det_order=order)


_DEFECT_CACHE = {}


def compute_defect(pres, arc):
    """deg q for every deformation: the t-order of det of the Jacobian
    block along the base arc."""
    key = (pres.key, arc.key)
    if key not in _DEFECT_CACHE:
        _DEFECT_CACHE[key] = validate(pres, arc).det_order
    return _DEFECT_CACHE[key]


class Deformation:
    """An A-valued arc reducing to the base arc mod m and satisfying the
    defining equations to its precision."""

    __slots__ = ("ring", "x", "y", "base")

    def __init__(self, ring, x, y, base):
        self.ring = ring
        self.x = tuple(x)
        self.y = tuple(y)
        self.base = base

    def precision(self):
        return min(s.precision for s in self.x + self.y)

    def assignment(self, pres):
        n = self.precision()
        values = [s.truncate(n) for s in self.x + self.y]
        return dict(zip(pres.variables, values))

    def truncate(self, nx, ny=None):
        ny = nx if ny is None else ny
        return Deformation(
            self.ring,
            [s.truncate(nx) for s in self.x],
            [s.truncate(ny) for s in self.y],
            self.base,
        )

    def canonical_key(self, nx, ny=None):
        ny = nx if ny is None else ny
        return (
            tuple(s.truncate(nx).canonical_key() for s in self.x),
            tuple(s.truncate(ny).canonical_key() for s in self.y),
        )

    def agrees_with(self, other, nx, ny=None):
        return self.canonical_key(nx, ny) == other.canonical_key(nx, ny)

    def verify(self, pres, n=None):
        """Reduction mod m equals the base arc; equations vanish."""
        n = self.precision() if n is None else n
        problems = []
        for name, series, scalars in zip(
            pres.variables,
            self.x + self.y,
            self.base.x + self.base.y,
        ):
            want = list(scalars) + [pres.field.zero] * (n - len(scalars))
            if series.truncate(n).residue_scalars() != want[:n]:
                problems.append(f"{name} does not reduce to the base arc mod m")
        embed = _series_embed(self.ring, n)
        assignment = self.assignment(pres)
        for i, p in enumerate(pres.ps):
            value = p.evaluate(assignment, embed).truncate(n)
            if not value.is_zero():
                problems.append(
                    f"p{i + 1} nonzero at t^{value.t_order()} (precision {n})"
                )
        return problems

    def __repr__(self):
        xs = ", ".join(repr(s) for s in self.x)
        ys = ", ".join(repr(s) for s in self.y)
        return f"Deformation(x=({xs}), y=({ys}))"


def embed_base_deformation(pres, arc, ring, n):
    xs, ys = arc.embed(ring, n)
    return Deformation(ring, xs, ys, arc)


def jacobian_det_series(pres, assignment, ring, n):
    embed = _series_embed(ring, n)
    rows = [
        [entry.evaluate(assignment, embed) for entry in row]
        for row in pres.jacobian()
    ]
    det, _ = det_and_adjugate(rows, one=TruncatedSeries.const(ring.one(), n))
    return det


def deformation_from_perturbation(pres, arc, ring, dx, dybar, r=1, n_user=None):
    """Build a genuine deformation from drawn data, or fail.

    dx: one m-valued Poly per x-variable (added to the base x).
    dybar: one m-valued Poly of degree < r*d per y-variable (added to
    the truncated base y to form the candidate class of y mod q^r).
    Raises ObstructedLift when no deformation has this data.
    """
    from . import equivalence
    from .weierstrass import weierstrass_prepare

    d = compute_defect(pres, arc)
    a = ring.a
    if n_user is None:
        n_user = default_report_precision(d, r)
    n_work = work_precision(n_user, a, d)
    if n_work > arc.precision:
        raise PrecisionExhausted(
            f"arc precision {arc.precision} < working precision {n_work}"
        )
    x0, y0 = arc.embed(ring, n_work)
    xs = [s + TruncatedSeries.from_poly(p, ring, n_work) for s, p in zip(x0, dx)]
    yg = [s + TruncatedSeries.from_poly(p, ring, n_work) for s, p in zip(y0, dybar)]
    assignment = dict(zip(pres.variables, xs + yg))
    try:
        prep = weierstrass_prepare(jacobian_det_series(pres, assignment, ring, n_work))
        qr = prep.q**r
        ybar = [s.divmod_monic(qr)[1] for s in yg]
        y, _ = equivalence.hensel_lift(pres, arc, prep.q, xs, ybar, r)
    except (
        equivalence.InconsistentInput,
        ObstructedLift,
    ) as exc:
        raise ObstructedLift(f"drawn data admits no deformation: {exc}") from exc
    return Deformation(ring, xs, y, arc)


def default_report_precision(d, r=1):
    return max(8, (r + 1) * d + 2)


def _random_m_poly(ring, rng, deg_bound, min_level=1):
    coeffs = []
    for _ in range(deg_bound):
        if rng.randrange(2):
            coeffs.append(ring.zero())
        else:
            coeffs.append(ring.random_m_element(rng, min_level=min_level))
    return Poly(coeffs)


def _random_reparametrization(ring, rng, n):
    """phi = alpha + t*(1 + ...) with m-valued alpha and corrections."""
    coeffs = [ring.random_m_element(rng)]
    coeffs.append(ring.one() + ring.random_m_element(rng))
    for _ in range(2):
        coeffs.append(
            ring.random_m_element(rng) if rng.randrange(2) else ring.zero()
        )
    return TruncatedSeries.from_elems(ring, coeffs, n)


def random_deformation(pres, arc, ring, seed, r=1, n_user=None, retries=64):
    """Seeded random genuine deformation.

    Draws combine a random reparametrization of the base arc, m-valued
    perturbations of x and of the class of y mod q^r, and free disk
    coordinates; the lift turns accepted draws into exact solutions.
    Draws whose model-side data is obstructed are retried.
    """
    from . import equivalence
    from .weierstrass import weierstrass_prepare
    from .errors import InconsistentInput, NotAUnit, ResidueZero

    d = compute_defect(pres, arc)
    a = ring.a
    if n_user is None:
        n_user = default_report_precision(d, r)
    n_work = work_precision(n_user, a, d)
    if n_work > arc.precision:
        raise PrecisionExhausted(
            f"arc precision {arc.precision} < working precision {n_work}"
        )
    rng = random.Random(seed)
    failures = []
    for _ in range(retries):
        use_repar = rng.randrange(3) > 0
        use_draw = rng.randrange(3) > 0 or not use_repar
        if use_repar:
            phi = _random_reparametrization(ring, rng, n_work)
            xs = [compose_scalar_poly(list(c), phi) for c in arc.x]
            yg = [compose_scalar_poly(list(c), phi) for c in arc.y]
        else:
            xs, yg = arc.embed(ring, n_work)
        if use_draw:
            xs = [
                s + TruncatedSeries.from_poly(
                    _random_m_poly(ring, rng, (r + 1) * d + 2), ring, n_work
                )
                for s in xs
            ]
            yg = [
                s + TruncatedSeries.from_poly(
                    _random_m_poly(ring, rng, max(r * d, 1)), ring, n_work
                )
                for s in yg
            ]
        assignment = dict(zip(pres.variables, xs + yg))
        try:
            det = jacobian_det_series(pres, assignment, ring, n_work)
            prep = weierstrass_prepare(det)
            qr = prep.q**r
            ybar = [s.divmod_monic(qr)[1] for s in yg]
            y, _ = equivalence.hensel_lift(pres, arc, prep.q, xs, ybar, r)
        except (InconsistentInput, ObstructedLift, NotAUnit, ResidueZero) as exc:
            failures.append(str(exc))
            continue
        # Free disk directions: shifting x by multiples of q^(r+1) keeps
        # the model-side data valid, so the re-lift cannot obstruct.
        q_top = prep.q ** (r + 1)
        dxi = [_random_m_poly(ring, rng, 3) for _ in range(pres.n)]
        if any(p for p in dxi):
            xs = [
                s + TruncatedSeries.from_poly(p, ring, n_work).mul_poly(q_top)
                for s, p in zip(xs, dxi)
            ]
            y, _ = equivalence.hensel_lift(pres, arc, prep.q, xs, ybar, r)
        return Deformation(ring, xs, y, arc)
    raise ObstructedLift(
        f"no admissible deformation in {retries} attempts; last failure: "
        + (failures[-1] if failures else "none recorded")
    )
