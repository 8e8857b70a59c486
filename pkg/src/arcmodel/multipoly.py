"""Sparse multivariate polynomials over the base field k.

These carry the defining equations of the variety and the generated
model equations.  Terms map exponent tuples to nonzero k-scalars; the
printed form is canonical (graded-lex, leading term first).
"""

from .errors import StructuralError


def _term_key(e):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("field", "variables", "terms")

    def __init__(self, field, variables, terms):
        self.field = field
        self.variables = tuple(variables)
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def zero(cls, field, variables):
        return cls(field, variables, {})

    @classmethod
    def const(cls, field, variables, scalar):
        e = (0,) * len(variables)
        return cls(field, variables, {e: scalar})

    @classmethod
    def var(cls, field, variables, name):
        variables = tuple(variables)
        if name not in variables:
            raise StructuralError(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(field, variables, {e: field.one})

    def _same_space(self, other):
        if self.field != other.field or self.variables != other.variables:
            raise StructuralError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._same_space(other)
            return other
        if isinstance(other, int):
            return MultiPoly.const(self.field, self.variables, self.field.of_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        add = self.field.add
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = add(terms.get(e, self.field.zero), c)
        return MultiPoly(self.field, self.variables, terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        neg = self.field.neg
        return MultiPoly(
            self.field, self.variables, {e: neg(c) for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        other = self._coerce(other)
        mul = self.field.mul
        add = self.field.add
        zero = self.field.zero
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = add(terms.get(e, zero), mul(c1, c2))
        return MultiPoly(self.field, self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("exponent must be a nonnegative integer")
        result = MultiPoly.const(self.field, self.variables, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scalar_mul(self, c):
        mul = self.field.mul
        return MultiPoly(
            self.field, self.variables, {e: mul(c, v) for e, v in self.terms.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.variables, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_one(self):
        e = (0,) * len(self.variables)
        return self.terms == {e: self.field.one}

    def one_like(self):
        return MultiPoly.const(self.field, self.variables, self.field.one)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def used_variables(self):
        used = set()
        for e in self.terms:
            for name, exp in zip(self.variables, e):
                if exp:
                    used.add(name)
        return used

    def derivative(self, name):
        """Formal partial derivative with respect to one variable."""
        i = self.variables.index(name)
        mul = self.field.mul
        terms = {}
        add = self.field.add
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            scaled = mul(c, self.field.of_int(e[i]))
            if not scaled:
                continue
            e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
            terms[e2] = add(terms.get(e2, self.field.zero), scaled)
        return MultiPoly(self.field, self.variables, terms)

    def evaluate(self, assignment, embed):
        """Substitute values for every variable.

        assignment maps each variable name to a value in some target
        ring; embed lifts a k-scalar into that ring.  Values only need
        +, * and integer powers, so the same code evaluates into test
        rings, truncated series, or polynomials with symbolic
        coefficients.
        """
        values = []
        for name in self.variables:
            if name not in assignment:
                raise StructuralError(f"no value assigned to {name!r}")
            values.append(assignment[name])
        powers = [{0: None} for _ in values]

        def vpow(i, n):
            cache = powers[i]
            if n in cache and cache[n] is not None:
                return cache[n]
            result = values[i]
            for _ in range(n - 1):
                result = result * values[i]
            cache[n] = result
            return result

        total = embed(self.field.zero)
        for e in sorted(self.terms, key=_term_key):
            c = self.terms[e]
            acc = embed(c)
            for i, exp in enumerate(e):
                if exp:
                    acc = acc * vpow(i, exp)
            total = total + acc
        return total

    def to_string(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_term_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                name if exp == 1 else f"{name}^{exp}"
                for name, exp in zip(self.variables, e)
                if exp
            )
            parts.append((c, mono))
        out = []
        one = self.field.one
        for pos, (c, mono) in enumerate(parts):
            neg = self.field.kind == "Q" and c < 0
            mag = -c if neg else c
            if mono and mag == one:
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

    def __repr__(self):
        return self.to_string()


def jacobian_block(ps, yvars):
    """The square matrix of formal partials of the system with respect
    to the chosen variables, as rows of MultiPoly."""
    if len(ps) != len(yvars):
        raise StructuralError(
            f"need as many polynomials as variables ({len(ps)} vs {len(yvars)})"
        )
    return [[p.derivative(name) for name in yvars] for p in ps]


def eval_poly_system(ps, assignment, embed):
    """Evaluate each polynomial of the system at the given assignment."""
    return [p.evaluate(assignment, embed) for p in ps]
