"""Exact symbolic expressions over phase-bundle coordinates.

An ``Expr`` is kept permanently in canonical form: an expanded multivariate
polynomial over its atoms with reduced rational coefficients, atoms sorted by
the fixed coordinate order and like terms merged.  Equality of canonical
forms therefore decides equality of the underlying functions, which is what
every theorem check in the package reduces to.

Atoms are the coordinates of :mod:`jetcalc.coords` plus opaque function
applications.  Parameters may carry negative exponents (they are symbolic
constants, so 1/m is legal); every other atom is restricted to a plain
polynomial role.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache

from .coords import Base, Coordinate, Jet, Momentum, Multiplier, Parameter

_RANK_OPAQUE = 5


class ExprError(Exception):
    """Illegal algebraic operation (bad division, bad exponent, ...)."""


@dataclass(frozen=True)
class OpaqueCall:
    """An opaque function symbol applied to argument expressions.

    ``derivs[i]`` counts formal derivatives with respect to the i-th argument
    slot; markers are symmetric by construction (only counts are stored).
    Distinct marker/argument combinations are independent atoms.
    """

    name: str
    derivs: tuple[int, ...]
    args: tuple["Expr", ...]

    def sort_key(self):
        return (
            _RANK_OPAQUE,
            self.name,
            tuple(self.derivs),
            (),
            len(self.args),
            tuple(a._key() for a in self.args),
        )

    def bump(self, slot: int) -> "OpaqueCall":
        """Marker with one more derivative in the (0-based) argument slot."""
        d = list(self.derivs)
        d[slot] += 1
        return OpaqueCall(self.name, tuple(d), self.args)

    def __repr__(self):
        body = ", ".join(map(str, self.args))
        if any(self.derivs):
            digits = "".join(
                str(i + 1) * c for i, c in enumerate(self.derivs)
            )
            return f"{self.name}_{{,{digits}}}({body})"
        return f"{self.name}({body})"


Atom = Coordinate | OpaqueCall


@lru_cache(maxsize=None)
def _akey(atom):
    return atom.sort_key()


def _mul_monomials(m1, m2):
    """Merge two sorted monomials, summing exponents; None if a non-parameter
    atom would end up with a negative power."""
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        a1, e1 = m1[i]
        a2, e2 = m2[j]
        if a1 == a2:
            e = e1 + e2
            if e:
                out.append((a1, e))
            i += 1
            j += 1
        elif _akey(a1) < _akey(a2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    for a, e in out:
        if e < 0 and not isinstance(a, Parameter):
            return None
    return tuple(out)


class Expr:
    """Immutable canonical expression.  Construct via :meth:`const`,
    :meth:`atom` and arithmetic; never mutate ``_terms``."""

    __slots__ = ("_terms", "_hash", "_cached_key")

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for mon, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    clean[mon] = clean.get(mon, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_cached_key", None)

    def __setattr__(self, *a):
        raise AttributeError("Expr is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value) -> "Expr":
        return Expr({(): Fraction(value)})

    @staticmethod
    def atom(a: Atom) -> "Expr":
        return Expr({((a, 1),): Fraction(1)})

    # -- canonical identity ------------------------------------------------

    def _key(self):
        k = self._cached_key
        if k is None:
            k = tuple(
                sorted(
                    ((tuple((_akey(a), e) for a, e in m),
                      (c.numerator, c.denominator))
                     for m, c in self._terms.items())
                )
            )
            object.__setattr__(self, "_cached_key", k)
        return k

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ExprError(f"not a constant: {self}")
        return next(iter(self._terms.values()))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return Expr(terms)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mul_monomials(m1, m2)
                if m is None:
                    raise ExprError("negative power of a non-parameter atom")
                terms[m] = terms.get(m, 0) + c1 * c2
        return Expr(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ExprError("exponents must be non-negative integers")
        result = Expr.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, other):
        return divide(self, _coerce(other))

    def __repr__(self):
        return to_dsl(self)

    # -- structure ---------------------------------------------------------

    def atoms(self) -> set:
        return {a for m in self._terms for a, _ in m}

    def free_coordinates(self) -> set:
        """All coordinate atoms, including those buried in opaque arguments."""
        out: set = set()
        for a in self.atoms():
            if isinstance(a, OpaqueCall):
                for arg in a.args:
                    out |= arg.free_coordinates()
            else:
                out.add(a)
        return out

    def max_jet_order(self) -> int:
        orders = [c.mi.order for c in self.free_coordinates() if isinstance(c, Jet)]
        return max(orders, default=0)


ZERO = Expr()
ONE = Expr.const(1)


def _coerce(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return Expr.const(v)
    raise TypeError(f"cannot coerce {v!r} to Expr")


def normalize(e: Expr) -> Expr:
    """Canonical form.  Expressions are canonical by construction, so this is
    the identity; it exists as the named contract point."""
    return e


# -- differentiation -------------------------------------------------------


def _atom_partial(a: Atom, c: Coordinate) -> Expr:
    if a == c:
        return ONE
    if isinstance(a, OpaqueCall):
        out = ZERO
        for i, arg in enumerate(a.args):
            d = partial_derivative(arg, c)
            if not d.is_zero():
                out = out + d * Expr.atom(a.bump(i))
        return out
    return ZERO


def _atom_total(a: Atom, lam: int) -> Expr:
    if isinstance(a, Base):
        return ONE if a.mu == lam else ZERO
    if isinstance(a, Jet):
        return Expr.atom(Jet(a.fld, a.mi.bump(lam)))
    if isinstance(a, Momentum):
        return Expr.atom(Momentum(a.fld, a.mi, a.last, a.derivs.bump(lam)))
    if isinstance(a, (Parameter,)):
        return ZERO
    if isinstance(a, Multiplier):
        raise ExprError("total derivative of a Lagrange multiplier is undefined")
    if isinstance(a, OpaqueCall):
        out = ZERO
        for i, arg in enumerate(a.args):
            d = total_derivative(arg, lam)
            if not d.is_zero():
                out = out + d * Expr.atom(a.bump(i))
        return out
    raise TypeError(f"unknown atom {a!r}")


def _derive(e: Expr, atom_rule) -> Expr:
    """Extend a derivation defined on atoms to the whole algebra (Leibniz)."""
    out = ZERO
    for mon, coeff in e._terms.items():
        for i, (a, exp) in enumerate(mon):
            da = atom_rule(a)
            if da.is_zero():
                continue
            rest: dict = {}
            new_mon = mon[:i] + ((a, exp - 1),) if exp != 1 else mon[:i]
            new_mon = new_mon + mon[i + 1:]
            new_mon = tuple((x, k) for x, k in new_mon if k)
            rest[new_mon] = Fraction(coeff) * exp
            out = out + Expr(rest) * da
    return out


def partial_derivative(e: Expr, c: Coordinate) -> Expr:
    """Formal partial derivative; every other coordinate is independent."""
    return _derive(e, lambda a: _atom_partial(a, c))


def total_derivative(e: Expr, lam: int) -> Expr:
    """Total derivative D_lam: differentiates the explicit base dependence,
    raises jets holonomically and decorates momentum atoms with a base
    derivative."""
    return _derive(e, lambda a: _atom_total(a, lam))


def total_derivative_multi(e: Expr, mi, order_cap: int = 12) -> Expr:
    """Composed total derivative D_mi (directions commute, order immaterial)."""
    out = e
    for direction, count in enumerate(mi, start=1):
        for _ in range(count):
            out = total_derivative(out, direction)
            if out.max_jet_order() > order_cap:
                raise ExprError(
                    f"jet order exceeded cap {order_cap} during iterated total derivative"
                )
    return out


# -- substitution ----------------------------------------------------------


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace coordinate atoms by expressions (opaque arguments included)."""
    out = ZERO
    for mon, coeff in e._terms.items():
        term = Expr.const(coeff)
        for a, exp in mon:
            if isinstance(a, OpaqueCall):
                val = Expr.atom(
                    OpaqueCall(a.name, a.derivs,
                               tuple(substitute(arg, mapping) for arg in a.args))
                )
            elif a in mapping:
                val = _coerce(mapping[a])
            else:
                val = Expr.atom(a)
            if exp >= 0:
                term = term * val ** exp
            else:
                term = divide(term, val ** (-exp))
        out = out + term
    return out


# -- division --------------------------------------------------------------


def _div_single_term(num: Expr, den: Expr) -> Expr:
    """Divide by a one-term divisor: cancellation is strict except that
    parameter atoms may be carried into negative (Laurent) powers."""
    ((dmon, dcoeff),) = den._terms.items()
    neg = tuple((a, -e) for a, e in dmon)
    terms = {}
    for mon, coeff in num._terms.items():
        m = _mul_monomials(mon, neg)
        if m is None:
            raise ExprError(f"division by non-constant expression: {den}")
        terms[m] = coeff / dcoeff
    return Expr(terms)


def _cmp_monomials(m1, m2) -> int:
    """Graded lexicographic comparison (a true monomial order: total degree
    first, then the earliest atom with a differing exponent decides, larger
    exponent winning; absent atoms count as zero)."""
    g1 = sum(e for _, e in m1)
    g2 = sum(e for _, e in m2)
    if g1 != g2:
        return 1 if g1 > g2 else -1
    i = j = 0
    while i < len(m1) or j < len(m2):
        a1 = m1[i] if i < len(m1) else None
        a2 = m2[j] if j < len(m2) else None
        if a1 is not None and a2 is not None and a1[0] == a2[0]:
            if a1[1] != a2[1]:
                return 1 if a1[1] > a2[1] else -1
            i += 1
            j += 1
            continue
        if a2 is None or (a1 is not None and _akey(a1[0]) < _akey(a2[0])):
            return 1 if a1[1] > 0 else -1
        return -1 if a2[1] > 0 else 1
    return 0


def _lead(e: Expr):
    """Leading term under the graded-lex monomial order."""
    return max(e._terms.items(),
               key=cmp_to_key(lambda x, y: _cmp_monomials(x[0], y[0])))


def divide(num: Expr, den: Expr) -> Expr:
    """Exact division.

    Constants and single-term parameter monomials always divide (parameters
    are symbolic constants, so 1/m is legal Laurent data).  A multi-term
    divisor is handled by exact multivariate polynomial division and must
    divide without remainder.
    """
    den = _coerce(den)
    num = _coerce(num)
    if den.is_zero():
        raise ExprError("division by zero")
    if den.is_constant():
        return num * Expr.const(1 / den.as_fraction())
    if len(den._terms) == 1:
        return _div_single_term(num, den)
    if any(e < 0 for mon in den._terms for _, e in mon):
        raise ExprError(f"unsupported divisor {den}")
    lead_mon, lead_coeff = _lead(den)
    quotient = ZERO
    rem = num
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > 100000:
            raise ExprError(f"division did not terminate: {num} by {den}")
        rmon, rcoeff = _lead(rem)
        qmon = _div_monomials(rmon, lead_mon)
        if qmon is None:
            raise ExprError(f"inexact division: {num} by {den}")
        qterm = Expr({qmon: rcoeff / lead_coeff})
        quotient = quotient + qterm
        rem = rem - qterm * den
    return quotient


def _div_monomials(m1, m2):
    """m1 / m2 as a monomial, or None unless every factor of m2 is matched in
    m1 with at least its exponent (no Laurent slack for multi-term divisors)."""
    have = dict(m1)
    for a, e in m2:
        if have.get(a, 0) < e:
            return None
    neg = tuple((a, -e) for a, e in m2)
    return _mul_monomials(m1, neg)


# -- canonical DSL printing -------------------------------------------------

_DISPLAY_RANK = {Parameter: 0, Base: 1, Jet: 2, Momentum: 3, Multiplier: 4,
                 OpaqueCall: 5}


def _display_sorted(mon):
    return sorted(mon, key=lambda p: (_DISPLAY_RANK[type(p[0])], _akey(p[0])))


def _factor_str(a: Atom, e: int) -> str:
    s = repr(a)
    return s if e == 1 else f"{s}^{e}"


def to_dsl(e: Expr) -> str:
    """Canonical textual form; reparsing yields the identical Expr."""
    if e.is_zero():
        return "0"
    pieces = []
    for mon, coeff in sorted(e._terms.items(),
                             key=lambda mc: tuple((_akey(a), x) for a, x in mc[0])):
        pos = [(a, x) for a, x in _display_sorted(mon) if x > 0]
        neg = [(a, -x) for a, x in _display_sorted(mon) if x < 0]
        num_parts = []
        if abs(coeff.numerator) != 1 or not pos:
            num_parts.append(str(abs(coeff.numerator)))
        num_parts.extend(_factor_str(a, x) for a, x in pos)
        den_parts = []
        if coeff.denominator != 1:
            den_parts.append(str(coeff.denominator))
        den_parts.extend(_factor_str(a, x) for a, x in neg)
        s = "*".join(num_parts)
        if den_parts:
            s += "/" + (den_parts[0] if len(den_parts) == 1
                        else "(" + "*".join(den_parts) + ")")
        pieces.append((coeff < 0, s))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for negative, s in pieces[1:]:
        out += (" - " if negative else " + ") + s
    return out
