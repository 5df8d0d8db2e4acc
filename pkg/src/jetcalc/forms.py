"""Exterior algebra on the phase bundle, in coordinates.

Forms are degree-homogeneous sums of wedge monomials in the basis one-forms
dx^mu, dphi_mi, dp^{mi|lam} with Expr coefficients.  Factors are kept
strictly increasing in the coordinate order, signs absorbed into the
coefficients, so equality of forms is equality of coefficient tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coords import Base, Coordinate, Jet, Momentum, Multiplier, Parameter
from .expr import Expr, ZERO, partial_derivative, substitute


class FormsError(ValueError):
    pass


def _check_basis(c: Coordinate):
    if isinstance(c, (Parameter, Multiplier)):
        raise FormsError(f"{c!r} has no basis one-form")
    return c


def _sorted_factors(factors):
    """Sort a factor tuple into canonical order; returns (sign, tuple) with
    sign 0 when a factor repeats."""
    facs = list(factors)
    keys = [f.sort_key() for f in facs]
    sign = 1
    for i in range(1, len(facs)):
        j = i
        while j > 0 and keys[j - 1] > keys[j]:
            keys[j - 1], keys[j] = keys[j], keys[j - 1]
            facs[j - 1], facs[j] = facs[j], facs[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(facs, facs[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(facs)


class ExteriorForm:
    """A homogeneous differential form; immutable."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict | None = None):
        canonical: dict = {}
        for factors, coeff in (terms or {}).items():
            for f in factors:
                _check_basis(f)
            if len(factors) != degree:
                raise FormsError("mixed-degree form rejected")
            sign, facs = _sorted_factors(factors)
            if sign == 0:
                continue
            c = coeff if sign == 1 else -coeff
            canonical[facs] = canonical.get(facs, ZERO) + c
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms",
                           {f: c for f, c in canonical.items() if not c.is_zero()})

    def __setattr__(self, *a):
        raise AttributeError("ExteriorForm is immutable")

    @staticmethod
    def zero(degree: int) -> "ExteriorForm":
        return ExteriorForm(degree)

    @staticmethod
    def scalar(e: Expr) -> "ExteriorForm":
        return ExteriorForm(0, {(): e})

    @staticmethod
    def d_coordinate(c: Coordinate) -> "ExteriorForm":
        return ExteriorForm(1, {(_check_basis(c),): Expr.const(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, ExteriorForm)
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        if self.degree != other.degree:
            raise FormsError("cannot add forms of different degree")
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = terms.get(f, ZERO) + c
        return ExteriorForm(self.degree, terms)

    def __neg__(self):
        return ExteriorForm(self.degree, {f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, e) -> "ExteriorForm":
        e = e if isinstance(e, Expr) else Expr.const(e)
        return ExteriorForm(self.degree,
                            {f: c * e for f, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for facs, coeff in sorted(self.terms.items(),
                                  key=lambda fc: tuple(f.sort_key() for f in fc[0])):
            wedge_part = " ∧ ".join(f"d({f!r})" for f in facs)
            if not facs:
                parts.append(f"({coeff})")
            else:
                parts.append(f"({coeff}) {wedge_part}")
        return " + ".join(parts)


def wedge(a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    """Graded-antisymmetric product; degree adds."""
    terms: dict = {}
    for fa, ca in a.terms.items():
        for fb, cb in b.terms.items():
            sign, facs = _sorted_factors(fa + fb)
            if sign == 0:
                continue
            c = ca * cb if sign == 1 else -(ca * cb)
            terms[facs] = terms.get(facs, ZERO) + c
    return ExteriorForm(a.degree + b.degree, terms)


def exterior_derivative(a: ExteriorForm) -> ExteriorForm:
    """d in coordinates: differentials of every coordinate the coefficients
    actually depend on, wedged in front.  dd = 0."""
    terms: dict = {}
    for facs, coeff in a.terms.items():
        for c in coeff.free_coordinates():
            if isinstance(c, (Parameter, Multiplier)):
                continue
            dc = partial_derivative(coeff, c)
            if dc.is_zero():
                continue
            key = (c,) + facs
            terms[key] = terms.get(key, ZERO) + dc
    return ExteriorForm(a.degree + 1, terms)


@dataclass(frozen=True)
class VectorField:
    """Finitely many components against the coordinate basis fields."""

    components: tuple

    @staticmethod
    def of(mapping: dict) -> "VectorField":
        comps = tuple((c, e) for c, e in mapping.items() if not e.is_zero())
        return VectorField(comps)

    def component(self, c: Coordinate) -> Expr:
        for cc, e in self.components:
            if cc == c:
                return e
        return ZERO


def interior_product(X: VectorField, a: ExteriorForm) -> ExteriorForm:
    """Contraction in the first slot with graded signs; degree drops by one."""
    if a.degree < 1:
        raise FormsError("interior product needs degree >= 1")
    terms: dict = {}
    for facs, coeff in a.terms.items():
        for i, f in enumerate(facs):
            comp = X.component(f)
            if comp.is_zero():
                continue
            rest = facs[:i] + facs[i + 1:]
            c = coeff * comp
            if i % 2:
                c = -c
            terms[rest] = terms.get(rest, ZERO) + c
    return ExteriorForm(a.degree - 1, terms)


class SectionData:
    """An assignment of base-coordinate expressions to fibre slots.

    Values may depend on base coordinates (and opaque functions of them)
    only.  Derivative-decorated momentum atoms evaluate by differentiating
    the assigned slot expression.
    """

    def __init__(self, assign: dict, n: int | None = None):
        dims = {slot.mi.n for slot in assign}
        if n is None:
            if len(dims) != 1:
                raise FormsError("cannot infer base dimension; pass n")
            n = dims.pop()
        elif dims - {n}:
            raise FormsError("slot dimension disagrees with n")
        for slot, value in assign.items():
            if not isinstance(slot, (Jet, Momentum)):
                raise FormsError(f"section assigns fibre slots only, got {slot!r}")
            bad = [c for c in value.free_coordinates() if isinstance(c, (Jet, Momentum))]
            if bad:
                raise FormsError(f"section value for {slot!r} contains fibre atom {bad[0]!r}")
        self.n = n
        self.assign = dict(assign)

    def value(self, atom) -> Expr:
        if isinstance(atom, Momentum) and atom.derivs.order:
            base_atom = Momentum(atom.fld, atom.mi, atom.last)
            if base_atom not in self.assign:
                raise FormsError(f"missing assignment for {base_atom!r}")
            v = self.assign[base_atom]
            for direction, count in enumerate(atom.derivs, start=1):
                for _ in range(count):
                    v = partial_derivative(v, Base(direction))
            return v
        if atom not in self.assign:
            raise FormsError(f"missing assignment for {atom!r}")
        return self.assign[atom]

    def evaluate(self, e: Expr) -> Expr:
        fibre = [c for c in e.free_coordinates() if isinstance(c, (Jet, Momentum))]
        return substitute(e, {c: self.value(c) for c in fibre})


def pullback_section(a: ExteriorForm, sigma: SectionData) -> ExteriorForm:
    """sigma^* a: substitute fibre atoms and expand fibre differentials as
    sum_lam d_lam(value) dx^lam; the result lives over the base."""
    out = ExteriorForm.zero(a.degree)
    for facs, coeff in a.terms.items():
        term = ExteriorForm.scalar(sigma.evaluate(coeff))
        for f in facs:
            if isinstance(f, Base):
                one_form = ExteriorForm.d_coordinate(f)
            else:
                value = sigma.value(f)
                pieces: dict = {}
                for mu in range(1, sigma.n + 1):
                    dv = partial_derivative(value, Base(mu))
                    if not dv.is_zero():
                        pieces[(Base(mu),)] = dv
                one_form = ExteriorForm(1, pieces)
            term = wedge(term, one_form)
        out = out + term
    return out


def holonomic_section(problem, profiles: dict, jet_order: int,
                      momenta: dict | None = None) -> SectionData:
    """Prolong base-coordinate field profiles into a holonomic SectionData
    assigning every jet slot up to ``jet_order``; extra momentum-slot
    assignments may be supplied alongside."""
    from .expr import total_derivative_multi
    from .multiindex import multiindices_up_to

    assign: dict = {}
    for fld in problem.fields:
        f = profiles[fld]
        for mi in multiindices_up_to(problem.n, jet_order):
            assign[Jet(fld, mi)] = total_derivative_multi(f, mi)
    if momenta:
        assign.update(momenta)
    return SectionData(assign)
