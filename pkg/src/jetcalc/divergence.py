"""Total-divergence Lagrangians: triviality and the momentum-shift map."""

from __future__ import annotations

from dataclasses import dataclass

from .coords import Jet, Momentum
from .expr import Expr, ZERO, partial_derivative, total_derivative
from .multiindex import multiindices_up_to
from .problem import LagrangianProblem
from .variational import (Equation, EquationSet, MomentumAssignment,
                          euler_lagrange, jet_partial)


class DivergenceError(ValueError):
    pass


@dataclass(frozen=True)
class DivergenceData:
    """F^lam components, their divergence L0 = sum D_lam F^lam, and the
    order l of the resulting Lagrangian (F lives on jets of order l-1)."""

    components: tuple
    lagrangian: Expr
    order: int
    fields: tuple


def _fields_of(F, fields=None) -> tuple:
    if fields is not None:
        return tuple(fields)
    found = sorted({c.fld for e in F for c in e.free_coordinates()
                    if isinstance(c, Jet)})
    return tuple(found) if found else ("u",)


def _validate(F):
    for lam, e in enumerate(F, start=1):
        for c in e.free_coordinates():
            if isinstance(c, Momentum):
                raise DivergenceError(
                    f"F^{lam} contains a momentum atom {c!r}")


def divergence_lagrangian(F, fields=None) -> DivergenceData:
    """L0 = sum_lam D_lam F^lam; an order-(l) Lagrangian for order-(l-1) F."""
    F = tuple(F)
    _validate(F)
    L0 = ZERO
    for lam, comp in enumerate(F, start=1):
        L0 = L0 + total_derivative(comp, lam)
    order = max(max((e.max_jet_order() for e in F), default=0) + 1, 1)
    return DivergenceData(components=F, lagrangian=L0, order=order,
                          fields=_fields_of(F, fields))


def trivial_momenta(F, fields=None) -> MomentumAssignment:
    """The non-symmetric representative p^{mu lam} := dF^lam / dphi_mu."""
    data = divergence_lagrangian(F, fields)
    n, l = len(data.components), data.order
    slots = {}
    for fld in data.fields:
        for mi in multiindices_up_to(n, l - 1):
            for lam in range(1, n + 1):
                slots[(fld, mi, lam)] = partial_derivative(
                    data.components[lam - 1], Jet(fld, mi))
    return MomentumAssignment(n, data.fields, l, slots)


def verify_divergence_trivial(F, fields=None) -> EquationSet:
    """Residual table dL0/dphi_mu - sum_lam D_lam p^{mu lam}: it equals the
    symmetrized trivial momenta entrywise and the eliminated Euler-Lagrange
    residual of L0 vanishes identically; both are returned for inspection."""
    data = divergence_lagrangian(F, fields)
    m = trivial_momenta(F, fields)
    n, l = len(data.components), data.order
    problem = LagrangianProblem(n, data.fields, l, data.lagrangian)
    rows = []
    for fld in data.fields:
        for mi in multiindices_up_to(n, l):
            lhs = jet_partial(data.lagrangian, fld, mi)
            if mi.order <= l - 1:
                for lam in range(1, n + 1):
                    lhs = lhs - total_derivative(m.slot(fld, mi, lam), lam)
            rhs = m.symmetric_part(fld, mi) if mi.order >= 1 else ZERO
            mi_s = ",".join(map(str, mi))
            rows.append(Equation(f"{fld}:residual[{mi_s}]", lhs, rhs))
        rows.append(Equation(f"{fld}:euler",
                             euler_lagrange(problem)[fld], ZERO))
    return EquationSet(rows)


def momentum_shift(m: MomentumAssignment, F, direction: str = "forward",
                   fields=None) -> MomentumAssignment:
    """The symplectomorphism p^{mu lam} -> p^{mu lam} +/- dF^lam/dphi_mu;
    forward followed by inverse is the identity.  The grid is enlarged with
    zero slots when F raises the order."""
    if direction not in ("forward", "inverse"):
        raise DivergenceError(f"unknown direction {direction!r}")
    F = tuple(F)
    _validate(F)
    if len(F) != m.n:
        raise DivergenceError("F component count differs from base dimension")
    l = max(max((e.max_jet_order() for e in F), default=0) + 1, 1)
    order = max(m.order, l)
    sign = 1 if direction == "forward" else -1
    slots = {}
    for fld in m.fields:
        for mi in multiindices_up_to(m.n, order - 1):
            for lam in range(1, m.n + 1):
                value = m.slots.get((fld, mi, lam), ZERO)
                delta = partial_derivative(F[lam - 1], Jet(fld, mi))
                slots[(fld, mi, lam)] = value + (delta if sign == 1 else -delta)
    return MomentumAssignment(m.n, m.fields, order, slots)
