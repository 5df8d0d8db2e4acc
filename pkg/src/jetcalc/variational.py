"""The canonical cascade: momenta, currents, Euler-Lagrange systems, gauge.

Momentum storage convention.  A slot (field, mu, lam) holds the multi-index
momentum conjugate to phi_mu with free last index lam, for 0 <= |mu| <= k-1.
Multi-index values relate to symmetric-list values by the multinomial weight
of the prefix, which makes the total symmetrization a plain sum:

    S[sigma] = sum_lam slot[sigma - e_lam, lam],      1 <= |sigma| <= k.

The cascade, the currents and the gauge propagation below are all written in
this storage; the weights from ``multiindex_factor`` enter exactly where the
symmetric-list formulas require them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coords import Base, Jet, Momentum, Multiplier
from .expr import (Expr, ZERO, partial_derivative, substitute,
                   total_derivative, total_derivative_multi)
from .multiindex import MultiIndex, all_multiindices, multiindices_up_to
from .problem import LagrangianProblem


class VariationalError(ValueError):
    pass


@dataclass(frozen=True)
class Equation:
    label: str
    lhs: Expr
    rhs: Expr

    def residual(self) -> Expr:
        return self.lhs - self.rhs


class EquationSet:
    """An ordered list of labelled equations lhs = rhs."""

    def __init__(self, rows):
        self.rows = tuple(rows)
        labels = [r.label for r in self.rows]
        if len(set(labels)) != len(labels):
            raise VariationalError("duplicate equation labels")

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, label: str) -> Equation:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def residuals(self, skip_definitional: bool = True):
        return [(r.label, r.residual()) for r in self.rows
                if not (skip_definitional and r.label.startswith("def:"))]

    def all_zero(self) -> bool:
        return all(res.is_zero() for _, res in self.residuals())


class MomentumAssignment:
    """Values for every momentum slot of a problem's (n, order) grid."""

    def __init__(self, n: int, fields: tuple, order: int, slots: dict):
        self.n = n
        self.fields = tuple(fields)
        self.order = order
        expected = set(self.grid_keys(n, self.fields, order))
        if set(slots) != expected:
            missing = expected - set(slots)
            extra = set(slots) - expected
            raise VariationalError(
                f"slot grid mismatch (missing {len(missing)}, extra {len(extra)})")
        self.slots = dict(slots)

    @staticmethod
    def grid_keys(n: int, fields, order: int):
        for fld in fields:
            for mi in multiindices_up_to(n, order - 1):
                for lam in range(1, n + 1):
                    yield (fld, mi, lam)

    @classmethod
    def zero(cls, n: int, fields, order: int) -> "MomentumAssignment":
        return cls(n, fields, order,
                   {key: ZERO for key in cls.grid_keys(n, fields, order)})

    def slot(self, fld: str, mi: MultiIndex, lam: int) -> Expr:
        return self.slots[(fld, mi, lam)]

    def symmetric_part(self, fld: str, mi: MultiIndex) -> Expr:
        """S[mi] = sum_lam slot[mi - e_lam, lam]; the totally symmetric
        multi-index momentum of order |mi| >= 1."""
        if not 1 <= mi.order <= self.order:
            raise VariationalError(f"no momentum of order {mi.order}")
        out = ZERO
        for lam in mi.directions():
            out = out + self.slot(fld, mi.drop(lam), lam)
        return out

    def __eq__(self, other):
        return (isinstance(other, MomentumAssignment)
                and (self.n, self.fields, self.order) ==
                    (other.n, other.fields, other.order)
                and self.slots == other.slots)


@dataclass(frozen=True)
class CurrentTable:
    """Gauge-invariant currents j^mu, 0 <= |mu| <= k, per field."""

    n: int
    order: int
    table: dict

    def current(self, fld: str, mi: MultiIndex) -> Expr:
        return self.table[(fld, mi)]

    def __eq__(self, other):
        return isinstance(other, CurrentTable) and self.table == other.table


def _slot_atom(fld: str, mi: MultiIndex, lam: int) -> Expr:
    return Expr.atom(Momentum(fld, mi, lam))


def _sym_atom(fld: str, mi: MultiIndex) -> Expr:
    """Symbolic totally symmetric momentum of order |mi| as a slot-atom sum."""
    out = ZERO
    for lam in mi.directions():
        out = out + _slot_atom(fld, mi.drop(lam), lam)
    return out


def jet_partial(L: Expr, fld: str, mi: MultiIndex) -> Expr:
    return partial_derivative(L, Jet(fld, mi))


def canonical_momenta(problem: LagrangianProblem,
                      order_cap: int = 12) -> MomentumAssignment:
    """The symmetric representative of the canonical momenta (gauge r = 0).

    Descending recursion on the common symmetric value V[mu]:
        V[mu] = dL/dphi_mu / weight(mu)                      for |mu| = k,
        V[mu] = dL/dphi_mu / weight(mu) - sum_lam D_lam V[mu+lam]   below,
    with slot[nu, lam] = weight(nu) * V[nu + e_lam].
    """
    if problem.constraints:
        raise VariationalError(
            "problem has constraints; use constrained_generating_family")
    n, k, L = problem.n, problem.k, problem.lagrangian
    slots = {}
    for fld in problem.fields:
        V: dict = {}
        for order in range(k, 0, -1):
            for mi in all_multiindices(n, order):
                value = divide_weight(jet_partial(L, fld, mi), mi)
                if order < k:
                    for lam in range(1, n + 1):
                        value = value - total_derivative(V[mi.bump(lam)], lam)
                if value.max_jet_order() > order_cap:
                    raise VariationalError(
                        f"momentum cascade exceeded the jet order cap {order_cap}")
                V[mi] = value
        for mi in multiindices_up_to(n, k - 1):
            w = mi.weight()
            for lam in range(1, n + 1):
                slots[(fld, mi, lam)] = Expr.const(w) * V[mi.bump(lam)]
    return MomentumAssignment(n, problem.fields, k, slots)


def divide_weight(e: Expr, mi: MultiIndex) -> Expr:
    return e * Expr.const(Fraction(1, mi.weight()))


def currents(problem: LagrangianProblem, m: MomentumAssignment) -> CurrentTable:
    """j = div p at order 0, j^mu = S[mu] + div p^{mu .} in between, and the
    bare symmetrization at the top; the coordinates of the reduced bundle."""
    n, k = m.n, m.order
    table = {}
    for fld in m.fields:
        div0 = ZERO
        for lam in range(1, n + 1):
            div0 = div0 + total_derivative(m.slot(fld, MultiIndex.zero(n), lam), lam)
        table[(fld, MultiIndex.zero(n))] = div0
        for order in range(1, k + 1):
            for mi in all_multiindices(n, order):
                j = m.symmetric_part(fld, mi)
                if order <= k - 1:
                    for lam in range(1, n + 1):
                        j = j + total_derivative(m.slot(fld, mi, lam), lam)
                table[(fld, mi)] = j
    return CurrentTable(n, k, table)


def cascade_equations(problem: LagrangianProblem) -> EquationSet:
    """The first-order system equivalent to the Euler-Lagrange equations:
    one row per symmetric momentum from order k down to 1, then the field
    equation; momentum atoms stay symbolic."""
    if problem.constraints:
        raise VariationalError(
            "problem has constraints; use constrained_generating_family")
    n, k, L = problem.n, problem.k, problem.lagrangian
    rows = []
    for fld in problem.fields:
        for order in range(k, 0, -1):
            for mi in all_multiindices(n, order):
                rhs = jet_partial(L, fld, mi)
                if order < k:
                    for lam in range(1, n + 1):
                        rhs = rhs - total_derivative(_slot_atom(fld, mi, lam), lam)
                rows.append(Equation(f"{fld}:p[{','.join(map(str, mi))}]",
                                     _sym_atom(fld, mi), rhs))
        rhs = jet_partial(L, fld, MultiIndex.zero(n))
        for lam in range(1, n + 1):
            rhs = rhs - total_derivative(
                _slot_atom(fld, MultiIndex.zero(n), lam), lam)
        rows.append(Equation(f"{fld}:euler", ZERO, rhs))
    return EquationSet(rows)


def euler_lagrange(problem: LagrangianProblem, order_cap: int = 12) -> dict:
    """The classical eliminated residual per field:
    E(L) = sum_mu (-1)^|mu| D_mu dL/dphi_mu; the equation reads E(L) = 0."""
    n, k, L = problem.n, problem.k, problem.lagrangian
    out = {}
    for fld in problem.fields:
        total = ZERO
        for mi in multiindices_up_to(n, k):
            dl = jet_partial(L, fld, mi)
            if dl.is_zero():
                continue
            term = total_derivative_multi(dl, mi, order_cap=order_cap)
            total = total + (term if mi.order % 2 == 0 else -term)
        out[fld] = total
    return out


def evaluate_on_momenta(e: Expr, m: MomentumAssignment) -> Expr:
    """Substitute a momentum assignment for all momentum atoms (symbolic
    slots, symmetrized slots and their base-derivative decorations)."""
    mapping = {}
    for c in e.free_coordinates():
        if not isinstance(c, Momentum):
            continue
        if c.last is None:
            value = m.symmetric_part(c.fld, c.mi)
        else:
            value = m.slot(c.fld, c.mi, c.last)
        value = total_derivative_multi(value, c.derivs)
        mapping[c] = value
    return substitute(e, mapping)


def cascade_euler_residual(problem: LagrangianProblem) -> dict:
    """The field-equation row of the cascade evaluated on the canonical
    momenta; must agree with euler_lagrange as canonical forms."""
    m = canonical_momenta(problem)
    cascade = cascade_equations(problem)
    return {fld: -evaluate_on_momenta(cascade[f"{fld}:euler"].residual(), m)
            for fld in problem.fields}


def holonomy_residual(problem: LagrangianProblem, sigma) -> EquationSet:
    """Rows d_lam(slot mu) = slot(mu+lam) for |mu| <= k-2 plus the
    definitional top rows (labelled ``def:``) that set the order-k jets."""
    n, k = problem.n, problem.k
    rows = []
    for fld in problem.fields:
        for mi in multiindices_up_to(n, k - 1):
            src = sigma.value(Jet(fld, mi))
            for lam in range(1, n + 1):
                d = partial_derivative(src, Base(lam))
                target = mi.bump(lam)
                mi_s = ",".join(map(str, mi))
                if mi.order <= k - 2:
                    rows.append(Equation(
                        f"{fld}:d{lam}:phi[{mi_s}]",
                        d, sigma.value(Jet(fld, target))))
                else:
                    rows.append(Equation(
                        f"def:{fld}:phi[{','.join(map(str, target))}]:d{lam}",
                        Expr.atom(Jet(fld, target)), d))
    return EquationSet(rows)


def gauge_part(m: MomentumAssignment, level: int) -> dict:
    """The non-symmetric part r of the level's slots: slot minus the
    weighted symmetric-group average; its total symmetrization vanishes."""
    out = {}
    for fld in m.fields:
        for mi in all_multiindices(m.n, level - 1):
            for lam in range(1, m.n + 1):
                target = mi.bump(lam)
                avg = m.symmetric_part(fld, target) * Expr.const(
                    Fraction(mi.weight(), target.weight()))
                out[(fld, mi, lam)] = m.slot(fld, mi, lam) - avg
    return out


def symmetrize_momenta(m: MomentumAssignment) -> MomentumAssignment:
    """The totally symmetric representative of the same reduced-bundle point.

    Proceeding from the top level down, each level's gauge part r is
    annihilated through the compensating chain of ``apply_momentum_gauge``:
    the level's slots become their weighted symmetric average and the induced
    iterated divergences land on the lower levels.  Idempotent; for constant
    gauge parts the lower levels are untouched.
    """
    out = m
    for level in range(m.order, 1, -1):
        r = gauge_part(out, level)
        if all(v.is_zero() for v in r.values()):
            continue
        out = apply_momentum_gauge(out, {key: -v for key, v in r.items()})
    return out


def apply_momentum_gauge(m: MomentumAssignment, chi: dict) -> MomentumAssignment:
    """Add a gauge table chi at one momentum level and propagate the
    compensating iterated-divergence modifications to all lower levels, so
    the result represents the same reduced-bundle point.

    ``chi`` maps slot keys (field, prefix, lam), all prefixes of one order,
    to expressions whose total symmetrization vanishes (checked).
    """
    if not chi:
        return MomentumAssignment(m.n, m.fields, m.order, dict(m.slots))
    n = m.n
    prefix_orders = {mi.order for (_, mi, _) in chi}
    if len(prefix_orders) != 1:
        raise VariationalError("gauge table must live at a single level")
    prefix_order = prefix_orders.pop()
    level = prefix_order + 1
    if level > m.order:
        raise VariationalError("gauge level exceeds the momentum grid")

    def chi_at(fld, mi, lam):
        return chi.get((fld, mi, lam), ZERO)

    for fld in m.fields:
        for sigma in all_multiindices(n, level):
            s = ZERO
            for lam in sigma.directions():
                s = s + chi_at(fld, sigma.drop(lam), lam)
            if not s.is_zero():
                raise VariationalError(
                    f"gauge table has nonzero symmetrization at {sigma}")

    slots = dict(m.slots)

    def add(fld, mi, lam, value):
        slots[(fld, mi, lam)] = slots[(fld, mi, lam)] + value

    for fld in m.fields:
        cur = {(mi, lam): chi_at(fld, mi, lam)
               for mi in all_multiindices(n, prefix_order)
               for lam in range(1, n + 1)}
        for (mi, lam), v in cur.items():
            add(fld, mi, lam, v)
        for v_order in range(prefix_order, 0, -1):
            # divergence of the current level, distributed symmetrically below
            G = {}
            for mu in all_multiindices(n, v_order):
                g = ZERO
                for lam in range(1, n + 1):
                    g = g - total_derivative(cur[(mu, lam)], lam)
                G[mu] = divide_weight(g, mu)
            nxt = {}
            for nu in all_multiindices(n, v_order - 1):
                w = nu.weight()
                for lam in range(1, n + 1):
                    nxt[(nu, lam)] = Expr.const(w) * G[nu.bump(lam)]
            for (nu, lam), v in nxt.items():
                add(fld, nu, lam, v)
            cur = nxt
    return MomentumAssignment(m.n, m.fields, m.order, slots)


def constrained_generating_family(problem: LagrangianProblem) -> EquationSet:
    """First-order generating family with Lagrange multipliers: the momenta
    and the field equation each gain lam[a] * dC_a terms."""
    for a, C in enumerate(problem.constraints, start=1):
        if C.max_jet_order() > 1:
            raise VariationalError(
                f"constraint {a} depends on jets of order > 1")
    if problem.k != 1:
        raise VariationalError("constrained cascade is stated at first order")
    n, L = problem.n, problem.lagrangian
    rows = []
    zero_mi = MultiIndex.zero(n)
    for fld in problem.fields:
        for lam in range(1, n + 1):
            rhs = jet_partial(L, fld, MultiIndex.unit(n, lam))
            for a, C in enumerate(problem.constraints, start=1):
                rhs = rhs + Expr.atom(Multiplier(a)) * jet_partial(
                    C, fld, MultiIndex.unit(n, lam))
            rows.append(Equation(f"{fld}:p[{lam}]",
                                 _slot_atom(fld, zero_mi, lam), rhs))
        lhs = ZERO
        for lam in range(1, n + 1):
            lhs = lhs + total_derivative(_slot_atom(fld, zero_mi, lam), lam)
        rhs = jet_partial(L, fld, zero_mi)
        for a, C in enumerate(problem.constraints, start=1):
            rhs = rhs + Expr.atom(Multiplier(a)) * jet_partial(C, fld, zero_mi)
        rows.append(Equation(f"{fld}:euler", lhs, rhs))
    return EquationSet(rows)


def psi_reduction(momenta: dict, momentum_jets: dict):
    """Coordinate form of the reduction map on the k = 1 grid: the jet of a
    momentum covector maps to (trace of the momentum jets, the momenta)."""
    trace = ZERO
    for mu in sorted(momenta):
        trace = trace + momentum_jets[(mu, mu)]
    return trace, dict(momenta)
