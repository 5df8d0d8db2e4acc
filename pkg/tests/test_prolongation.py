"""Vertical-field prolongation and polynomial polarization."""

import random
import pytest

from jetcalc import (Base, Expr, Jet, LagrangianProblem, MultiIndex,
                     Parameter, partial_derivative, total_derivative_multi)
from jetcalc.expr import ZERO
from jetcalc.forms import holonomic_section
from jetcalc.multiindex import multiindices_up_to
from jetcalc.prolongation import (HomogeneousPoly, ProlongationError,
                                  VerticalField, gram_matrix, polarize,
                                  prolong_vertical_field, resymmetrize)
from jetcalc.randgen import (random_polynomial, random_section_profiles,
                             random_vertical_coefficient)

MI = MultiIndex


def jet(fld, *mi):
    return Expr.atom(Jet(fld, MI(mi)))


class TestProlongation:
    def test_quadratic_coefficient(self):
        X = VerticalField({"u": jet("u", 0) ** 2})
        lifted = prolong_vertical_field(X, n=1, target_order=1)
        assert lifted.component(Jet("u", MI((0,)))) == jet("u", 0) ** 2
        assert lifted.component(Jet("u", MI((1,)))) == \
            2 * jet("u", 0) * jet("u", 1)

    def test_constant_field(self):
        X = VerticalField({"u": Expr.const(1)})
        lifted = prolong_vertical_field(X, n=1, target_order=2)
        assert lifted.component(Jet("u", MI((0,)))) == Expr.const(1)
        assert lifted.component(Jet("u", MI((1,)))).is_zero()
        assert lifted.component(Jet("u", MI((2,)))).is_zero()

    def test_first_jet_coefficient(self):
        X = VerticalField({"u": jet("u", 1)})
        lifted = prolong_vertical_field(X, n=1, target_order=2)
        assert lifted.component(Jet("u", MI((1,)))) == jet("u", 2)
        assert lifted.component(Jet("u", MI((2,)))) == jet("u", 3)

    def test_truncated_formula_at_first_order(self):
        # for psi = psi(x, phi) the lift coefficient at order one is
        # dpsi/dx^mu + phi_mu dpsi/dphi
        rng = random.Random(8)
        for _ in range(10):
            n = rng.choice((1, 2))
            atoms = [Base(mu) for mu in range(1, n + 1)] + \
                [Jet("u", MI((0,) * n))]
            psi = random_polynomial(rng, atoms, 3, 3)
            lifted = prolong_vertical_field(VerticalField({"u": psi}),
                                            n=n, target_order=1)
            for mu in range(1, n + 1):
                truncated = partial_derivative(psi, Base(mu)) + \
                    Expr.atom(Jet("u", MI.unit(n, mu))) * \
                    partial_derivative(psi, Jet("u", MI((0,) * n)))
                assert lifted.component(Jet("u", MI.unit(n, mu))) == truncated

    def test_contact_preservation_on_sections(self):
        # D_mu(psi) evaluated on a holonomic jet equals the base derivative
        # of psi composed with the jet: the lift moves prolonged sections to
        # prolonged sections
        rng = random.Random(17)
        for _ in range(10):
            n = rng.choice((1, 2))
            k = rng.choice((1, 2, 3))
            psi = random_vertical_coefficient(rng, n, jet_order=1)
            prob = LagrangianProblem(n, ("u",), max(k, 2), ZERO)
            profiles = random_section_profiles(rng, prob)
            lifted = prolong_vertical_field(VerticalField({"u": psi}),
                                            n=n, target_order=k)
            sigma = holonomic_section(prob, profiles, jet_order=k + 1)
            for mi in multiindices_up_to(n, k):
                on_jet = sigma.evaluate(lifted.component(Jet("u", mi)))
                direct = total_derivative_multi(sigma.evaluate(psi), mi)
                assert on_jet == direct


def poly_vars(m):
    return [Jet(f"v{i}", MI((0,))) for i in range(1, m + 1)]


class TestPolarize:
    def test_quadratic_gram(self):
        a, b, g = (Expr.atom(Parameter(s)) for s in ("alpha", "beta", "gamma"))
        x, y = (Expr.atom(v) for v in poly_vars(2))
        Q = HomogeneousPoly.from_expr(a * x ** 2 + b * x * y + g * y ** 2,
                                      poly_vars(2))
        G = gram_matrix(Q)
        two = Expr.const(2)
        assert [[two * e for e in row] for row in G] == \
            [[two * a, b], [b, two * g]]

    def test_monomial_power(self):
        x = poly_vars(1)[0]
        Q = HomogeneousPoly.from_expr(Expr.atom(x) ** 4, [x])
        B = polarize(Q)
        assert B[1] == HomogeneousPoly.from_expr(Expr.atom(x) ** 3, [x])

    def test_euler_resymmetrization(self):
        rng = random.Random(12)
        for _ in range(20):
            m = rng.randint(1, 3)
            d = rng.randint(1, 4)
            variables = poly_vars(m)
            e = ZERO
            while e.is_zero():
                e = ZERO
                for _ in range(3):
                    coeff = Expr.const(rng.randint(-3, 3))
                    exps = [0] * m
                    for _ in range(d):
                        exps[rng.randrange(m)] += 1
                    term = coeff
                    for v, p in zip(variables, exps):
                        term = term * Expr.atom(v) ** p
                    e = e + term
            Q = HomogeneousPoly.from_expr(e, variables)
            B = polarize(Q)
            assert resymmetrize(B, Q.degree, Q.nvars) == Q

    def test_inhomogeneous_rejected(self):
        x = poly_vars(1)[0]
        with pytest.raises(ProlongationError, match="homogeneous"):
            HomogeneousPoly.from_expr(Expr.atom(x) ** 2 + Expr.atom(x), [x])
