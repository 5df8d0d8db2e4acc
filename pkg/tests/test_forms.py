"""Exterior algebra: wedge, d, contraction, pullback."""

import random

import pytest

from jetcalc import Base, Expr, Jet, Momentum, MultiIndex, OpaqueCall, Parameter
from jetcalc.expr import divide
from jetcalc.forms import (ExteriorForm, FormsError, SectionData, VectorField,
                           exterior_derivative, interior_product,
                           pullback_section, wedge)

T = Base(1)
Q = Jet("q", MultiIndex((0,)))
P = Momentum("q", MultiIndex((0,)), 1)


def d(c):
    return ExteriorForm.d_coordinate(c)


def scalar(e):
    return ExteriorForm.scalar(e)


class TestWedge:
    def test_antisymmetry_kills_square(self):
        assert wedge(d(T), d(T)).is_zero()

    def test_sign_rule(self):
        assert wedge(d(P), d(Q)) == -(wedge(d(Q), d(P)))

    def test_bilinearity(self):
        q = Expr.atom(Q)
        lhs = wedge(d(Q).scale(q), d(T))
        rhs = wedge(d(Q), d(T)).scale(q)
        assert lhs == rhs


class TestExteriorDerivative:
    def test_hamiltonian_two_form(self):
        # d(p dq - H dt) = dp ^ dq - dH ^ dt with dH expanded
        m = Expr.atom(Parameter("m"))
        U = Expr.atom(OpaqueCall("U", (0, 0), (Expr.atom(T), Expr.atom(Q))))
        H = divide(Expr.atom(P) ** 2, 2 * m) + U
        theta = d(Q).scale(Expr.atom(P)) - d(T).scale(H)
        got = exterior_derivative(theta)
        dH = ExteriorForm(1, {
            (T,): Expr.atom(OpaqueCall("U", (1, 0), (Expr.atom(T), Expr.atom(Q)))),
            (Q,): Expr.atom(OpaqueCall("U", (0, 1), (Expr.atom(T), Expr.atom(Q)))),
            (P,): divide(Expr.atom(P), m),
        })
        want = wedge(d(P), d(Q)) - wedge(dH, d(T))
        assert got == want

    def test_dd_of_coordinate(self):
        assert exterior_derivative(d(Q)).is_zero()

    def test_d_of_square(self):
        got = exterior_derivative(scalar(Expr.atom(Q) ** 2))
        assert got == d(Q).scale(2 * Expr.atom(Q))

    def test_dd_zero_random(self):
        rng = random.Random(3)
        coords = [T, Q, P, Jet("q", MultiIndex((1,)))]
        for _ in range(20):
            coeff = Expr.const(0)
            for _ in range(3):
                mon = Expr.const(rng.randint(-3, 3))
                for _ in range(rng.randint(0, 2)):
                    mon = mon * Expr.atom(rng.choice(coords))
                coeff = coeff + mon
            deg = rng.randint(0, 2)
            facs = tuple(rng.sample(coords, deg))
            a = ExteriorForm(deg, {facs: coeff})
            assert exterior_derivative(exterior_derivative(a)).is_zero()


class TestInteriorProduct:
    def test_duality(self):
        X = VectorField.of({P: Expr.const(1)})
        assert interior_product(X, wedge(d(P), d(Q))) == d(Q)

    def test_sign(self):
        X = VectorField.of({Q: Expr.const(1)})
        assert interior_product(X, wedge(d(P), d(Q))) == -d(P)

    def test_zero_pairing(self):
        X = VectorField.of({Q: Expr.const(1)})
        assert interior_product(X, d(T)).is_zero()

    def test_double_contraction_vanishes(self):
        rng = random.Random(5)
        coords = [T, Q, P]
        omega = wedge(wedge(d(T), d(Q)), d(P))
        for _ in range(10):
            X = VectorField.of({c: Expr.const(rng.randint(-2, 2)) for c in coords})
            once = interior_product(X, omega)
            assert interior_product(X, once).is_zero()


class TestPullback:
    def test_chain_rule(self):
        sigma = SectionData({Q: Expr.atom(T) ** 2}, n=1)
        assert pullback_section(d(Q), sigma) == d(T).scale(2 * Expr.atom(T))

    def test_constant_section_kills_two_form(self):
        sigma = SectionData({Q: Expr.const(1), P: Expr.const(2)}, n=1)
        assert pullback_section(wedge(d(P), d(Q)), sigma).is_zero()

    def test_base_forms_fixed(self):
        x1, x2 = Base(1), Base(2)
        sigma = SectionData({Jet("u", MultiIndex((0, 0))): Expr.atom(x1) * Expr.atom(x2)},
                            n=2)
        a = wedge(d(x1), d(x2))
        assert pullback_section(a, sigma) == a

    def test_missing_assignment(self):
        sigma = SectionData({Q: Expr.atom(T)}, n=1)
        with pytest.raises(FormsError, match="missing assignment"):
            pullback_section(d(P), sigma)

    def test_commutes_with_wedge_and_d(self):
        rng = random.Random(11)
        x1, x2 = Base(1), Base(2)
        u = Jet("u", MultiIndex((0, 0)))
        ux = Jet("u", MultiIndex((1, 0)))
        for _ in range(10):
            def rand_value():
                e = Expr.const(0)
                for _ in range(2):
                    e = e + Expr.const(rng.randint(-2, 2)) * \
                        Expr.atom(x1) ** rng.randint(0, 2) * \
                        Expr.atom(x2) ** rng.randint(0, 1)
                return e

            sigma = SectionData({u: rand_value(), ux: rand_value()}, n=2)
            coeff = Expr.atom(u) * Expr.const(rng.randint(-2, 2)) + Expr.atom(ux)
            a = ExteriorForm(1, {(u,): coeff})
            b = ExteriorForm(1, {(x1,): Expr.atom(ux), (ux,): Expr.const(1)})
            assert pullback_section(wedge(a, b), sigma) == \
                wedge(pullback_section(a, sigma), pullback_section(b, sigma))
            assert pullback_section(exterior_derivative(a), sigma) == \
                exterior_derivative(pullback_section(a, sigma))


class TestConstruction:
    def test_mixed_degree_rejected(self):
        with pytest.raises(FormsError):
            ExteriorForm(1, {(): Expr.const(1)})

    def test_no_parameter_differentials(self):
        with pytest.raises(FormsError):
            d(Parameter("m"))

    def test_repeated_factor_dropped(self):
        assert ExteriorForm(2, {(T, T): Expr.const(5)}).is_zero()
