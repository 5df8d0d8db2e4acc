"""Seeded random instances for the property checks.

Everything here draws from a caller-supplied ``random.Random`` so the CLI
``verify-all`` command and the test suite replay identical instances for a
given seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .coords import Base, Jet
from .expr import Expr, ZERO
from .multiindex import all_multiindices, multiindices_up_to
from .problem import LagrangianProblem


def random_polynomial(rng: random.Random, atoms, degree: int, terms: int,
                      lo: int = -3, hi: int = 3) -> Expr:
    """Sum of random monomials in the given atoms with integer coefficients."""
    out = ZERO
    for _ in range(terms):
        coeff = rng.randint(lo, hi)
        mon = Expr.const(coeff)
        for _ in range(rng.randint(0, degree)):
            mon = mon * Expr.atom(rng.choice(atoms))
        out = out + mon
    return out


def jet_atoms(n: int, order: int, fld: str = "u", include_base: bool = True):
    atoms = [Jet(fld, mi) for mi in multiindices_up_to(n, order)]
    if include_base:
        atoms += [Base(mu) for mu in range(1, n + 1)]
    return atoms


def random_lagrangian(rng: random.Random, n: int, k: int,
                      degree: int = 2, terms: int = 4) -> LagrangianProblem:
    """A random polynomial Lagrangian of order exactly <= k on one field."""
    L = random_polynomial(rng, jet_atoms(n, k), degree, terms)
    return LagrangianProblem(n, ("u",), k, L)


def random_divergence_components(rng: random.Random, n: int, jet_order: int,
                                 degree: int = 2, terms: int = 3):
    """n random F^lam components on jets of order <= jet_order."""
    atoms = jet_atoms(n, jet_order)
    return [random_polynomial(rng, atoms, degree, terms) for _ in range(n)]


def random_quadratic_lagrangian(rng: random.Random, n: int, k: int) -> LagrangianProblem:
    """Quadratic in the top jets with an invertible integer Hessian block,
    plus random lower-order polynomial terms."""
    tops = list(all_multiindices(n, k))
    dim = len(tops)
    while True:
        H = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            for j in range(i):
                H[i][j] = H[j][i]
        if _int_det(H) != 0:
            break
    L = ZERO
    for i, mi in enumerate(tops):
        for j, mj in enumerate(tops):
            if H[i][j]:
                L = L + Expr.const(Fraction(H[i][j], 2)) * \
                    Expr.atom(Jet("u", mi)) * Expr.atom(Jet("u", mj))
    lower = jet_atoms(n, k - 1)
    L = L + random_polynomial(rng, lower, 2, 3)
    return LagrangianProblem(n, ("u",), k, L)


def _int_det(H) -> int:
    n = len(H)
    if n == 1:
        return H[0][0]
    det = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in H[1:]]
        det += (-1) ** j * H[0][j] * _int_det(minor)
    return det


def random_gauge_table(rng: random.Random, problem: LagrangianProblem,
                       level: int | None = None, jet_order: int = 1) -> dict:
    """A level-l slot table with vanishing total symmetrization, built from
    the kernel generators e[sigma-lam, lam] - e[sigma-kap, kap]."""
    n, k = problem.n, problem.k
    if n < 2:
        return {}
    if level is None:
        level = rng.randint(2, k) if k >= 2 else 1
    atoms = jet_atoms(n, jet_order)
    chi: dict = {}
    fld = rng.choice(problem.fields)
    for sigma in all_multiindices(n, level):
        dirs = sigma.directions()
        if len(dirs) < 2:
            continue
        lam, kap = rng.sample(dirs, 2)
        f = random_polynomial(rng, atoms, 2, 2)
        for key, s in (((fld, sigma.drop(lam), lam), 1),
                       ((fld, sigma.drop(kap), kap), -1)):
            chi[key] = chi.get(key, ZERO) + (f if s == 1 else -f)
    for mi in all_multiindices(n, level - 1):
        for lam in range(1, n + 1):
            chi.setdefault((fld, mi, lam), ZERO)
    return chi


def random_section_profiles(rng: random.Random, problem: LagrangianProblem,
                            degree: int = 3) -> dict:
    atoms = [Base(mu) for mu in range(1, problem.n + 1)]
    return {fld: random_polynomial(rng, atoms, degree, 3)
            for fld in problem.fields}


def random_vertical_coefficient(rng: random.Random, n: int,
                                jet_order: int) -> Expr:
    return random_polynomial(rng, jet_atoms(n, jet_order), 2, 3)
