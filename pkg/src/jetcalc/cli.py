"""Command-line front end.

Reports are JSON by default (``--latex`` switches the expression strings to
LaTeX).  Exit status: 0 on success, 1 when a verification command finds a
nonzero residual, 2 on input errors (parse failures, singular transforms,
missing blocks).
"""

from __future__ import annotations

import argparse
import json
import sys

from .coords import Jet, Momentum
from .divergence import (DivergenceError, divergence_lagrangian,
                         momentum_shift, verify_divergence_trivial)
from .expr import Expr, ExprError, to_dsl
from .multiindex import MultiIndex
from .forms import FormsError, SectionData
from .legendre import LegendreError, hamilton_equations, legendre_top, \
    energy_legendre
from .parser import ParseError, ProblemFile, parse_problem
from .poincare import galilei_transform_check, multisymplectic_residuals, pc_form
from .printing import form_to_latex, form_to_str, to_latex
from .problem import ProblemError
from .prolongation import (HomogeneousPoly, ProlongationError, VerticalField,
                           polarize, prolong_vertical_field)
from .variational import (VariationalError, canonical_momenta,
                          cascade_equations, constrained_generating_family,
                          currents, euler_lagrange, holonomy_residual)
from .verify import run_all

COMMANDS = ("el", "cascade", "momenta", "currents", "legendre", "hamilton",
            "energy", "pc-form", "ms-check", "check-divergence", "shift",
            "prolong", "polarize", "galilei", "verify-all")


class InputError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jetcalc",
        description="canonical formalism for higher-order Lagrangian field theories")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", nargs="?", help="problem file (DSL)")
    ap.add_argument("--latex", action="store_true",
                    help="emit LaTeX expression strings")
    ap.add_argument("--json", action="store_true",
                    help="emit JSON (default)")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for verify-all")
    ap.add_argument("--order-cap", type=int, default=12,
                    help="cap on jet order growth in iterated derivatives")
    ap.add_argument("--time", type=int, default=None,
                    help="time direction for the energy command (default n)")
    ap.add_argument("--target-order", type=int, default=None,
                    help="prolongation order (default problem order)")
    ap.add_argument("--inverse", action="store_true",
                    help="apply the inverse momentum shift")
    return ap


class Report:
    def __init__(self, command: str, problem=None, latex: bool = False):
        self.doc = {"command": command,
                    "problem": ({"n": problem.n, "k": problem.k,
                                 "fields": list(problem.fields)}
                                if problem else None),
                    "result": {}, "residuals": []}
        self.latex = latex

    def expr(self, e: Expr) -> str:
        return to_latex(e) if self.latex else to_dsl(e)

    def form(self, f) -> str:
        return form_to_latex(f) if self.latex else form_to_str(f)

    def add(self, name: str, value):
        self.doc["result"][name] = value

    def add_residual(self, label: str, value: str):
        self.doc["residuals"].append({"label": label, "expr": value})

    def emit(self) -> None:
        print(json.dumps(self.doc, indent=2, ensure_ascii=False))


def _load(path: str | None) -> ProblemFile:
    if path is None:
        raise InputError("this command requires a problem file")
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_problem(fh.read())
    except OSError as exc:
        raise InputError(str(exc)) from None


def _need_section(pf: ProblemFile) -> SectionData:
    if pf.section is None:
        raise InputError("problem file has no section block")
    return SectionData(pf.section, n=pf.problem.n)


def _need_fvector(pf: ProblemFile):
    if not pf.fvector:
        raise InputError("problem file has no fcomponent statements")
    return pf.fvector


def _slot_name(key) -> str:
    fld, mi, lam = key
    return repr(Momentum(fld, mi, lam))


def _equations(report: Report, eqs) -> bool:
    ok = True
    for row in eqs:
        report.add(row.label,
                   f"{report.expr(row.lhs)} = {report.expr(row.rhs)}")
    for label, res in eqs.residuals():
        if not res.is_zero():
            ok = False
            report.add_residual(label, report.expr(res))
    return ok


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, ProblemError, InputError, LegendreError,
            DivergenceError, VariationalError, ProlongationError, FormsError,
            ExprError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "galilei":
        report = Report(cmd, latex=args.latex)
        outcome = galilei_transform_check()
        for label, form in outcome.rows:
            report.add(label, report.form(form))
            if not form.is_zero():
                report.add_residual(label, report.form(form))
        report.emit()
        return 0 if outcome.all_zero() else 1

    if cmd == "verify-all":
        report = Report(cmd, latex=args.latex)
        results = run_all(seed=args.seed)
        ok = True
        for r in results:
            report.add(r.name, "pass" if r.ok else "fail")
            for label, e in r.failures:
                ok = False
                value = form_to_str(e) if hasattr(e, "terms") else to_dsl(e)
                report.add_residual(f"{r.name}: {label}", value)
        report.doc["result"]["seed"] = args.seed
        report.emit()
        return 0 if ok else 1

    pf = _load(args.file)
    prob = pf.problem
    report = Report(cmd, prob, latex=args.latex)

    if cmd == "el":
        report.add("euler_lagrange",
                   {fld: report.expr(e)
                    for fld, e in euler_lagrange(prob, order_cap=args.order_cap).items()})
        report.emit()
        return 0

    if cmd == "cascade":
        eqs = (constrained_generating_family(prob) if prob.constraints
               else cascade_equations(prob))
        _equations(report, eqs)
        report.doc["residuals"] = []
        report.emit()
        return 0

    if cmd == "momenta":
        m = canonical_momenta(prob, order_cap=args.order_cap)
        for key in sorted(m.slots, key=lambda k: (k[0], tuple(k[1]), k[2])):
            report.add(_slot_name(key), report.expr(m.slots[key]))
        report.emit()
        return 0

    if cmd == "currents":
        tbl = currents(prob, canonical_momenta(prob, order_cap=args.order_cap))
        for (fld, mi), e in sorted(tbl.table.items(),
                                   key=lambda kv: (kv[0][0], tuple(kv[0][1]))):
            report.add(f"j[{fld};{','.join(map(str, mi))}]", report.expr(e))
        report.emit()
        return 0

    if cmd == "legendre":
        data = legendre_top(prob)
        report.add("h", report.expr(data.h))
        report.add("H", report.expr(data.hamiltonian))
        for (fld, mi), e in data.inversion.items():
            report.add(f"{fld}[{','.join(map(str, mi))}]", report.expr(e))
        report.emit()
        return 0

    if cmd == "hamilton":
        _equations(report, hamilton_equations(prob))
        report.doc["residuals"] = []
        report.emit()
        return 0

    if cmd == "energy":
        direction = args.time if args.time is not None else prob.n
        report.add("energy", report.expr(energy_legendre(prob, direction)))
        report.add("time_direction", str(direction))
        report.emit()
        return 0

    if cmd == "pc-form":
        form = pc_form(prob)
        report.add("omega", report.form(form.omega))
        report.add("theta", report.form(form.theta))
        report.add("H", report.expr(form.hamiltonian))
        report.emit()
        return 0

    if cmd == "ms-check":
        sigma = _need_section(pf)
        eqs = multisymplectic_residuals(prob, sigma)
        hol = holonomy_residual(prob, sigma)
        ok = _equations(report, eqs) and hol.all_zero()
        for label, res in hol.residuals():
            if not res.is_zero():
                report.add_residual(f"holonomy:{label}", report.expr(res))
        report.emit()
        return 0 if ok else 1

    if cmd == "check-divergence":
        F = _need_fvector(pf)
        data = divergence_lagrangian(F, fields=prob.fields)
        report.add("L0", report.expr(data.lagrangian))
        eqs = verify_divergence_trivial(F, fields=prob.fields)
        ok = _equations(report, eqs)
        report.emit()
        return 0 if ok else 1

    if cmd == "shift":
        F = _need_fvector(pf)
        m = canonical_momenta(prob, order_cap=args.order_cap)
        shifted = momentum_shift(m, F, "inverse" if args.inverse else "forward",
                                 fields=prob.fields)
        for key in sorted(shifted.slots, key=lambda k: (k[0], tuple(k[1]), k[2])):
            report.add(_slot_name(key), report.expr(shifted.slots[key]))
        report.emit()
        return 0

    if cmd == "prolong":
        if not pf.vfields:
            raise InputError("problem file has no vfield statements")
        order = args.target_order if args.target_order is not None else prob.k
        lifted = prolong_vertical_field(VerticalField(pf.vfields), n=prob.n,
                                        target_order=order,
                                        order_cap=args.order_cap)
        for coord, e in lifted.components:
            report.add(f"d/d({coord!r})", report.expr(e))
        report.emit()
        return 0

    if cmd == "polarize":
        if pf.poly is None:
            raise InputError("problem file has no poly statement")
        variables = [Jet(fld, MultiIndex.zero(prob.n)) for fld in prob.fields]
        Q = HomogeneousPoly.from_expr(pf.poly, variables)
        comps = polarize(Q)
        for i, poly in comps.items():
            report.add(f"component_{prob.fields[i - 1]}",
                       report.expr(poly.to_expr(variables)))
        report.add("degree", str(Q.degree))
        report.emit()
        return 0

    raise InputError(f"unhandled command {cmd}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
