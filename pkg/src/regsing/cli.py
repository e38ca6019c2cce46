"""Command-line interface: ``regsing <command> [options] OPERATOR``.

The operator is read from the positional argument or, when omitted, from
standard input.  Exit status is 0 on success, 1 on usage or syntax errors
and 2 when the input is mathematically outside the solvers' reach.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .diffop import DiffOp, decompose, indicial, is_regular_singular, shift_normalize
from .errors import DomainError, IncompleteSplitting, IrregularSingularity, MathError, RegsingError
from .exactalg import FieldDesc
from .frobenius0 import GroupSolver, LogSeries, Solution, SolutionBasis, apply_extended, euler_kernel0, group_exponents, solve0
from .frobeniusp import (
    SectorSeries,
    SectorSolver,
    algebraic_residual,
    apply_p,
    euler_solve_p,
    istar,
    project_z,
    solve_p,
)
from .parser import parse, parse_bivariate, parse_field_element, parse_rational
from .pcurvature import (
    grothendieck_scan,
    is_nilpotent,
    is_zero,
    p_curvature,
    periodic_polynomial_solution,
    poly_solutions,
    reduce_mod_p,
    scan_to_csv,
    scan_to_json,
)
from .render import power, z_monomial
from .serialize import SolutionDoc, field_to_json, monomials_to_json


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- shared helpers ----------------------------------------------------------

def _read_operator(args) -> str:
    src = args.operator if args.operator is not None else sys.stdin.read()
    src = src.strip()
    if not src:
        raise UsageError("no operator given (pass it as an argument or on stdin)")
    return src


def _operator(args, char: int | None = None) -> DiffOp:
    """Parse over Q, then reduce modulo --char when it is positive."""
    L = parse(_read_operator(args), FieldDesc())
    if L.is_zero():
        raise DomainError("the zero operator has no solution space to describe")
    p = args.char if char is None else char
    return reduce_mod_p(L, p) if p else L


def _require_char(args, positive: bool):
    if positive and not args.char:
        raise UsageError(f"{args.command} needs --char p with p prime")
    if not positive and args.char:
        raise UsageError(f"{args.command} works over Q; drop --char")


def _emit(args, text: str, data, csv_text: str | None = None):
    if args.format == "json":
        print(json.dumps(data, indent=2) if not isinstance(data, str) else data)
    elif args.format == "csv":
        if csv_text is None:
            raise UsageError(f"{args.command} has no CSV output")
        sys.stdout.write(csv_text)
    else:
        print(text)


def _monomial_label(rho, k: int, alpha) -> str:
    """t^rho x^k z^alpha in the compact form used by the Euler command."""
    parts = []
    if rho != 0:
        r = str(rho)
        parts.append(f"t^({r})" if " " in r or "*" in r else f"t^{r}")
    parts.append(power("x", k))
    parts.append(z_monomial(tuple(alpha)))
    return "*".join(p for p in parts if p) or "1"


def _solution_lines(basis) -> list[str]:
    return [f"y[rho={s.rho}, i={s.i}] = {s.series}" for s in basis]


# -- commands ----------------------------------------------------------------

def cmd_analyze(args) -> int:
    L = _operator(args)
    Ln, tau = shift_normalize(L)
    ind = indicial(Ln, args.ext)
    regular = is_regular_singular(Ln)
    exps = [(str(r), m) for r, m in ind.exponents]
    data = {
        "operator": L.format(),
        "field": field_to_json(L.desc),
        "order": L.order,
        "shift": tau,
        "normalized": Ln.format(),
        "regular": regular,
        "indicial_polynomial": ind.chi.format("s"),
        "exponent_field": str(ind.field),
        "exponents": [{"rho": r, "multiplicity": m} for r, m in exps],
        "split": ind.complete,
        "unsplit_factor": None if ind.complete else ind.cofactor.format("s"),
    }
    lines = [
        f"operator: {data['operator']}",
        f"field: {L.desc}",
        f"order: {L.order}",
        f"shift: {tau}",
        f"normalized: {data['normalized']}",
        f"regular singular: {'yes' if regular else 'no'}",
        f"indicial polynomial: {data['indicial_polynomial']}",
        f"exponents (in {ind.field}):",
    ]
    lines += [f"  {r}: multiplicity {m}" for r, m in exps]
    if not ind.complete:
        lines.append(f"  unsplit factor: {data['unsplit_factor']}")
    _emit(args, "\n".join(lines), data)
    return 0


def _char_p_exponents(Ln: DiffOp, args):
    ind = indicial(Ln, args.ext)
    exponent = getattr(args, "exponent", None)
    if exponent is not None:
        rho = parse_field_element(exponent, ind.field)
        return ind.field, [rho]
    if not ind.complete:
        raise IncompleteSplitting(
            f"indicial polynomial does not split over extensions of degree <= {args.ext or Ln.order}; "
            f"unsplit factor {ind.cofactor}",
            ind.cofactor,
        )
    return ind.field, [r for r, _ in ind.exponents]


def _iterates(solver, start, N, render, log, label, lines, records):
    terms = list(solver.iterates(start, N))
    lines.append(f"{label}:")
    lines += [f"  (S T)^{j} = {render(t)}" for j, t in enumerate(terms)]
    records.append([monomials_to_json(t, log) for t in terms])


def cmd_solve(args) -> int:
    L = _operator(args)
    Ln, _ = shift_normalize(L)
    if not is_regular_singular(Ln):
        raise IrregularSingularity("0 is an irregular singular point of the operator")
    N = args.order
    extra: list[str] = []
    records: list = []
    if args.char == 0:
        basis = solve0(Ln, N)
        if args.exponent is not None:
            want = parse_rational(args.exponent)
            sols = tuple(s for s in basis if s.rho == want)
            if not sols:
                raise DomainError(f"{want} is not a local exponent")
            basis = SolutionBasis(sols, N, basis.desc)
        if args.iterates:
            comps = decompose(Ln)
            for g in group_exponents(indicial(Ln)):
                solver = GroupSolver(comps, g)
                for s in basis:
                    if s.series.base == g.base:
                        start = {(int(s.rho - g.base), s.i): 1}
                        _iterates(solver, start, N, lambda t, b=g.base: str(LogSeries(b, t)), True,
                                  f"y[rho={s.rho}, i={s.i}]", extra, records)
    else:
        field, rhos = _char_p_exponents(Ln, args)
        Lf = Ln.map(field)
        sols = []
        for rho in rhos:
            found = list(solve_p(Lf, rho, N))
            sols.extend(found)
            if args.iterates:
                solver = SectorSolver(decompose(Lf), rho, N)
                for s in found:
                    start = {(0, istar(s.i, field.characteristic)): 1}
                    _iterates(solver, start, N, lambda t, r=rho: str(SectorSeries(r, t)), False,
                              f"y[rho={rho}, i={s.i}]", extra, records)
        basis = SolutionBasis(tuple(sols), N, field)
    data = SolutionDoc.from_basis(L.format(), basis).to_dict()
    lines = [f"field: {basis.desc}", f"truncation: x^{N}"] + _solution_lines(basis)
    if extra:
        lines += ["iterates:"] + extra
        for sol, terms in zip(data["solutions"], records):
            sol["iterates"] = terms
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_euler(args) -> int:
    L = _operator(args)
    Ln, _ = shift_normalize(L)
    comps = decompose(Ln)
    L0 = comps[0]
    rows = []
    if args.char == 0:
        for g in group_exponents(indicial(Ln, args.ext)):
            for mono in euler_kernel0(L0, g):
                ((k, i),) = mono.coeffs
                rho = g.base + k
                label = "*".join(p for p in (power("x", rho), power("z", i)) if p) or "1"
                rows.append({"rho": str(rho), "k": 0, "alpha": [i] if i else [], "label": label})
        field = FieldDesc()
    else:
        sols = euler_solve_p(L0, Ln.desc, args.ext)
        field = sols[0][0].desc if sols else Ln.desc
        for rho, i, mono in sols:
            rows.append({
                "rho": str(rho),
                "i": i,
                "k": mono.k,
                "alpha": list(mono.alpha),
                "label": _monomial_label(rho, mono.k, mono.alpha),
            })
    data = {"operator": L.format(), "initial_form": L0.phi.format("s"), "field": field_to_json(field), "basis": rows}
    text = "\n".join([f"field: {field}", f"indicial polynomial: {data['initial_form']}"] + [r["label"] for r in rows])
    _emit(args, text, data)
    return 0


def cmd_pcurv(args) -> int:
    _require_char(args, True)
    L = _operator(args)
    M = p_curvature(L)
    nil = is_nilpotent(M)
    if args.nilpotent:
        _emit(args, f"nilpotent: {str(nil).lower()}", {"p": args.char, "nilpotent": nil})
        return 0
    zero = is_zero(M)
    data = {
        "p": args.char,
        "operator": L.format(),
        "matrix": [[str(e) for e in row] for row in M.entries],
        "zero": zero,
        "nilpotent": nil,
    }
    text = "\n".join([str(M), f"zero: {str(zero).lower()}", f"nilpotent: {str(nil).lower()}"])
    _emit(args, text, data)
    return 0


def cmd_polysolve(args) -> int:
    _require_char(args, True)
    L = _operator(args)
    rho = parse_field_element(args.exponent, L.desc) if args.exponent else 0
    if args.periodic:
        found = periodic_polynomial_solution(L, rho)
        sols = [found] if found is not None else []
    else:
        deg = args.deg if args.deg is not None else 4 * args.char * L.order
        sols = poly_solutions(L, rho, deg, args.zvars, args.zbound)
    records = [Solution(s.rho, idx, s) for idx, s in enumerate(sols)]
    data = SolutionDoc(L.format(), L.desc, ()).to_dict()
    if records:
        data = SolutionDoc.from_basis(L.format(), SolutionBasis(tuple(records), 0, L.desc)).to_dict()
    lines = [str(s) for s in sols] or ["no solutions in the search space"]
    _emit(args, "\n".join(lines), data)
    return 0


def _parse_primes(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            try:
                out.extend(range(int(a), int(b) + 1))
            except ValueError:
                raise UsageError(f"bad prime range {part!r} (expected a..b)") from None
        elif part:
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"bad prime {part!r}") from None
    return out


def _threads() -> int:
    raw = os.environ.get("REGSING_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"REGSING_THREADS must be an integer, got {raw!r}") from None


def cmd_scan(args) -> int:
    _require_char(args, False)
    L = _operator(args)
    rows = grothendieck_scan(L, _parse_primes(args.primes), args.order, args.ext, _threads())
    header = ["p", "good", "in_Fp", "distinct", "series_basis", "pcurv_0", "pcurv_nil", "first_z"]
    table = [header]
    for r in rows:
        d = r.as_dict()
        vals = [d[k] for k in d]
        table.append(["-" if v is None else (("yes" if v else "no") if isinstance(v, bool) else str(v)) for v in vals])
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    text = "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table)
    _emit(args, text, scan_to_json(rows, args.order), scan_to_csv(rows))
    return 0


def cmd_residual(args) -> int:
    _require_char(args, True)
    L = _operator(args)
    Ln, _ = shift_normalize(L)
    P = parse_bivariate(args.poly, L.desc)
    rho = parse_field_element(args.exponent, L.desc) if args.exponent else L.desc.zero
    sol = solve_p(Ln, rho, args.order).solutions[args.index]
    f = project_z(sol.series, args.keep)
    order = algebraic_residual(f, dict(P))
    prec = f.rho.to_int() + args.order
    ok = order > prec
    data = {"p": args.char, "series": str(f), "residual_order": order, "precision": prec, "vanishes": ok}
    text = "\n".join([
        f"series: {f}",
        f"precision: x^{prec}",
        f"P(x, y) vanishes through precision: {'yes' if ok else 'no'}" + ("" if ok else f" (first term at x^{order})"),
    ])
    _emit(args, text, data)
    return 0


def random_operator(rng: random.Random, desc: FieldDesc, order: int, shifts: int = 2, height: int = 3) -> DiffOp:
    """A random operator with a regular singularity at 0 and integer exponents in [0, height]."""
    one = desc.one
    s = DiffOp.delta(desc)
    L0 = DiffOp.constant(desc, one)
    for _ in range(order):
        L0 = L0 * (s - rng.randint(0, height))
    L = L0
    for tau in range(1, shifts + 1):
        for j in range(order):
            c = rng.randint(-height, height)
            if c:
                L = L + DiffOp.constant(desc, c) * DiffOp.x(desc) ** tau * s**j
    return L


def cmd_demo(args) -> int:
    rng = random.Random(args.seed)
    desc = FieldDesc(args.char)
    L = random_operator(rng, desc, args.n)
    N = args.order
    if args.char == 0:
        basis = solve0(L, N)
        residues = [apply_extended(L, s.series).is_zero() for s in basis]
    else:
        field, rhos = _char_p_exponents(L, args)
        Lf = L.map(field)
        sols = [s for rho in rhos for s in solve_p(Lf, rho, N)]
        basis = SolutionBasis(tuple(sols), N, field)
        residues = [apply_p(Lf, s.series).is_zero() for s in basis]
    ok = all(residues) and len(residues) == L.order
    data = {
        "seed": args.seed,
        "operator": L.format(),
        "solutions": len(residues),
        "order": L.order,
        "all_annihilated": all(residues),
    }
    lines = [f"seed: {args.seed}", f"operator: {L.format()}"] + _solution_lines(basis)
    lines.append(f"L(y) = 0 through x^{N} for all {len(residues)} solutions: {'yes' if ok else 'no'}")
    _emit(args, "\n".join(lines), data)
    return 0 if ok else 2


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized demos")
    common.add_argument("--char", type=int, default=0, metavar="P", help="characteristic: 0 or a prime")
    common.add_argument("--ext", type=int, default=None, metavar="D",
                        help="largest extension degree searched for exponents (default: the order)")
    common.add_argument("operator", nargs="?", help="operator expression (read from stdin if omitted)")

    parser = _Parser(prog="regsing", description="Local solutions of linear ODEs at a regular singular point.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("analyze", parents=[common], help="shift, order, indicial polynomial, exponents")

    p = sub.add_parser("solve", parents=[common], help="truncated solution basis")
    p.add_argument("--order", type=int, default=10, metavar="N", help="truncation order in x")
    p.add_argument("--exponent", metavar="RHO", help="only the solutions of this exponent")
    p.add_argument("--iterates", action="store_true", help="also print the terms (S T)^j of each solution")

    sub.add_parser("euler", parents=[common], help="solutions of the initial (Euler) form")

    p = sub.add_parser("pcurv", parents=[common], help="p-curvature matrix")
    p.add_argument("--nilpotent", action="store_true", help="report only whether it is nilpotent")

    p = sub.add_parser("polysolve", parents=[common], help="exact polynomial solutions")
    p.add_argument("--deg", type=int, default=None, metavar="D", help="x-degree bound (default 4*p*order)")
    p.add_argument("--zvars", type=int, default=0, metavar="L", help="number of z-variables allowed")
    p.add_argument("--zbound", type=int, default=1, metavar="B", help="z-exponents range over 0..B-1")
    p.add_argument("--exponent", metavar="RHO", help="sector exponent (default 0)")
    p.add_argument("--periodic", action="store_true", help="search via an eventually periodic series solution")

    p = sub.add_parser("scan", parents=[common], help="reduction-mod-p table over a range of primes")
    p.add_argument("--primes", default="2..50", help="range a..b or comma list")
    p.add_argument("--order", type=int, default=20, metavar="N", help="truncation order for series checks")

    p = sub.add_parser("residual", parents=[common], help="order of P(x, y(x)) for a series solution y")
    p.add_argument("--poly", required=True, metavar="P", help="polynomial in x and y")
    p.add_argument("--order", type=int, default=20, metavar="N")
    p.add_argument("--exponent", metavar="RHO", help="sector exponent (default 0)")
    p.add_argument("--index", type=int, default=0, metavar="I", help="which solution of the sector")
    p.add_argument("--keep", type=int, default=0, metavar="L", help="keep z_1..z_L, set the rest to 0")

    p = sub.add_parser("demo", parents=[common], help="solve a seeded random operator and check L(y) = 0")
    p.add_argument("--n", type=int, default=2, help="order of the random operator")
    p.add_argument("--order", type=int, default=10, metavar="N")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "solve": cmd_solve,
    "euler": cmd_euler,
    "pcurv": cmd_pcurv,
    "polysolve": cmd_polysolve,
    "scan": cmd_scan,
    "residual": cmd_residual,
    "demo": cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.char < 0:
            raise UsageError("--char must be 0 or a prime")
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except MathError as e:
        print(f"math error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (RegsingError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
