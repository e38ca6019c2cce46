"""Reduction modulo p, p-curvature, polynomial solutions and prime scans."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product

from .diffop import DiffOp, decompose, indicial, indicial_polynomial, is_regular_singular, shift_normalize
from .errors import BadPrime, DomainError, MathError
from .exactalg import FieldDesc, FieldElem, Poly, field_roots, is_prime, nullspace, poly_gcd
from .frobenius0 import group_exponents, solve0
from .frobeniusp import SectorSeries, SectorSolver, _Component, apply_p, canon, solve_p


class RatFunc:
    """Reduced fraction num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly(num.desc, [1])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly(num.desc, [1])
            return
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lc = den.lc().inverse()
        self.num, self.den = num * lc, den * lc

    @property
    def desc(self) -> FieldDesc:
        return self.num.desc

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return self + (-other)

    def __mul__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        return RatFunc(self.num * other.den, self.den * other.num)

    def derivative(self) -> RatFunc:
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.degree() == 0:
            return self.num.format("x")
        return f"({self.num.format('x')})/({self.den.format('x')})"

    __repr__ = __str__


@dataclass(frozen=True)
class PCurvMatrix:
    """Matrix of D^p acting on k(x)[D]/k(x)[D]L in the companion basis."""

    entries: tuple[tuple[RatFunc, ...], ...]
    p: int
    fingerprint: str

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)


# -- reduction ---------------------------------------------------------------

def reduce_mod_p(L: DiffOp, p: int) -> DiffOp:
    """Reduce an operator over Q modulo p, refusing primes that break it."""
    if L.desc.characteristic != 0:
        raise DomainError("reduction needs an operator over Q")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    for c in (c for _, c in L.items()):
        if c.to_fraction().denominator % p == 0:
            raise BadPrime(f"p = {p} divides the denominator of coefficient {c}")
    Fp = FieldDesc(p)
    Lp = L.map(Fp)
    if Lp.is_zero() or Lp.order < L.order:
        raise BadPrime(f"reduction modulo {p} lowers the order")
    if is_regular_singular(L):
        n, tau = L.order, L.shift
        if Lp.coeff(n + tau, n).is_zero():
            raise BadPrime(f"reduction modulo {p} loses the regular singularity")
    return Lp


# -- p-curvature -------------------------------------------------------------

class _IntPolys:
    """Polynomial arithmetic on int lists modulo a prime (fast path)."""

    def __init__(self, p: int):
        self.p = p

    def trim(self, a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def from_poly(self, q: Poly):
        return [c.value for c in q.coeffs]

    def to_poly(self, a, desc):
        return Poly(desc, a)

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return self.trim(out)

    def scale(self, a, c):
        c %= self.p
        return self.trim([x * c % self.p for x in a]) if c else []

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self.trim([c % self.p for c in out])

    def der(self, a):
        return self.trim([k * c % self.p for k, c in enumerate(a)][1:])


class _FieldPolys:
    """The same interface on Poly objects (extension fields)."""

    def from_poly(self, q: Poly):
        return q

    def to_poly(self, a, desc):
        return a

    def add(self, a, b):
        return a + b

    def scale(self, a, c):
        return a * c

    def mul(self, a, b):
        return a * b

    def der(self, a):
        return a.derivative()


def _pcurvature_numerators(L: DiffOp):
    """Numerator matrix N_p and denominator d with A_p = N_p / d^p.

    With A = N / d, the recursion A_{m+1} = A_m' + A_m A becomes
    N_{m+1} = d N_m' - m d' N_m + N_m N on polynomial matrices.
    """
    desc = L.desc
    n = L.order
    p = desc.characteristic
    ops = _IntPolys(p) if desc.is_prime_field else _FieldPolys()
    lead = L.coefficient_poly(n)
    d = ops.from_poly(lead)
    zero = ops.from_poly(Poly(desc))
    base = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        base[i][i + 1] = d
    for j in range(n):
        base[n - 1][j] = ops.from_poly(-L.coefficient_poly(j))
    dd = ops.der(d)
    cur = [row[:] for row in base]
    for m in range(1, p):
        nxt = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ops.add(ops.mul(d, ops.der(cur[i][j])), ops.scale(ops.mul(dd, cur[i][j]), -m))
                for t in range(n):
                    acc = ops.add(acc, ops.mul(cur[i][t], base[t][j]))
                row.append(acc)
            nxt.append(row)
        cur = nxt
    return [[ops.to_poly(a, desc) for a in row] for row in cur], lead


def p_curvature(L: DiffOp) -> PCurvMatrix:
    """A_p from A_1 = companion matrix, A_{m+1} = A_m' + A_m A."""
    desc = L.desc
    if desc.characteristic == 0:
        raise DomainError("p-curvature needs an operator over a finite field")
    n = L.order
    if n < 0 or L.coefficient_poly(n).is_zero():
        raise DomainError("operator has zero leading coefficient")
    p = desc.characteristic
    if n == 0:
        return PCurvMatrix((), p, L.format())
    nums, lead = _pcurvature_numerators(L)
    den = lead ** p
    entries = tuple(tuple(RatFunc(a, den) for a in row) for row in nums)
    return PCurvMatrix(entries, p, L.format())


def is_zero(M: PCurvMatrix) -> bool:
    return all(e.is_zero() for row in M.entries for e in row)


def _matmul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = A[i][0] * B[0][j]
            for t in range(1, n):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def is_nilpotent(M: PCurvMatrix) -> bool:
    """M^n = 0 for the n x n matrix M (numerators over a common denominator)."""
    n = M.dim
    if n == 0 or is_zero(M):
        return True
    den = M.entries[0][0].den
    for row in M.entries:
        for e in row:
            den = den * e.den // poly_gcd(den, e.den)
    nums = [[e.num * (den // e.den) for e in row] for row in M.entries]
    power = nums
    for _ in range(n - 1):
        power = _matmul(power, nums)
    return all(e.is_zero() for row in power for e in row)


# -- polynomial solutions ----------------------------------------------------

def _rho_in_prime_field(L: DiffOp, rho) -> FieldElem:
    rho = rho if isinstance(rho, FieldElem) else L.desc(rho)
    if not rho.in_prime_field():
        raise DomainError("exponent must lie in the prime field")
    return L.desc(rho.to_int())


def _normalize_leading(v: dict, desc: FieldDesc) -> dict:
    first = min(v)
    inv = v[first].inverse()
    return {key: c * inv for key, c in v.items()}


def poly_solutions(L: DiffOp, rho=0, D: int = 0, zvars: int = 0, B: int = 1) -> list[SectorSeries]:
    """Basis of solutions t^rho * sum_{k <= D, alpha < B} c x^k z^alpha (exact linear algebra).

    Each basis element is scaled so that its lowest monomial has coefficient 1.
    """
    L, _ = shift_normalize(L)
    rho = _rho_in_prime_field(L, rho)
    desc = L.desc
    comps = [_Component(c, rho) for c in decompose(L)]
    unknowns = [(k, canon(a)) for k in range(D + 1) for a in product(range(B), repeat=zvars)]
    columns = []
    rows_index: dict = {}
    for k, alpha in unknowns:
        image: dict = {}
        for comp in comps:
            comp.act(k, alpha, desc.one, image, None)
        col = {key: c for key, c in image.items() if not c.is_zero()}
        for key in col:
            rows_index.setdefault(key, len(rows_index))
        columns.append(col)
    rows = [[desc.zero] * len(unknowns) for _ in rows_index]
    for j, col in enumerate(columns):
        for key, c in col.items():
            rows[rows_index[key]][j] = c
    out = []
    for vec in nullspace(rows, len(unknowns), desc):
        coeffs = {unknowns[j]: c for j, c in enumerate(vec) if not c.is_zero()}
        out.append(SectorSeries(rho, _normalize_leading(coeffs, desc), None))
    out.sort(key=lambda s: sorted(s.coeffs)[0])
    return out


def as_polynomial(f: SectorSeries) -> Poly:
    """The x-polynomial x^rho * sum c_k x^k of a z-free sector series with rho in F_p."""
    if not f.z_free():
        raise DomainError("series contains z-variables")
    r = f.rho.to_int()
    deg = max((k for k, _ in f.coeffs), default=-1)
    cs = [f.desc.zero] * (r + deg + 1)
    for (k, _), c in f.coeffs.items():
        cs[r + k] = c
    return Poly(f.desc, cs)


def periodic_polynomial_solution(L: DiffOp, rho=0, N: int | None = None) -> SectorSeries | None:
    """Polynomial solution (1 - x^P) y from an eventually periodic z-free solution y.

    P runs over multiples of p; the candidate is verified exactly by applying L.
    """
    L, _ = shift_normalize(L)
    rho = _rho_in_prime_field(L, rho)
    p = L.desc.characteristic
    if N is None:
        N = 8 * p * max(L.order, 1)
    y = solve_p(L, rho, N).solutions[0].series
    if not y.z_free():
        return None
    a = [y.coeffs.get((k, ()), L.desc.zero) for k in range(N + 1)]
    for P in range(p, (N + 1) // 2 + 1, p):
        for start in range(0, N + 1 - 2 * P):
            if all(a[i] == a[i - P] for i in range(start + P, N + 1)):
                coeffs = {}
                for i in range(start + P):
                    c = a[i] - (a[i - P] if i >= P else L.desc.zero)
                    if not c.is_zero():
                        coeffs[(i, ())] = c
                cand = SectorSeries(rho, coeffs, None)
                if not cand.is_zero() and apply_p(L, cand).is_zero():
                    return cand
                break
    return None


# -- right division ----------------------------------------------------------

def verify_right_divisor(L: DiffOp, Q: DiffOp, M: DiffOp, q_denominator: Poly | None = None) -> bool:
    """Check Q * M = L, where Q may carry a left denominator: Q = q_denominator^(-1) * Q."""
    if q_denominator is None:
        return Q * M == L
    d = DiffOp.from_coefficients(L.desc, [q_denominator])
    return Q * M == d * L


# -- prime scan --------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    prime: int
    good: bool
    exponents_in_prime_field: bool = False
    exponents_distinct: bool = False
    power_series_basis_through_N: bool = False
    pcurv_zero: bool = False
    pcurv_nilpotent: bool = False
    first_z_variable_degree: int | Fraction | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        if isinstance(self.first_z_variable_degree, Fraction):
            d["first_z_variable_degree"] = str(self.first_z_variable_degree)
        return d


SCAN_FIELDS = [
    "prime",
    "good",
    "exponents_in_prime_field",
    "exponents_distinct",
    "power_series_basis_through_N",
    "pcurv_zero",
    "pcurv_nilpotent",
    "first_z_variable_degree",
]


def _char0_lifts(L: DiffOp, N: int):
    """Characteristic-zero solutions u^{-1}(x^rho) as {offset from rho: z-coefficients}.

    Returns None when the exponents are not rational (no lift is available).
    """
    try:
        groups = group_exponents(indicial(L))
        span = max(g.offsets[-1] for g in groups)
        basis = solve0(L, N + span)
    except MathError:
        return None
    lifts = []
    for sol in basis:
        if sol.i != 0:
            continue
        shift = int(sol.rho - sol.series.base)
        coeffs: dict[int, dict[int, Fraction]] = {}
        for (k, i), c in sol.series.coeffs.items():
            if 0 <= k - shift <= N:
                coeffs.setdefault(k - shift, {})[i] = c
        lifts.append((sol.rho, coeffs))
    return lifts


def _lift_init(rho: Fraction, coeffs: dict, chi_p: Poly, N: int) -> tuple[FieldElem, dict]:
    """Seed t^rho (1 + sum a_l x^l) for the resonant offsets l below the first obstruction."""
    Fp = chi_p.desc
    p = Fp.characteristic
    rho_bar = Fp(rho)
    stop = N + 1
    for ell in range(1, N + 1):
        zc = coeffs.get(ell, {})
        if any(i > 0 for i in zc) or any(c.denominator % p == 0 for c in zc.values()):
            stop = ell
            break
    init = {(0, ()): Fp.one}
    for ell in range(1, stop):
        if chi_p(rho_bar + ell).is_zero():
            a = coeffs.get(ell, {}).get(0, Fraction(0))
            if a:
                init[(ell, ())] = Fp(a)
    return rho_bar, init


def _degree(rho, k: int):
    d = Fraction(rho) + k
    return int(d) if d.denominator == 1 else d


def scan_prime(L: DiffOp, p: int, N: int, max_ext: int | None = None, lifts=None) -> ScanRow:
    """One scan row; ``lifts`` are the characteristic-zero seeds from ``_char0_lifts``."""
    try:
        Lp = reduce_mod_p(L, p)
    except BadPrime:
        return ScanRow(p, False)
    n = L.order
    Ln, _ = shift_normalize(L)
    Lpn, _ = shift_normalize(Lp)
    chi0 = indicial_polynomial(Ln)
    chi_p = indicial_polynomial(Lpn)
    if p <= n or chi_p.degree() != chi0.degree():
        return ScanRow(p, False)
    roots = field_roots(chi_p, max_ext or max(n, 1))
    in_prime = roots.complete and roots.field.is_prime_field
    distinct = poly_gcd(chi_p, chi_p.derivative()).degree() == 0
    pc = p_curvature(Lp)
    zero, nil = is_zero(pc), is_nilpotent(pc)
    first = None
    any_z = False
    comps = decompose(Lpn)
    if lifts is not None:
        for rho, coeffs in lifts:
            rho_bar, init = _lift_init(rho, coeffs, chi_p, N)
            g = SectorSolver(comps, rho_bar, N).perturb(init, N)
            ks = [k for k, alpha in g if alpha]
            if ks:
                any_z = True
                deg = _degree(rho, min(ks))
                first = deg if first is None else min(first, deg)
    elif roots.complete:
        for rho_bar, m in roots:
            base = rho_bar.to_int() if rho_bar.in_prime_field() else 0
            for sol in solve_p(Lpn.map(roots.field), rho_bar, N):
                k = sol.series.first_z_power()
                if k is not None:
                    any_z = True
                    first = base + k if first is None else min(first, base + k)
    else:
        any_z = True
    basis = in_prime and distinct and not any_z
    return ScanRow(p, True, in_prime, distinct, basis, zero, nil, first)


def _scan_task(args):
    return scan_prime(*args)


def grothendieck_scan(L: DiffOp, primes, N: int, max_ext: int | None = None, workers: int = 1) -> list[ScanRow]:
    """Scan rows for every prime in ``primes`` (non-primes are skipped), in increasing order."""
    if L.desc.characteristic != 0:
        raise DomainError("scan needs an operator over Q")
    plist = sorted(p for p in set(primes) if is_prime(p))
    lifts = _char0_lifts(shift_normalize(L)[0], N)
    tasks = [(L, p, N, max_ext, lifts) for p in plist]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_task, tasks))
    return [_scan_task(t) for t in tasks]


def scan_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCAN_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        d = row.as_dict()
        if d["first_z_variable_degree"] is None:
            d["first_z_variable_degree"] = ""
        writer.writerow(d)
    return buf.getvalue()


def scan_to_json(rows: list[ScanRow], N: int | None = None) -> str:
    doc = {"rows": [r.as_dict() for r in rows]}
    if N is not None:
        doc["N"] = N
    return json.dumps(doc, indent=2)
