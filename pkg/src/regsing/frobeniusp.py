"""Characteristic-p local solutions in the ring of t^rho-sectors with log variables.

Elements live in sectors ``t^rho * k(z_1, z_2, ...)((x))`` where ``t^rho``
is a formal symbol with ``D t^rho = rho t^rho / x`` and the ``z_j`` are
iterated logarithms: ``x D z_1 = 1`` and ``x D z_j = (x D z_{j-1}) / z_{j-1}``.
A monomial ``t^rho x^k z^alpha`` is stored as the key ``(k, alpha)`` of a
sector series, with ``alpha`` a tuple of exponents without trailing zeros.

The solver mirrors the characteristic-zero one: the Euler initial form
``L0`` has an explicit right inverse on the rho-function space, and
``v(g) = sum (S T)^j g`` with ``T = L0 - L`` turns Euler solutions into
solutions of ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .diffop import DiffOp, EulerComponent, decompose, indicial_polynomial, is_regular_singular, shift_normalize
from .errors import DomainError, IncompleteSplitting, IrregularSingularity
from .exactalg import FieldDesc, FieldElem, Poly, field_roots, hasse_derivative, root_multiplicity
from .frobenius0 import Solution, SolutionBasis
from .render import format_grouped, power, z_monomial

MultiIndex = tuple[int, ...]


def canon(alpha) -> MultiIndex:
    alpha = list(alpha)
    while alpha and alpha[-1] == 0:
        alpha.pop()
    return tuple(alpha)


def e_value(alpha: MultiIndex, p: int) -> int:
    """sum of (alpha_j mod p) * p^(j-1); (x D)^e z^alpha is the last nonzero power."""
    total, scale = 0, 1
    for a in alpha:
        total += (a % p) * scale
        scale *= p
    return total


def e_key(alpha: MultiIndex, p: int):
    """Sort key refining the e-valuation (ties broken inverse-lexicographically)."""
    return (e_value(alpha, p), tuple(reversed(alpha)))


def istar(i: int, p: int) -> MultiIndex:
    """(i, i // p, i // p^2, ...) without trailing zeros."""
    out = []
    while i:
        out.append(i)
        i //= p
    return tuple(out)


@lru_cache(maxsize=None)
def _x_del(alpha: MultiIndex, p: int) -> tuple[tuple[MultiIndex, int], ...]:
    out = []
    for j, a in enumerate(alpha):
        c = a % p
        if c:
            gamma = canon([b - 1 if t <= j else b for t, b in enumerate(alpha)])
            out.append((gamma, c))
    return tuple(out)


def x_del(alpha: MultiIndex, p: int) -> list[tuple[FieldElem, MultiIndex]]:
    """(x D) z^alpha = sum_j alpha_j z^gamma(j), gamma(j) = alpha with entries 1..j lowered by one."""
    fp = FieldDesc(p)
    return [(fp(c), gamma) for gamma, c in _x_del(canon(alpha), p)]


@lru_cache(maxsize=None)
def _x_del_power(alpha: MultiIndex, p: int, ell: int) -> tuple[tuple[MultiIndex, int], ...]:
    if ell == 0:
        return ((alpha, 1),)
    acc: dict[MultiIndex, int] = {}
    for beta, c in _x_del_power(alpha, p, ell - 1):
        for gamma, a in _x_del(beta, p):
            acc[gamma] = (acc.get(gamma, 0) + c * a) % p
    return tuple((g, c) for g, c in acc.items() if c)


def x_del_power(alpha: MultiIndex, p: int, ell: int) -> dict[MultiIndex, int]:
    return dict(_x_del_power(canon(alpha), p, ell))


class SectorSeries:
    """Truncated element ``t^rho * sum coeffs[(k, alpha)] x^k z^alpha`` of one sector."""

    __slots__ = ("rho", "coeffs", "trunc")

    def __init__(self, rho: FieldElem, coeffs: dict | None = None, trunc: int | None = None):
        desc = rho.desc
        self.rho = rho
        self.trunc = trunc
        clean = {}
        for (k, alpha), c in (coeffs or {}).items():
            if trunc is not None and k > trunc:
                continue
            c = c if isinstance(c, FieldElem) and c.desc == desc else desc(c)
            if not c.is_zero():
                clean[(k, canon(alpha))] = c
        self.coeffs = clean

    @classmethod
    def monomial(cls, rho: FieldElem, k: int, alpha=(), trunc: int | None = None, c=1) -> SectorSeries:
        return cls(rho, {(k, alpha): c}, trunc)

    @property
    def desc(self) -> FieldDesc:
        return self.rho.desc

    @property
    def p(self) -> int:
        return self.rho.desc.characteristic

    def is_zero(self) -> bool:
        return not self.coeffs

    def z_free(self) -> bool:
        return all(not alpha for _, alpha in self.coeffs)

    def z_variables(self) -> int:
        """Largest index j such that z_j occurs (0 when z-free)."""
        return max((len(alpha) for _, alpha in self.coeffs), default=0)

    def first_z_power(self) -> int | None:
        """Smallest x-power carrying a z-monomial."""
        return min((k for k, alpha in self.coeffs if alpha), default=None)

    def coefficient(self, k: int) -> dict[MultiIndex, FieldElem]:
        return {alpha: c for (kk, alpha), c in self.coeffs.items() if kk == k}

    def __add__(self, other: SectorSeries) -> SectorSeries:
        if other.rho != self.rho:
            raise DomainError("cannot add series from different sectors")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out[key] + c if key in out else c
        return SectorSeries(self.rho, out, _min_trunc(self.trunc, other.trunc))

    def scale(self, c) -> SectorSeries:
        c = self.desc(c)
        return SectorSeries(self.rho, {key: v * c for key, v in self.coeffs.items()}, self.trunc)

    def __eq__(self, other):
        if not isinstance(other, SectorSeries):
            return NotImplemented
        return self.rho == other.rho and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self):
        return f"SectorSeries({self})"

    def __str__(self):
        p = self.p
        groups = []
        for k in sorted({k for k, _ in self.coeffs}):
            zs = sorted(self.coefficient(k).items(), key=lambda ac: e_key(ac[0], p), reverse=True)
            groups.append((power("x", k), [(c, z_monomial(a)) for a, c in zs]))
        body = format_grouped(groups, self.trunc is not None)
        if self.rho.is_zero():
            return body
        rho = str(self.rho)
        label = f"t^({rho})" if " " in rho or "*" in rho else f"t^{rho}"
        return f"{label}*({body})"


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def to_x_form(f: SectorSeries) -> dict[tuple[int, MultiIndex], FieldElem]:
    """Substitute t^rho = x^rho for rho in the prime field (rho read in range(p))."""
    if not f.rho.in_prime_field():
        raise DomainError("t^rho is a power of x only for rho in the prime field")
    r = f.rho.to_int()
    return {(r + k, alpha): c for (k, alpha), c in f.coeffs.items()}


# -- the derivation and constants -------------------------------------------

def derive(f: SectorSeries) -> SectorSeries:
    """D(t^rho x^k z^alpha) = t^rho x^(k-1) ((rho + k) z^alpha + sum_j alpha_j z^gamma(j))."""
    p, rho = f.p, f.rho
    out: dict = {}
    for (k, alpha), c in f.coeffs.items():
        lead = rho + k
        if not lead.is_zero():
            key = (k - 1, alpha)
            out[key] = out[key] + c * lead if key in out else c * lead
        for gamma, a in _x_del(alpha, p):
            key = (k - 1, gamma)
            out[key] = out[key] + c * a if key in out else c * a
    trunc = None if f.trunc is None else f.trunc - 1
    return SectorSeries(rho, out, trunc)


def is_constant(f: SectorSeries) -> bool:
    """True when D f vanishes through the truncation."""
    return derive(f).is_zero()


def is_constant_closed_form(f: SectorSeries) -> bool:
    """rho in F_p, every k = -rho mod p and every alpha_j = 0 mod p."""
    if f.is_zero():
        return True
    if not f.rho.in_prime_field():
        return False
    p, r = f.p, f.rho.to_int()
    return all((r + k) % p == 0 and all(a % p == 0 for a in alpha) for k, alpha in f.coeffs)


def multiply(f: SectorSeries, g: SectorSeries) -> SectorSeries:
    """Product in the ring: t^rho t^sigma = t^(rho + sigma), exponents of x and z add."""
    out: dict = {}
    for (k, a), c in f.coeffs.items():
        for (l, b), d in g.coeffs.items():
            n = max(len(a), len(b))
            gamma = canon([(a[j] if j < len(a) else 0) + (b[j] if j < len(b) else 0) for j in range(n)])
            key = (k + l, gamma)
            out[key] = out[key] + c * d if key in out else c * d
    trunc = None
    if f.trunc is not None or g.trunc is not None:
        low_f = min((k for k, _ in f.coeffs), default=0)
        low_g = min((k for k, _ in g.coeffs), default=0)
        cands = []
        if f.trunc is not None:
            cands.append(f.trunc + low_g)
        if g.trunc is not None:
            cands.append(g.trunc + low_f)
        trunc = min(cands)
    return SectorSeries(f.rho + g.rho, out, trunc)


# -- operators acting on a sector ------------------------------------------

class _Component:
    """Euler component with divided derivatives evaluated at rho + (k mod p)."""

    def __init__(self, comp: EulerComponent, rho: FieldElem, sign: int = 1):
        desc = rho.desc
        phi = comp.phi.map(desc) * sign
        self.shift = comp.shift
        self.p = desc.characteristic
        self.values = [
            [hasse_derivative(phi, ell)(rho + r) for r in range(self.p)]
            for ell in range(phi.degree() + 1)
        ]

    def act(self, k: int, alpha: MultiIndex, c: FieldElem, out: dict, trunc: int | None):
        kk = k + self.shift
        if trunc is not None and kk > trunc:
            return
        r = k % self.p
        p = self.p
        for ell, row in enumerate(self.values):
            v = row[r]
            if v.is_zero():
                continue
            powers = _x_del_power(alpha, p, ell)
            if not powers:
                break
            cv = c * v
            for gamma, a in powers:
                key = (kk, gamma)
                term = cv * a
                out[key] = out[key] + term if key in out else term


def _act_all(components: list[_Component], terms: dict, trunc: int | None) -> dict:
    out: dict = {}
    for (k, alpha), c in terms.items():
        for comp in components:
            comp.act(k, alpha, c, out, trunc)
    return {key: v for key, v in out.items() if not v.is_zero()}


def _components(L: DiffOp) -> list[EulerComponent]:
    if L.desc.characteristic == 0:
        raise DomainError("characteristic-p solver needs an operator over a finite field")
    return decompose(L)


def apply_p(L: DiffOp, f: SectorSeries) -> SectorSeries:
    """Apply a shift-normalized operator to a sector series."""
    comps = [_Component(c, f.rho) for c in _components(L)]
    return SectorSeries(f.rho, _act_all(comps, f.coeffs, f.trunc), f.trunc)


# -- the rho-function space --------------------------------------------------

@dataclass(frozen=True)
class XiProfile:
    """Cumulative multiplicities xi(k) = m_rho + m_{rho+1} + ... + m_{rho+k}.

    ``residue_mults[r]`` is the multiplicity of rho + r for r in range(p);
    ``table`` lists xi(0..N).
    """

    rho: FieldElem
    chi: Poly
    residue_mults: tuple[int, ...]
    table: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.rho.desc.characteristic

    def mult(self, k: int) -> int:
        return self.residue_mults[k % self.p]

    def xi(self, k: int) -> int:
        if k < len(self.table):
            return self.table[k]
        p = self.p
        full, rest = divmod(k + 1, p)
        return full * sum(self.residue_mults) + sum(self.residue_mults[:rest])


def xi_profile(chi: Poly, rho: FieldElem, N: int) -> XiProfile:
    mults = tuple(root_multiplicity(chi, rho + r) for r in range(rho.desc.characteristic))
    if mults[0] == 0:
        raise DomainError(f"{rho} is not a root of the indicial polynomial {chi}")
    table, acc = [], 0
    for k in range(N + 1):
        acc += mults[k % len(mults)]
        table.append(acc)
    return XiProfile(rho, chi, mults, tuple(table))


def in_Ak(alpha: MultiIndex, k: int, prof: XiProfile) -> bool:
    """alpha_1 < xi(k) and p * alpha_{j+1} <= alpha_j for all j."""
    if k < 0:
        return False
    p = prof.p
    first = alpha[0] if alpha else 0
    if first < 0 or first >= prof.xi(k):
        return False
    return all(p * alpha[j + 1] <= alpha[j] for j in range(len(alpha) - 1))


def in_function_space(f: SectorSeries, prof: XiProfile) -> bool:
    return all(in_Ak(alpha, k, prof) for k, alpha in f.coeffs)


@dataclass(frozen=True)
class RMonomial:
    """t^rho x^k z^alpha."""

    rho: FieldElem
    k: int
    alpha: MultiIndex

    def as_series(self, trunc: int | None = None) -> SectorSeries:
        return SectorSeries.monomial(self.rho, self.k, self.alpha, trunc)


def euler_solve_p(L0: EulerComponent, desc: FieldDesc, max_ext: int | None = None) -> list[tuple[FieldElem, int, RMonomial]]:
    """Solutions t^rho z^(i*) for every root rho of chi and 0 <= i < m_rho."""
    if L0.shift != 0:
        raise DomainError("initial form must have shift 0")
    chi = L0.phi.map(desc)
    if max_ext is None:
        max_ext = max(chi.degree(), 1)
    roots = field_roots(chi, max_ext)
    if not roots.complete:
        raise IncompleteSplitting(
            f"indicial polynomial does not split over extensions of degree <= {max_ext}; "
            f"unsplit factor {roots.cofactor}",
            roots.cofactor,
        )
    p = desc.characteristic
    return [(rho, i, RMonomial(rho, 0, istar(i, p))) for rho, m in roots for i in range(m)]


def _carry_add(alpha: MultiIndex, ell: int, p: int) -> MultiIndex:
    """beta_1 = alpha_1 + ell, beta_j = alpha_j + (beta_{j-1} // p) - (alpha_{j-1} // p)."""
    beta = []
    j = 0
    prev_a = prev_b = 0
    while True:
        a = alpha[j] if j < len(alpha) else 0
        b = a + ell if j == 0 else a + prev_b // p - prev_a // p
        if j >= len(alpha) and b == 0:
            break
        beta.append(b)
        prev_a, prev_b = a, b
        j += 1
    return canon(beta)


class SectorSolver:
    """Right inverse S of L0 and the perturbation sum v for one sector of a fixed operator."""

    def __init__(self, components: list[EulerComponent], rho: FieldElem, N: int = 0):
        if not components or components[0].shift != 0:
            raise DomainError("initial form must have shift 0")
        self.rho = rho
        self.p = rho.desc.characteristic
        self.profile = xi_profile(components[0].phi.map(rho.desc), rho, N)
        self.initial = _Component(components[0], rho)
        self.perturbation = [_Component(c, rho, -1) for c in components[1:]]
        self._memo: dict = {}

    def right_inverse(self, k1: int, alpha: MultiIndex) -> dict:
        """Preimage of t^rho x^k1 z^alpha (alpha in A_{k1-1}) on the complement, as {beta: c}."""
        key = (k1, alpha)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if k1 < 1 or not in_Ak(alpha, k1 - 1, self.profile):
            raise DomainError(f"x^{k1} z^{alpha} does not lie in the image space")
        p = self.p
        beta = _carry_add(alpha, self.profile.mult(k1), p)
        image: dict = {}
        self.initial.act(k1, beta, self.rho.desc.one, image, None)
        image = {g: c for (_, g), c in image.items() if not c.is_zero()}
        lead = image.pop(alpha, None)
        if lead is None:
            raise ArithmeticError(f"no leading term for x^{k1} z^{alpha}")
        result = {beta: self.rho.desc.one}
        e_alpha = e_value(alpha, p)
        for gamma, r in image.items():
            if e_value(gamma, p) >= e_alpha:
                raise ArithmeticError(f"elimination does not descend at z^{gamma}")
            for b, c in self.right_inverse(k1, gamma).items():
                result[b] = result[b] - r * c if b in result else -(r * c)
        inv = lead.inverse()
        result = {b: c * inv for b, c in result.items() if not c.is_zero()}
        self._memo[key] = result
        return result

    def apply_right_inverse(self, terms: dict) -> dict:
        out: dict = {}
        for (k, alpha), c in terms.items():
            for beta, v in self.right_inverse(k, alpha).items():
                key = (k, beta)
                out[key] = out[key] + c * v if key in out else c * v
        return {key: v for key, v in out.items() if not v.is_zero()}

    def iterates(self, init: dict, N: int):
        """Yield (S T)^j init for j = 0, 1, ... until the terms pass x-power N."""
        desc = self.rho.desc
        current = {key: desc(c) for key, c in init.items() if key[0] <= N}
        while current:
            yield current
            current = self.apply_right_inverse(_act_all(self.perturbation, current, N))

    def perturb(self, init: dict, N: int) -> dict:
        """v(init) = sum_j (S T)^j init through x-power N."""
        total: dict = {}
        for term in self.iterates(init, N):
            for key, c in term.items():
                total[key] = total[key] + c if key in total else c
        return {key: c for key, c in total.items() if not c.is_zero()}


def right_inverse_p(L0: EulerComponent, prof: XiProfile, target: RMonomial) -> SectorSeries:
    """h on the complement of the kernel with L0(h) = target."""
    solver = SectorSolver([L0], prof.rho, len(prof.table) - 1)
    return SectorSeries(prof.rho, {(target.k, b): c for b, c in solver.right_inverse(target.k, canon(target.alpha)).items()})


def _prepare(L: DiffOp) -> DiffOp:
    L, _ = shift_normalize(L)
    if not is_regular_singular(L):
        raise IrregularSingularity("0 is an irregular singular point of the operator")
    return L


def perturbation_sum_p(L: DiffOp, f: SectorSeries, N: int) -> SectorSeries:
    """v(f) through x-power N; f must lie in the rho-function space of L."""
    L = _prepare(L)
    solver = SectorSolver(_components(L), f.rho, N)
    return SectorSeries(f.rho, solver.perturb(f.coeffs, N), N)


def solve_p(L: DiffOp, rho: FieldElem, N: int) -> SolutionBasis:
    """Solutions y_{rho,i} = v(t^rho z^(i*)) for 0 <= i < m_rho, through x-power N."""
    L = _prepare(L)
    comps = _components(L)
    if not isinstance(rho, FieldElem):
        rho = L.desc(rho)
    chi = indicial_polynomial(L).map(rho.desc)
    m = root_multiplicity(chi, rho)
    if m == 0:
        raise DomainError(f"{rho} is not a local exponent")
    solver = SectorSolver(comps, rho, N)
    p = rho.desc.characteristic
    sols = []
    for i in range(m):
        series = SectorSeries(rho, solver.perturb({(0, istar(i, p)): 1}, N), N)
        sols.append(Solution(rho, i, series))
    return SolutionBasis(tuple(sols), N, rho.desc)


def project_z(f: SectorSeries, keep: int | None) -> SectorSeries:
    """Set z_j = 0 for j > keep (None keeps everything)."""
    if keep is None:
        return f
    return SectorSeries(f.rho, {key: c for key, c in f.coeffs.items() if len(key[1]) <= keep}, f.trunc)


def algebraic_residual(f: SectorSeries, P: dict[tuple[int, int], object]) -> int:
    """Order in x of P(x, f(x)), with P given as {(x-power, y-power): coeff}.

    Returns (precision + 1) when the residual vanishes through the known
    precision of f, which is x^(rho + trunc).
    """
    if not f.z_free():
        raise DomainError("residual needs a z-free series (apply project_z first)")
    if f.trunc is None:
        raise DomainError("residual needs a truncated series")
    desc = f.desc
    xf = to_x_form(f)
    prec = f.rho.to_int() + f.trunc
    series = [desc.zero] * (prec + 1)
    for (deg, _), c in xf.items():
        series[deg] = c
    ydeg = max((b for _, b in P), default=0)
    powers = [[desc.one] + [desc.zero] * prec]
    for _ in range(ydeg):
        prev = powers[-1]
        nxt = [desc.zero] * (prec + 1)
        for i, a in enumerate(prev):
            if a.is_zero():
                continue
            for j in range(prec + 1 - i):
                if not series[j].is_zero():
                    nxt[i + j] = nxt[i + j] + a * series[j]
        powers.append(nxt)
    total = [desc.zero] * (prec + 1)
    for (a, b), c in P.items():
        c = desc(c)
        for i in range(prec + 1 - a):
            total[i + a] = total[i + a] + c * powers[b][i]
    for deg, c in enumerate(total):
        if not c.is_zero():
            return deg
    return prec + 1
