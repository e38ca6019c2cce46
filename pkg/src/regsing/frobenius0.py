"""Characteristic-zero local solutions at a regular singular point.

Solutions are built in the space of series ``x^rho * sum c[k, i] x^k z^i``
with ``z`` standing for log x.  Local exponents are grouped into classes
whose members differ by integers.  For each class the extended operator is
split as ``L = L0 - T`` (``L0`` the Euler initial form, ``T`` the part of
positive shift).  A right inverse ``S`` of ``L0`` on an explicit complement
of its kernel then gives solutions ``v(g) = sum (S T)^k g`` for every kernel
monomial ``g`` of ``L0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor, perm

from .diffop import (
    DiffOp,
    EulerComponent,
    IndicialData,
    decompose,
    indicial,
    is_regular_singular,
    shift_normalize,
)
from .errors import DomainError, IrregularSingularity, NonRationalExponent
from .render import format_grouped, power


@dataclass(frozen=True)
class ExponentGroup:
    """Exponents rho_1 < ... < rho_r with integer differences and their multiplicities."""

    exponents: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]

    @property
    def base(self) -> Fraction:
        return self.exponents[0]

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(r - self.base) for r in self.exponents)

    @property
    def partial_sums(self) -> tuple[int, ...]:
        out, acc = [], 0
        for m in self.multiplicities:
            acc += m
            out.append(acc)
        return tuple(out)

    def index_of_offset(self, k: int) -> int | None:
        try:
            return self.offsets.index(k)
        except ValueError:
            return None

    def z_bound(self, k: int) -> int:
        """Number of admissible z-powers at offset k: n_j for the largest j with offset_j <= k."""
        bound = 0
        for off, n in zip(self.offsets, self.partial_sums):
            if off <= k:
                bound = n
        return bound

    def contains(self, k: int, i: int) -> bool:
        """Membership of x^(base+k) z^i in the function space of the group."""
        return k >= 0 and 0 <= i < self.z_bound(k)

    def contains_shifted(self, k: int, i: int) -> bool:
        """Membership in the function space multiplied by x."""
        return self.contains(k - 1, i)

    def layout(self) -> list[tuple[int, int]]:
        """Generators (offset, z-power): the space is the direct sum of O x^offset z^i."""
        out, prev = [], 0
        for off, n in zip(self.offsets, self.partial_sums):
            out.extend((off, i) for i in range(prev, n))
            prev = n
        return out


class LogSeries:
    """Truncated series ``x^base * sum coeffs[(k, i)] x^k z^i``.

    ``trunc`` is the largest offset whose coefficient is known; ``None``
    marks an exact (finite) expression.
    """

    __slots__ = ("base", "coeffs", "trunc")

    def __init__(self, base, coeffs: dict | None = None, trunc: int | None = None):
        self.base = Fraction(base)
        self.trunc = trunc
        self.coeffs = {
            key: Fraction(c)
            for key, c in (coeffs or {}).items()
            if c and (trunc is None or key[0] <= trunc)
        }

    @classmethod
    def monomial(cls, base, k: int, i: int, trunc: int | None = None, c=1) -> LogSeries:
        return cls(base, {(k, i): c}, trunc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> dict[int, Fraction]:
        """The z-polynomial multiplying x^(base+k), as {power: coeff}."""
        return {i: c for (kk, i), c in self.coeffs.items() if kk == k}

    def z_degree(self) -> int:
        return max((i for _, i in self.coeffs), default=-1)

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.base == other.base and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self):
        return f"LogSeries({self})"

    def __str__(self):
        groups = []
        for k in sorted({k for k, _ in self.coeffs}):
            zs = sorted(self.coefficient(k).items(), reverse=True)
            groups.append((power("x", self.base + k), [(c, power("z", i)) for i, c in zs]))
        return format_grouped(groups, self.trunc is not None)


@dataclass(frozen=True)
class Solution:
    """Labeled solution y_{rho,i}: its exponent, index and truncated series."""

    rho: object
    i: int
    series: object


@dataclass(frozen=True)
class SolutionBasis:
    solutions: tuple[Solution, ...]
    trunc: int
    desc: object

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


def group_exponents(ind: IndicialData) -> list[ExponentGroup]:
    """Partition the exponents into classes modulo the integers, each sorted increasingly."""
    if not ind.complete or ind.field.characteristic != 0:
        raise NonRationalExponent(f"indicial polynomial has non-rational roots: factor {ind.cofactor}")
    classes: dict[Fraction, list[tuple[Fraction, int]]] = {}
    for rho, m in ind.exponents:
        r = rho.to_fraction()
        classes.setdefault(r - floor(r), []).append((r, m))
    groups = []
    for members in classes.values():
        members.sort()
        groups.append(ExponentGroup(tuple(r for r, _ in members), tuple(m for _, m in members)))
    groups.sort(key=lambda g: g.base)
    return groups


# -- the extended action ---------------------------------------------------

def _eval(coeffs: list[Fraction], s: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


class _Component:
    """An Euler component prepared for evaluating its divided derivatives."""

    def __init__(self, comp: EulerComponent, sign: int = 1):
        self.shift = comp.shift
        cs = [sign * c.to_fraction() for c in comp.phi.coeffs]
        self.derivs = [[comb(k, ell) * c for k, c in enumerate(cs)][ell:] for ell in range(len(cs))]
        self._cache: dict = {}

    def value(self, ell: int, s: Fraction) -> Fraction:
        key = (ell, s)
        v = self._cache.get(key)
        if v is None:
            v = _eval(self.derivs[ell], s) if ell < len(self.derivs) else Fraction(0)
            self._cache[key] = v
        return v

    def act(self, base: Fraction, k: int, i: int, c: Fraction, out: dict, trunc: int | None):
        """Add c * (x^shift phi(delta))(x^(base+k) z^i) into ``out``."""
        kk = k + self.shift
        if trunc is not None and kk > trunc:
            return
        sigma = base + k
        for ell in range(min(i, len(self.derivs) - 1) + 1):
            v = self.value(ell, sigma)
            if v:
                key = (kk, i - ell)
                out[key] = out.get(key, 0) + c * v * perm(i, ell)


def _act_all(components: list[_Component], base: Fraction, terms: dict, trunc: int | None) -> dict:
    out: dict = {}
    for (k, i), c in terms.items():
        for comp in components:
            comp.act(base, k, i, c, out, trunc)
    return {key: v for key, v in out.items() if v}


def _rational_components(L: DiffOp) -> list[EulerComponent]:
    if L.desc.characteristic != 0:
        raise DomainError("characteristic-zero solver needs an operator over Q")
    return decompose(L)


def apply_extended(L: DiffOp, f: LogSeries) -> LogSeries:
    """Apply L to a log-series, treating z as log x (so delta z = 1)."""
    comps = [_Component(c) for c in _rational_components(L)]
    return LogSeries(f.base, _act_all(comps, f.base, f.coeffs, f.trunc), f.trunc)


def euler_kernel0(L0: EulerComponent, g: ExponentGroup) -> list[LogSeries]:
    """Monomials x^rho_k z^i, i < m_k: a basis of the kernel of the initial form."""
    if L0.shift != 0:
        raise DomainError("initial form must have shift 0")
    return [
        LogSeries.monomial(g.base, off, i)
        for off, m in zip(g.offsets, g.multiplicities)
        for i in range(m)
    ]


class GroupSolver:
    """Right inverse and perturbation sum for one exponent class of a fixed operator."""

    def __init__(self, components: list[EulerComponent], group: ExponentGroup):
        if not components or components[0].shift != 0:
            raise DomainError("initial form must have shift 0")
        self.group = group
        self.initial = _Component(components[0])
        self.degree = components[0].phi.degree()
        # T = L0 - L, so its components are the negated higher ones.
        self.perturbation = [_Component(c, -1) for c in components[1:]]
        self._memo: dict[tuple[int, int], dict] = {}

    def right_inverse(self, k: int, i: int) -> dict:
        """Preimage of x^(base+k) z^i in the complement of the kernel, as {(k, i): c}."""
        key = (k, i)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        g = self.group
        if not g.contains_shifted(k, i):
            raise DomainError(f"x^({g.base}+{k}) z^{i} is not in the image space")
        sigma = g.base + k
        idx = g.index_of_offset(k)
        chi = self.initial
        if idx is None:
            lead, top, first = chi.value(0, sigma), i, 1
        else:
            m = g.multiplicities[idx]
            top = m + i
            lead, first = chi.value(m, sigma) * perm(top, m), m + 1
        result = {(k, top): Fraction(1)}
        for j in range(first, min(self.degree, top) + 1):
            coef = chi.value(j, sigma) * perm(top, j)
            if coef:
                for sub_key, sub_c in self.right_inverse(k, top - j).items():
                    result[sub_key] = result.get(sub_key, 0) - coef * sub_c
        result = {kk: c / lead for kk, c in result.items() if c}
        self._memo[key] = result
        return result

    def iterates(self, init: dict, N: int):
        """Yield (S T)^j init for j = 0, 1, ... until the terms pass offset N."""
        current = {kk: Fraction(c) for kk, c in init.items() if kk[0] <= N and c}
        while current:
            yield current
            image = _act_all(self.perturbation, self.group.base, current, N)
            current = {}
            for (k, i), c in image.items():
                for key, v in self.right_inverse(k, i).items():
                    current[key] = current.get(key, 0) + c * v
            current = {kk: c for kk, c in current.items() if c}

    def perturb(self, init: dict, N: int) -> dict:
        """v(init) = sum_j (S T)^j init, through offset N."""
        total: dict = {}
        for term in self.iterates(init, N):
            for kk, c in term.items():
                total[kk] = total.get(kk, 0) + c
        return {kk: c for kk, c in total.items() if c}


def right_inverse0(L0: EulerComponent, g: ExponentGroup, target: tuple) -> LogSeries:
    """h in the complement with L0(h) = x^sigma z^i, where target = (sigma, i)."""
    sigma, i = target
    k = Fraction(sigma) - g.base
    if k.denominator != 1:
        raise DomainError(f"x^{sigma} does not belong to the exponent class of {g.base}")
    solver = GroupSolver([L0], g)
    return LogSeries(g.base, solver.right_inverse(int(k), i), None)


def _prepare(L: DiffOp) -> DiffOp:
    L, _ = shift_normalize(L)
    if not is_regular_singular(L):
        raise IrregularSingularity("0 is an irregular singular point of the operator")
    return L


def perturbation_sum(L: DiffOp, g: ExponentGroup, f: LogSeries, N: int) -> LogSeries:
    """v(f) = sum (S T)^j f through offset N; satisfies L(v(f)) = L0(f)."""
    if f.base != g.base:
        raise DomainError("series and exponent class have different bases")
    solver = GroupSolver(_rational_components(L), g)
    return LogSeries(g.base, solver.perturb(f.coeffs, N), N)


def solve0(L: DiffOp, N: int) -> SolutionBasis:
    """Solutions y_{rho,i} for every local exponent class, through offset N from its base."""
    L = _prepare(L)
    comps = _rational_components(L)
    groups = group_exponents(indicial(L))
    out = []
    for g in groups:
        solver = GroupSolver(comps, g)
        for rho, off, m in zip(g.exponents, g.offsets, g.multiplicities):
            for i in range(m):
                series = LogSeries(g.base, solver.perturb({(off, i): 1}, N), N)
                out.append(Solution(rho, i, series))
    return SolutionBasis(tuple(out), N, L.desc)
