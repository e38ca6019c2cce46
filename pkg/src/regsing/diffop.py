"""Linear differential operators with polynomial coefficients.

An operator is a finite sum of terms ``c * x^i * D^j`` (D = d/dx).  Grouping
terms by ``i - j`` splits it into Euler components ``x^shift * phi(x*D)``;
the lowest component is the initial form and its ``phi`` is the indicial
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, perm

from .errors import DomainError
from .exactalg import (
    FieldDesc,
    FieldElem,
    Poly,
    RootSet,
    falling_factorial,
    field_roots,
    join_terms,
    signed_term,
    stirling2,
)


class DiffOp:
    """Immutable sparse operator: map (x-power i, D-order j) -> nonzero coefficient."""

    __slots__ = ("desc", "_terms")

    def __init__(self, desc: FieldDesc, terms=None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise DomainError(f"term x^{i} D^{j} has a negative exponent")
            c = desc(c) if not (isinstance(c, FieldElem) and c.desc == desc) else c
            if not c.is_zero():
                clean[(i, j)] = c
        self.desc = desc
        self._terms = clean

    @classmethod
    def _raw(cls, desc: FieldDesc, terms: dict) -> DiffOp:
        obj = cls.__new__(cls)
        obj.desc = desc
        obj._terms = {k: c for k, c in terms.items() if not c.is_zero()}
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, desc: FieldDesc, c=1) -> DiffOp:
        return cls(desc, {(0, 0): c})

    @classmethod
    def x(cls, desc: FieldDesc) -> DiffOp:
        return cls(desc, {(1, 0): 1})

    @classmethod
    def d(cls, desc: FieldDesc) -> DiffOp:
        return cls(desc, {(0, 1): 1})

    @classmethod
    def delta(cls, desc: FieldDesc) -> DiffOp:
        return cls(desc, {(1, 1): 1})

    @classmethod
    def from_coefficients(cls, desc: FieldDesc, polys) -> DiffOp:
        """Operator sum_j polys[j](x) D^j."""
        terms = {}
        for j, q in enumerate(polys):
            q = q if isinstance(q, Poly) else Poly(desc, q)
            for i, c in enumerate(q.coeffs):
                terms[(i, j)] = c
        return cls(desc, terms)

    # -- structure --------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int) -> FieldElem:
        return self._terms.get((i, j), self.desc.zero)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def order(self) -> int:
        """Highest D-order; -1 for the zero operator."""
        return max((j for _, j in self._terms), default=-1)

    @property
    def shift(self) -> int:
        if not self._terms:
            raise DomainError("the zero operator has no shift")
        return min(i - j for i, j in self._terms)

    def coefficient_poly(self, j: int) -> Poly:
        """The polynomial coefficient of D^j."""
        deg = max((i for i, jj in self._terms if jj == j), default=-1)
        return Poly(self.desc, [self.coeff(i, j) for i in range(deg + 1)])

    def map(self, target: FieldDesc) -> DiffOp:
        return DiffOp(target, {k: target(c) for k, c in self._terms.items()})

    # -- ring operations --------------------------------------------------
    def _lift(self, other) -> DiffOp | None:
        if isinstance(other, DiffOp):
            if other.desc != self.desc:
                raise DomainError("operators over different fields")
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return DiffOp.constant(self.desc, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out[k] + c if k in out else c
        return DiffOp._raw(self.desc, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._raw(self.desc, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        """Product in the Weyl algebra, using D^j x^k = sum_r C(j,r) k!/(k-r)! x^(k-r) D^(j-r)."""
        if isinstance(other, (int, Fraction, FieldElem)):
            c = self.desc(other)
            return DiffOp._raw(self.desc, {k: a * c for k, a in self._terms.items()})
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for (i, j), a in self._terms.items():
            for (k, l), b in o._terms.items():
                ab = a * b
                for r in range(min(j, k) + 1):
                    key = (i + k - r, j + l - r)
                    term = ab * (comb(j, r) * perm(k, r))
                    out[key] = out[key] + term if key in out else term
        return DiffOp._raw(self.desc, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int) -> DiffOp:
        if e < 0:
            raise DomainError("negative power of an operator")
        result = DiffOp.constant(self.desc, 1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.desc == other.desc and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def format(self) -> str:
        """Canonical text: terms sorted by D-order, then x-power, both descending."""
        parts = []
        for (i, j) in sorted(self._terms, key=lambda ij: (-ij[1], -ij[0])):
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("D" if j == 1 else f"D^{j}")
            parts.append(signed_term(self._terms[(i, j)], "*".join(factors)))
        return join_terms(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"DiffOp({self.desc}, {self.format()})"


@dataclass(frozen=True)
class EulerComponent:
    """The homogeneous part x^shift * phi(x*D) of an operator."""

    shift: int
    phi: Poly


@dataclass(frozen=True)
class IndicialData:
    """Indicial polynomial and its roots (the local exponents) with multiplicities.

    ``field`` is the field the exponents live in; ``cofactor`` is the unsplit
    part of ``chi`` when ``complete`` is false.
    """

    chi: Poly
    exponents: tuple[tuple[FieldElem, int], ...]
    complete: bool
    field: FieldDesc
    cofactor: Poly


def shift_normalize(L: DiffOp) -> tuple[DiffOp, int]:
    """Divide (or multiply) by a power of x so that the shift becomes 0."""
    if L.is_zero():
        raise DomainError("cannot normalize the zero operator")
    tau = L.shift
    if tau == 0:
        return L, 0
    return DiffOp._raw(L.desc, {(i - tau, j): c for (i, j), c in L.items()}), tau


def _require_normalized(L: DiffOp):
    if L.is_zero() or L.shift != 0:
        raise DomainError("operator must be shift-normalized (apply shift_normalize first)")


def decompose(L: DiffOp) -> list[EulerComponent]:
    """Euler components of a shift-normalized operator, by increasing shift."""
    _require_normalized(L)
    grouped: dict[int, Poly] = {}
    for (i, j), c in L.items():
        tau = i - j
        part = falling_factorial(j, L.desc) * c
        grouped[tau] = grouped[tau] + part if tau in grouped else part
    return [EulerComponent(t, grouped[t]) for t in sorted(grouped) if not grouped[t].is_zero()]


def initial_form(L: DiffOp) -> DiffOp:
    """Terms of lowest shift."""
    tau = L.shift
    return DiffOp._raw(L.desc, {(i, j): c for (i, j), c in L.items() if i - j == tau})


def indicial_polynomial(L: DiffOp) -> Poly:
    """sum_j c_{j+shift, j} s(s-1)...(s-j+1) for the lowest shift."""
    tau = L.shift
    chi = Poly(L.desc)
    for (i, j), c in L.items():
        if i - j == tau:
            chi = chi + falling_factorial(j, L.desc) * c
    return chi


def indicial(L: DiffOp, max_ext: int | None = None) -> IndicialData:
    _require_normalized(L)
    chi = indicial_polynomial(L)
    if max_ext is None:
        max_ext = max(L.order, 1)
    roots: RootSet = field_roots(chi, max_ext)
    return IndicialData(chi, roots.roots, roots.complete, roots.field, roots.cofactor)


def is_regular_singular(L: DiffOp) -> bool:
    """True when the initial form keeps the full order (Fuchs' criterion at 0)."""
    return indicial_polynomial(L).degree() == L.order


def to_euler_form(L: DiffOp) -> dict[int, Poly]:
    """Write L = sum_k x^k q_k(delta) with delta = x*D."""
    return {c.shift: c.phi for c in decompose(L)}


def from_euler_form(forms: dict[int, Poly], desc: FieldDesc) -> DiffOp:
    """Inverse of ``to_euler_form``: delta^n = sum_k S(n,k) x^k D^k."""
    terms: dict = {}
    for tau, q in forms.items():
        for n, a in enumerate(q.coeffs):
            if a.is_zero():
                continue
            for k in range(n + 1):
                s = stirling2(n, k, desc)
                if s.is_zero():
                    continue
                if k + tau < 0:
                    raise DomainError("component shift too negative for polynomial coefficients")
                key = (k + tau, k)
                terms[key] = terms[key] + a * s if key in terms else a * s
    return DiffOp._raw(desc, terms)


def recompose(components: list[EulerComponent], desc: FieldDesc) -> DiffOp:
    return from_euler_form({c.shift: c.phi for c in components}, desc)
