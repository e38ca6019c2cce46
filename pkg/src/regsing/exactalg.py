"""Exact scalars and univariate polynomials over Q, F_p and F_{p^d}.

Field elements carry their field descriptor.  Rationals are stored as
``Fraction``, prime-field elements as an int in ``range(p)`` and elements of a
proper extension as a tuple of ``d`` ints, the coefficients (lowest first) of
the reduced residue polynomial in the generator ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import comb, gcd, isqrt, lcm

from .errors import DomainError

_RATIONAL, _PRIME, _EXTENSION = 0, 1, 2

# Brute-force root search refuses fields larger than this.
MAX_SEARCH_FIELD = 2_000_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldDesc:
    """Descriptor of Q (characteristic 0), F_p, or F_{p^d} = F_p[w]/(modulus).

    The modulus is stored lowest coefficient first.  When an extension is
    requested without a modulus, the lexicographically smallest monic
    irreducible polynomial of that degree is used.
    """

    characteristic: int = 0
    ext_degree: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        p, d = self.characteristic, self.ext_degree
        if p == 0:
            if d != 1 or self.modulus is not None:
                raise DomainError("characteristic 0 admits no extension degree or modulus")
            return
        if not is_prime(p):
            raise DomainError(f"characteristic {p} is not prime")
        if d < 1:
            raise DomainError("extension degree must be at least 1")
        if d == 1:
            if self.modulus is not None and len(self.modulus) != 2:
                raise DomainError("a prime field has no modulus of degree other than 1")
            object.__setattr__(self, "modulus", None)
            return
        if self.modulus is None:
            object.__setattr__(self, "modulus", smallest_irreducible(p, d))
            return
        mod = tuple(c % p for c in self.modulus)
        if len(mod) != d + 1 or mod[-1] != 1:
            raise DomainError("modulus must be monic of degree equal to the extension degree")
        if not _is_irreducible(mod, p):
            raise DomainError("modulus is reducible")
        object.__setattr__(self, "modulus", mod)

    @classmethod
    def rationals(cls) -> FieldDesc:
        return cls()

    @classmethod
    def prime(cls, p: int) -> FieldDesc:
        return cls(p)

    @classmethod
    def extension(cls, p: int, d: int) -> FieldDesc:
        return cls(p, d)

    @cached_property
    def kind(self) -> int:
        if self.characteristic == 0:
            return _RATIONAL
        return _PRIME if self.ext_degree == 1 else _EXTENSION

    @property
    def is_prime_field(self) -> bool:
        return self.kind == _PRIME

    @property
    def prime_subfield(self) -> FieldDesc:
        return FieldDesc(self.characteristic) if self.characteristic else self

    @property
    def order(self) -> int | None:
        if self.characteristic == 0:
            return None
        return self.characteristic ** self.ext_degree

    @cached_property
    def zero(self) -> FieldElem:
        return self(0)

    @cached_property
    def one(self) -> FieldElem:
        return self(1)

    @cached_property
    def gen(self) -> FieldElem:
        """The class of ``w`` (for a prime field or Q this is just 1)."""
        if self.kind != _EXTENSION:
            return self.one
        return FieldElem(self, (0, 1) + (0,) * (self.ext_degree - 2))

    def __call__(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.desc == self:
                return value
            return embed(value, self)
        kind = self.kind
        if kind == _RATIONAL:
            return FieldElem(self, Fraction(value))
        p = self.characteristic
        if isinstance(value, (tuple, list)):
            if kind == _PRIME:
                if len(value) > 1 and any(v % p for v in value[1:]):
                    raise DomainError("residue tuple does not lie in the prime field")
                return FieldElem(self, int(value[0]) % p if value else 0)
            vals = [int(v) % p for v in value]
            if len(vals) > self.ext_degree:
                vals = _reduce_residue(vals, self.modulus, p)
            vals += [0] * (self.ext_degree - len(vals))
            return FieldElem(self, tuple(vals))
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise DomainError(f"{value} has no residue modulo {p}")
            n = value.numerator * pow(value.denominator, -1, p) % p
        else:
            n = int(value) % p
        if kind == _PRIME:
            return FieldElem(self, n)
        return FieldElem(self, (n,) + (0,) * (self.ext_degree - 1))

    def elements(self):
        """Iterate over every element of a finite field."""
        if self.characteristic == 0:
            raise DomainError("Q is infinite")
        p = self.characteristic
        if self.kind == _PRIME:
            for n in range(p):
                yield FieldElem(self, n)
            return
        for digits in product(range(p), repeat=self.ext_degree):
            yield FieldElem(self, tuple(reversed(digits)))

    def __str__(self) -> str:
        if self.characteristic == 0:
            return "Q"
        if self.kind == _PRIME:
            return f"F_{self.characteristic}"
        mod = Poly(FieldDesc(self.characteristic), self.modulus)
        return f"F_{self.order} = F_{self.characteristic}[w]/({mod.format('w')})"


def _reduce_residue(vals: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    d = len(mod) - 1
    vals = list(vals)
    for i in range(len(vals) - 1, d - 1, -1):
        c = vals[i]
        if c:
            base = i - d
            for j in range(d):
                vals[base + j] = (vals[base + j] - c * mod[j]) % p
        vals[i] = 0
    return [v % p for v in vals[:d]]


class FieldElem:
    """Immutable element of the field described by ``desc``."""

    __slots__ = ("desc", "value")

    def __init__(self, desc: FieldDesc, value):
        self.desc = desc
        self.value = value

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.desc == self.desc:
                return other
            raise DomainError(f"cannot mix elements of {self.desc} and {other.desc}")
        if isinstance(other, (int, Fraction)):
            return self.desc(other)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        kind = self.desc.kind
        if kind == _RATIONAL:
            return FieldElem(self.desc, self.value + o.value)
        p = self.desc.characteristic
        if kind == _PRIME:
            return FieldElem(self.desc, (self.value + o.value) % p)
        return FieldElem(self.desc, tuple((a + b) % p for a, b in zip(self.value, o.value)))

    __radd__ = __add__

    def __neg__(self):
        kind = self.desc.kind
        if kind == _RATIONAL:
            return FieldElem(self.desc, -self.value)
        p = self.desc.characteristic
        if kind == _PRIME:
            return FieldElem(self.desc, -self.value % p)
        return FieldElem(self.desc, tuple(-a % p for a in self.value))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        kind = self.desc.kind
        if kind == _RATIONAL:
            return FieldElem(self.desc, self.value * o.value)
        p = self.desc.characteristic
        if kind == _PRIME:
            return FieldElem(self.desc, self.value * o.value % p)
        a, b = self.value, o.value
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return FieldElem(self.desc, tuple(_reduce_residue(prod, self.desc.modulus, p)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        kind = self.desc.kind
        if kind == _RATIONAL:
            return FieldElem(self.desc, 1 / self.value)
        if kind == _PRIME:
            return FieldElem(self.desc, pow(self.value, -1, self.desc.characteristic))
        return self ** (self.desc.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.desc.kind == _PRIME:
            return FieldElem(self.desc, pow(self.value, e, self.desc.characteristic))
        result, base = self.desc.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- predicates and conversions --------------------------------------
    def is_zero(self) -> bool:
        if self.desc.kind == _EXTENSION:
            return not any(self.value)
        return not self.value

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_one(self) -> bool:
        return self == self.desc.one

    def in_prime_field(self) -> bool:
        if self.desc.kind == _EXTENSION:
            return not any(self.value[1:])
        return True

    def to_int(self) -> int:
        """Representative in ``range(p)`` of a prime-field element."""
        if self.desc.kind == _RATIONAL:
            if self.value.denominator != 1:
                raise DomainError(f"{self} is not an integer")
            return self.value.numerator
        if not self.in_prime_field():
            raise DomainError(f"{self} is not in the prime field")
        return self.value if self.desc.kind == _PRIME else self.value[0]

    def to_fraction(self) -> Fraction:
        if self.desc.kind != _RATIONAL:
            raise DomainError("not a rational number")
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.desc == other.desc and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.desc(other).value
            except DomainError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def sort_key(self):
        if self.desc.kind == _EXTENSION:
            return tuple(reversed(self.value))
        return self.value

    def __repr__(self):
        return f"FieldElem({self.desc}, {self})"

    def __str__(self):
        kind = self.desc.kind
        if kind != _EXTENSION:
            return str(self.value)
        parts = []
        for k in range(len(self.value) - 1, -1, -1):
            c = self.value[k]
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "w" if k == 1 else f"w^{k}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


# -- embeddings between finite fields ---------------------------------------

@lru_cache(maxsize=None)
def _generator_image(source: FieldDesc, target: FieldDesc) -> FieldElem:
    mod = Poly(target, source.modulus)
    for a in target.elements():
        if mod(a).is_zero():
            return a
    raise DomainError(f"{source} does not embed into {target}")


def embed(a: FieldElem, target: FieldDesc) -> FieldElem:
    """Map ``a`` into ``target`` along the canonical inclusion of fields."""
    source = a.desc
    if source == target:
        return a
    if source.kind == _RATIONAL:
        # reduction of a p-integral rational when target has characteristic p
        return target(a.value)
    if source.characteristic != target.characteristic:
        raise DomainError(f"cannot embed {source} into {target}")
    if source.kind == _PRIME:
        return target(a.value)
    if target.ext_degree % source.ext_degree:
        raise DomainError(f"{source} is not a subfield of {target}")
    g = _generator_image(source, target)
    result = target.zero
    for c in reversed(a.value):
        result = result * g + c
    return result


# -- polynomials -------------------------------------------------------------

class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: FieldDesc, coeffs=()):
        cs = [c if isinstance(c, FieldElem) and c.desc == desc else desc(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.desc = desc
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, desc: FieldDesc, coeffs: list[FieldElem]) -> Poly:
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.desc = desc
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def monomial(cls, desc: FieldDesc, k: int, c=1) -> Poly:
        return cls(desc, [0] * k + [c])

    @classmethod
    def variable(cls, desc: FieldDesc) -> Poly:
        return cls(desc, [0, 1])

    @classmethod
    def from_roots(cls, desc: FieldDesc, roots) -> Poly:
        result = cls(desc, [1])
        for r in roots:
            result = result * cls(desc, [-desc(r), 1])
        return result

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self) -> FieldElem:
        return self.coeffs[-1] if self.coeffs else self.desc.zero

    def coeff(self, k: int) -> FieldElem:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.desc.zero

    def __call__(self, a):
        a = self.desc(a) if not isinstance(a, FieldElem) else a
        result = a.desc.zero
        for c in reversed(self.coeffs):
            result = result * a + (c if c.desc == a.desc else embed(c, a.desc))
        return result

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.desc != self.desc:
                raise DomainError("polynomials over different fields")
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return Poly(self.desc, [other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(self.desc, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.desc, [-c for c in self.coeffs])

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
        if isinstance(other, (int, Fraction, FieldElem)):
            c = self.desc(other)
            return Poly._raw(self.desc, [a * c for a in self.coeffs])
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly._raw(self.desc, [])
        out = [self.desc.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly._raw(self.desc, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        result, base = Poly(self.desc, [1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: Poly):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly(self.desc), self
        inv = o.lc().inverse()
        quot = [self.desc.zero] * (dq + 1)
        n = len(o.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + n - 1] * inv
            quot[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Poly._raw(self.desc, quot), Poly._raw(self.desc, rem[: n - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self * self.lc().inverse()

    def derivative(self) -> Poly:
        return Poly._raw(self.desc, [c * k for k, c in enumerate(self.coeffs)][1:])

    def taylor_shift(self, a) -> Poly:
        """Return q(s + a)."""
        a = self.desc(a)
        out = list(self.coeffs)
        n = len(out)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                out[j] = out[j] + a * out[j + 1]
        return Poly._raw(self.desc, out)

    def powmod(self, e: int, m: Poly) -> Poly:
        result, base = Poly(self.desc, [1]) % m, self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def map(self, target: FieldDesc) -> Poly:
        if target == self.desc:
            return self
        return Poly(target, [embed(c, target) for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.desc == other.desc and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, FieldElem)):
            return self == Poly(self.desc, [other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def format(self, var: str = "s") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(signed_term(c, mono))
        return join_terms(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.desc}, {self.format()})"


def _coeff_str(c: FieldElem) -> tuple[str, bool]:
    """String for ``c`` and whether it is a negative rational."""
    if c.desc.kind == _RATIONAL and c.value < 0:
        return str(-c.value), True
    return str(c), False


def signed_term(c: FieldElem, mono: str) -> tuple[bool, str]:
    text, negative = _coeff_str(c)
    compound = c.desc.kind == _EXTENSION and " + " in text
    if compound:
        text = f"({text})"
    if not mono:
        return negative, text
    if text == "1":
        return negative, mono
    return negative, f"{text}*{mono}"


def join_terms(parts: list[tuple[bool, str]]) -> str:
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, text in parts[1:]:
        out += (" - " if negative else " + ") + text
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# -- combinatorics -----------------------------------------------------------

@lru_cache(maxsize=None)
def _falling_int(j: int) -> tuple[int, ...]:
    coeffs = [1]
    for r in range(j):
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return tuple(coeffs)


def falling_factorial(j: int, desc: FieldDesc) -> Poly:
    """s (s-1) ... (s-j+1) over ``desc``; the constant 1 for j = 0."""
    return Poly(desc, _falling_int(j))


@lru_cache(maxsize=None)
def _stirling2_int(n: int, k: int) -> int:
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * _stirling2_int(n - 1, k) + _stirling2_int(n - 1, k - 1)


def stirling2(n: int, k: int, desc: FieldDesc) -> FieldElem:
    if k > n:
        raise DomainError(f"Stirling number S({n},{k}) needs k <= n")
    return desc(_stirling2_int(n, k))


def hasse_derivative(q: Poly, ell: int) -> Poly:
    """Divided derivative: s^k maps to C(k, ell) s^(k-ell)."""
    return Poly._raw(q.desc, [c * comb(k, ell) for k, c in enumerate(q.coeffs)][ell:])


def multiplicity_by_hasse(q: Poly, a: FieldElem) -> int:
    if q.is_zero():
        raise DomainError("multiplicity of a root of the zero polynomial")
    m = 0
    while hasse_derivative(q, m)(a).is_zero():
        m += 1
    return m


def multiplicity_by_division(q: Poly, a: FieldElem) -> int:
    if q.is_zero():
        raise DomainError("multiplicity of a root of the zero polynomial")
    if a.desc != q.desc:
        q = q.map(a.desc)
    lin = Poly(a.desc, [-a, 1])
    m = 0
    while True:
        quot, rem = divmod(q, lin)
        if not rem.is_zero():
            return m
        q, m = quot, m + 1


def root_multiplicity(q: Poly, a) -> int:
    """Largest m with (s - a)^m dividing q."""
    if not isinstance(a, FieldElem):
        a = q.desc(a)
    if a.desc.characteristic == 0:
        return multiplicity_by_division(q, a)
    return multiplicity_by_hasse(q.map(a.desc) if a.desc != q.desc else q, a)


# -- root finding ------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities, all living in ``field``.

    ``complete`` is set when the multiplicities add up to the degree;
    otherwise ``cofactor`` is the part of the polynomial left unsplit.
    """

    roots: tuple[tuple[FieldElem, int], ...]
    complete: bool
    cofactor: Poly
    field: FieldDesc

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _rational_roots(q: Poly) -> RootSet:
    den = lcm(*(c.value.denominator for c in q.coeffs))
    ints = [int(c.value * den) for c in q.coeffs]
    content = gcd(*ints)
    ints = [c // content for c in ints]
    desc = q.desc
    found: list[tuple[FieldElem, int]] = []
    low = next(k for k, c in enumerate(ints) if c)
    if low:
        found.append((desc.zero, low))
    ints = ints[low:]
    cands = set()
    for num in _divisors(ints[0]):
        for dd in _divisors(ints[-1]):
            cands.add(Fraction(num, dd))
            cands.add(Fraction(-num, dd))
    rest = Poly(desc, ints)
    for r in sorted(cands):
        if rest(r).is_zero():
            m = multiplicity_by_division(rest, desc(r))
            found.append((desc(r), m))
    found.sort(key=lambda rm: rm[0].value)
    cof = q.monic()
    for r, m in found:
        cof = cof // (Poly(desc, [-r, 1]) ** m)
    return RootSet(tuple(found), cof.degree() == 0, cof, desc)


def _finite_field_roots(q: Poly, max_ext: int) -> RootSet:
    base = q.desc
    p, e = base.characteristic, base.ext_degree
    f = q.monic()
    s = Poly.variable(base)
    remaining = f
    needed = []
    for j in range(1, max(max_ext, 1) + 1):
        if remaining.degree() <= 0:
            break
        frob = s.powmod(base.order ** j, remaining)
        g = poly_gcd(remaining, frob - s)
        if g.degree() > 0:
            needed.append(j)
            while True:
                c = poly_gcd(remaining, g)
                if c.degree() <= 0:
                    break
                remaining = remaining // c
    if not needed:
        return RootSet((), f.degree() == 0, f, base)
    target = base if lcm(*needed) == 1 else FieldDesc(p, e * lcm(*needed))
    if target.order > MAX_SEARCH_FIELD:
        raise DomainError(f"root search in {target} exceeds the brute-force limit")
    split = (f // remaining).map(target)
    ft = f.map(target)
    found = []
    for a in target.elements():
        if split(a).is_zero():
            found.append((a, multiplicity_by_hasse(ft, a)))
    found.sort(key=lambda rm: rm[0].sort_key())
    cof = ft
    for r, m in found:
        cof = cof // (Poly(target, [-r, 1]) ** m)
    return RootSet(tuple(found), cof.degree() == 0, cof, target)


def field_roots(q: Poly, max_ext: int = 1) -> RootSet:
    """Roots of ``q`` in Q (rational roots only) or in F_{p^(e*j)} for j <= max_ext.

    In characteristic p all roots are embedded into the smallest extension
    containing every field in which a root was found.
    """
    if q.is_zero():
        raise DomainError("roots of the zero polynomial")
    if q.desc.characteristic == 0:
        return _rational_roots(q)
    return _finite_field_roots(q, max_ext)


# -- irreducible moduli ------------------------------------------------------

def _is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    base = FieldDesc(p)
    f = Poly(base, mod)
    d = f.degree()
    if d < 1:
        return False
    s = Poly.variable(base)
    power = s
    for _ in range(d // 2):
        power = power.powmod(p, f)
        if poly_gcd(f, power - s).degree() > 0:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over F_p.

    Candidates are compared by their coefficient lists read from the
    highest non-leading degree down to the constant term.
    """
    for digits in product(range(p), repeat=d):
        mod = tuple(reversed(digits)) + (1,)
        if _is_irreducible(mod, p):
            return mod
    raise DomainError(f"no irreducible polynomial of degree {d} over F_{p}")


# -- linear algebra ----------------------------------------------------------

def nullspace(rows: list[list[FieldElem]], ncols: int, desc: FieldDesc) -> list[list[FieldElem]]:
    """Basis of {v : rows * v = 0}, via reduced row echelon form.

    Each basis vector has a 1 in its free column and zeros in the other
    free columns.
    """
    mat = [list(r) for r in rows if any(not c.is_zero() for c in r)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if not mat[i][col].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [c * inv for c in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero():
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [desc.zero] * ncols
        v[fc] = desc.one
        for row, pc in enumerate(pivots):
            v[pc] = -mat[row][fc]
        basis.append(v)
    return basis
